//! Critical fluxes, flux scans, near-zero asymptotics and finite-size fits.

mod asymptote;
mod flux;
mod scaling;

pub use asymptote::{
    near_zero_asymptote_check, near_zero_mode_fidelity, near_zero_slope_estimate, AsymptotePoint,
};
pub use flux::{
    critical_flux_1d, critical_flux_haldane, critical_fluxes, flux_samples_with_critical,
    scan_alpha_vs_flux, FluxScan,
};
pub use scaling::{
    alpha_prime_scan, finite_size_fit, least_squares, AlphaPrimeScan, ScalingFit, Weighting,
};

use std::fmt;

use crate::bloch::{momentum_grid_1d, momentum_grid_2d, MomentumGrid};
use crate::error::{Error, Result};
use crate::models::{model_alpha_prime, model_fidelity, LatticeKind, TwoBandModel, ZeroCondition};

/// Finite lattice extent: unit cells of a chain or `lx × ly` honeycomb cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemSize {
    Chain(usize),
    Honeycomb { lx: usize, ly: usize },
}

impl SystemSize {
    /// Number of momentum modes, which normalizes the decay rate.
    pub fn modes(&self) -> usize {
        match *self {
            SystemSize::Chain(l) => l,
            SystemSize::Honeycomb { lx, ly } => lx * ly,
        }
    }

    /// Extent along the twisted direction.
    pub fn twisted_extent(&self) -> usize {
        match *self {
            SystemSize::Chain(l) => l,
            SystemSize::Honeycomb { lx, .. } => lx,
        }
    }

    pub fn lattice(&self) -> LatticeKind {
        match self {
            SystemSize::Chain(_) => LatticeKind::Chain,
            SystemSize::Honeycomb { .. } => LatticeKind::Honeycomb,
        }
    }

    pub fn grid(&self, phi: f64, phi_y: f64) -> Result<MomentumGrid> {
        match *self {
            SystemSize::Chain(l) => Ok(MomentumGrid::Chain(momentum_grid_1d(l, phi)?)),
            SystemSize::Honeycomb { lx, ly } => Ok(MomentumGrid::Honeycomb(momentum_grid_2d(
                lx, ly, phi, phi_y,
            )?)),
        }
    }
}

impl fmt::Display for SystemSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSize::Chain(l) => write!(f, "{l}"),
            SystemSize::Honeycomb { lx, ly } => write!(f, "{lx}x{ly}"),
        }
    }
}

/// Fidelity and decay rate at one (parameter pair, size, flux) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub fidelity: f64,
    pub alpha: f64,
    pub exact_zero: bool,
}

/// Anything that can produce a ground-state fidelity between two values of a
/// driving parameter on a twisted finite lattice.
pub trait FidelityEngine: Sync {
    fn engine_name(&self) -> &str;

    fn lattice_kind(&self) -> LatticeKind;

    fn evaluate(
        &self,
        a: f64,
        b: f64,
        size: SystemSize,
        phi: f64,
        phi_y: f64,
    ) -> Result<PointResult>;

    fn critical_momenta(&self, a: f64, b: f64) -> Result<ZeroCondition>;

    fn alpha_prime(
        &self,
        _a: f64,
        _b: f64,
        _size: SystemSize,
        _phi: f64,
        _phi_y: f64,
    ) -> Result<f64> {
        Err(Error::MissingDerivative {
            model: self.engine_name().to_string(),
        })
    }
}

impl<M: TwoBandModel + ?Sized> FidelityEngine for M {
    fn engine_name(&self) -> &str {
        self.name()
    }

    fn lattice_kind(&self) -> LatticeKind {
        self.lattice()
    }

    fn evaluate(
        &self,
        a: f64,
        b: f64,
        size: SystemSize,
        phi: f64,
        phi_y: f64,
    ) -> Result<PointResult> {
        let report = model_fidelity(self, a, b, &size.grid(phi, phi_y)?)?;
        Ok(PointResult {
            fidelity: report.total,
            alpha: report.alpha,
            exact_zero: report.exact_zero,
        })
    }

    fn critical_momenta(&self, a: f64, b: f64) -> Result<ZeroCondition> {
        self.zero_condition(a, b)
    }

    fn alpha_prime(&self, a: f64, b: f64, size: SystemSize, phi: f64, phi_y: f64) -> Result<f64> {
        model_alpha_prime(self, a, b, &size.grid(phi, phi_y)?)
    }
}
