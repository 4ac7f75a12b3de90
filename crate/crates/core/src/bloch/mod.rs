//! Two-band fidelity engine.
//!
//! A two-band Bloch Hamiltonian `h_k = d_k · σ + d0_k · 1` has a lower-band
//! state fixed entirely by the direction of `(dx, dy, dz)`. The fidelity of a
//! single momentum mode between two parameter points is therefore a function
//! of the two Bloch vectors only, and the many-body fidelity of the filled
//! lower band is the product over modes.

mod fidelity;
mod grid;

use std::fmt;

pub use fidelity::{
    antiparallel_residuals, decay_rate_derivative, lower_band_state, mode_fidelity, survey_modes,
    total_fidelity, AntiparallelResiduals, FidelityReport, ModeFidelity,
};
pub use grid::{
    canonical_flux, momentum_grid_1d, momentum_grid_2d, MomentumGrid, MomentumGrid1D,
    MomentumGrid2D,
};

/// Modes with `|d|` below this (relative to `max(1, max |d|)`) are gapless.
pub const GAP_TOL: f64 = 1e-12;
/// Per-mode fidelity at or below this counts as an exact zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Rounding slack tolerated above a fidelity of one before it is an error.
pub const CLAMP_TOL: f64 = 1e-12;

/// Bloch vector `(dx, dy, dz)` plus the identity coefficient `d0` of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub d0: f64,
}

impl DVector {
    pub const fn new(dx: f64, dy: f64, dz: f64, d0: f64) -> Self {
        Self { dx, dy, dz, d0 }
    }

    /// Band half-gap `|d|`; `d0` does not contribute.
    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }

    /// Euclidean product of the Pauli components.
    pub fn dot(&self, other: &DVector) -> f64 {
        self.dx * other.dx + self.dy * other.dy + self.dz * other.dz
    }

    pub fn cross(&self, other: &DVector) -> [f64; 3] {
        [
            self.dy * other.dz - self.dz * other.dy,
            self.dz * other.dx - self.dx * other.dz,
            self.dx * other.dy - self.dy * other.dx,
        ]
    }

    pub fn with_d0(self, d0: f64) -> Self {
        Self { d0, ..self }
    }
}

/// A crystal momentum: scalar for chains, a pair for the honeycomb lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Momentum {
    Scalar(f64),
    Pair(f64, f64),
}

impl Momentum {
    pub fn scalar(self) -> Option<f64> {
        match self {
            Momentum::Scalar(k) => Some(k),
            Momentum::Pair(..) => None,
        }
    }

    pub fn pair(self) -> Option<(f64, f64)> {
        match self {
            Momentum::Pair(kx, ky) => Some((kx, ky)),
            Momentum::Scalar(_) => None,
        }
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Momentum::Scalar(k) => write!(f, "{k}"),
            Momentum::Pair(kx, ky) => write!(f, "({kx}, {ky})"),
        }
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
