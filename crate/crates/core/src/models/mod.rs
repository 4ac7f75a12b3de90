//! Concrete two-band models and their exact-zero conditions.
//!
//! Every model exposes its Bloch vector as a function of one driving
//! parameter (γ for SSH, θ for Creutz and Haldane) with the remaining
//! couplings held fixed inside the model value.

mod creutz;
mod haldane;
mod registry;
mod ssh;

pub use creutz::{
    creutz_dvec, creutz_dvec_derivative, creutz_zero_condition, Creutz, CreutzParams,
};
pub use haldane::{
    haldane_critical_line, haldane_dvec, haldane_dvec_derivative, haldane_zero_condition, Haldane,
    HaldaneParams,
};
pub use registry::{build_band_model, lookup, registry, ModelEntry, ModelKind, ParamSpec};
pub use ssh::{ssh_dvec, ssh_dvec_derivative, ssh_zero_condition, Ssh, SshParams};

use crate::bloch::{
    decay_rate_derivative, total_fidelity, DVector, FidelityReport, Momentum, MomentumGrid,
};
use crate::error::{Error, Result};

/// Which momentum grid a model lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Chain,
    Honeycomb,
}

/// Critical momenta at which two parameter points have antiparallel Bloch vectors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroCondition {
    pub holds: bool,
    pub kc_list: Vec<Momentum>,
}

impl ZeroCondition {
    pub fn from_momenta(kc_list: Vec<Momentum>) -> Self {
        Self {
            holds: !kc_list.is_empty(),
            kc_list,
        }
    }
}

pub trait TwoBandModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn lattice(&self) -> LatticeKind;

    fn dvec(&self, k: Momentum, driving: f64) -> DVector;

    /// Derivative of the Bloch vector with respect to the driving parameter.
    fn dvec_derivative(&self, _k: Momentum, _driving: f64) -> Option<DVector> {
        None
    }

    fn zero_condition(&self, a: f64, b: f64) -> Result<ZeroCondition>;

    /// Closed-form coefficient `c` of the near-zero law `F_{k*} ≈ c·Δ` on a
    /// grid of `modes` momenta, where Δ is the flux offset from criticality.
    fn near_zero_coefficient(&self, _a: f64, _b: f64, _modes: usize) -> Option<f64> {
        None
    }
}

pub(crate) fn expect_scalar(k: Momentum, model: &str) -> f64 {
    k.scalar()
        .unwrap_or_else(|| panic!("{model} is a chain model and takes scalar momenta"))
}

/// Bloch vectors of `model` at `driving` over every momentum of `grid`.
pub fn band_states<M: TwoBandModel + ?Sized>(
    model: &M,
    driving: f64,
    momenta: &[Momentum],
) -> Vec<DVector> {
    momenta.iter().map(|&k| model.dvec(k, driving)).collect()
}

fn check_grid<M: TwoBandModel + ?Sized>(model: &M, grid: &MomentumGrid) -> Result<()> {
    let ok = matches!(
        (model.lattice(), grid),
        (LatticeKind::Chain, MomentumGrid::Chain(_))
            | (LatticeKind::Honeycomb, MomentumGrid::Honeycomb(_))
    );
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "grid does not match the lattice of `{}`",
            model.name()
        )))
    }
}

/// Fidelity report between two driving-parameter values on one grid.
pub fn model_fidelity<M: TwoBandModel + ?Sized>(
    model: &M,
    a: f64,
    b: f64,
    grid: &MomentumGrid,
) -> Result<FidelityReport> {
    check_grid(model, grid)?;
    let momenta = grid.momenta();
    let sa = band_states(model, a, &momenta);
    let sb = band_states(model, b, &momenta);
    total_fidelity(&momenta, &sa, &sb)
}

/// `dα/db` at fixed `a` from the analytic derivative of the Bloch vector.
pub fn model_alpha_prime<M: TwoBandModel + ?Sized>(
    model: &M,
    a: f64,
    b: f64,
    grid: &MomentumGrid,
) -> Result<f64> {
    check_grid(model, grid)?;
    let momenta = grid.momenta();
    let derivs = momenta
        .iter()
        .map(|&k| model.dvec_derivative(k, b))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::MissingDerivative {
            model: model.name().to_string(),
        })?;
    let sa = band_states(model, a, &momenta);
    let sb = band_states(model, b, &momenta);
    decay_rate_derivative(&momenta, &sa, &sb, &derivs)
}
