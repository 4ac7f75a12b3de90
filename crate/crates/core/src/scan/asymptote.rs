use super::flux::{critical_flux_1d, critical_flux_haldane};
use super::SystemSize;
use crate::bloch::{angular_distance, mode_fidelity, Momentum, ZERO_TOL};
use crate::error::{Error, Result};
use crate::models::TwoBandModel;

/// Nearest-mode fidelity next to a critical point, with its linear prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptotePoint {
    pub delta: f64,
    pub actual: f64,
    pub predicted: f64,
}

impl AsymptotePoint {
    pub fn ratio(&self) -> f64 {
        self.actual / self.predicted
    }
}

fn momentum_distance(a: Momentum, b: Momentum) -> f64 {
    match (a, b) {
        (Momentum::Scalar(x), Momentum::Scalar(y)) => angular_distance(x, y),
        // honeycomb grids and Dirac points share one zone, so no wrapping
        (Momentum::Pair(x1, y1), Momentum::Pair(x2, y2)) => (x1 - x2).hypot(y1 - y2),
        _ => f64::INFINITY,
    }
}

fn critical_flux(kc: Momentum, size: SystemSize) -> Result<f64> {
    match (kc, size) {
        (Momentum::Scalar(k), SystemSize::Chain(l)) => Ok(critical_flux_1d(k, l)),
        (Momentum::Pair(kx, _), SystemSize::Honeycomb { lx, .. }) => {
            Ok(critical_flux_haldane(kx, lx))
        }
        _ => Err(Error::InvalidArgument(format!(
            "critical momentum {kc} does not fit size {size}"
        ))),
    }
}

/// Fidelity of the grid mode closest to `kc` at flux `φ_c + delta`.
/// Values at or below the zero tolerance are reported as exactly zero.
pub fn near_zero_mode_fidelity<M: TwoBandModel + ?Sized>(
    model: &M,
    a: f64,
    b: f64,
    size: SystemSize,
    kc: Momentum,
    delta: f64,
    phi_y: f64,
) -> Result<f64> {
    let phi = critical_flux(kc, size)? + delta;
    let grid = size.grid(phi, phi_y)?;
    let k_star = grid
        .momenta()
        .into_iter()
        .min_by(|&p, &q| momentum_distance(p, kc).total_cmp(&momentum_distance(q, kc)))
        .expect("grids are nonempty");
    let f = mode_fidelity(&model.dvec(k_star, a), &model.dvec(k_star, b))?;
    Ok(if f <= ZERO_TOL { 0.0 } else { f })
}

/// Compare the nearest-mode fidelity with its closed-form linear law at each offset.
pub fn near_zero_asymptote_check<M: TwoBandModel + ?Sized>(
    model: &M,
    a: f64,
    b: f64,
    size: SystemSize,
    kc: Momentum,
    deltas: &[f64],
) -> Result<Vec<AsymptotePoint>> {
    let coeff = model
        .near_zero_coefficient(a, b, size.modes())
        .ok_or_else(|| Error::UnsupportedModel {
            model: model.name().to_string(),
            operation: "closed-form near-zero asymptote".into(),
        })?;
    check_zero(model, a, b, kc)?;
    deltas
        .iter()
        .map(|&delta| {
            if !(delta.is_finite() && delta >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "offset must be finite and non-negative, got {delta}"
                )));
            }
            let actual = near_zero_mode_fidelity(model, a, b, size, kc, delta, 0.0)?;
            Ok(AsymptotePoint {
                delta,
                actual,
                predicted: coeff * delta,
            })
        })
        .collect()
}

/// Linear coefficient of the nearest-mode fidelity, estimated from the
/// smallest positive offset. Used where no closed form exists.
pub fn near_zero_slope_estimate<M: TwoBandModel + ?Sized>(
    model: &M,
    a: f64,
    b: f64,
    size: SystemSize,
    kc: Momentum,
    phi_y: f64,
    deltas: &[f64],
) -> Result<f64> {
    check_zero(model, a, b, kc)?;
    let delta = deltas
        .iter()
        .copied()
        .filter(|d| d.is_finite() && *d > 0.0)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::InvalidArgument("need at least one positive offset".into()))?;
    Ok(near_zero_mode_fidelity(model, a, b, size, kc, delta, phi_y)? / delta)
}

fn check_zero<M: TwoBandModel + ?Sized>(model: &M, a: f64, b: f64, kc: Momentum) -> Result<()> {
    let cond = model.zero_condition(a, b)?;
    if cond
        .kc_list
        .iter()
        .any(|&k| momentum_distance(k, kc) < 1e-12)
    {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{kc} is not a critical momentum of `{}` between {a} and {b}",
            model.name()
        )))
    }
}
