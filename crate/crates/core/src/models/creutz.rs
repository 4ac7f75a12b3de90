use super::{expect_scalar, LatticeKind, TwoBandModel, ZeroCondition};
use crate::bloch::{DVector, Momentum};
use crate::error::{Error, Result};

/// Creutz ladder with `J_h = J_d = 1`; `theta` is the flux per plaquette and
/// `jv_over_2j` the rung coupling ratio `J_v / 2J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreutzParams {
    pub theta: f64,
    pub jv_over_2j: f64,
}

pub fn creutz_dvec(k: f64, p: &CreutzParams) -> DVector {
    let jv = 2.0 * p.jv_over_2j;
    DVector::new(
        -2.0 * k.cos() - jv,
        0.0,
        -2.0 * k.sin() * p.theta.sin(),
        -2.0 * k.cos() * p.theta.cos(),
    )
}

/// `∂d/∂θ`
pub fn creutz_dvec_derivative(k: f64, p: &CreutzParams) -> DVector {
    DVector::new(
        0.0,
        0.0,
        -2.0 * k.sin() * p.theta.cos(),
        2.0 * k.cos() * p.theta.sin(),
    )
}

/// `sin θ sin θ̃ < 0` with `k_c = ±arccos(-J_v/2J)`.
pub fn creutz_zero_condition(
    theta: f64,
    theta_tilde: f64,
    jv_over_2j: f64,
) -> Result<ZeroCondition> {
    if !(jv_over_2j.abs() < 1.0) {
        return Err(Error::NoCriticalMomentum { ratio: jv_over_2j });
    }
    if theta.sin() * theta_tilde.sin() < 0.0 {
        let kc = (-jv_over_2j).acos();
        Ok(ZeroCondition::from_momenta(vec![
            Momentum::Scalar(kc),
            Momentum::Scalar(-kc),
        ]))
    } else {
        Ok(ZeroCondition::default())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Creutz {
    pub jv_over_2j: f64,
}

impl Creutz {
    fn params(&self, theta: f64) -> CreutzParams {
        CreutzParams {
            theta,
            jv_over_2j: self.jv_over_2j,
        }
    }
}

impl TwoBandModel for Creutz {
    fn name(&self) -> &'static str {
        "creutz"
    }

    fn lattice(&self) -> LatticeKind {
        LatticeKind::Chain
    }

    fn dvec(&self, k: Momentum, driving: f64) -> DVector {
        creutz_dvec(expect_scalar(k, "creutz"), &self.params(driving))
    }

    fn dvec_derivative(&self, k: Momentum, driving: f64) -> Option<DVector> {
        Some(creutz_dvec_derivative(
            expect_scalar(k, "creutz"),
            &self.params(driving),
        ))
    }

    fn zero_condition(&self, a: f64, b: f64) -> Result<ZeroCondition> {
        creutz_zero_condition(a, b, self.jv_over_2j)
    }

    fn near_zero_coefficient(&self, a: f64, b: f64, modes: usize) -> Option<f64> {
        let (sa, sb) = (a.sin(), b.sin());
        Some(-(sa - sb).abs() / (2.0 * sa * sb * modes as f64))
    }
}
