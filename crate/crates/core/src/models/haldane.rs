use std::f64::consts::PI;

use super::{LatticeKind, TwoBandModel, ZeroCondition};
use crate::bloch::{DVector, Momentum};
use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Next-nearest-neighbour displacements of the honeycomb lattice.
const B_VECTORS: [(f64, f64); 3] = [(SQRT3, 0.0), (-SQRT3 / 2.0, 1.5), (-SQRT3 / 2.0, -1.5)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaldaneParams {
    pub t1: f64,
    pub t2: f64,
    /// Sublattice potential `M` (`+M` on A, `-M` on B).
    pub m: f64,
    pub theta: f64,
}

/// Sum over next-nearest-neighbour sines as it enters `d_z`:
/// `sin √3kx - 2 sin(√3kx/2) cos(3ky/2)`.
fn nnn_sine_sum(kx: f64, ky: f64) -> f64 {
    let s = SQRT3 * kx;
    s.sin() - 2.0 * (s / 2.0).sin() * (1.5 * ky).cos()
}

fn nnn_cosine_sum(kx: f64, ky: f64) -> f64 {
    B_VECTORS
        .iter()
        .map(|&(bx, by)| (kx * bx + ky * by).cos())
        .sum()
}

pub fn haldane_dvec(kx: f64, ky: f64, p: &HaldaneParams) -> DVector {
    let c = (SQRT3 * kx / 2.0).cos();
    DVector::new(
        p.t1 * (ky.cos() + 2.0 * c * (ky / 2.0).cos()),
        p.t1 * (ky.sin() - 2.0 * c * (ky / 2.0).sin()),
        p.m - 2.0 * p.t2 * p.theta.sin() * nnn_sine_sum(kx, ky),
        2.0 * p.t2 * p.theta.cos() * nnn_cosine_sum(kx, ky),
    )
}

/// `∂d/∂θ`
pub fn haldane_dvec_derivative(kx: f64, ky: f64, p: &HaldaneParams) -> DVector {
    DVector::new(
        0.0,
        0.0,
        -2.0 * p.t2 * p.theta.cos() * nnn_sine_sum(kx, ky),
        -2.0 * p.t2 * p.theta.sin() * nnn_cosine_sum(kx, ky),
    )
}

/// Exact zeros sit at the two inequivalent Dirac points, one per sign of the
/// critical-line condition `M/t₂ = ±3√3 sin θ`.
pub fn haldane_zero_condition(
    theta: f64,
    theta_tilde: f64,
    p: &HaldaneParams,
) -> Result<ZeroCondition> {
    if p.t2 == 0.0 {
        return Err(Error::InvalidArgument("Haldane t2 must be nonzero".into()));
    }
    let ratio = p.m / p.t2;
    let w = 3.0 * SQRT3;
    let mut kc = Vec::new();
    if (ratio + w * theta.sin()) * (ratio + w * theta_tilde.sin()) < 0.0 {
        kc.push(Momentum::Pair(4.0 * PI / (3.0 * SQRT3), 4.0 * PI / 3.0));
    }
    if (ratio - w * theta.sin()) * (ratio - w * theta_tilde.sin()) < 0.0 {
        kc.push(Momentum::Pair(2.0 * PI / (3.0 * SQRT3), 2.0 * PI / 3.0));
    }
    Ok(ZeroCondition::from_momenta(kc))
}

/// The two phase-boundary values of `M/t₂` at flux `theta`.
pub fn haldane_critical_line(theta: f64) -> (f64, f64) {
    let v = 3.0 * SQRT3 * theta.sin();
    (v, -v)
}

#[derive(Debug, Clone, Copy)]
pub struct Haldane {
    pub t1: f64,
    pub t2: f64,
    pub m: f64,
}

impl Haldane {
    fn params(&self, theta: f64) -> HaldaneParams {
        HaldaneParams {
            t1: self.t1,
            t2: self.t2,
            m: self.m,
            theta,
        }
    }
}

fn expect_pair(k: Momentum) -> (f64, f64) {
    k.pair().expect("haldane takes two-dimensional momenta")
}

impl TwoBandModel for Haldane {
    fn name(&self) -> &'static str {
        "haldane"
    }

    fn lattice(&self) -> LatticeKind {
        LatticeKind::Honeycomb
    }

    fn dvec(&self, k: Momentum, driving: f64) -> DVector {
        let (kx, ky) = expect_pair(k);
        haldane_dvec(kx, ky, &self.params(driving))
    }

    fn dvec_derivative(&self, k: Momentum, driving: f64) -> Option<DVector> {
        let (kx, ky) = expect_pair(k);
        Some(haldane_dvec_derivative(kx, ky, &self.params(driving)))
    }

    fn zero_condition(&self, a: f64, b: f64) -> Result<ZeroCondition> {
        haldane_zero_condition(a, b, &self.params(a))
    }
}
