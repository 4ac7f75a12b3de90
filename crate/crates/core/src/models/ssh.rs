use std::f64::consts::PI;

use super::{expect_scalar, LatticeKind, TwoBandModel, ZeroCondition};
use crate::bloch::{DVector, Momentum};
use crate::error::Result;

/// SSH chain with intracell hopping fixed to one and intercell hopping `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SshParams {
    pub gamma: f64,
}

pub fn ssh_dvec(k: f64, p: &SshParams) -> DVector {
    DVector::new(1.0 + p.gamma * k.cos(), -p.gamma * k.sin(), 0.0, 0.0)
}

/// `∂d/∂γ`
pub fn ssh_dvec_derivative(k: f64, _p: &SshParams) -> DVector {
    DVector::new(k.cos(), -k.sin(), 0.0, 0.0)
}

/// `k = π` when `(γ-1)(γ̃-1) < 0`; `k = 0` when `(γ+1)(γ̃+1) < 0`.
pub fn ssh_zero_condition(gamma: f64, gamma_tilde: f64) -> ZeroCondition {
    let mut kc = Vec::new();
    if (gamma + 1.0) * (gamma_tilde + 1.0) < 0.0 {
        kc.push(Momentum::Scalar(0.0));
    }
    if (gamma - 1.0) * (gamma_tilde - 1.0) < 0.0 {
        kc.push(Momentum::Scalar(PI));
    }
    ZeroCondition::from_momenta(kc)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Ssh;

impl TwoBandModel for Ssh {
    fn name(&self) -> &'static str {
        "ssh"
    }

    fn lattice(&self) -> LatticeKind {
        LatticeKind::Chain
    }

    fn dvec(&self, k: Momentum, driving: f64) -> DVector {
        ssh_dvec(expect_scalar(k, "ssh"), &SshParams { gamma: driving })
    }

    fn dvec_derivative(&self, k: Momentum, driving: f64) -> Option<DVector> {
        Some(ssh_dvec_derivative(
            expect_scalar(k, "ssh"),
            &SshParams { gamma: driving },
        ))
    }

    fn zero_condition(&self, a: f64, b: f64) -> Result<ZeroCondition> {
        Ok(ssh_zero_condition(a, b))
    }

    fn near_zero_coefficient(&self, a: f64, b: f64, modes: usize) -> Option<f64> {
        Some((b - a).abs() / (2.0 * (b - 1.0) * (1.0 - a) * modes as f64))
    }
}
