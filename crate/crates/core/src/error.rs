use thiserror::Error;

use crate::bloch::Momentum;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The d-vector of a mode is (numerically) zero, so its ground state is undefined.
    #[error("gapless mode{}: |d| = {norm:e}", at(k))]
    GaplessMode { k: Option<Momentum>, norm: f64 },

    #[error("mode fidelity {value}{} lies outside [0, 1] beyond rounding", at(k))]
    FidelityOutOfRange { k: Option<Momentum>, value: f64 },

    #[error("model `{model}` has no analytic parameter derivative")]
    MissingDerivative { model: String },

    /// A mode with exactly vanishing fidelity makes the decay-rate derivative undefined.
    #[error("mode at k = {k} has an exact zero of fidelity; the derivative diverges")]
    DivergentMode { k: Momentum },

    #[error("no critical momentum exists for |Jv/2J| = {ratio} (requires < 1)")]
    NoCriticalMomentum { ratio: f64 },

    #[error("operation `{operation}` is not supported for model `{model}`")]
    UnsupportedModel { model: String, operation: String },

    #[error("decay rate diverges at size {size}; scaling fit undefined")]
    DivergentPoint { size: usize },

    #[error("ground state is degenerate (gap {gap:e} below tolerance)")]
    DegenerateGroundState { gap: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}

impl Error {
    /// Numerical failures, as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidArgument(_)
                | Error::MissingDerivative { .. }
                | Error::UnsupportedModel { .. }
                | Error::NoCriticalMomentum { .. }
        )
    }
}

fn at(k: &Option<Momentum>) -> String {
    k.map(|k| format!(" at k = {k}")).unwrap_or_default()
}
