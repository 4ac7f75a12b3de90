//! Exact diagonalization of the interacting SSH chain at half filling.

mod basis;
mod eigen;
mod hamiltonian;

pub use basis::{build_basis, FockBasis, MAX_SITES};
pub use eigen::{dense_low_spectrum, lanczos_low_spectrum, lanczos_lowest, residual, LowSpectrum};
pub use hamiltonian::{build_hamiltonian, ChainParams, MBHamiltonian};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::bloch::{momentum_grid_1d, MomentumGrid, ZERO_TOL};
use crate::error::{Error, Result};
use crate::models::{model_fidelity, ssh_zero_condition, LatticeKind, Ssh, ZeroCondition};
use crate::scan::{FidelityEngine, PointResult, SystemSize};

/// Ground states closer in energy than this to the next level are refused.
pub const DEGEN_TOL: f64 = 1e-10;
/// Largest real basis solved by full dense diagonalization.
pub const DENSE_LIMIT: usize = 4000;
/// Largest complex (twisted) basis solved densely; Lanczos above.
pub const COMPLEX_DENSE_LIMIT: usize = 64;
pub const LANCZOS_TOL: f64 = 1e-12;
pub const LANCZOS_MAX_ITER: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Dense up to [`DENSE_LIMIT`] for real matrices and up to
    /// [`COMPLEX_DENSE_LIMIT`] for complex ones, Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub amplitudes: Vec<Complex64>,
    /// Distance to the next level; infinite for a one-state basis.
    pub degeneracy_gap: f64,
}

pub fn ground_state(h: &MBHamiltonian) -> Result<GroundState> {
    ground_state_with(h, Solver::Auto)
}

pub fn ground_state_with(h: &MBHamiltonian, solver: Solver) -> Result<GroundState> {
    if h.dim() == 0 {
        return Err(Error::InvalidArgument("empty Hamiltonian".into()));
    }
    let dense = match solver {
        Solver::Auto => {
            h.dim()
                <= if h.is_real() {
                    DENSE_LIMIT
                } else {
                    COMPLEX_DENSE_LIMIT
                }
        }
        Solver::Dense => true,
        Solver::Lanczos => false,
    };
    let low = if dense {
        dense_low_spectrum(h)
    } else {
        lanczos_low_spectrum(h, LANCZOS_TOL, LANCZOS_MAX_ITER)?
    };
    let gap = low.e1.map_or(f64::INFINITY, |e1| e1 - low.e0);
    if gap < DEGEN_TOL {
        return Err(Error::DegenerateGroundState { gap });
    }
    Ok(GroundState {
        energy: low.e0,
        amplitudes: low.v0,
        degeneracy_gap: gap,
    })
}

fn half_filled_ground_state(l_cells: usize, u: f64, phi: f64, gamma: f64) -> Result<GroundState> {
    check_couplings(u, gamma)?;
    let basis = build_basis(l_cells, l_cells)?;
    ground_state(&build_hamiltonian(&basis, gamma, u, phi)?)
}

fn check_couplings(u: f64, gamma: f64) -> Result<()> {
    if !(u.is_finite() && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "couplings must be finite, got gamma={gamma}, u={u}"
        )));
    }
    Ok(())
}

type ReferenceKey = (usize, u64, u64, u64);

const REFERENCE_CACHE_CAP: usize = 64;

/// Ground state at the reference point, memoized since sweeps hold it fixed.
fn reference_ground_state(
    l_cells: usize,
    u: f64,
    phi: f64,
    gamma: f64,
) -> Result<Arc<GroundState>> {
    static CACHE: OnceLock<Mutex<HashMap<ReferenceKey, Arc<GroundState>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (l_cells, u.to_bits(), phi.to_bits(), gamma.to_bits());
    if let Some(g) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(g));
    }
    let g = Arc::new(half_filled_ground_state(l_cells, u, phi, gamma)?);
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    if map.len() >= REFERENCE_CACHE_CAP {
        map.clear();
    }
    map.insert(key, Arc::clone(&g));
    Ok(g)
}

/// `|⟨ψ(γ)|ψ(γ̃)⟩|` of half-filled ground states on `l_cells` cells.
pub fn mb_fidelity(l_cells: usize, u: f64, phi: f64, gamma: f64, gamma_tilde: f64) -> Result<f64> {
    let a = reference_ground_state(l_cells, u, phi, gamma)?;
    if gamma_tilde == gamma {
        return Ok(1.0);
    }
    let b = half_filled_ground_state(l_cells, u, phi, gamma_tilde)?;
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub mb_value: f64,
    pub band_value: f64,
    pub abs_diff: f64,
}

/// Non-interacting many-body fidelity against the band-product value on the same grid.
pub fn free_fermion_crosscheck(
    l_cells: usize,
    phi: f64,
    gamma: f64,
    gamma_tilde: f64,
) -> Result<CrossCheck> {
    let grid = MomentumGrid::Chain(momentum_grid_1d(l_cells, phi)?);
    let band_value = model_fidelity(&Ssh, gamma, gamma_tilde, &grid)?.total;
    let mb_value = mb_fidelity(l_cells, 0.0, phi, gamma, gamma_tilde)?;
    Ok(CrossCheck {
        mb_value,
        band_value,
        abs_diff: (mb_value - band_value).abs(),
    })
}

/// Interacting SSH chain as a fidelity engine; the driving parameter is γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractingSsh {
    pub u: f64,
}

impl FidelityEngine for InteractingSsh {
    fn engine_name(&self) -> &str {
        "ssh-interacting"
    }

    fn lattice_kind(&self) -> LatticeKind {
        LatticeKind::Chain
    }

    fn evaluate(
        &self,
        a: f64,
        b: f64,
        size: SystemSize,
        phi: f64,
        _phi_y: f64,
    ) -> Result<PointResult> {
        let SystemSize::Chain(l) = size else {
            return Err(Error::InvalidArgument(
                "ssh-interacting lives on a chain".into(),
            ));
        };
        let f = mb_fidelity(l, self.u, phi, a, b)?;
        let exact_zero = f <= ZERO_TOL;
        let fidelity = if exact_zero { 0.0 } else { f };
        let alpha = if exact_zero {
            f64::INFINITY
        } else {
            (-fidelity.ln() / l as f64).max(0.0)
        };
        Ok(PointResult {
            fidelity,
            alpha,
            exact_zero,
        })
    }

    /// Zero condition of the non-interacting chain, used to place candidate fluxes.
    fn critical_momenta(&self, a: f64, b: f64) -> Result<ZeroCondition> {
        Ok(ssh_zero_condition(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_level_toy() {
        // one particle on one cell at γ = 0: H = [[0,1],[1,0]]
        let b = build_basis(1, 1).unwrap();
        let h = build_hamiltonian(&b, 0.0, 0.0, 0.0).unwrap();
        let g = ground_state(&h).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-14);
        let ratio = g.amplitudes[0] / g.amplitudes[1];
        assert!((ratio + 1.0).norm() < 1e-12);
        assert!((g.degeneracy_gap - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ground_state_normalized_with_small_residual() {
        let b = build_basis(5, 5).unwrap();
        let h = build_hamiltonian(&b, 0.2, 0.1, PI).unwrap();
        for solver in [Solver::Dense, Solver::Lanczos] {
            let g = ground_state_with(&h, solver).unwrap();
            let n: f64 = g.amplitudes.iter().map(|x| x.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
            assert!(residual(&h, g.energy, &g.amplitudes) < 1e-10);
        }
    }

    #[test]
    fn identical_points_have_unit_fidelity() {
        assert_eq!(mb_fidelity(4, 0.3, 0.7, 0.6, 0.6).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_point_refused() {
        let r = mb_fidelity(5, 0.1, PI, 0.2, 1.0);
        assert!(matches!(r, Err(Error::DegenerateGroundState { .. })));
    }

    #[test]
    fn crosscheck_examples() {
        let c = free_fermion_crosscheck(4, 0.37 * PI, 0.5, 0.8).unwrap();
        assert!(c.abs_diff < 1e-10, "{c:?}");
        let c = free_fermion_crosscheck(5, PI, 0.5, 1.5).unwrap();
        assert!(c.mb_value < 1e-10 && c.band_value == 0.0, "{c:?}");
        let c = free_fermion_crosscheck(3, 0.1, 2.0, 2.0).unwrap();
        assert_eq!((c.mb_value, c.band_value), (1.0, 1.0));
    }

    #[test]
    fn engine_rejects_honeycomb() {
        let e = InteractingSsh { u: 0.1 };
        assert!(e
            .evaluate(0.2, 0.5, SystemSize::Honeycomb { lx: 2, ly: 2 }, 0.0, 0.0)
            .is_err());
        assert!(matches!(
            e.alpha_prime(0.2, 0.5, SystemSize::Chain(3), 0.0, 0.0),
            Err(Error::MissingDerivative { .. })
        ));
    }
}
