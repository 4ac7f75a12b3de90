use num_complex::Complex64;

use super::{DVector, Momentum, CLAMP_TOL, GAP_TOL, ZERO_TOL};
use crate::error::{Error, Result};

/// Fidelity of one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFidelity {
    pub k: Momentum,
    pub value: f64,
    pub gapless_a: bool,
    pub gapless_b: bool,
}

/// Per-mode fidelities and their product for two parameter points on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    /// Modes in grid order. Values at or below [`ZERO_TOL`] are stored as exactly zero.
    pub modes: Vec<ModeFidelity>,
    pub total: f64,
    /// Decay rate `-(1/N) Σ ln F_k`; `f64::INFINITY` iff `total == 0`.
    pub alpha: f64,
    pub exact_zero: bool,
}

impl FidelityReport {
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Momenta whose mode fidelity vanishes.
    pub fn zero_modes(&self) -> impl Iterator<Item = Momentum> + '_ {
        self.modes.iter().filter(|m| m.value == 0.0).map(|m| m.k)
    }
}

/// Cross-product residuals and dot product of two Bloch vectors. A mode
/// fidelity vanishes iff all residuals vanish and `dot < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiparallelResiduals {
    pub r_xy: f64,
    pub r_xz: f64,
    pub r_yz: f64,
    pub dot: f64,
}

impl AntiparallelResiduals {
    pub fn max_residual(&self) -> f64 {
        self.r_xy.abs().max(self.r_xz.abs()).max(self.r_yz.abs())
    }
}

pub fn antiparallel_residuals(da: &DVector, db: &DVector) -> AntiparallelResiduals {
    AntiparallelResiduals {
        r_xy: da.dx * db.dy - da.dy * db.dx,
        r_xz: da.dx * db.dz - da.dz * db.dx,
        r_yz: da.dy * db.dz - da.dz * db.dy,
        dot: da.dot(db),
    }
}

/// Normalized lower-band eigenvector of `d · σ`, with eigenvalue `-|d|`.
///
/// The first nonzero component is made real and positive.
pub fn lower_band_state(d: &DVector) -> Result<[Complex64; 2]> {
    let e = d.norm();
    if e < GAP_TOL * e.max(1.0) {
        return Err(Error::GaplessMode { k: None, norm: e });
    }
    let off = Complex64::new(d.dx, d.dy);
    // Two algebraically equivalent forms; pick the one without cancellation.
    let (u, v) = if d.dz <= 0.0 {
        (Complex64::new(e - d.dz, 0.0), -off)
    } else {
        (off.conj(), Complex64::new(-(d.dz + e), 0.0))
    };
    let n = (u.norm_sqr() + v.norm_sqr()).sqrt();
    let (u, v) = (u / n, v / n);
    let phase = if u != Complex64::new(0.0, 0.0) {
        u.conj() / u.norm()
    } else {
        v.conj() / v.norm()
    };
    Ok([u * phase, v * phase])
}

/// Squared mode fidelity `(E Ẽ + d·d̃) / (2 E Ẽ)`.
///
/// Written through `|d × d̃|² = (E Ẽ)² - (d·d̃)²` so that both the parallel
/// (`1 - |d × d̃|² / (2 E Ẽ (E Ẽ + d·d̃))`) and the antiparallel
/// (`|d × d̃|² / (2 E Ẽ (E Ẽ - d·d̃))`) limits keep full precision.
fn squared_mode_fidelity(da: &DVector, db: &DVector) -> f64 {
    let prod = da.norm() * db.norm();
    let dot = da.dot(db);
    let c = da.cross(db);
    let cross2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    if dot >= 0.0 {
        1.0 - cross2 / (2.0 * prod * (prod + dot))
    } else {
        cross2 / (2.0 * prod * (prod - dot))
    }
}

fn checked_mode_fidelity(
    da: &DVector,
    db: &DVector,
    scale: f64,
    k: Option<Momentum>,
) -> Result<f64> {
    for d in [da, db] {
        let norm = d.norm();
        if norm < GAP_TOL * scale {
            return Err(Error::GaplessMode { k, norm });
        }
    }
    let value = squared_mode_fidelity(da, db).sqrt();
    if value > 1.0 + CLAMP_TOL || value.is_nan() {
        return Err(Error::FidelityOutOfRange { k, value });
    }
    Ok(value.min(1.0))
}

/// Overlap modulus of the lower-band states of two Bloch vectors.
pub fn mode_fidelity(da: &DVector, db: &DVector) -> Result<f64> {
    let scale = da.norm().max(db.norm()).max(1.0);
    checked_mode_fidelity(da, db, scale, None)
}

fn gap_scale(states_a: &[DVector], states_b: &[DVector]) -> f64 {
    states_a
        .iter()
        .chain(states_b)
        .map(DVector::norm)
        .fold(1.0, f64::max)
}

fn check_lengths(momenta: &[Momentum], a: &[DVector], b: &[DVector]) -> Result<()> {
    if momenta.is_empty() || a.len() != momenta.len() || b.len() != momenta.len() {
        return Err(Error::InvalidArgument(format!(
            "mode lists must be nonempty and equally long ({} momenta, {} and {} states)",
            momenta.len(),
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Product of mode fidelities over a grid, with the decay rate computed as a
/// log-sum so that large grids do not underflow.
pub fn total_fidelity(
    momenta: &[Momentum],
    states_a: &[DVector],
    states_b: &[DVector],
) -> Result<FidelityReport> {
    check_lengths(momenta, states_a, states_b)?;
    let scale = gap_scale(states_a, states_b);
    let mut modes = Vec::with_capacity(momenta.len());
    for ((&k, da), db) in momenta.iter().zip(states_a).zip(states_b) {
        let raw = checked_mode_fidelity(da, db, scale, Some(k))?;
        let value = if raw <= ZERO_TOL { 0.0 } else { raw };
        modes.push(ModeFidelity {
            k,
            value,
            gapless_a: false,
            gapless_b: false,
        });
    }
    let exact_zero = modes.iter().any(|m| m.value == 0.0);
    let total = modes.iter().map(|m| m.value).product::<f64>();
    let alpha = if exact_zero {
        f64::INFINITY
    } else {
        let log_sum: f64 = modes.iter().map(|m| m.value.ln()).sum();
        let alpha = -log_sum / modes.len() as f64;
        // a product of values ≤ 1 cannot have a negative decay rate
        alpha.max(0.0)
    };
    Ok(FidelityReport {
        modes,
        total,
        alpha,
        exact_zero,
    })
}

/// Like [`total_fidelity`] but never fails: gapless modes are flagged and
/// carry a NaN value. Used for diagnostics.
pub fn survey_modes(
    momenta: &[Momentum],
    states_a: &[DVector],
    states_b: &[DVector],
) -> Vec<ModeFidelity> {
    let scale = gap_scale(states_a, states_b);
    momenta
        .iter()
        .zip(states_a)
        .zip(states_b)
        .map(|((&k, da), db)| {
            let gapless_a = da.norm() < GAP_TOL * scale;
            let gapless_b = db.norm() < GAP_TOL * scale;
            let value = if gapless_a || gapless_b {
                f64::NAN
            } else {
                squared_mode_fidelity(da, db).sqrt().min(1.0)
            };
            ModeFidelity {
                k,
                value,
                gapless_a,
                gapless_b,
            }
        })
        .collect()
}

/// Derivative of the decay rate with respect to the second parameter point:
///
/// `α' = -(1/2N) Σ_k [ (E Ẽ' + d·d̃') / (E Ẽ + d·d̃) - Ẽ'/Ẽ ]`, `Ẽ' = d̃·d̃'/Ẽ`.
pub fn decay_rate_derivative(
    momenta: &[Momentum],
    states_a: &[DVector],
    states_b: &[DVector],
    derivs_b: &[DVector],
) -> Result<f64> {
    check_lengths(momenta, states_a, states_b)?;
    if derivs_b.len() != momenta.len() {
        return Err(Error::InvalidArgument(
            "derivative list length mismatch".into(),
        ));
    }
    let scale = gap_scale(states_a, states_b);
    let mut sum = 0.0;
    for (((&k, da), db), ddb) in momenta.iter().zip(states_a).zip(states_b).zip(derivs_b) {
        let e = da.norm();
        let et = db.norm();
        for norm in [e, et] {
            if norm < GAP_TOL * scale {
                return Err(Error::GaplessMode { k: Some(k), norm });
            }
        }
        let f2 = squared_mode_fidelity(da, db);
        if f2.sqrt() <= ZERO_TOL {
            return Err(Error::DivergentMode { k });
        }
        // E Ẽ + d·d̃, in the cancellation-free form
        let denom = 2.0 * e * et * f2;
        let et_prime = db.dot(ddb) / et;
        sum += (e * et_prime + da.dot(ddb)) / denom - et_prime / et;
    }
    Ok(-sum / (2.0 * momenta.len() as f64))
}
