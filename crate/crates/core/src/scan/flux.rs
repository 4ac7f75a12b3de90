use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{FidelityEngine, PointResult, SystemSize};
use crate::bloch::Momentum;
use crate::error::{Error, Result};

/// Twist flux that places `kc` on a ring of `len` cells: `mod(L·kc, 2π)`.
pub fn critical_flux_1d(kc: f64, len: usize) -> f64 {
    reduce_product(len as f64, kc)
}

/// Twist flux along x that places `kxc` on a honeycomb grid with `lx` cells:
/// `mod(√3·Lx·kxc, 2π)`.
pub fn critical_flux_haldane(kxc: f64, lx: usize) -> f64 {
    reduce_product(3f64.sqrt() * lx as f64, kxc)
}

/// `mod(a·b, 2π)` carrying the rounding error of the product through the reduction.
fn reduce_product(a: f64, b: f64) -> f64 {
    let p = a * b;
    let err = a.mul_add(b, -p);
    let r = (p.rem_euclid(TAU) + err).rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Critical fluxes for every critical momentum of the engine's zero condition.
pub fn critical_fluxes<E: FidelityEngine + ?Sized>(
    engine: &E,
    a: f64,
    b: f64,
    size: SystemSize,
) -> Result<Vec<f64>> {
    let cond = engine.critical_momenta(a, b)?;
    let mut out: Vec<f64> = Vec::new();
    for kc in cond.kc_list {
        let phi = match (kc, size) {
            (Momentum::Scalar(k), SystemSize::Chain(l)) => critical_flux_1d(k, l),
            (Momentum::Pair(kx, _), SystemSize::Honeycomb { lx, .. }) => {
                critical_flux_haldane(kx, lx)
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "size {size} does not match the lattice of `{}`",
                    engine.engine_name()
                )))
            }
        };
        if !out.iter().any(|&p| (p - phi).abs() < 1e-12) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Decay rate as a function of twist flux.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxScan {
    pub phis: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub alphas: Vec<f64>,
    pub exact_zero: Vec<bool>,
    /// Rows added because they are analytic critical fluxes.
    pub injected: Vec<bool>,
    pub diverged_at: Vec<f64>,
}

impl FluxScan {
    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }
}

/// Canonical flux samples merged with every analytic critical flux, sorted.
/// The flag marks the added critical fluxes.
pub fn flux_samples_with_critical<E: FidelityEngine + ?Sized>(
    engine: &E,
    a: f64,
    b: f64,
    size: SystemSize,
    samples: &[f64],
) -> Result<Vec<(f64, bool)>> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument(
            "flux scan needs at least one sample".into(),
        ));
    }
    let mut points: Vec<(f64, bool)> = Vec::with_capacity(samples.len() + 2);
    for &phi in samples {
        points.push((crate::bloch::canonical_flux(phi)?, false));
    }
    for phi_c in critical_fluxes(engine, a, b, size)? {
        if !points.iter().any(|&(p, _)| p == phi_c) {
            points.push((phi_c, true));
        }
    }
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(points)
}

/// Evaluate α over `samples`, adding every analytic critical flux so that a
/// divergence is never lost between samples. Output is sorted by flux.
pub fn scan_alpha_vs_flux<E: FidelityEngine + ?Sized>(
    engine: &E,
    a: f64,
    b: f64,
    size: SystemSize,
    phi_y: f64,
    samples: &[f64],
) -> Result<FluxScan> {
    let points = flux_samples_with_critical(engine, a, b, size, samples)?;

    let results: Vec<Result<PointResult>> = points
        .par_iter()
        .map(|&(phi, _)| engine.evaluate(a, b, size, phi, phi_y))
        .collect();

    let mut scan = FluxScan {
        phis: Vec::with_capacity(points.len()),
        fidelities: Vec::with_capacity(points.len()),
        alphas: Vec::with_capacity(points.len()),
        exact_zero: Vec::with_capacity(points.len()),
        injected: Vec::with_capacity(points.len()),
        diverged_at: Vec::new(),
    };
    for ((phi, injected), res) in points.into_iter().zip(results) {
        let r = res?;
        scan.phis.push(phi);
        scan.fidelities.push(r.fidelity);
        scan.alphas.push(r.alpha);
        scan.exact_zero.push(r.exact_zero);
        scan.injected.push(injected);
        if r.exact_zero {
            scan.diverged_at.push(phi);
        }
    }
    Ok(scan)
}
