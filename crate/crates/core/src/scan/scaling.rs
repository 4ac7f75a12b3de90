use rayon::prelude::*;

use super::{FidelityEngine, SystemSize};
use crate::error::{Error, Result};

/// Point weights for the size fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    Uniform,
    /// Weight each point by its number of modes, favouring large systems.
    Size,
}

/// Straight line through `(1/L, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub inv_sizes: Vec<f64>,
    pub alphas: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Weighted least-squares line `y = slope·x + intercept`, returning
/// `(slope, intercept, r2)` with `r2` clamped into `[0, 1]`.
pub fn least_squares(x: &[f64], y: &[f64], w: Option<&[f64]>) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || w.is_some_and(|w| w.len() != x.len()) {
        return Err(Error::InvalidArgument("fit inputs differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument(
            "a line fit needs at least two points".into(),
        ));
    }
    let weight = |i: usize| w.map_or(1.0, |w| w[i]);
    let sw: f64 = (0..x.len()).map(weight).sum();
    let mx = (0..x.len()).map(|i| weight(i) * x[i]).sum::<f64>() / sw;
    let my = (0..x.len()).map(|i| weight(i) * y[i]).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        let (dx, dy) = (x[i] - mx, y[i] - my);
        sxx += weight(i) * dx * dx;
        sxy += weight(i) * dx * dy;
        syy += weight(i) * dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r2))
}

/// Fit α against 1/(mode count) over the given sizes at fixed flux.
pub fn finite_size_fit<E: FidelityEngine + ?Sized>(
    engine: &E,
    a: f64,
    b: f64,
    phi: f64,
    phi_y: f64,
    sizes: &[SystemSize],
    weighting: Weighting,
) -> Result<ScalingFit> {
    if sizes.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "size fit needs at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    let points: Vec<Result<f64>> = sizes
        .par_iter()
        .map(|&s| engine.evaluate(a, b, s, phi, phi_y).map(|r| r.alpha))
        .collect();
    let mut alphas = Vec::with_capacity(sizes.len());
    for (s, r) in sizes.iter().zip(points) {
        let alpha = r?;
        if alpha.is_infinite() {
            return Err(Error::DivergentPoint { size: s.modes() });
        }
        alphas.push(alpha);
    }
    let inv_sizes: Vec<f64> = sizes.iter().map(|s| 1.0 / s.modes() as f64).collect();
    let weights: Option<Vec<f64>> = match weighting {
        Weighting::Uniform => None,
        Weighting::Size => Some(sizes.iter().map(|s| s.modes() as f64).collect()),
    };
    let (slope, intercept, r2) = least_squares(&inv_sizes, &alphas, weights.as_deref())?;
    Ok(ScalingFit {
        inv_sizes,
        alphas,
        slope,
        intercept,
        r2,
    })
}

/// `α'` over a list of second-point parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPrimeScan {
    pub samples: Vec<f64>,
    pub values: Vec<f64>,
    /// Index of the largest `|α'|`.
    pub peak_index: usize,
}

impl AlphaPrimeScan {
    pub fn peak(&self) -> (f64, f64) {
        (self.samples[self.peak_index], self.values[self.peak_index])
    }
}

pub fn alpha_prime_scan<E: FidelityEngine + ?Sized>(
    engine: &E,
    a: f64,
    samples: &[f64],
    size: SystemSize,
    phi: f64,
    phi_y: f64,
) -> Result<AlphaPrimeScan> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument(
            "alpha' scan needs at least one sample".into(),
        ));
    }
    let results: Vec<Result<f64>> = samples
        .par_iter()
        .map(|&b| engine.alpha_prime(a, b, size, phi, phi_y))
        .collect();
    let values = results.into_iter().collect::<Result<Vec<f64>>>()?;
    let peak_index = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(AlphaPrimeScan {
        samples: samples.to_vec(),
        values,
        peak_index,
    })
}
