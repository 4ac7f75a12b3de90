use std::f64::consts::{PI, TAU};

use super::Momentum;
use crate::error::{Error, Result};

/// Reduce a twist flux into `[0, 2π)`.
pub fn canonical_flux(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "flux must be finite, got {phi}"
        )));
    }
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    Ok(if r >= TAU { 0.0 } else { r })
}

/// Quantized momenta of a ring of `len` unit cells threaded by flux `phi`:
/// `k = (2πm + φ)/L` with `m` centred on zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid1D {
    len: usize,
    phi: f64,
    ks: Vec<f64>,
}

impl MomentumGrid1D {
    pub fn new(len: usize, phi: f64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument(
                "grid length must be at least 1".into(),
            ));
        }
        let phi = canonical_flux(phi)?;
        let n = len as i64;
        let (lo, hi) = if n % 2 == 0 {
            (-n / 2 + 1, n / 2)
        } else {
            (-(n - 1) / 2, (n - 1) / 2)
        };
        // Written in units of π so that (2m + 1)/L = 1 lands on π exactly.
        let flux_over_pi = phi / PI;
        let ks = (lo..=hi)
            .map(|m| PI * ((2 * m) as f64 + flux_over_pi) / len as f64)
            .collect();
        Ok(Self { len, phi, ks })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ks(&self) -> &[f64] {
        &self.ks
    }
}

pub fn momentum_grid_1d(len: usize, phi: f64) -> Result<MomentumGrid1D> {
    MomentumGrid1D::new(len, phi)
}

/// Honeycomb-lattice momenta with twists along both lattice directions:
/// `kx = (2π mx + φx)/(√3 Lx)`, `ky = (4π my + 2φy)/(3 Ly)`, `m = 1..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid2D {
    lx: usize,
    ly: usize,
    phi_x: f64,
    phi_y: f64,
    ks: Vec<(f64, f64)>,
}

impl MomentumGrid2D {
    pub fn new(lx: usize, ly: usize, phi_x: f64, phi_y: f64) -> Result<Self> {
        if lx == 0 || ly == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid extents must be positive, got {lx}x{ly}"
            )));
        }
        let phi_x = canonical_flux(phi_x)?;
        let phi_y = canonical_flux(phi_y)?;
        let sqrt3 = 3f64.sqrt();
        let mut ks = Vec::with_capacity(lx * ly);
        for mx in 1..=lx {
            let kx = (TAU * mx as f64 + phi_x) / (sqrt3 * lx as f64);
            for my in 1..=ly {
                let ky = (2.0 * TAU * my as f64 + 2.0 * phi_y) / (3.0 * ly as f64);
                ks.push((kx, ky));
            }
        }
        Ok(Self {
            lx,
            ly,
            phi_x,
            phi_y,
            ks,
        })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn phi_x(&self) -> f64 {
        self.phi_x
    }

    pub fn phi_y(&self) -> f64 {
        self.phi_y
    }

    pub fn ks(&self) -> &[(f64, f64)] {
        &self.ks
    }
}

pub fn momentum_grid_2d(lx: usize, ly: usize, phi_x: f64, phi_y: f64) -> Result<MomentumGrid2D> {
    MomentumGrid2D::new(lx, ly, phi_x, phi_y)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentumGrid {
    Chain(MomentumGrid1D),
    Honeycomb(MomentumGrid2D),
}

impl MomentumGrid {
    pub fn mode_count(&self) -> usize {
        match self {
            MomentumGrid::Chain(g) => g.ks.len(),
            MomentumGrid::Honeycomb(g) => g.ks.len(),
        }
    }

    pub fn momenta(&self) -> Vec<Momentum> {
        match self {
            MomentumGrid::Chain(g) => g.ks.iter().map(|&k| Momentum::Scalar(k)).collect(),
            MomentumGrid::Honeycomb(g) => {
                g.ks.iter()
                    .map(|&(kx, ky)| Momentum::Pair(kx, ky))
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::angular_distance;

    #[test]
    fn single_mode_grid() {
        let g = momentum_grid_1d(1, 0.0).unwrap();
        assert_eq!(g.ks(), &[0.0]);
    }

    #[test]
    fn odd_grid_with_antiperiodic_flux_hits_pi() {
        let g = momentum_grid_1d(9, PI).unwrap();
        assert!(g.ks().contains(&PI));
        assert_eq!(g.ks()[8], PI);
    }

    #[test]
    fn odd_periodic_grid_misses_pi_by_half_spacing() {
        let g = momentum_grid_1d(9, 0.0).unwrap();
        let expected: Vec<f64> = (-4..=4).map(|m| TAU * m as f64 / 9.0).collect();
        for (k, e) in g.ks().iter().zip(&expected) {
            assert!((k - e).abs() < 1e-15);
        }
        let nearest = g
            .ks()
            .iter()
            .map(|&k| angular_distance(k, PI))
            .fold(f64::MAX, f64::min);
        assert!((nearest - PI / 9.0).abs() < 1e-14);
    }

    #[test]
    fn even_grid_index_range() {
        let g = momentum_grid_1d(4, 0.0).unwrap();
        let expected = [-PI / 2.0, 0.0, PI / 2.0, PI];
        for (k, e) in g.ks().iter().zip(expected) {
            assert!((k - e).abs() < 1e-15);
        }
    }

    #[test]
    fn momenta_distinct_mod_two_pi() {
        for len in [1usize, 2, 3, 10, 101] {
            for phi in [0.0, 0.3, PI, 1.9 * PI] {
                let g = momentum_grid_1d(len, phi).unwrap();
                assert_eq!(g.ks().len(), len);
                for i in 0..len {
                    for j in 0..i {
                        assert!(angular_distance(g.ks()[i], g.ks()[j]) > 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(momentum_grid_1d(0, 0.0).is_err());
        assert!(momentum_grid_1d(3, f64::NAN).is_err());
        assert!(momentum_grid_2d(0, 4, 0.0, 0.0).is_err());
    }

    #[test]
    fn flux_is_reduced_mod_two_pi() {
        let a = momentum_grid_1d(5, 0.4).unwrap();
        let b = momentum_grid_1d(5, 0.4 + TAU).unwrap();
        assert!((a.phi() - b.phi()).abs() < 1e-14);
        assert_eq!(momentum_grid_1d(5, -1e-300).unwrap().phi(), 0.0);
    }

    #[test]
    fn honeycomb_grid_layout() {
        let g = momentum_grid_2d(4, 4, 0.0, 0.0).unwrap();
        assert_eq!(g.ks().len(), 16);
        let sqrt3 = 3f64.sqrt();
        let (kx, ky) = g.ks()[0];
        assert!((kx - TAU / (sqrt3 * 4.0)).abs() < 1e-15);
        assert!((ky - 4.0 * PI / 12.0).abs() < 1e-15);
        // Even Ly reaches both K-point ky values without a y twist.
        let kys: Vec<f64> = g.ks().iter().take(4).map(|p| p.1).collect();
        assert!(kys.iter().any(|&k| (k - 2.0 * PI / 3.0).abs() < 1e-14));
        assert!(kys.iter().any(|&k| (k - 4.0 * PI / 3.0).abs() < 1e-14));
    }

    #[test]
    fn odd_ly_needs_pi_twist_for_k_point() {
        let plain = momentum_grid_2d(3, 3, 0.0, 0.0).unwrap();
        assert!(!plain
            .ks()
            .iter()
            .any(|p| (p.1 - 2.0 * PI / 3.0).abs() < 1e-12));
        let twisted = momentum_grid_2d(3, 3, 0.0, PI).unwrap();
        assert!(twisted
            .ks()
            .iter()
            .any(|p| (p.1 - 2.0 * PI / 3.0).abs() < 1e-12));
    }
}
