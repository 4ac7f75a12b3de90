use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::MBHamiltonian;
use crate::error::{Error, Result};

type CVec = Vec<Complex64>;

/// Lowest eigenpair plus the next eigenvalue (equal to the lowest when degenerate).
#[derive(Debug, Clone)]
pub struct LowSpectrum {
    pub e0: f64,
    pub v0: CVec,
    pub e1: Option<f64>,
}

/// Full dense diagonalization; a real symmetric solver is used when the
/// matrix has no imaginary part.
pub fn dense_low_spectrum(h: &MBHamiltonian) -> LowSpectrum {
    if h.is_real() {
        let eig = SymmetricEigen::new(h.to_dense().map(|z| z.re));
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let i0 = order[0];
        return LowSpectrum {
            e0: eig.eigenvalues[i0],
            v0: eig
                .eigenvectors
                .column(i0)
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
            e1: order.get(1).map(|&i| eig.eigenvalues[i]),
        };
    }
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let i0 = order[0];
    LowSpectrum {
        e0: eig.eigenvalues[i0],
        v0: eig.eigenvectors.column(i0).iter().copied().collect(),
        e1: order.get(1).map(|&i| eig.eigenvalues[i]),
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(w: &mut [Complex64], basis: &[CVec]) {
    // two passes keep the Krylov basis orthogonal to working precision
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Lowest eigenpair of `h` restricted to the complement of `deflate`, by
/// Lanczos with full reorthogonalization.
pub fn lanczos_lowest(
    h: &MBHamiltonian,
    deflate: &[CVec],
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, CVec)> {
    let n = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: CVec = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    project_out(&mut q, deflate);
    let qn = norm(&q);
    if qn == 0.0 {
        return Err(Error::InvalidArgument(
            "deflation space spans the whole basis".into(),
        ));
    }
    q.iter_mut().for_each(|x| *x /= qn);

    let mut krylov: Vec<CVec> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut last_residual = f64::INFINITY;

    for _ in 0..max_iter.min(n) {
        let j = krylov.len() - 1;
        h.apply(&krylov[j], &mut w);
        let a = dot(&krylov[j], &w).re;
        alphas.push(a);
        project_out(&mut w, &krylov);
        project_out(&mut w, deflate);
        let b = norm(&w);

        let m = alphas.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (imin, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("tridiagonal matrix is nonempty");
        let y = eig.eigenvectors.column(imin);
        last_residual = b * y[m - 1].abs();

        let invariant = b <= 1e-14 * theta.abs().max(1.0);
        if last_residual <= tol * theta.abs().max(1.0) || invariant || m == n - deflate.len() {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (coef, qi) in y.iter().zip(&krylov) {
                v.iter_mut().zip(qi).for_each(|(x, z)| *x += *coef * z);
            }
            let vn = norm(&v);
            v.iter_mut().for_each(|x| *x /= vn);
            return Ok((theta, v));
        }
        betas.push(b);
        krylov.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::NotConverged {
        iterations: max_iter.min(n),
        residual: last_residual,
    })
}

/// Low spectrum from two Lanczos runs: the second is deflated against the
/// first eigenvector so a degenerate partner cannot hide.
pub fn lanczos_low_spectrum(h: &MBHamiltonian, tol: f64, max_iter: usize) -> Result<LowSpectrum> {
    let (e0, v0) = lanczos_lowest(h, &[], tol, max_iter, 0x5eed)?;
    let e1 = if h.dim() > 1 {
        Some(lanczos_lowest(h, std::slice::from_ref(&v0), tol, max_iter, 0x5eed + 1)?.0)
    } else {
        None
    };
    Ok(LowSpectrum { e0, v0, e1 })
}

/// `‖H v - E v‖`
pub fn residual(h: &MBHamiltonian, e: f64, v: &[Complex64]) -> f64 {
    let mut hv = vec![Complex64::new(0.0, 0.0); v.len()];
    h.apply(v, &mut hv);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * e).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
