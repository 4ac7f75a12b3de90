use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::FockBasis;
use crate::bloch::canonical_flux;
use crate::error::Result;

/// Couplings of the interacting chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub gamma: f64,
    pub u: f64,
    /// Boundary twist, reduced into `[0, 2π)`.
    pub phi: f64,
    pub l_cells: usize,
}

/// Hamiltonian in a fixed-number basis, stored by columns: `columns[j]`
/// lists the nonzero `(row, value)` of `H|j⟩`.
#[derive(Debug, Clone)]
pub struct MBHamiltonian {
    params: ChainParams,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl MBHamiltonian {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn columns(&self) -> &[Vec<(usize, Complex64)>] {
        &self.columns
    }

    /// `y = H x`
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (col, entries) in self.columns.iter().enumerate() {
            let xc = x[col];
            if xc.re == 0.0 && xc.im == 0.0 {
                continue;
            }
            for &(row, val) in entries {
                y[row] += val * xc;
            }
        }
    }

    /// Nonzero entries `(row, value)` of column `j`.
    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.columns[j]
    }

    /// True when every matrix element has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.columns.iter().flatten().all(|(_, v)| v.im == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, val) in entries {
                m[(row, col)] += val;
            }
        }
        m
    }

    /// `max |H - H†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let m = self.to_dense();
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Sign of moving a fermion between sites `i` and `j` of `state`: the parity
/// of occupied sites strictly between them.
fn hop_sign(state: u64, i: usize, j: usize) -> f64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let between = if hi - lo <= 1 {
        0
    } else {
        ((1u64 << hi) - 1) & !((1u64 << (lo + 1)) - 1)
    };
    if (state & between).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Hopping bonds `t c†_i c_j + h.c.` as `(i, j, t)`.
fn bonds(l_cells: usize, gamma: f64, phi: f64) -> Vec<(usize, usize, Complex64)> {
    let n = 2 * l_cells;
    let mut out = Vec::with_capacity(n);
    for j in 0..l_cells {
        out.push((2 * j, 2 * j + 1, Complex64::new(1.0, 0.0)));
        if j + 1 < l_cells {
            out.push((2 * j + 1, 2 * j + 2, Complex64::new(gamma, 0.0)));
        }
    }
    // γ c†_{L,B} c_{L+1,A} with c_{L+1,A} = e^{-iφ} c_{1,A}; periodic and
    // antiperiodic seams are kept exactly real
    let seam = if phi == 0.0 {
        Complex64::new(gamma, 0.0)
    } else if phi == std::f64::consts::PI {
        Complex64::new(-gamma, 0.0)
    } else {
        Complex64::from_polar(gamma, -phi)
    };
    out.push((n - 1, 0, seam));
    out
}

/// Interacting SSH chain at the basis filling: unit intracell hopping,
/// intercell hopping `gamma`, the boundary bond twisted by `e^{-iφ}`, and
/// `U n n` on every nearest-neighbour pair including the seam.
pub fn build_hamiltonian(basis: &FockBasis, gamma: f64, u: f64, phi: f64) -> Result<MBHamiltonian> {
    let phi = canonical_flux(phi)?;
    let l_cells = basis.n_cells();
    let n = basis.n_sites();
    let hops = bonds(l_cells, gamma, phi);
    let pairs: Vec<(usize, usize)> = (0..n).map(|s| (s, (s + 1) % n)).collect();

    let mut columns = Vec::with_capacity(basis.dim());
    for &state in basis.states() {
        let mut entries: Vec<(usize, Complex64)> = Vec::new();
        let occ = |s: usize| state >> s & 1 == 1;
        let diag: f64 = u * pairs.iter().filter(|&&(a, b)| occ(a) && occ(b)).count() as f64;
        if diag != 0.0 {
            let me = basis.lookup(state).expect("state is in its own basis");
            entries.push((me, Complex64::new(diag, 0.0)));
        }
        for &(i, j, t) in &hops {
            // t c†_i c_j and its conjugate t* c†_j c_i
            for (to, from, amp) in [(i, j, t), (j, i, t.conj())] {
                if occ(from) && !occ(to) {
                    let next = state ^ (1 << from) ^ (1 << to);
                    let row = basis
                        .lookup(next)
                        .expect("hopping conserves particle number");
                    entries.push((row, amp * hop_sign(state, from, to)));
                }
            }
        }
        columns.push(entries);
    }
    Ok(MBHamiltonian {
        params: ChainParams {
            gamma,
            u,
            phi,
            l_cells,
        },
        columns,
    })
}
