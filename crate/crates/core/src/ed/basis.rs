use crate::error::{Error, Result};

/// Largest number of sites a bit-mask state can hold.
pub const MAX_SITES: usize = 63;

/// Fixed-particle-number occupation basis. Site `s` is bit `s`; cell `j`
/// holds sites `2j` (A) and `2j + 1` (B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    n_sites: usize,
    n_particles: usize,
    states: Vec<u64>,
}

impl FockBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_cells(&self) -> usize {
        self.n_sites / 2
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// States in increasing order.
    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }

    pub fn lookup(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Next larger integer with the same popcount.
fn next_same_popcount(v: u64) -> u64 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1))
}

/// All occupations of `2·l_cells` sites with exactly `n_particles` fermions.
pub fn build_basis(l_cells: usize, n_particles: usize) -> Result<FockBasis> {
    let n_sites = 2 * l_cells;
    if l_cells == 0 || n_sites > MAX_SITES {
        return Err(Error::InvalidArgument(format!(
            "cell count must be between 1 and {}, got {l_cells}",
            MAX_SITES / 2
        )));
    }
    if n_particles > n_sites {
        return Err(Error::InvalidArgument(format!(
            "{n_particles} particles do not fit on {n_sites} sites"
        )));
    }
    if n_particles == 0 {
        return Ok(FockBasis {
            n_sites,
            n_particles,
            states: vec![0],
        });
    }
    let limit = 1u64 << n_sites;
    let mut states = Vec::new();
    let mut v = (1u64 << n_particles) - 1;
    while v < limit {
        states.push(v);
        if v == (limit - 1) ^ ((1u64 << (n_sites - n_particles)) - 1) {
            break;
        }
        v = next_same_popcount(v);
    }
    Ok(FockBasis {
        n_sites,
        n_particles,
        states,
    })
}
