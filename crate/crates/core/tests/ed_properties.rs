use std::f64::consts::{PI, TAU};

use fidzero::ed::{
    build_basis, build_hamiltonian, dense_low_spectrum, free_fermion_crosscheck, ground_state,
    mb_fidelity, Solver,
};
use fidzero::Error;
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

fn spectrum(l: usize, gamma: f64, u: f64, phi: f64) -> Vec<f64> {
    let h = build_hamiltonian(&build_basis(l, l).unwrap(), gamma, u, phi).unwrap();
    let mut e: Vec<f64> = SymmetricEigen::new(h.to_dense())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hamiltonian_is_hermitian_and_conserves_number(
        l in 1usize..6, n_frac in 0.0..1.0f64, gamma in -2.0..2.0f64, u in -1.0..1.0f64, phi in 0.0..TAU,
    ) {
        let n = ((2 * l) as f64 * n_frac).round() as usize;
        let basis = build_basis(l, n).unwrap();
        let h = build_hamiltonian(&basis, gamma, u, phi).unwrap();
        prop_assert!(h.hermiticity_error() < 1e-13);
        for col in 0..h.dim() {
            let pop = basis.state(col).count_ones();
            for &(row, _) in h.column(col) {
                prop_assert_eq!(basis.state(row).count_ones(), pop);
            }
        }
    }

    #[test]
    fn spectrum_is_even_in_flux(l in 2usize..5, gamma in 0.05..2.0f64, u in 0.0..0.5f64, phi in 0.01..3.1f64) {
        let (plus, minus) = (spectrum(l, gamma, u, phi), spectrum(l, gamma, u, TAU - phi));
        for (a, b) in plus.iter().zip(&minus) {
            prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
        }
    }

    #[test]
    fn fidelity_is_periodic_in_flux(l in 2usize..5, gamma in 0.05..0.9f64, gt in 0.05..2.0f64, u in 0.0..0.3f64, phi in 0.0..TAU) {
        let base = mb_fidelity(l, u, phi, gamma, gt);
        let shifted = mb_fidelity(l, u, phi + TAU, gamma, gt);
        match (base, shifted) {
            (Ok(f), Ok(g)) => {
                if (phi + TAU) - TAU == phi {
                    // the shift reduces back to the same bits
                    prop_assert_eq!(f.to_bits(), g.to_bits());
                } else {
                    prop_assert!((f - g).abs() < 1e-12);
                }
            }
            (Err(_), Err(_)) => {}
            (f, g) => prop_assert!(false, "{:?} vs {:?}", f, g),
        }
    }
}

#[test]
fn periodicity_is_bit_exact_at_commensurate_fluxes() {
    for phi in [0.0, 0.5 * PI, PI, 1.5 * PI] {
        let f = mb_fidelity(4, 0.1, phi, 0.2, 0.7).unwrap();
        let g = mb_fidelity(4, 0.1, phi + TAU, 0.2, 0.7).unwrap();
        assert_eq!(f.to_bits(), g.to_bits(), "phi={phi}");
    }
}

/// Fifty deterministic pseudo-random draws of (L, φ, γ, γ̃) at U = 0.
#[test]
fn free_fermion_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let l = rng.random_range(2..=5);
        let phi = rng.random_range(0.0..TAU);
        let (g, gt) = (rng.random_range(0.05..2.0), rng.random_range(0.05..2.0));
        let c = free_fermion_crosscheck(l, phi, g, gt).unwrap();
        worst = worst.max(c.abs_diff);
        assert!(c.abs_diff < 1e-10, "L={l} phi={phi} g={g} gt={gt} {c:?}");
    }
    println!("free-fermion oracle worst |diff| = {worst:e}");
}

#[test]
fn dense_and_iterative_paths_agree_on_twisted_chain() {
    let h = build_hamiltonian(&build_basis(5, 5).unwrap(), 0.2, 0.1, 0.9 * PI).unwrap();
    assert!(!h.is_real());
    let d = fidzero::ed::ground_state_with(&h, Solver::Dense).unwrap();
    let l = fidzero::ed::ground_state_with(&h, Solver::Lanczos).unwrap();
    assert!((d.energy - l.energy).abs() < 1e-11);
    let overlap: num_complex::Complex64 = d
        .amplitudes
        .iter()
        .zip(&l.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-10);
}

/// Ground energy sampled at spacing 1e-3 has no jump larger than ten times
/// the neighbouring steps; degenerate points are reported and skipped.
#[test]
fn ground_energy_is_continuous_in_gamma() {
    let basis = build_basis(4, 4).unwrap();
    let gammas: Vec<f64> = (0..1901).map(|i| 0.1 + 1e-3 * i as f64).collect();
    let mut energies = Vec::with_capacity(gammas.len());
    let mut degenerate = Vec::new();
    for &g in &gammas {
        match ground_state(&build_hamiltonian(&basis, g, 0.1, 0.3).unwrap()) {
            Ok(s) => energies.push(Some(s.energy)),
            Err(Error::DegenerateGroundState { .. }) => {
                degenerate.push(g);
                energies.push(None);
            }
            Err(e) => panic!("{e}"),
        }
    }
    if !degenerate.is_empty() {
        println!("degenerate ground states at gamma = {degenerate:?}");
    }
    let steps: Vec<Option<f64>> = energies
        .windows(2)
        .map(|w| Some((w[1]? - w[0]?).abs()))
        .collect();
    for i in 1..steps.len() - 1 {
        if let (Some(prev), Some(cur), Some(next)) = (steps[i - 1], steps[i], steps[i + 1]) {
            assert!(
                cur <= 10.0 * prev.max(next) + 1e-12,
                "jump at gamma={}: {cur} vs {prev}, {next}",
                gammas[i]
            );
        }
    }
}

#[test]
fn real_twists_use_the_real_solver() {
    let basis = build_basis(3, 3).unwrap();
    for phi in [0.0, PI] {
        let h = build_hamiltonian(&basis, 0.4, 0.2, phi).unwrap();
        assert!(h.is_real());
        let low = dense_low_spectrum(&h);
        assert!(low.v0.iter().all(|z| z.im == 0.0));
    }
}
