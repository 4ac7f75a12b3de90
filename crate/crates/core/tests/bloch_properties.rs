use fidzero::bloch::MomentumGrid;
use fidzero::bloch::{
    antiparallel_residuals, mode_fidelity, momentum_grid_1d, total_fidelity, DVector, Momentum,
    ZERO_TOL,
};
use fidzero::models::{band_states, model_alpha_prime, model_fidelity, Creutz, Ssh, TwoBandModel};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dvec() -> impl Strategy<Value = DVector> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -2.0..2.0f64)
        .prop_filter("gapped", |(x, y, z, _)| x * x + y * y + z * z > 1e-6)
        .prop_map(|(x, y, z, w)| DVector::new(x, y, z, w))
}

fn chain(l: usize, phi: f64) -> MomentumGrid {
    MomentumGrid::Chain(momentum_grid_1d(l, phi).unwrap())
}

fn scalar_momenta(grid: &MomentumGrid) -> Vec<Momentum> {
    grid.momenta()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mode_fidelity_is_symmetric_and_bounded(a in dvec(), b in dvec()) {
        let f_ab = mode_fidelity(&a, &b).unwrap();
        let f_ba = mode_fidelity(&b, &a).unwrap();
        prop_assert!((f_ab - f_ba).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&f_ab));
    }

    #[test]
    fn ssh_total_is_symmetric_and_bounded(
        g in 0.05..2.5f64, gt in 0.05..2.5f64, l in 1usize..60, phi in 0.0..std::f64::consts::TAU,
    ) {
        let grid = chain(l, phi);
        let (ab, ba) = match (model_fidelity(&Ssh, g, gt, &grid), model_fidelity(&Ssh, gt, g, &grid)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return Ok(()),
        };
        prop_assert!((ab.total - ba.total).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&ab.total));
        prop_assert!(ab.modes.iter().all(|m| (0.0..=1.0).contains(&m.value)));
    }

    #[test]
    fn creutz_total_is_symmetric(
        t in -3.0..3.0f64, tt in -3.0..3.0f64, r in -0.9..0.9f64, l in 1usize..60, phi in 0.0..std::f64::consts::TAU,
    ) {
        let model = Creutz { jv_over_2j: r };
        let grid = chain(l, phi);
        if let (Ok(ab), Ok(ba)) = (model_fidelity(&model, t, tt, &grid), model_fidelity(&model, tt, t, &grid)) {
            prop_assert!((ab.total - ba.total).abs() <= 1e-14);
            prop_assert!((0.0..=1.0).contains(&ab.total));
        }
    }

    #[test]
    fn d0_shift_is_invisible(shift in -50.0..50.0f64, t in -3.0..3.0f64, tt in -3.0..3.0f64, l in 1usize..40) {
        let model = Creutz { jv_over_2j: 0.6 };
        let grid = chain(l, 0.37);
        let momenta = scalar_momenta(&grid);
        let sa = band_states(&model, t, &momenta);
        let sb = band_states(&model, tt, &momenta);
        let shifted = |s: &[DVector]| s.iter().map(|d| d.with_d0(d.d0 + shift)).collect::<Vec<_>>();
        match (total_fidelity(&momenta, &sa, &sb), total_fidelity(&momenta, &shifted(&sa), &shifted(&sb))) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.total.to_bits(), y.total.to_bits());
                prop_assert_eq!(x.alpha.to_bits(), y.alpha.to_bits());
                prop_assert_eq!(x.modes, y.modes);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "gauge shift changed gaplessness"),
        }
    }

    #[test]
    fn log_sum_matches_log_of_product(g in 0.05..2.5f64, gt in 0.05..2.5f64, l in 1usize..400) {
        if let Ok(r) = model_fidelity(&Ssh, g, gt, &chain(l, 0.0)) {
            if r.total > 1e-300 {
                let direct = -r.total.ln() / l as f64;
                prop_assert!((r.alpha - direct).abs() <= 1e-12, "{} vs {}", r.alpha, direct);
            }
        }
    }

    #[test]
    fn alpha_prime_matches_finite_difference(g in 0.1..0.9f64, gt in 0.1..2.5f64, l in 3usize..300) {
        // away from the gap closing at 1 and from the trivial minimum at gt = g
        prop_assume!((gt - 1.0).abs() > 0.05 && (gt - g).abs() > 0.05);
        let grid = chain(l, 0.0);
        // a grid momentum sitting on the zero makes α infinite
        prop_assume!(!model_fidelity(&Ssh, g, gt, &grid).unwrap().exact_zero);
        let h = 1e-6;
        let alpha = |x: f64| model_fidelity(&Ssh, g, x, &grid).unwrap().alpha;
        let fd = (alpha(gt + h) - alpha(gt - h)) / (2.0 * h);
        let exact = model_alpha_prime(&Ssh, g, gt, &grid).unwrap();
        prop_assert!(((exact - fd) / exact).abs() < 1e-6, "exact {} fd {}", exact, fd);
    }

    #[test]
    fn creutz_alpha_prime_matches_finite_difference(t in -1.4..1.4f64, tt in -1.4..1.4f64, l in 3usize..200) {
        prop_assume!(tt.abs() > 0.05 && (tt - t).abs() > 0.05 && t.abs() > 0.01);
        let model = Creutz { jv_over_2j: 0.6 };
        let grid = chain(l, 0.0);
        prop_assume!(!model_fidelity(&model, t, tt, &grid).unwrap().exact_zero);
        let h = 1e-6;
        let alpha = |x: f64| model_fidelity(&model, t, x, &grid).unwrap().alpha;
        let fd = (alpha(tt + h) - alpha(tt - h)) / (2.0 * h);
        let exact = model_alpha_prime(&model, t, tt, &grid).unwrap();
        prop_assume!(exact.abs() > 1e-6);
        prop_assert!(((exact - fd) / exact).abs() < 1e-6, "exact {} fd {}", exact, fd);
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n: f64 = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// Zero iff antiparallel, over 10⁵ pairs of which most are perturbations of
/// exactly (anti)parallel pairs at log-uniform distances.
#[test]
fn zero_iff_antiparallel() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut zeros = 0;
    let mut ambiguous = 0;
    for i in 0..100_000 {
        let ua = random_unit(&mut rng);
        let ra = 10f64.powf(rng.random_range(-2.0..2.0));
        let a = DVector::new(ra * ua[0], ra * ua[1], ra * ua[2], 0.0);
        let b = if i % 10 == 0 {
            let ub = random_unit(&mut rng);
            DVector::new(ub[0], ub[1], ub[2], 0.0)
        } else {
            let sign = if i % 10 < 7 { -1.0 } else { 1.0 };
            let rb = 10f64.powf(rng.random_range(-2.0..2.0));
            let eps = 10f64.powf(rng.random_range(-17.0..-3.0));
            let p = random_unit(&mut rng);
            DVector::new(
                sign * rb * ua[0] + eps * rb * p[0],
                sign * rb * ua[1] + eps * rb * p[1],
                sign * rb * ua[2] + eps * rb * p[2],
                0.0,
            )
        };
        let f = mode_fidelity(&a, &b).unwrap();
        let r = antiparallel_residuals(&a, &b);
        let scale = a.norm() * b.norm();
        // F ≈ |d × d̃| / (2 E Ẽ) near antiparallel, so the two thresholds differ
        // by at most a factor of two; draws inside that band are not decisive
        let rel = r.max_residual() / scale;
        if r.dot < 0.0 && (0.25e-12..4e-12).contains(&rel) {
            ambiguous += 1;
            continue;
        }
        let residual_zero = rel < 1e-12 && r.dot < 0.0;
        assert_eq!(
            f < ZERO_TOL,
            residual_zero,
            "a={a:?} b={b:?} f={f:e} rel={rel:e}"
        );
        zeros += residual_zero as usize;
    }
    assert!(zeros > 10_000, "too few zero pairs exercised: {zeros}");
    assert!(ambiguous < 10_000, "{ambiguous}");
}

#[test]
fn ssh_derivative_at_reference_size() {
    let grid = chain(199, 0.0);
    let h = 1e-6;
    let alpha = |x: f64| model_fidelity(&Ssh, 0.5, x, &grid).unwrap().alpha;
    let fd = (alpha(0.8 + h) - alpha(0.8 - h)) / (2.0 * h);
    let exact = model_alpha_prime(&Ssh, 0.5, 0.8, &grid).unwrap();
    assert!(((exact - fd) / exact).abs() < 1e-6);
    assert_eq!(Ssh.name(), "ssh");
}
