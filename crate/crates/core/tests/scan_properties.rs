use std::f64::consts::{PI, TAU};

use fidzero::models::{Creutz, Haldane, Ssh};
use fidzero::scan::{
    critical_fluxes, finite_size_fit, scan_alpha_vs_flux, FidelityEngine, SystemSize, Weighting,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn flux_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

fn check_consistency(
    engine: &dyn FidelityEngine,
    a: f64,
    b: f64,
    size: SystemSize,
    scan_points: usize,
) -> bool {
    let cond = engine.critical_momenta(a, b).unwrap();
    if cond.holds {
        for phi in critical_fluxes(engine, a, b, size).unwrap() {
            let r = engine.evaluate(a, b, size, phi, 0.0).unwrap();
            assert!(
                r.exact_zero,
                "{} a={a} b={b} {size} phi_c={phi}",
                engine.engine_name()
            );
        }
    } else {
        let scan = scan_alpha_vs_flux(engine, a, b, size, 0.0, &flux_grid(scan_points)).unwrap();
        assert!(
            !scan.exact_zero.iter().any(|&z| z),
            "{} a={a} b={b} {size}",
            engine.engine_name()
        );
    }
    cond.holds
}

#[test]
fn critical_flux_always_produces_a_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut held, mut not_held) = (0, 0);
    for i in 0..300 {
        let l = rng.random_range(1..2002);
        let holds = if i % 2 == 0 {
            check_consistency(
                &Ssh,
                rng.random_range(0.05..2.5),
                rng.random_range(0.05..2.5),
                SystemSize::Chain(l),
                200,
            )
        } else {
            let model = Creutz {
                jv_over_2j: rng.random_range(-0.9..0.9),
            };
            check_consistency(
                &model,
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                SystemSize::Chain(l),
                200,
            )
        };
        if holds {
            held += 1
        } else {
            not_held += 1
        }
    }
    assert!(held > 50 && not_held > 50, "{held} {not_held}");
}

#[test]
fn haldane_critical_flux_always_produces_a_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let model = Haldane {
        t1: 1.0,
        t2: 1.0,
        m: 4.5,
    };
    for _ in 0..60 {
        let size = SystemSize::Honeycomb {
            lx: rng.random_range(1..13),
            ly: 2 * rng.random_range(1..5),
        };
        check_consistency(&model, 0.0, rng.random_range(-PI..PI), size, 500);
    }
}

#[test]
fn no_zero_in_dense_scan_when_condition_fails() {
    // same-phase pairs scanned at 10⁴ fluxes
    check_consistency(&Ssh, 0.5, 0.8, SystemSize::Chain(9), 10_000);
    check_consistency(&Ssh, 1.3, 2.0, SystemSize::Chain(50), 10_000);
    check_consistency(
        &Creutz { jv_over_2j: 0.6 },
        0.3,
        1.1,
        SystemSize::Chain(10),
        10_000,
    );
    check_consistency(
        &Haldane {
            t1: 1.0,
            t2: 1.0,
            m: 4.5,
        },
        0.0,
        0.2,
        SystemSize::Honeycomb { lx: 4, ly: 4 },
        10_000,
    );
}

fn odd_sizes(count: usize) -> Vec<SystemSize> {
    (0..count)
        .map(|i| SystemSize::Chain(101 + i * 1900 / (count - 1)))
        .collect()
}

#[test]
fn doubling_size_density_barely_moves_the_slope() {
    let coarse =
        finite_size_fit(&Ssh, 0.5, 1.5, 0.0, 0.0, &odd_sizes(20), Weighting::Uniform).unwrap();
    let fine =
        finite_size_fit(&Ssh, 0.5, 1.5, 0.0, 0.0, &odd_sizes(39), Weighting::Uniform).unwrap();
    assert!(odd_sizes(39).iter().all(|s| s.modes() % 2 == 1));
    let change = ((fine.slope - coarse.slope) / coarse.slope).abs();
    assert!(
        change < 5e-3,
        "{} -> {} ({change})",
        coarse.slope,
        fine.slope
    );
}

#[test]
fn alpha_is_smooth_away_from_critical_fluxes() {
    let model = Creutz { jv_over_2j: 0.6 };
    let size = SystemSize::Chain(10);
    let phi_c = critical_fluxes(&model, 0.3, -0.3, size).unwrap();
    assert_eq!(phi_c.len(), 2);
    let samples: Vec<f64> = flux_grid(4000)
        .into_iter()
        .filter(|p| phi_c.iter().all(|c| (p - c).abs() > 0.01 * PI))
        .collect();
    let scan = scan_alpha_vs_flux(&model, 0.3, -0.3, size, 0.0, &samples).unwrap();
    let mut worst: f64 = 0.0;
    for i in 1..scan.len() {
        if scan.injected[i] || scan.injected[i - 1] {
            continue;
        }
        // skip the pair straddling an excluded window
        if phi_c
            .iter()
            .any(|&c| (scan.phis[i - 1] - c) * (scan.phis[i] - c) < 0.0)
        {
            continue;
        }
        assert!(scan.alphas[i].is_finite());
        worst = worst
            .max(((scan.alphas[i] - scan.alphas[i - 1]) / (scan.phis[i] - scan.phis[i - 1])).abs());
    }
    // |dα/dφ| ~ 1/(L |φ - φc|) ≤ 1/(10 · 0.01π) near the window edges
    assert!(worst < 20.0, "{worst}");
}
