//! Integrator checks against independent closed forms, error-bar calibration
//! across seeds, and bit-for-bit independence from the worker count.

use std::f64::consts::PI;

use gr_oscillators::constants::constants;
use gr_oscillators::self_energy::*;

fn cfg(samples: u64, seed: u64, strategy: Strategy) -> IntegrationConfig {
    IntegrationConfig {
        sample_count: samples,
        seed,
        strategy,
        target_rel_error: 0.2,
        workers: 0,
    }
}

fn four_pi_g() -> f64 {
    4.0 * PI * constants().g
}

/// Mean of 1/|r1 - r2| over two points uniform in the unit cube.
fn unit_cube_mean_inverse_distance() -> f64 {
    let (s2, s3) = (2f64.sqrt(), 3f64.sqrt());
    2.0 * ((1.0 + s2 - 2.0 * s3) / 5.0 - PI / 3.0 + ((1.0 + s2) * (2.0 + s3)).ln())
}

#[test]
fn sphere_self_energy_all_strategies() {
    let (m, r) = (2.0, 0.5);
    let exact = four_pi_g() * 1.2 * m * m / r;
    let ball = MassDistribution::sphere([0.3, -0.1, 0.0], r, m);
    for strategy in [Strategy::PlainMc, Strategy::StratifiedMc, Strategy::Grid] {
        let e = pair_energy(&ball, &ball, &cfg(400_000, 1, strategy)).unwrap();
        let dev = (e.value - exact).abs() / exact;
        assert!(dev < 0.01, "{strategy:?}: deviation {dev}");
        assert!(e.std_error > 0.0);
    }
}

#[test]
fn cube_self_energy_matches_closed_form() {
    let side = 2.0;
    let m = 3.0;
    let exact = four_pi_g() * m * m * unit_cube_mean_inverse_distance() / side;
    let cube = MassDistribution::slab([0.0; 3], [side; 3], m);
    for strategy in [Strategy::PlainMc, Strategy::StratifiedMc, Strategy::Grid] {
        let e = pair_energy(&cube, &cube, &cfg(400_000, 2, strategy)).unwrap();
        let dev = (e.value - exact).abs() / exact;
        assert!(dev < 0.01, "{strategy:?}: deviation {dev}");
    }
}

#[test]
fn separated_balls_interact_as_points() {
    // exact for non-overlapping uniform balls
    let a = MassDistribution::sphere([0.0; 3], 1.0, 2.0);
    let b = MassDistribution::sphere([0.0, 3.0, 0.0], 0.7, 5.0);
    let e = pair_energy(&a, &b, &cfg(200_000, 3, Strategy::PlainMc)).unwrap();
    let exact = four_pi_g() * 10.0 / 3.0;
    assert!((e.value - exact).abs() / exact < 0.005, "{}", e.value / exact);
}

#[test]
fn displaced_sphere_delta_e_matches_closed_form() {
    let n = gr_oscillators::physics::nucleus_model(28).unwrap();
    for k in [2.0, 3.0, 10.0] {
        let s = displaced_spheres(n.mass(), n.radius(), k * n.radius(), &cfg(300_000, 4, Strategy::PlainMc)).unwrap();
        let dev = s.relative_deviation.unwrap().abs();
        assert!(dev < 0.01, "dx = {k}R: deviation {dev}");
    }
}

#[test]
fn error_bars_are_calibrated() {
    let (m, r, dx) = (1.0, 1.0, 3.0);
    let exact = gr_oscillators::physics::sphere_delta_e(m, r, dx).unwrap();
    let exact_self = four_pi_g() * 1.2 * m * m / r;
    let ball = MassDistribution::sphere([0.0; 3], r, m);
    let mut within_self = 0;
    let mut within_delta = 0;
    let seeds = 120;
    for seed in 0..seeds {
        let c = cfg(20_000, 1000 + seed, Strategy::PlainMc);
        let e = pair_energy(&ball, &ball, &c).unwrap();
        if (e.value - exact_self).abs() <= e.std_error {
            within_self += 1;
        }
        let d = displaced_spheres(m, r, dx, &c).unwrap();
        if (d.numeric.value - exact).abs() <= 2.0 * d.numeric.std_error {
            within_delta += 1;
        }
    }
    let one_sigma = within_self as f64 / seeds as f64;
    assert!((0.55..=0.82).contains(&one_sigma), "1σ coverage {one_sigma}");
    // the ΔE error bar is deliberately conservative
    let two_sigma = within_delta as f64 / seeds as f64;
    assert!(two_sigma >= 0.9, "2σ coverage {two_sigma}");
}

#[test]
fn results_independent_of_worker_count() {
    let lattice = NucleusLattice::cubic(3, 2.7e-10, 28).unwrap();
    for strategy in [Strategy::PlainMc, Strategy::StratifiedMc, Strategy::Grid] {
        let mut reference = None;
        for workers in [1, 2, 3, 8] {
            let c = IntegrationConfig {
                workers,
                target_rel_error: 0.45,
                ..cfg(200_000, 9, strategy)
            };
            let r = lattice_superposition(&lattice, [1e-14, 0.0, 0.0], &c).unwrap();
            let bits = (r.lattice.value.to_bits(), r.lattice.std_error.to_bits());
            match reference {
                None => reference = Some(bits),
                Some(b) => assert_eq!(b, bits, "{strategy:?} with {workers} workers"),
            }
        }
    }
}

#[test]
fn seeds_change_the_estimate() {
    let ball = MassDistribution::sphere([0.0; 3], 1.0, 1.0);
    let a = pair_energy(&ball, &ball, &cfg(10_000, 1, Strategy::PlainMc)).unwrap();
    let b = pair_energy(&ball, &ball, &cfg(10_000, 2, Strategy::PlainMc)).unwrap();
    let c = pair_energy(&ball, &ball, &cfg(10_000, 1, Strategy::PlainMc)).unwrap();
    assert_ne!(a.value, b.value);
    assert_eq!(a.value, c.value);
}

#[test]
fn strategies_agree_within_errors() {
    let a = MassDistribution::slab([0.0; 3], [1.0, 2.0, 0.5], 1.0);
    let b = MassDistribution::sphere([0.5, 1.0, 0.9], 0.6, 2.0);
    let plain = pair_energy(&a, &b, &cfg(200_000, 5, Strategy::PlainMc)).unwrap();
    let strat = pair_energy(&a, &b, &cfg(200_000, 5, Strategy::StratifiedMc)).unwrap();
    let grid = pair_energy(&a, &b, &cfg(200_000, 5, Strategy::Grid)).unwrap();
    let sigma = |x: &EnergyEstimate, y: &EnergyEstimate| (x.value - y.value).abs() / x.std_error.hypot(y.std_error);
    assert!(sigma(&plain, &strat) < 4.0, "plain vs stratified");
    assert!(sigma(&plain, &grid) < 4.0, "plain vs grid");
}

#[test]
fn infinite_separation_gives_single_nucleus_penrose_time() {
    let n = gr_oscillators::physics::nucleus_model(28).unwrap();
    let s = displaced_spheres(n.mass(), n.radius(), f64::INFINITY, &cfg(400_000, 6, Strategy::PlainMc)).unwrap();
    let analytic = s.analytic.unwrap();
    let t_closed = constants().hbar / analytic;
    // ΔE at infinite separation is twice the self-energy: 8πG (6/5) m²/R
    assert!((analytic - 2.0 * four_pi_g() * 1.2 * n.mass().powi(2) / n.radius()).abs() < 1e-12 * analytic);
    assert!((s.t_gr_p.unwrap() - t_closed).abs() / t_closed < 0.01);
}

#[test]
fn unsupported_inputs_rejected() {
    let bad = MassDistribution::sphere([0.0; 3], -1.0, 1.0);
    assert!(matches!(
        pair_energy(&bad, &bad, &cfg(10_000, 0, Strategy::PlainMc)),
        Err(SelfEnergyError::Unsupported(_))
    ));
    let ok = MassDistribution::sphere([0.0; 3], 1.0, 1.0);
    assert!(matches!(
        pair_energy(&ok, &ok, &cfg(10, 0, Strategy::PlainMc)),
        Err(SelfEnergyError::InvalidConfig(_))
    ));
}
