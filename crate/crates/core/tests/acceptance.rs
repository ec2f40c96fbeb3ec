//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gr_oscillators::catalog::{Catalog, Material, RModel};
use gr_oscillators::feasibility::{
    evaluate, high_temperature_coefficient, min_quality_factor, separation_coefficient,
    zero_temperature_coefficient, FeasibilityConfig, FeasibilityReport, Verdict,
};
use gr_oscillators::physics::{
    cat_coherence_time, cat_separation, gr_time_coefficient, gr_time_nuclei, heuristic_gr_time,
    nucleus_model, penrose_gr_time, sphere_delta_e, BallSuperposition, OscillatorMode,
};
use gr_oscillators::self_energy::{
    displaced_spheres, lattice_superposition, pair_energy, IntegrationConfig, MassDistribution, NucleusLattice,
    Strategy,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn within_rel(value: f64, target: f64, tol: f64) -> bool {
    ((value - target) / target).abs() <= tol
}

fn within_factor(value: f64, target: f64, factor: f64) -> bool {
    value >= target / factor && value <= target * factor
}

fn mc(samples: u64, seed: u64) -> IntegrationConfig {
    IntegrationConfig {
        sample_count: samples,
        seed,
        strategy: Strategy::PlainMc,
        target_rel_error: 0.01,
        workers: 0,
    }
}

fn gr_time_coefficient_value() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for material in [Material::Al, Material::Si] {
        let n = material.nucleus();
        let c = gr_time_coefficient(&n, n.radius());
        let ok = within_rel(c, 3e-15, 0.10);
        pass &= ok;
        parts.push(format!("{material}: {c:.4e} kg·s"));
    }
    Outcome {
        pass,
        detail: format!("{} (target 3e-15 ± 10%)", parts.join(", ")),
    }
}

fn builtin_report(id: &str) -> FeasibilityReport {
    let catalog = Catalog::builtin();
    evaluate(catalog.get(id).expect("builtin entry"), &FeasibilityConfig::default())
}

fn quoted_table_values() -> Outcome {
    let large = builtin_report("sinx-membrane-large");
    let small = builtin_report("soft-clamped-membrane");
    let drum = builtin_report("teufel-drum");
    let bulk = builtin_report("bulk-acoustic-quartz");
    let checks: Vec<(&str, f64, f64)> = vec![
        ("500 ng t_GR", large.t_gr, 7e-6),
        ("500 ng t_coh", large.t_coh, 0.3e-3),
        ("500 ng n", large.n as f64, 100.0),
        ("2 ng t_GR", small.t_gr, 1e-3),
        ("2 ng t_coh", small.t_coh, 90e-3),
        ("2 ng x_zpf", small.x_zpf, 2e-15),
        ("50 pg t_GR", drum.t_gr, 60e-3),
        ("50 pg t_coh", drum.t_coh, 100e-6),
        ("bulk t_GR", bulk.t_gr, 0.6e-9),
    ];
    let mut pass = bulk.n > 1_000_000;
    let mut parts = vec![format!("bulk n = {}", bulk.n)];
    for (name, value, target) in checks {
        let ok = within_factor(value, target, 2.0);
        pass &= ok;
        parts.push(format!("{name} {value:.2e}{}", if ok { "" } else { " (out)" }));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn window_prefactors() -> Outcome {
    let si = Material::Si.nucleus();
    let al = Material::Al.nucleus();
    let rows = [
        ("separation (Si)", separation_coefficient(si.radius()), 9e5),
        ("separation (Al)", separation_coefficient(al.radius()), 9e5),
        ("zero-temperature (Si)", zero_temperature_coefficient(&si, si.radius()), 3e13),
        ("zero-temperature (Al)", zero_temperature_coefficient(&al, al.radius()), 3e13),
        ("high-temperature 10 mK (Si)", high_temperature_coefficient(&si, si.radius(), 0.01), 6e4),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, value, target) in rows {
        let ok = within_rel(value, target, 0.10);
        pass &= ok;
        parts.push(format!(
            "{name} {value:.3e} vs {target:e} ({:+.1}%){}",
            100.0 * (value / target - 1.0),
            if ok { "" } else { " OUT" }
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn minimum_quality_factors() -> Outcome {
    let n = Material::Si.nucleus();
    let q100k = min_quality_factor(1e5, 0.01, &n);
    let q1m = min_quality_factor(1e6, 0.01, &n);
    let q1g = min_quality_factor(1e9, 0.0, &n);
    let pass = (1e6..1e7).contains(&q100k) && (1e7..1e8).contains(&q1m) && q1g > 3e10;
    Outcome {
        pass,
        detail: format!("100 kHz: {q100k:.3e}; 1 MHz: {q1m:.3e}; 1 GHz at n_th = 0: {q1g:.3e}"),
    }
}

fn integrator_oracle() -> Outcome {
    let n = nucleus_model(28).unwrap();
    let (m, r) = (n.mass(), n.radius());
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [2.0, 3.0, 10.0] {
        match displaced_spheres(m, r, k * r, &mc(1_000_000, 11)) {
            Ok(s) => {
                let dev = s.relative_deviation.unwrap();
                pass &= dev.abs() <= 0.01;
                parts.push(format!("ΔE at {k}R {:+.3}%", 100.0 * dev));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("ΔE at {k}R failed: {e}"));
            }
        }
    }
    let ball = MassDistribution::sphere([0.0; 3], r, m);
    let exact = 4.0 * PI * gr_oscillators::constants().g * 1.2 * m * m / r;
    match pair_energy(&ball, &ball, &mc(1_000_000, 12)) {
        Ok(e) => {
            let dev = e.value / exact - 1.0;
            pass &= dev.abs() <= 0.01;
            parts.push(format!("self-energy {:+.3}%", 100.0 * dev));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("self-energy failed: {e}"));
        }
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn nucleus_additivity() -> Outcome {
    let lattice = NucleusLattice::bulk(&Material::Si, 10).unwrap();
    let a = lattice.nucleus().radius();
    match lattice_superposition(&lattice, [10.0 * a, 0.0, 0.0], &mc(2_000_000, 13)) {
        Ok(l) => {
            let ratio = l.additivity_ratio.unwrap();
            Outcome {
                pass: l.sites == 1000 && (ratio - 1.0).abs() <= 0.02,
                detail: format!(
                    "N = {}, ΔE / (N ΔE_1) = {ratio:.5} (±{:.2e} statistical)",
                    l.sites,
                    l.lattice.std_error / l.lattice.value
                ),
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: format!("integration failed: {e}"),
        },
    }
}

fn favorable_ids(model: RModel) -> Vec<String> {
    let cfg = FeasibilityConfig::default().with_r_model(model);
    Catalog::builtin()
        .entries()
        .iter()
        .map(|e| evaluate(e, &cfg))
        .filter(|r| r.verdict == Verdict::Favorable)
        .map(|r| r.id)
        .collect()
}

fn size_model_sensitivity() -> Outcome {
    let nucleus = favorable_ids(RModel::Nucleus);
    let fixed = favorable_ids(RModel::Fixed(5e-11));
    let expected = ["bulk-acoustic-quartz", "soft-clamped-membrane", "sinx-membrane-large"];
    Outcome {
        pass: fixed.is_empty() && nucleus == expected,
        detail: format!("nucleus model: {nucleus:?}; fixed 50 pm: {fixed:?}"),
    }
}

fn property_suites() -> Outcome {
    let mut failures = Vec::new();

    // worker-count determinism
    let a = MassDistribution::sphere([0.0; 3], 1.0, 1.0);
    let b = MassDistribution::slab([0.5, -0.5, -0.5], [2.5, 0.5, 0.5], 2.0);
    let values: Vec<u64> = [1, 2, 4, 7]
        .iter()
        .map(|&w| {
            let cfg = IntegrationConfig {
                workers: w,
                target_rel_error: 0.1,
                ..mc(100_000, 21)
            };
            pair_energy(&a, &b, &cfg).unwrap().value.to_bits()
        })
        .collect();
    if values.windows(2).any(|w| w[0] != w[1]) {
        failures.push("worker determinism".to_string());
    }

    // heuristic / Penrose ratio for a single nucleus
    let mut worst = 0.0f64;
    for a in 1..=240 {
        let n = nucleus_model(a).unwrap();
        let ball = BallSuperposition::new(n.mass(), n.radius(), f64::INFINITY).unwrap();
        let t_h = heuristic_gr_time(&ball).unwrap();
        let t_p = penrose_gr_time(sphere_delta_e(n.mass(), n.radius(), f64::INFINITY).unwrap()).unwrap();
        worst = worst.max((t_h / t_p / (96.0 * PI * PI / 5.0) - 1.0).abs());
    }
    if worst > 1e-14 {
        failures.push(format!("96π²/5 ratio off by {worst:e}"));
    }

    // scaling laws on random inputs
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp();
    let si = nucleus_model(28).unwrap();
    for _ in 0..2000 {
        let m = log_uniform(&mut rng, 1e-20, 1e-3);
        let k = log_uniform(&mut rng, 1.01, 100.0);
        let f = log_uniform(&mut rng, 1e4, 1e10);
        let q = log_uniform(&mut rng, 1e2, 1e11);
        let t = log_uniform(&mut rng, 1e-3, 300.0);
        let n: u64 = rng.random_range(1..1_000_000);
        let j: u64 = rng.random_range(2..50);

        let de = sphere_delta_e(m * k, 1e-15, 5e-15).unwrap() / sphere_delta_e(m, 1e-15, 5e-15).unwrap();
        if (de / (k * k) - 1.0).abs() > 1e-12 {
            failures.push(format!("ΔE ∝ m² at m={m:e}"));
        }
        let tg = gr_time_nuclei(m, &si).unwrap() / gr_time_nuclei(m * k, &si).unwrap();
        if (tg / k - 1.0).abs() > 1e-12 {
            failures.push(format!("t_GR ∝ 1/m at m={m:e}"));
        }
        let th = heuristic_gr_time(&BallSuperposition::new(m, 1e-15, f64::INFINITY).unwrap()).unwrap()
            / heuristic_gr_time(&BallSuperposition::new(m * k, 1e-15, f64::INFINITY).unwrap()).unwrap();
        if (th / (k * k) - 1.0).abs() > 1e-12 {
            failures.push(format!("t_GR,H ∝ m⁻² at m={m:e}"));
        }
        let mode = OscillatorMode::new(f, m, q, t).unwrap();
        let tc = cat_coherence_time(n, &mode).unwrap() / cat_coherence_time(n * j, &mode).unwrap();
        if (tc / j as f64 - 1.0).abs() > 1e-12 {
            failures.push(format!("t_coh ∝ 1/n at n={n}"));
        }
        let dx = cat_separation(n * j * j, 1e-15) / cat_separation(n, 1e-15);
        if (dx / j as f64 - 1.0).abs() > 1e-12 {
            failures.push(format!("Δx ∝ √n at n={n}"));
        }
        let better = OscillatorMode::new(f, m, q * k, t).unwrap();
        if cat_coherence_time(n, &better).unwrap() <= cat_coherence_time(n, &mode).unwrap() {
            failures.push(format!("t_coh increasing in Q at Q={q:e}"));
        }
    }
    failures.dedup();
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("worker counts 1/2/4/7 identical; ratio worst deviation {worst:.1e}; 2000 random scaling cases")
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("GR time coefficient t_GR·m ≈ 3e-15 kg·s", gr_time_coefficient_value),
        ("quoted oscillator values within a factor 2", quoted_table_values),
        ("feasibility-window prefactors within 10%", window_prefactors),
        ("minimum quality factors", minimum_quality_factors),
        ("Monte-Carlo ΔE and self-energy within 1%", integrator_oracle),
        ("1000-nucleus lattice additivity within 2%", nucleus_additivity),
        ("favorable set under nucleus and 50 pm size models", size_model_sensitivity),
        ("determinism, 96π²/5 ratio, scaling laws", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {}: {} — {} — {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
