//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `--nocapture`) and enforcing its runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use qfi_lab::duality::{frontier_sweep, random_duality_campaign, BOUND_TOL};
use qfi_lab::estimation::{
    adversary_shift_test, classical_fisher_information, run_experiment, MeasurementModel,
};
use qfi_lab::optimize::{frontier_scan, optimize, ObjectiveSpec, ParameterizationMode, ScanBudget};
use qfi_lab::qfim::{compute_qfim, orthonormal_complement, qfi_along, qfi_oracle};
use qfi_lab::rng;
use qfi_lab::{Direction, ParamVector, ProbeState};

fn criterion(
    number: usize,
    name: &str,
    budget: Duration,
    body: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("criterion {number} ({name}): PASS in {elapsed:.2?} -- {detail}");
        }
        Err(msg) => {
            println!("criterion {number} ({name}): FAIL in {elapsed:.2?} -- {msg}");
            panic!("criterion {number} failed: {msg}");
        }
    }
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its {budget:.0?} runtime budget: {elapsed:.2?}"
    );
}

fn random_complement_direction(n: usize, seed: u64) -> Direction {
    let w = Direction::uniform_sum(n).unwrap();
    let basis = orthonormal_complement(&w).unwrap();
    let mut rng = rng::stream(seed);
    loop {
        let mut v = vec![0.0; n];
        for b in &basis {
            let c = rng::standard_normal(&mut rng);
            for (vi, bi) in v.iter_mut().zip(b.weights()) {
                *vi += c * bi;
            }
        }
        if let Ok(d) = Direction::new(v) {
            return d;
        }
    }
}

#[test]
fn criterion_01_ghz_qfim_exactness() {
    criterion(1, "GHZ QFIM exactness", Duration::from_secs(5), || {
        let mut worst_entry: f64 = 0.0;
        let mut worst_sum: f64 = 0.0;
        let mut worst_comp: f64 = 0.0;
        for n in 2..=10 {
            let f = compute_qfim(&ProbeState::ghz(n).map_err(|e| e.to_string())?);
            let ones = vec![1.0; n * n];
            let dev = f.max_abs_deviation(&ones);
            worst_entry = worst_entry.max(dev);
            if dev > 1e-10 {
                return Err(format!("n={n}: QFIM deviates from all-ones by {dev:.3e}"));
            }
            let w = Direction::uniform_sum(n).unwrap();
            let q = qfi_along(&f, &w).unwrap();
            worst_sum = worst_sum.max((q - n as f64).abs());
            if (q - n as f64).abs() > 1e-9 {
                return Err(format!("n={n}: F(w) = {q} deviates from {n}"));
            }
            for v in orthonormal_complement(&w).unwrap() {
                let qv = qfi_along(&f, &v).unwrap();
                worst_comp = worst_comp.max(qv);
                if qv > 1e-9 {
                    return Err(format!("n={n}: complement QFI {qv:.3e} above 1e-9"));
                }
            }
        }
        Ok(format!(
            "N=2..10: max |F-ones| {worst_entry:.1e}, max |F(w)-N| {worst_sum:.1e}, max complement {worst_comp:.1e}"
        ))
    });
}

#[test]
fn criterion_02_separable_qfim_exactness() {
    criterion(
        2,
        "separable QFIM exactness",
        Duration::from_secs(5),
        || {
            let mut worst_entry: f64 = 0.0;
            let mut worst_pair: f64 = 0.0;
            for n in 2..=10 {
                let f = compute_qfim(&ProbeState::plus_product(n).map_err(|e| e.to_string())?);
                let mut identity = vec![0.0; n * n];
                for i in 0..n {
                    identity[i * n + i] = 1.0;
                }
                let dev = f.max_abs_deviation(&identity);
                worst_entry = worst_entry.max(dev);
                if dev > 1e-10 {
                    return Err(format!("n={n}: QFIM deviates from identity by {dev:.3e}"));
                }
                for pair_seed in 0..20u64 {
                    let mut rng = rng::stream(rng::derive_seed(200 + n as u64, pair_seed));
                    let (w, v) = qfi_lab::duality::sample_orthogonal_pair(n, &mut rng).unwrap();
                    let sum = qfi_along(&f, &w).unwrap() + qfi_along(&f, &v).unwrap();
                    worst_pair = worst_pair.max((sum - 2.0).abs());
                    if (sum - 2.0).abs() > 1e-9 {
                        return Err(format!("n={n}: pair sum {sum} deviates from 2"));
                    }
                }
            }
            Ok(format!(
                "N=2..10: max |F-I| {worst_entry:.1e}, max |pair sum - 2| {worst_pair:.1e}"
            ))
        },
    );
}

#[test]
fn criterion_03_frontier_reproduction() {
    criterion(
        3,
        "Bell-family frontier reproduction",
        Duration::from_secs(1),
        || {
            let points = frontier_sweep(101).map_err(|e| e.to_string())?;
            if points.len() != 101 {
                return Err(format!("expected 101 points, got {}", points.len()));
            }
            let mut worst: f64 = 0.0;
            for p in &points {
                let ew = 1.0 + (2.0 * p.phi).cos();
                let ev = 1.0 - (2.0 * p.phi).cos();
                let dev = (p.qfi_w - ew).abs().max((p.qfi_v - ev).abs());
                worst = worst.max(dev);
                if dev > 1e-10 {
                    return Err(format!(
                        "phi={}: deviation {dev:.3e} from closed form",
                        p.phi
                    ));
                }
                let sum_dev = (p.qfi_w + p.qfi_v - 2.0).abs();
                worst = worst.max(sum_dev);
                if sum_dev > 1e-10 {
                    return Err(format!("phi={}: sum deviates by {sum_dev:.3e}", p.phi));
                }
            }
            Ok(format!("101 points, worst deviation {worst:.1e}"))
        },
    );
}

#[test]
fn criterion_04_duality_campaign() {
    criterion(4, "duality-bound campaign", Duration::from_secs(60), || {
        let mut max_margin_violation: f64 = f64::NEG_INFINITY;
        for n in 2..=8 {
            let summary =
                random_duality_campaign(n, 1000, 40_000 + n as u64).map_err(|e| e.to_string())?;
            if summary.violations != 0 {
                return Err(format!(
                    "n={n}: {} violations, worst seed {}",
                    summary.violations, summary.max_sum_seed
                ));
            }
            max_margin_violation = max_margin_violation.max(summary.max_sum - n as f64);
            if let Some(eq) = &summary.equatorial {
                if eq.num_states < 500 {
                    return Err(format!("equatorial family undersampled: {}", eq.num_states));
                }
                if eq.max_sum_deviation > BOUND_TOL {
                    return Err(format!(
                        "equatorial |sum-2| = {:.3e} beyond 1e-9 (seed {})",
                        eq.max_sum_deviation, eq.worst_seed
                    ));
                }
            }
        }
        Ok(format!(
            "7000 Haar probes, 0 violations, max(sum - N) = {max_margin_violation:.1e}"
        ))
    });
}

#[test]
fn criterion_05_oracle_equivalence() {
    criterion(5, "oracle equivalence", Duration::from_secs(30), || {
        let mut worst: f64 = 0.0;
        for trial in 0..100u64 {
            let n = 2 + (trial % 5) as usize; // 2..=6
            let state = ProbeState::random_haar(n, rng::derive_seed(500, trial)).unwrap();
            let mut rng = rng::stream(rng::derive_seed(501, trial));
            let u = loop {
                let v: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut rng)).collect();
                if let Ok(d) = Direction::new(v) {
                    break d;
                }
            };
            let exact = qfi_along(&compute_qfim(&state), &u).unwrap();
            let approx = qfi_oracle(&state, &u, 1e-4).unwrap();
            let dev = (exact - approx).abs();
            worst = worst.max(dev);
            if dev > 1e-5 {
                return Err(format!(
                    "trial {trial} (n={n}): |qfi_along - qfi_oracle| = {dev:.3e}"
                ));
            }
        }
        Ok(format!("100 pairs, worst |difference| {worst:.1e}"))
    });
}

#[test]
fn criterion_06_crb_attainment() {
    criterion(6, "Cramer-Rao attainment", Duration::from_secs(60), || {
        let n = 4;
        let seed = 2024;
        let shots = 100_000;
        let reps = 200;
        let w = Direction::uniform_sum(n).unwrap();

        // the classical-Fisher-information oracle must certify the
        // operating point before any variance is compared
        let ghz = ProbeState::ghz(n).unwrap();
        let theta_ghz = ParamVector::new(vec![std::f64::consts::FRAC_PI_2 / n as f64; n]).unwrap();
        let cfi =
            classical_fisher_information(&ghz, &theta_ghz, MeasurementModel::GhzParity, &w, 1e-4)
                .map_err(|e| e.to_string())?;
        if (cfi - n as f64).abs() > 1e-4 {
            return Err(format!("parity CFI {cfi} deviates from {n} beyond 1e-4"));
        }

        let g = run_experiment(
            &ghz,
            &theta_ghz,
            MeasurementModel::GhzParity,
            &w,
            shots,
            reps,
            seed,
        )
        .map_err(|e| e.to_string())?;
        let target_g = 1.0 / (shots as f64 * n as f64);
        if (g.crb_total - target_g).abs() > 1e-15 {
            return Err(format!("GHZ crb_total {} != {target_g}", g.crb_total));
        }
        let ratio_g = g.empirical_variance / target_g;
        if (ratio_g - 1.0).abs() > 0.15 {
            return Err(format!(
                "GHZ variance ratio {ratio_g:.4} outside 1 +/- 0.15"
            ));
        }

        let plus = ProbeState::plus_product(n).unwrap();
        let theta_plus = ParamVector::new(vec![std::f64::consts::FRAC_PI_2; n]).unwrap();
        let p = run_experiment(
            &plus,
            &theta_plus,
            MeasurementModel::LocalX,
            &w,
            shots,
            reps,
            seed,
        )
        .map_err(|e| e.to_string())?;
        let target_p = 1.0 / shots as f64;
        let ratio_p = p.empirical_variance / target_p;
        if (ratio_p - 1.0).abs() > 0.15 {
            return Err(format!(
                "separable variance ratio {ratio_p:.4} outside 1 +/- 0.15"
            ));
        }
        Ok(format!(
            "parity CFI = {cfi:.6}; variance/CRB: GHZ {ratio_g:.3}, separable {ratio_p:.3}"
        ))
    });
}

#[test]
fn criterion_07_adversary_blindness() {
    criterion(7, "adversary blindness", Duration::from_secs(30), || {
        let epsilons = [0.1, 0.5, 1.0];
        let models = [MeasurementModel::GhzParity, MeasurementModel::LocalX];
        let mut worst_ghz: f64 = 0.0;
        for n in 2..=8 {
            let ghz = ProbeState::ghz(n).unwrap();
            let theta = ParamVector::zeros(n);
            for v_seed in 0..10u64 {
                let v = random_complement_direction(n, rng::derive_seed(700 + n as u64, v_seed));
                for model in models {
                    for eps in epsilons {
                        let dev = adversary_shift_test(&ghz, &theta, &v, eps, model)
                            .map_err(|e| e.to_string())?;
                        worst_ghz = worst_ghz.max(dev);
                        if dev > 1e-12 {
                            return Err(format!(
                                "GHZ leaked: n={n} eps={eps} {model:?}: deviation {dev:.3e}"
                            ));
                        }
                    }
                }
            }
        }
        // separable probes must leak for at least one epsilon
        let mut worst_plus: f64 = 0.0;
        for n in 2..=8 {
            let plus = ProbeState::plus_product(n).unwrap();
            let theta = ParamVector::zeros(n);
            let v = random_complement_direction(n, rng::derive_seed(790, n as u64));
            let mut leaked = false;
            for eps in epsilons {
                for model in models {
                    let dev = adversary_shift_test(&plus, &theta, &v, eps, model)
                        .map_err(|e| e.to_string())?;
                    worst_plus = worst_plus.max(dev);
                    if dev > 0.01 {
                        leaked = true;
                    }
                }
            }
            if !leaked {
                return Err(format!("separable probe failed to leak at n={n}"));
            }
        }
        Ok(format!(
            "GHZ max deviation {worst_ghz:.1e}; separable max deviation {worst_plus:.2}"
        ))
    });
}

#[test]
fn criterion_08_optimizer_recovers_ghz() {
    criterion(
        8,
        "optimizer recovery of the GHZ optimum",
        Duration::from_secs(120),
        || {
            let mut detail = String::new();
            for n in 2..=4 {
                let w = Direction::uniform_sum(n).unwrap();
                let spec = ObjectiveSpec::new(w, None, 0.0).unwrap();
                let run = optimize(
                    n,
                    ParameterizationMode::Full,
                    &spec,
                    8,
                    500,
                    0.3,
                    800 + n as u64,
                )
                .map_err(|e| e.to_string())?;
                if run.best_value < n as f64 - 0.01 {
                    return Err(format!(
                        "n={n}: best value {} below {n} - 0.01",
                        run.best_value
                    ));
                }
                let f = compute_qfim(&run.best_state);
                let ones = vec![1.0; n * n];
                let dev = f.max_abs_deviation(&ones);
                if dev > 0.02 {
                    return Err(format!(
                        "n={n}: final QFIM deviates from all-ones by {dev:.3}"
                    ));
                }
                detail.push_str(&format!(
                    "n={n}: value {:.5}, |F-ones| {dev:.1e}; ",
                    run.best_value
                ));
            }
            Ok(detail)
        },
    );
}

#[test]
fn criterion_09_tradeoff_frontier() {
    criterion(
        9,
        "delta-tradeoff frontier",
        Duration::from_secs(120),
        || {
            let w = Direction::uniform_sum(2).unwrap();
            let v = Direction::pair_difference(2).unwrap();
            let grid = [0.5, 1.0, 1.5];
            let points = frontier_scan(2, &w, &v, &grid, ScanBudget::default(), 900)
                .map_err(|e| e.to_string())?;
            let mut detail = String::new();
            for p in &points {
                let target = 2.0 - p.delta;
                if !p.constraint_met {
                    return Err(format!("delta {}: no feasible probe found", p.delta));
                }
                if (p.qfi_w - target).abs() > 0.05 {
                    return Err(format!(
                        "delta {}: found {} not within 0.05 of {target}",
                        p.delta, p.qfi_w
                    ));
                }
                if p.qfi_w > target + 1e-9 {
                    return Err(format!(
                        "delta {}: {} exceeds {target} + 1e-9",
                        p.delta, p.qfi_w
                    ));
                }
                detail.push_str(&format!("delta {}: qfi_w {:.4}; ", p.delta, p.qfi_w));
            }
            Ok(detail)
        },
    );
}

#[test]
fn criterion_10_cli_reproducibility() {
    criterion(
        10,
        "seeded CLI reproducibility",
        Duration::from_secs(120),
        || {
            let bin = env!("CARGO_BIN_EXE_qfi-lab");
            let theta4 =
                "0.39269908169872414,0.39269908169872414,0.39269908169872414,0.39269908169872414";
            let invocations: Vec<Vec<&str>> = vec![
                vec!["qfim", "--probe", "ghz", "--qubits", "3"],
                vec![
                    "qfim", "--probe", "random:9", "--qubits", "4", "--format", "csv",
                ],
                vec!["frontier", "--points", "11"],
                vec!["verify", "--qubits", "3", "--states", "40", "--seed", "7"],
                vec![
                    "estimate",
                    "--probe",
                    "ghz",
                    "--qubits",
                    "4",
                    "--theta",
                    theta4,
                    "--model",
                    "parity",
                    "--direction",
                    "sum",
                    "--shots",
                    "2000",
                    "--repetitions",
                    "20",
                    "--seed",
                    "5",
                ],
                vec![
                    "optimize",
                    "--qubits",
                    "2",
                    "--direction",
                    "sum",
                    "--restarts",
                    "2",
                    "--steps",
                    "80",
                    "--seed",
                    "11",
                ],
                vec![
                    "adversary",
                    "--probe",
                    "ghz",
                    "--qubits",
                    "5",
                    "--direction",
                    "diff",
                    "--epsilon",
                    "0.1,0.5,1.0",
                    "--format",
                    "csv",
                ],
            ];
            for argv in &invocations {
                let run = |label: &str| -> Result<(Vec<u8>, i32), String> {
                    let out = std::process::Command::new(bin)
                        .args(argv)
                        .output()
                        .map_err(|e| format!("{label}: spawn failed: {e}"))?;
                    Ok((out.stdout, out.status.code().unwrap_or(-1)))
                };
                let (a, code_a) = run("first")?;
                let (b, code_b) = run("second")?;
                if code_a != code_b {
                    return Err(format!(
                        "{argv:?}: exit codes differ ({code_a} vs {code_b})"
                    ));
                }
                let strip = |bytes: &[u8]| -> Vec<u8> {
                    let text = String::from_utf8_lossy(bytes);
                    text.lines()
                        .filter(|line| !line.trim_start().starts_with("\"metadata\":"))
                        .collect::<Vec<_>>()
                        .join("\n")
                        .into_bytes()
                };
                if strip(&a) != strip(&b) {
                    return Err(format!("{argv:?}: outputs differ after metadata stripping"));
                }
            }
            Ok(format!(
                "{} seeded invocations byte-identical",
                invocations.len()
            ))
        },
    );
}
