//! Property tests for the structural invariants: encoding is unitary and
//! additive, expectations are phase-insensitive, the QFIM respects its
//! trace bound, and the duality bound survives an exhaustive small-case
//! sweep.

use num_complex::Complex64;
use proptest::prelude::*;

use qfi_lab::duality::{sample_orthogonal_pair, verify_duality, BOUND_TOL};
use qfi_lab::qfim::{compute_qfim, orthonormal_complement, qfi_along, spectral};
use qfi_lab::rng;
use qfi_lab::{Direction, ParamVector, ProbeState};

fn haar(n: usize, seed: u64) -> ProbeState {
    ProbeState::random_haar(n, seed).unwrap()
}

fn norm_sq(state: &ProbeState) -> f64 {
    state.amplitudes().iter().map(|a| a.norm_sqr()).sum()
}

proptest! {
    #[test]
    fn encode_preserves_the_norm(
        n in 1usize..=6,
        seed in any::<u64>(),
        raw in proptest::collection::vec(-10.0f64..10.0, 6),
    ) {
        let state = haar(n, seed);
        let theta = ParamVector::new(raw[..n].to_vec()).unwrap();
        let encoded = state.encode(&theta).unwrap();
        prop_assert!((norm_sq(&encoded) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encode_is_additive_without_wrapping(
        n in 1usize..=5,
        seed in any::<u64>(),
        raw1 in proptest::collection::vec(0.0f64..3.0, 5),
        raw2 in proptest::collection::vec(0.0f64..3.0, 5),
    ) {
        // sums stay below 2*pi, so the reduced representative is the sum
        // itself and equality holds entrywise
        let state = haar(n, seed);
        let t1 = ParamVector::new(raw1[..n].to_vec()).unwrap();
        let t2 = ParamVector::new(raw2[..n].to_vec()).unwrap();
        let sum = ParamVector::new(
            raw1[..n].iter().zip(&raw2[..n]).map(|(a, b)| a + b).collect(),
        )
        .unwrap();
        let two_step = state.encode(&t1).unwrap().encode(&t2).unwrap();
        let one_step = state.encode(&sum).unwrap();
        for (a, b) in two_step.amplitudes().iter().zip(one_step.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn encode_is_additive_up_to_global_phase_with_wrapping(
        n in 1usize..=4,
        seed in any::<u64>(),
        raw1 in proptest::collection::vec(0.0f64..6.2, 4),
        raw2 in proptest::collection::vec(0.0f64..6.2, 4),
    ) {
        // angle reduction can flip a global sign when a component wraps
        let state = haar(n, seed);
        let t1 = ParamVector::new(raw1[..n].to_vec()).unwrap();
        let t2 = ParamVector::new(raw2[..n].to_vec()).unwrap();
        let sum = ParamVector::new(
            raw1[..n].iter().zip(&raw2[..n]).map(|(a, b)| a + b).collect(),
        )
        .unwrap();
        let two_step = state.encode(&t1).unwrap().encode(&t2).unwrap();
        let one_step = state.encode(&sum).unwrap();
        prop_assert!((two_step.fidelity(&one_step).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectations_ignore_a_global_phase(
        n in 1usize..=5,
        seed in any::<u64>(),
        gamma in 0.0f64..std::f64::consts::TAU,
    ) {
        let state = haar(n, seed);
        let phase = Complex64::from_polar(1.0, gamma);
        let rotated = ProbeState::new(
            n,
            state.amplitudes().iter().map(|a| a * phase).collect(),
        )
        .unwrap();
        for (a, b) in state.z_expectations().iter().zip(rotated.z_expectations()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in state.zz_correlations().iter().zip(rotated.zz_correlations()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zz_diagonal_is_unit(n in 1usize..=6, seed in any::<u64>()) {
        let state = haar(n, seed);
        let zz = state.zz_correlations();
        for i in 0..n {
            prop_assert!((zz[i * n + i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qfim_trace_respects_the_sensor_count(n in 1usize..=6, seed in any::<u64>()) {
        let f = compute_qfim(&haar(n, seed));
        prop_assert!(f.trace() <= n as f64 + 1e-9);
    }

    #[test]
    fn equatorial_probes_have_full_trace(seed in any::<u64>()) {
        let f = compute_qfim(&ProbeState::random_equatorial2(seed));
        prop_assert!((f.trace() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn quadratic_form_matches_the_spectral_path(n in 2usize..=6, seed in any::<u64>()) {
        let f = compute_qfim(&haar(n, seed));
        let spec = spectral(&f);
        let mut rng = rng::stream(seed);
        let u = loop {
            let v: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut rng)).collect();
            if let Ok(d) = Direction::new(v) { break d; }
        };
        let direct = qfi_along(&f, &u).unwrap();
        let via_spectrum: f64 = spec
            .eigenvalues()
            .iter()
            .zip(spec.eigenvectors())
            .map(|(lam, e)| lam * e.dot(&u) * e.dot(&u))
            .sum();
        prop_assert!((direct - via_spectrum).abs() < 1e-8);
    }

    #[test]
    fn qfi_is_even_in_the_direction(n in 2usize..=6, seed in any::<u64>()) {
        let f = compute_qfim(&haar(n, seed));
        let mut rng = rng::stream(seed ^ 0xF1F0);
        let u = loop {
            let v: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut rng)).collect();
            if let Ok(d) = Direction::new(v) { break d; }
        };
        let flipped = Direction::new(u.weights().iter().map(|x| -x).collect()).unwrap();
        let a = qfi_along(&f, &u).unwrap();
        let b = qfi_along(&f, &flipped).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

/// GHZ amplitudes depend on theta only through the phase sum: shifting
/// along any zero-sum direction moves the encoded state by a global phase
/// at most.
#[test]
fn encoded_ghz_depends_only_on_the_phase_sum() {
    for n in 2..=6usize {
        let ghz = ProbeState::ghz(n).unwrap();
        let mut rng = rng::stream(n as u64);
        for _ in 0..10 {
            let theta = ParamVector::new(
                (0..n)
                    .map(|_| rng::uniform(&mut rng) * std::f64::consts::TAU)
                    .collect(),
            )
            .unwrap();
            // zero-sum direction: random vector minus its mean
            let mut v: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut rng)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            for x in &mut v {
                *x -= mean;
            }
            let base = ghz.encode(&theta).unwrap();
            let shifted = ghz.encode(&theta.shifted(&v, 0.7).unwrap()).unwrap();
            let overlap = base.fidelity(&shifted).unwrap();
            assert!((overlap - 1.0).abs() < 1e-12, "n={n}: fidelity {overlap}");
        }
    }
}

/// Exhaustive small-case duality soundness: named probes plus 200 Haar
/// states per sensor count, 20 random sensing directions each, every
/// complement direction paired.
#[test]
fn duality_bound_holds_across_the_small_case_sweep() {
    let mut checked = 0usize;
    for n in 2..=8usize {
        let mut states = vec![
            ProbeState::ghz(n).unwrap(),
            ProbeState::plus_product(n).unwrap(),
            ProbeState::zero_product(n).unwrap(),
        ];
        for k in 0..200u64 {
            states.push(ProbeState::random_haar(n, rng::derive_seed(3000 + n as u64, k)).unwrap());
        }
        for (si, state) in states.iter().enumerate() {
            let mut rng = rng::stream(rng::derive_seed(4000 + n as u64, si as u64));
            for _ in 0..20 {
                let (w, _) = sample_orthogonal_pair(n, &mut rng).unwrap();
                for v in orthonormal_complement(&w).unwrap() {
                    let report = verify_duality(state, &w, &v).unwrap();
                    assert!(
                        report.passed,
                        "n={n} state {si}: sum {} exceeds {} + {BOUND_TOL}",
                        report.sum, report.bound
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(
        checked > 100_000,
        "sweep shrank unexpectedly: {checked} checks"
    );
}
