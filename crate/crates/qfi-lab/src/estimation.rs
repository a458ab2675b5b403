//! Measurement simulation and Cramer-Rao estimation experiments.
//!
//! Two standard measurements are provided: the X-basis parity readout that
//! saturates the quantum Cramer-Rao bound for GHZ probes sensing the phase
//! sum, and independent per-qubit X measurements that saturate it for
//! product probes. Monte Carlo experiments compare the empirical estimator
//! variance against `1/(M * F_Q)`, and a finite-difference classical Fisher
//! information routine checks the data-processing side `CFI <= QFI`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parallel;
use crate::qfim::{compute_qfim, qfi_along, Direction};
use crate::rng;
use crate::state::{ParamVector, ProbeState};

/// Total phases (or per-qubit phases for local readout) must sit inside
/// this window for the arccos inversion to be well conditioned.
pub const WINDOW_LO: f64 = 0.2 * std::f64::consts::PI;
pub const WINDOW_HI: f64 = 0.8 * std::f64::consts::PI;

/// QFI below this threshold is treated as zero: the Cramer-Rao bound is
/// then undefined and experiments refuse to run.
pub const ZERO_QFI_TOL: f64 = 1e-9;

/// Which measurement is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementModel {
    /// Every qubit measured in the X basis, outcome reduced to the total
    /// parity: alphabet `{+1, -1}` stored as `[p(+1), p(-1)]`.
    GhzParity,
    /// Per-qubit X-basis outcomes kept individually: alphabet `{0,1}^N`
    /// indexed by the same bit convention as computational basis labels.
    LocalX,
}

impl MeasurementModel {
    pub fn outcome_count(&self, num_qubits: usize) -> usize {
        match self {
            MeasurementModel::GhzParity => 2,
            MeasurementModel::LocalX => 1 << num_qubits,
        }
    }
}

/// Born-rule probabilities over a measurement model's outcome alphabet.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    model: MeasurementModel,
    num_qubits: usize,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn model(&self) -> MeasurementModel {
        self.model
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// In-place N-fold Hadamard transform with 1/sqrt(2) scaling per stage,
/// mapping computational-basis amplitudes to X-basis amplitudes.
fn hadamard_all(num_qubits: usize, amps: &mut [Complex64]) {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for bit in 0..num_qubits {
        let stride = 1usize << bit;
        let mut base = 0;
        while base < amps.len() {
            for k in base..base + stride {
                let a = amps[k];
                let b = amps[k + stride];
                amps[k] = (a + b) * scale;
                amps[k + stride] = (a - b) * scale;
            }
            base += stride << 1;
        }
    }
}

/// Outcome probabilities of measuring `state` under `model`, obtained by
/// the N-fold Hadamard transform of the amplitudes.
pub fn outcome_distribution(state: &ProbeState, model: MeasurementModel) -> OutcomeDistribution {
    let n = state.num_qubits();
    let mut amps = state.amplitudes().to_vec();
    hadamard_all(n, &mut amps);
    let probabilities = match model {
        MeasurementModel::LocalX => amps.iter().map(|a| a.norm_sqr()).collect(),
        MeasurementModel::GhzParity => {
            let mut even = 0.0;
            let mut odd = 0.0;
            for (label, a) in amps.iter().enumerate() {
                if label.count_ones() % 2 == 0 {
                    even += a.norm_sqr();
                } else {
                    odd += a.norm_sqr();
                }
            }
            vec![even, odd]
        }
    };
    OutcomeDistribution {
        model,
        num_qubits: n,
        probabilities,
    }
}

/// Multinomial outcome counts from repeated sampling of a distribution.
#[derive(Debug, Clone)]
pub struct ShotCounts {
    pub model: MeasurementModel,
    pub num_qubits: usize,
    pub counts: Vec<u64>,
}

impl ShotCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Draw `shots` outcomes from `dist`; deterministic per seed.
pub fn sample_shots(dist: &OutcomeDistribution, shots: u64, seed: u64) -> ShotCounts {
    let mut cdf = Vec::with_capacity(dist.probabilities.len());
    let mut acc = 0.0;
    for p in &dist.probabilities {
        acc += p;
        cdf.push(acc);
    }
    let mut counts = vec![0u64; dist.probabilities.len()];
    let mut rng = rng::stream(seed);
    let last = counts.len() - 1;
    for _ in 0..shots {
        let u = rng::uniform(&mut rng);
        let idx = cdf.partition_point(|c| *c <= u).min(last);
        counts[idx] += 1;
    }
    ShotCounts {
        model: dist.model,
        num_qubits: dist.num_qubits,
        counts,
    }
}

fn clamp_probability(p: f64, shots: u64) -> f64 {
    // keeps arccos finite when an outcome saturates; affects only tail events
    let eps = 1.0 / (2.0 * shots as f64);
    p.clamp(eps, 1.0 - eps)
}

/// Plug-in estimator for the target combination `w . theta` from shot data.
///
/// Parity readout: `p_hat = counts(+1)/M` inverts through
/// `(arccos(2 p_hat - 1) - calibration) / sqrt(N)`, where `calibration` is a
/// known reference phase added to the total phase by the apparatus (zero in
/// every experiment configured here). Requires `w = (1,..,1)/sqrt(N)` and a
/// total phase inside the invertible window.
///
/// Local readout: per-qubit `theta_hat_j = arccos(<X_j>)` combined as
/// `sum_j w_j theta_hat_j`; `calibration` is not used.
pub fn estimate_target(counts: &ShotCounts, w: &Direction, calibration: f64) -> Result<f64> {
    let shots = counts.total();
    if shots == 0 {
        return Err(Error::EmptyCounts);
    }
    let n = counts.num_qubits;
    if w.dim() != n {
        return Err(Error::DimensionMismatch(w.dim(), n));
    }
    match counts.model {
        MeasurementModel::GhzParity => {
            let uniform = (n as f64).sqrt().recip();
            if w.weights().iter().any(|x| (x - uniform).abs() > 1e-9) {
                return Err(Error::Config(
                    "parity estimation targets the uniform sum direction only".into(),
                ));
            }
            let p_hat = clamp_probability(counts.counts[0] as f64 / shots as f64, shots);
            let phase = (2.0 * p_hat - 1.0).acos();
            Ok((phase - calibration) * uniform)
        }
        MeasurementModel::LocalX => {
            let mut estimate = 0.0;
            for (j, wj) in w.weights().iter().enumerate() {
                let mut plus = 0u64;
                for (label, c) in counts.counts.iter().enumerate() {
                    if (label >> (n - 1 - j)) & 1 == 0 {
                        plus += c;
                    }
                }
                let p_hat = clamp_probability(plus as f64 / shots as f64, shots);
                estimate += wj * (2.0 * p_hat - 1.0).acos();
            }
            Ok(estimate)
        }
    }
}

/// Result of a repeated Monte Carlo estimation experiment.
#[derive(Debug, Clone)]
pub struct EstimationResult {
    /// True value of `w . theta`.
    pub target_value: f64,
    /// Mean estimate over the repetitions.
    pub estimate: f64,
    /// Unbiased sample variance of the per-repetition estimates.
    pub empirical_variance: f64,
    pub shots_per_repetition: u64,
    pub repetitions: u64,
    /// `1 / F_Q(w . theta)`.
    pub crb_per_shot: f64,
    /// `crb_per_shot / shots_per_repetition`.
    pub crb_total: f64,
}

fn check_window(model: MeasurementModel, theta: &ParamVector) -> Result<()> {
    match model {
        MeasurementModel::GhzParity => {
            let phi = theta.total();
            if !(WINDOW_LO..=WINDOW_HI).contains(&phi) {
                return Err(Error::OutsideWindow(format!(
                    "total phase {phi:.4} outside [{WINDOW_LO:.4}, {WINDOW_HI:.4}]"
                )));
            }
        }
        MeasurementModel::LocalX => {
            for (j, t) in theta.angles().iter().enumerate() {
                if !(WINDOW_LO..=WINDOW_HI).contains(t) {
                    return Err(Error::OutsideWindow(format!(
                        "theta[{j}] = {t:.4} outside [{WINDOW_LO:.4}, {WINDOW_HI:.4}]"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Run `repetitions` independent experiments of `shots` measurement shots
/// each and compare the empirical estimator variance with the quantum
/// Cramer-Rao bound. Repetition `r` draws from the sub-stream
/// `derive_seed(seed, r)`, so the result is identical for any degree of
/// parallelism.
pub fn run_experiment(
    probe: &ProbeState,
    theta_true: &ParamVector,
    model: MeasurementModel,
    w: &Direction,
    shots: u64,
    repetitions: u64,
    seed: u64,
) -> Result<EstimationResult> {
    if shots == 0 {
        return Err(Error::Config(
            "need at least one shot per repetition".into(),
        ));
    }
    if repetitions < 2 {
        return Err(Error::Config(
            "variance estimation needs at least 2 repetitions".into(),
        ));
    }
    if theta_true.len() != probe.num_qubits() {
        return Err(Error::DimensionMismatch(
            theta_true.len(),
            probe.num_qubits(),
        ));
    }
    let qfi = qfi_along(&compute_qfim(probe), w)?;
    if qfi <= ZERO_QFI_TOL {
        return Err(Error::ZeroQfi);
    }
    check_window(model, theta_true)?;

    let encoded = probe.encode(theta_true)?;
    let dist = outcome_distribution(&encoded, model);
    let target_value: f64 = w
        .weights()
        .iter()
        .zip(theta_true.angles())
        .map(|(wj, t)| wj * t)
        .sum();

    let estimates: Vec<Result<f64>> = parallel::map_indexed(repetitions as usize, |r| {
        let counts = sample_shots(&dist, shots, rng::derive_seed(seed, r as u64));
        estimate_target(&counts, w, 0.0)
    });
    let mut values = Vec::with_capacity(estimates.len());
    for e in estimates {
        values.push(e?);
    }
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let empirical_variance =
        values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (r - 1.0);

    let crb_per_shot = 1.0 / qfi;
    Ok(EstimationResult {
        target_value,
        estimate: mean,
        empirical_variance,
        shots_per_repetition: shots,
        repetitions,
        crb_per_shot,
        crb_total: crb_per_shot / shots as f64,
    })
}

/// Classical Fisher information of the measurement along direction `u`:
/// `sum_o (d p_o / d s)^2 / p_o` with the derivative taken by central
/// differences of the outcome distribution along `theta + s u`.
///
/// Outcomes with probability below 1e-12 contribute zero only when the
/// derivative estimate is also below 1e-12; otherwise the point is
/// reported as degenerate rather than silently dividing by zero.
pub fn classical_fisher_information(
    probe: &ProbeState,
    theta: &ParamVector,
    model: MeasurementModel,
    u: &Direction,
    step: f64,
) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&step) {
        return Err(Error::OutOfRange {
            name: "step",
            value: step,
            range: "[1e-6, 1e-2]",
        });
    }
    if theta.len() != probe.num_qubits() || u.dim() != probe.num_qubits() {
        return Err(Error::DimensionMismatch(u.dim(), probe.num_qubits()));
    }
    let center = outcome_distribution(&probe.encode(theta)?, model);
    let plus = outcome_distribution(&probe.encode(&theta.shifted(u.weights(), step)?)?, model);
    let minus = outcome_distribution(&probe.encode(&theta.shifted(u.weights(), -step)?)?, model);

    let mut cfi = 0.0;
    for ((p0, pp), pm) in center
        .probabilities
        .iter()
        .zip(&plus.probabilities)
        .zip(&minus.probabilities)
    {
        let dp = (pp - pm) / (2.0 * step);
        if *p0 < 1e-12 {
            if dp.abs() < 1e-12 {
                continue;
            }
            return Err(Error::DegenerateOutcome {
                prob: *p0,
                deriv: dp,
            });
        }
        cfi += dp * dp / p0;
    }
    Ok(cfi)
}

/// Largest outcome-probability change an observer sees when the parameters
/// move by `epsilon` along `v`: `max_o |p_o(theta + eps v) - p_o(theta)|`.
///
/// For GHZ probes and any `v` orthogonal to `(1,...,1)` the encoded state
/// changes only by a global phase, so the deviation vanishes for every
/// measurement model: the curious-but-honest observer learns nothing.
pub fn adversary_shift_test(
    probe: &ProbeState,
    theta: &ParamVector,
    v: &Direction,
    epsilon: f64,
    model: MeasurementModel,
) -> Result<f64> {
    if !epsilon.is_finite() || epsilon == 0.0 {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "nonzero",
        });
    }
    if theta.len() != probe.num_qubits() || v.dim() != probe.num_qubits() {
        return Err(Error::DimensionMismatch(v.dim(), probe.num_qubits()));
    }
    let base = outcome_distribution(&probe.encode(theta)?, model);
    let shifted =
        outcome_distribution(&probe.encode(&theta.shifted(v.weights(), epsilon)?)?, model);
    Ok(base
        .probabilities
        .iter()
        .zip(&shifted.probabilities)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
