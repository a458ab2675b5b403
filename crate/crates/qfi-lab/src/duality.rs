//! Verification of the QFI duality bound and its equality families.
//!
//! For any probe and any orthogonal unit directions `w`, `v` the QFIs
//! satisfy `F(w) + F(v) <= N`. The bound is saturated by every equatorial
//! two-qubit probe and by GHZ states (along the phase-sum direction) for
//! all N. The campaigns here stress the bound over random probes and
//! check the equality families exactly.

use crate::error::{Error, Result};
use crate::parallel;
use crate::qfim::{compute_qfim, orthonormal_complement, qfi_along, Direction, QfiMatrix};
use crate::rng;
use crate::state::ProbeState;

/// Slack allowed on the duality bound before a sample counts as a
/// violation; the bound is mathematically strict, so anything beyond
/// floating-point noise fails the campaign.
pub const BOUND_TOL: f64 = 1e-9;

/// Outcome of one duality-bound check.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub n: usize,
    pub qfi_w: f64,
    pub qfi_v: f64,
    pub sum: f64,
    /// The bound itself, N.
    pub bound: f64,
    /// `bound - sum`; nonnegative for every physical probe.
    pub margin: f64,
    pub passed: bool,
}

/// Check `F(w) + F(v) <= N` for one probe and one orthogonal pair.
///
/// A failed report indicates an implementation bug, not a physical state.
pub fn verify_duality(state: &ProbeState, w: &Direction, v: &Direction) -> Result<DualityReport> {
    w.require_orthogonal(v)?;
    if w.dim() != state.num_qubits() {
        return Err(Error::DimensionMismatch(w.dim(), state.num_qubits()));
    }
    let f = compute_qfim(state);
    report_from_qfim(&f, w, v)
}

fn report_from_qfim(f: &QfiMatrix, w: &Direction, v: &Direction) -> Result<DualityReport> {
    let n = f.n();
    let qfi_w = qfi_along(f, w)?;
    let qfi_v = qfi_along(f, v)?;
    let sum = qfi_w + qfi_v;
    let bound = n as f64;
    Ok(DualityReport {
        n,
        qfi_w,
        qfi_v,
        sum,
        bound,
        margin: bound - sum,
        passed: sum <= bound + BOUND_TOL,
    })
}

/// One point of the two-qubit precision-privacy frontier.
#[derive(Debug, Clone, Copy)]
pub struct FrontierPoint {
    pub phi: f64,
    pub qfi_w: f64,
    pub qfi_v: f64,
}

/// Sweep the Bell family `cos(phi)|Phi+> + sin(phi)|Psi+>` over a uniform
/// grid of `num_points` values of phi in [0, pi/2], reporting the QFI along
/// the sum direction `(1,1)/sqrt(2)` and the difference direction
/// `(1,-1)/sqrt(2)`. The points trace the line `qfi_w + qfi_v = 2`.
pub fn frontier_sweep(num_points: usize) -> Result<Vec<FrontierPoint>> {
    if num_points < 2 {
        return Err(Error::Config(
            "frontier sweep needs at least 2 points".into(),
        ));
    }
    let w = Direction::uniform_sum(2)?;
    let v = Direction::pair_difference(2)?;
    (0..num_points)
        .map(|k| {
            let phi = std::f64::consts::FRAC_PI_2 * k as f64 / (num_points - 1) as f64;
            let f = compute_qfim(&ProbeState::bell_family(phi)?);
            Ok(FrontierPoint {
                phi,
                qfi_w: qfi_along(&f, &w)?,
                qfi_v: qfi_along(&f, &v)?,
            })
        })
        .collect()
}

/// Diagnostics for the GHZ co-optimality signature: QFIM equal to the
/// all-ones matrix, QFI of N along the phase sum, zero along every
/// complement direction.
#[derive(Debug, Clone)]
pub struct GhzCertificate {
    pub n: usize,
    /// `max_ij |F_ij - 1|`.
    pub max_ones_deviation: f64,
    /// QFI along `(1,...,1)/sqrt(N)`.
    pub qfi_sum: f64,
    /// Largest QFI over the orthonormal complement of the sum direction.
    pub max_complement_qfi: f64,
    pub passed: bool,
}

/// Certify that the N-qubit GHZ probe exhibits the rank-1 all-ones QFIM.
pub fn ghz_certificate(n: usize) -> Result<GhzCertificate> {
    certify_rank1_signature(&ProbeState::ghz(n)?)
}

/// Run the GHZ-signature checks against an arbitrary probe (used both by
/// [`ghz_certificate`] and by negative controls such as `|+>^N`).
pub fn certify_rank1_signature(state: &ProbeState) -> Result<GhzCertificate> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::Config("certificate needs at least 2 sensors".into()));
    }
    let f = compute_qfim(state);
    let ones = vec![1.0; n * n];
    let max_ones_deviation = f.max_abs_deviation(&ones);
    let w = Direction::uniform_sum(n)?;
    let qfi_sum = qfi_along(&f, &w)?;
    let mut max_complement_qfi: f64 = 0.0;
    for v in orthonormal_complement(&w)? {
        max_complement_qfi = max_complement_qfi.max(qfi_along(&f, &v)?);
    }
    let passed = max_ones_deviation <= 1e-10
        && (qfi_sum - n as f64).abs() <= 1e-9
        && max_complement_qfi <= 1e-9;
    Ok(GhzCertificate {
        n,
        max_ones_deviation,
        qfi_sum,
        max_complement_qfi,
        passed,
    })
}

/// Diagnostics for the separable probe: identity QFIM and pair sums of 2.
#[derive(Debug, Clone)]
pub struct SeparableCertificate {
    pub n: usize,
    /// `max_ij |F_ij - I_ij|`.
    pub max_identity_deviation: f64,
    /// Largest `|F(w) + F(v) - 2|` over the sampled orthogonal pairs.
    pub max_pair_sum_deviation: f64,
    pub passed: bool,
}

/// Certify that `|+>^N` has the identity QFIM and that every sampled
/// orthogonal pair of directions sums to 2.
pub fn separable_certificate(
    n: usize,
    num_pairs: usize,
    seed: u64,
) -> Result<SeparableCertificate> {
    if n < 2 {
        return Err(Error::Config("certificate needs at least 2 sensors".into()));
    }
    let f = compute_qfim(&ProbeState::plus_product(n)?);
    let mut identity = vec![0.0; n * n];
    for i in 0..n {
        identity[i * n + i] = 1.0;
    }
    let max_identity_deviation = f.max_abs_deviation(&identity);
    let mut max_pair_sum_deviation: f64 = 0.0;
    for k in 0..num_pairs {
        let mut rng = rng::stream(rng::derive_seed(seed, k as u64));
        let (w, v) = sample_orthogonal_pair(n, &mut rng)?;
        let sum = qfi_along(&f, &w)? + qfi_along(&f, &v)?;
        max_pair_sum_deviation = max_pair_sum_deviation.max((sum - 2.0).abs());
    }
    let passed = max_identity_deviation <= 1e-10 && max_pair_sum_deviation <= 1e-9;
    Ok(SeparableCertificate {
        n,
        max_identity_deviation,
        max_pair_sum_deviation,
        passed,
    })
}

/// Check the QFIM-level uniqueness statement behind GHZ co-optimality: if
/// an equatorial probe has vanishing QFI along every direction orthogonal
/// to the uniform sum, its QFIM must be the all-ones matrix.
///
/// Returns `Ok(false)` when some complement direction carries QFI above
/// `tol`. Returns an error if the complement QFIs vanish but the QFIM
/// deviates from the all-ones matrix by more than `10 * tol` (a violation
/// of the null-space-plus-trace argument, impossible for a correct
/// implementation).
pub fn rank1_uniqueness_check(state: &ProbeState, tol: f64) -> Result<bool> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let worst_z = state
        .z_expectations()
        .iter()
        .map(|z| z.abs())
        .fold(0.0, f64::max);
    if worst_z > tol {
        return Err(Error::NotEquatorial(worst_z));
    }
    let n = state.num_qubits();
    let f = compute_qfim(state);
    let w = Direction::uniform_sum(n)?;
    for v in orthonormal_complement(&w)? {
        if qfi_along(&f, &v)? > tol {
            return Ok(false);
        }
    }
    let ones = vec![1.0; n * n];
    let dev = f.max_abs_deviation(&ones);
    if dev > 10.0 * tol {
        return Err(Error::InvariantViolation(format!(
            "complement QFIs vanish but QFIM deviates from all-ones by {dev:.3e}"
        )));
    }
    Ok(true)
}

/// Direction drawn uniformly on the unit sphere (normalized Gaussian).
pub fn sample_direction(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Direction> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng::standard_normal(rng)).collect();
        match Direction::new(v) {
            Ok(d) => return Ok(d),
            Err(Error::DegenerateVector(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Random orthogonal pair: `w` uniform on the sphere, `v` a random unit
/// combination of the orthonormal complement of `w`.
pub fn sample_orthogonal_pair(
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(Direction, Direction)> {
    let w = sample_direction(n, rng)?;
    let basis = orthonormal_complement(&w)?;
    loop {
        let coeffs: Vec<f64> = (0..basis.len())
            .map(|_| rng::standard_normal(rng))
            .collect();
        let mut v = vec![0.0; n];
        for (c, b) in coeffs.iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b.weights()) {
                *vi += c * bi;
            }
        }
        match Direction::new(v) {
            Ok(d) => return Ok((w, d)),
            Err(Error::DegenerateVector(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Aggregate results of a randomized duality campaign.
#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub n: usize,
    pub num_states: usize,
    /// Samples with `sum > N + BOUND_TOL`; must be zero.
    pub violations: usize,
    pub max_sum: f64,
    /// Seed of the probe that produced `max_sum`, for replay.
    pub max_sum_seed: u64,
    /// Present for n = 2: the equality family check.
    pub equatorial: Option<EquatorialSummary>,
}

/// Equality check over random two-qubit equatorial probes, where the
/// duality sum must equal 2 exactly.
#[derive(Debug, Clone)]
pub struct EquatorialSummary {
    pub num_states: usize,
    /// `max |sum - 2|` over the sampled equatorial probes.
    pub max_sum_deviation: f64,
    /// Seed of the probe that produced the worst deviation.
    pub worst_seed: u64,
}

/// Draw `num_states` Haar probes with a fresh random orthogonal direction
/// pair each and check the duality bound on every sample. For n = 2 an
/// equal-sized family of random equatorial probes additionally checks the
/// equality case `sum = 2`.
pub fn random_duality_campaign(n: usize, num_states: usize, seed: u64) -> Result<CampaignSummary> {
    random_duality_campaign_with(n, num_states, seed, &[])
}

/// Campaign variant that appends explicitly chosen (probe, w, v) triples to
/// the random samples, e.g. to pin the GHZ saturation point.
pub fn random_duality_campaign_with(
    n: usize,
    num_states: usize,
    seed: u64,
    injected: &[(ProbeState, Direction, Direction)],
) -> Result<CampaignSummary> {
    if n < 2 {
        return Err(Error::Config(
            "duality campaign needs at least 2 sensors".into(),
        ));
    }
    if num_states == 0 {
        return Err(Error::Config(
            "duality campaign needs at least 1 state".into(),
        ));
    }
    let results: Vec<Result<(f64, u64, bool)>> = parallel::map_indexed(num_states, |idx| {
        let state_seed = rng::derive_seed(seed, 2 * idx as u64);
        let pair_seed = rng::derive_seed(seed, 2 * idx as u64 + 1);
        let state = ProbeState::random_haar(n, state_seed)?;
        let mut pair_rng = rng::stream(pair_seed);
        let (w, v) = sample_orthogonal_pair(n, &mut pair_rng)?;
        let report = verify_duality(&state, &w, &v)?;
        Ok((report.sum, state_seed, !report.passed))
    });

    let mut violations = 0usize;
    let mut max_sum = f64::NEG_INFINITY;
    let mut max_sum_seed = 0u64;
    for r in results {
        let (sum, state_seed, violated) = r?;
        if violated {
            violations += 1;
        }
        if sum > max_sum {
            max_sum = sum;
            max_sum_seed = state_seed;
        }
    }
    for (state, w, v) in injected {
        let report = verify_duality(state, w, v)?;
        if !report.passed {
            violations += 1;
        }
        if report.sum > max_sum {
            max_sum = report.sum;
            max_sum_seed = seed;
        }
    }

    let equatorial = if n == 2 {
        let eq: Vec<Result<(f64, u64)>> = parallel::map_indexed(num_states, |idx| {
            let base = 2 * num_states as u64;
            let state_seed = rng::derive_seed(seed, base + 2 * idx as u64);
            let pair_seed = rng::derive_seed(seed, base + 2 * idx as u64 + 1);
            let state = ProbeState::random_equatorial2(state_seed);
            let mut pair_rng = rng::stream(pair_seed);
            let (w, v) = sample_orthogonal_pair(2, &mut pair_rng)?;
            let report = verify_duality(&state, &w, &v)?;
            Ok(((report.sum - 2.0).abs(), state_seed))
        });
        let mut max_dev = 0.0;
        let mut worst_seed = 0u64;
        for r in eq {
            let (dev, s) = r?;
            if dev > max_dev {
                max_dev = dev;
                worst_seed = s;
            }
        }
        Some(EquatorialSummary {
            num_states,
            max_sum_deviation: max_dev,
            worst_seed,
        })
    } else {
        None
    };

    Ok(CampaignSummary {
        n,
        num_states,
        violations,
        max_sum,
        max_sum_seed,
        equatorial,
    })
}

/// Ceiling on `F(w)` for any probe that keeps `F(v) >= delta` along an
/// orthogonal direction: `N - delta`.
pub fn tradeoff_bound(n: usize, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    if !delta.is_finite() || delta <= 0.0 || delta > n as f64 {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, n]",
        });
    }
    Ok(n as f64 - delta)
}

/// Empirical check of the tradeoff ceiling over random probes.
#[derive(Debug, Clone)]
pub struct TradeoffCampaign {
    pub n: usize,
    pub delta: f64,
    pub bound: f64,
    pub num_states: usize,
    /// Samples that met the constraint `qfi_v >= delta`.
    pub num_constrained: usize,
    /// Largest `qfi_w` among constrained samples (NaN when none qualified).
    pub max_constrained_qfi_w: f64,
    /// Constrained samples with `qfi_w > bound + BOUND_TOL`; must be zero.
    pub violations: usize,
}

/// Sample Haar probes and assert that none with `F(v) >= delta` exceeds
/// `F(w) = N - delta` beyond noise.
pub fn tradeoff_campaign(
    n: usize,
    delta: f64,
    w: &Direction,
    v: &Direction,
    num_states: usize,
    seed: u64,
) -> Result<TradeoffCampaign> {
    let bound = tradeoff_bound(n, delta)?;
    w.require_orthogonal(v)?;
    if w.dim() != n {
        return Err(Error::DimensionMismatch(w.dim(), n));
    }
    let results: Vec<Result<Option<f64>>> = parallel::map_indexed(num_states, |idx| {
        let state = ProbeState::random_haar(n, rng::derive_seed(seed, idx as u64))?;
        let f = compute_qfim(&state);
        let qfi_v = qfi_along(&f, v)?;
        if qfi_v >= delta {
            Ok(Some(qfi_along(&f, w)?))
        } else {
            Ok(None)
        }
    });
    let mut num_constrained = 0;
    let mut max_w = f64::NAN;
    let mut violations = 0;
    for r in results {
        if let Some(qfi_w) = r? {
            num_constrained += 1;
            if max_w.is_nan() || qfi_w > max_w {
                max_w = qfi_w;
            }
            if qfi_w > bound + BOUND_TOL {
                violations += 1;
            }
        }
    }
    Ok(TradeoffCampaign {
        n,
        delta,
        bound,
        num_states,
        num_constrained,
        max_constrained_qfi_w: max_w,
        violations,
    })
}
