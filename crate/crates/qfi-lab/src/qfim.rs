//! Quantum Fisher information matrices for local phase encoding.
//!
//! For a pure probe under per-sensor `exp(-i theta_j sigma_z / 2)` encoding
//! the QFIM reduces to covariances of the local Z operators:
//!
//! ```text
//! F_ij = <Z_i Z_j> - <Z_i><Z_j>
//! ```
//!
//! evaluated on the probe alone, so the matrix does not depend on theta.
//! [`qfi_oracle`] provides an independent finite-difference route through
//! encoding and state overlap only, never touching this formula.

use crate::error::{Error, Result};
use crate::state::{ParamVector, ProbeState};

/// Tolerance for symmetry checks on QFIM entries.
pub const SYM_TOL: f64 = 1e-10;

/// Eigenvalues within this distance of zero are clamped to zero before any
/// positive-semidefiniteness assertion (rank-deficient QFIMs such as GHZ's
/// produce harmless negative noise at this scale).
pub const EIGEN_CLAMP: f64 = 1e-9;

/// Tolerance on unit norms of sensing directions.
pub const DIR_TOL: f64 = 1e-12;

/// Orthogonality tolerance for direction pairs.
pub const ORTHO_TOL: f64 = 1e-10;

/// N x N real symmetric positive semidefinite Fisher information matrix
/// (per shot), stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl QfiMatrix {
    /// Validate and wrap a row-major matrix: symmetric within [`SYM_TOL`],
    /// diagonal in [0, 1], trace at most N (all up to numerical noise).
    /// Diagonal entries within `-1e-10` of zero are clamped to zero.
    pub fn from_entries(n: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidQfim(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (entries[i * n + j] - entries[j * n + i]).abs();
                if d > SYM_TOL {
                    return Err(Error::InvalidQfim(format!(
                        "asymmetry {d:.3e} at ({i}, {j})"
                    )));
                }
            }
        }
        let mut trace = 0.0;
        for i in 0..n {
            let d = entries[i * n + i];
            if !(-1e-10..=1.0 + 1e-10).contains(&d) {
                return Err(Error::InvalidQfim(format!("diagonal entry {d} at {i}")));
            }
            if d < 0.0 {
                entries[i * n + i] = 0.0;
            }
            trace += entries[i * n + i];
        }
        if trace > n as f64 + 1e-9 {
            return Err(Error::InvalidQfim(format!("trace {trace} exceeds {n}")));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    /// Largest absolute entrywise deviation from `other` (row-major, same n).
    pub fn max_abs_deviation(&self, other: &[f64]) -> f64 {
        self.entries
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Assert positive semidefiniteness up to [`EIGEN_CLAMP`].
    pub fn check_psd(&self) -> Result<()> {
        let spec = spectral(self);
        match spec.eigenvalues().last() {
            Some(min) if *min < 0.0 => {
                Err(Error::InvalidQfim(format!("negative eigenvalue {min}")))
            }
            _ => Ok(()),
        }
    }
}

/// Unit vector in R^N giving the weights of a target linear combination of
/// local phases.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    weights: Vec<f64>,
}

impl Direction {
    /// Normalize `weights` to unit Euclidean norm. Rejects vectors with
    /// norm below `1e-8` as degenerate.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::NonFiniteAngle(*bad));
        }
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        if norm < crate::state::MIN_NORM {
            return Err(Error::DegenerateVector(norm));
        }
        let weights = weights.into_iter().map(|w| w / norm).collect();
        Ok(Self { weights })
    }

    /// The uniform direction `(1, ..., 1)/sqrt(N)` targeting the phase sum.
    pub fn uniform_sum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        Ok(Self {
            weights: vec![(n as f64).sqrt().recip(); n],
        })
    }

    /// The pairwise difference `(1, -1, 0, ..., 0)/sqrt(2)`, orthogonal to
    /// the uniform direction for every N >= 2.
    pub fn pair_difference(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(
                "difference direction needs at least 2 sensors".into(),
            ));
        }
        let mut weights = vec![0.0; n];
        weights[0] = std::f64::consts::FRAC_1_SQRT_2;
        weights[1] = -std::f64::consts::FRAC_1_SQRT_2;
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Error unless `self` and `other` are orthogonal within [`ORTHO_TOL`].
    pub fn require_orthogonal(&self, other: &Direction) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let d = self.dot(other).abs();
        if d > ORTHO_TOL {
            return Err(Error::NotOrthogonal(d));
        }
        Ok(())
    }
}

/// Eigendecomposition of a QFIM: eigenvalues sorted descending with
/// matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Direction>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Direction] {
        &self.eigenvectors
    }
}

/// QFIM of a pure probe from local Z expectations and correlations.
/// Independent of the encoded phases.
pub fn compute_qfim(state: &ProbeState) -> QfiMatrix {
    let n = state.num_qubits();
    let z = state.z_expectations();
    let zz = state.zz_correlations();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let f = zz[i * n + j] - z[i] * z[j];
            entries[i * n + j] = f;
            entries[j * n + i] = f;
        }
    }
    // Covariance diagonals 1 - <Z_i>^2 can round microscopically negative.
    for i in 0..n {
        let d = entries[i * n + i];
        if d < 0.0 {
            debug_assert!(d > -1e-10);
            entries[i * n + i] = 0.0;
        }
    }
    QfiMatrix { n, entries }
}

/// QFI for the linear combination `u . theta`: the quadratic form
/// `u^T F u`, clamped to zero when it rounds negative within noise.
pub fn qfi_along(f: &QfiMatrix, u: &Direction) -> Result<f64> {
    if u.dim() != f.n {
        return Err(Error::DimensionMismatch(u.dim(), f.n));
    }
    let w = u.weights();
    let mut q = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let row: f64 = w.iter().enumerate().map(|(j, wj)| f.entry(i, j) * wj).sum();
        q += wi * row;
    }
    debug_assert!(q > -1e-10, "quadratic form {q} below noise floor");
    Ok(q.max(0.0))
}

/// Independent finite-difference QFI along `u` using only encoding and
/// state overlap: `8 (1 - |<psi(0)|psi(step * u)>|) / step^2`.
///
/// Agrees with [`qfi_along`] within `max(1e-6, 10 * step^2)` for pure
/// states; `step` must lie in `[1e-6, 1e-2]`.
pub fn qfi_oracle(state: &ProbeState, u: &Direction, step: f64) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&step) {
        return Err(Error::OutOfRange {
            name: "step",
            value: step,
            range: "[1e-6, 1e-2]",
        });
    }
    if u.dim() != state.num_qubits() {
        return Err(Error::DimensionMismatch(u.dim(), state.num_qubits()));
    }
    let shifted = state.encode(&ParamVector::zeros(u.dim()).shifted(u.weights(), step)?)?;
    let overlap = state.fidelity(&shifted)?;
    Ok((8.0 * (1.0 - overlap) / (step * step)).max(0.0))
}

/// Eigendecomposition by cyclic Jacobi rotations. Eigenvalues within
/// [`EIGEN_CLAMP`] of zero are clamped to zero; the result is sorted
/// descending.
pub fn spectral(f: &QfiMatrix) -> SpectralDecomposition {
    let n = f.n;
    let (mut vals, vecs) = jacobi_eigen(n, &f.entries);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).expect("finite eigenvalues"));
    for v in &mut vals {
        if v.abs() <= EIGEN_CLAMP {
            *v = 0.0;
        }
    }
    let eigenvalues: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors: Vec<Direction> = order
        .iter()
        .map(|&k| {
            let column: Vec<f64> = (0..n).map(|i| vecs[i * n + k]).collect();
            Direction::new(column).expect("Jacobi eigenvectors have unit norm")
        })
        .collect();
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Cyclic Jacobi eigensolver for a symmetric matrix. Returns eigenvalues
/// and the accumulated rotation matrix (columns are eigenvectors).
fn jacobi_eigen(n: usize, matrix: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n <= 1 {
        return (a, v);
    }
    let scale: f64 = matrix.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i * n + i]).collect();
    (vals, v)
}

/// Orthonormal basis of the hyperplane orthogonal to `w`, built by
/// Gram-Schmidt over the standard basis after dropping the basis vector
/// most parallel to `w`. Deterministic and dimension-stable.
pub fn orthonormal_complement(w: &Direction) -> Result<Vec<Direction>> {
    let n = w.dim();
    if n < 2 {
        return Err(Error::Config(
            "orthonormal complement needs dimension >= 2".into(),
        ));
    }
    let ww = w.weights();
    let skip = (0..n)
        .max_by(|&a, &b| {
            ww[a]
                .abs()
                .partial_cmp(&ww[b].abs())
                .expect("finite weights")
        })
        .expect("nonempty");
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        if k == skip {
            continue;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        // remove the w component, then components along earlier basis vectors
        let proj = ww[k];
        for (vi, wi) in v.iter_mut().zip(ww) {
            *vi -= proj * wi;
        }
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        debug_assert!(norm > 1e-6, "Gram-Schmidt degenerated");
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push(v);
    }
    basis.into_iter().map(Direction::new).collect()
}

/// Normalized component of the standard basis vector `e_j` orthogonal to
/// the sensing direction `w`: positive QFI along this direction is required
/// to estimate sensor `j`'s individual phase. `j` is zero-based.
pub fn privacy_direction(j: usize, w: &Direction) -> Result<Direction> {
    let n = w.dim();
    if j >= n {
        return Err(Error::Config(format!(
            "sensor index {j} out of range for {n} sensors"
        )));
    }
    let ww = w.weights();
    let mut v = vec![0.0; n];
    v[j] = 1.0;
    for (vi, wi) in v.iter_mut().zip(ww) {
        *vi -= ww[j] * wi;
    }
    let norm_sq: f64 = v.iter().map(|x| x * x).sum();
    if norm_sq.sqrt() < crate::state::MIN_NORM {
        return Err(Error::ParallelDirection(j));
    }
    Direction::new(v)
}
