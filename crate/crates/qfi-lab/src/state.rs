//! N-qubit pure probe states and local phase encoding.
//!
//! A sensor network of N qubits is simulated as a dense statevector of
//! 2^N complex amplitudes indexed by computational basis label
//! `x in {0, ..., 2^N - 1}`.
//!
//! # Bit convention
//!
//! Sensor `j` (zero-based) occupies bit `N - 1 - j` of the basis label, so
//! sensor 0 is the most significant bit and tensor products read
//! left-to-right. The Pauli-Z eigenvalue of sensor `j` in basis state `|x>`
//! is `+1` when that bit is 0 and `-1` when it is 1; see [`z_eigenvalue`].
//!
//! # Sign convention
//!
//! Local phase encoding applies `exp(-i theta_j sigma_z / 2)` per sensor
//! with `sigma_z|0> = +|0>`, so `|0>` components pick up `exp(-i theta/2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng;

/// Largest supported sensor count (dense statevectors grow as 2^N).
pub const MAX_QUBITS: usize = 20;

/// Tolerance on `sum |a_x|^2 - 1` everywhere normalization is asserted.
pub const NORM_TOL: f64 = 1e-12;

/// Smallest vector norm accepted for normalization; anything below is
/// treated as degenerate rather than silently producing NaN.
pub const MIN_NORM: f64 = 1e-8;

/// Pauli-Z eigenvalue of sensor `sensor` in the basis state labelled `label`.
#[inline]
pub fn z_eigenvalue(num_qubits: usize, sensor: usize, label: usize) -> f64 {
    debug_assert!(sensor < num_qubits);
    let bit = (label >> (num_qubits - 1 - sensor)) & 1;
    1.0 - 2.0 * bit as f64
}

/// An N-qubit pure state: immutable, normalized amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl ProbeState {
    /// Build a state from explicit amplitudes, validating the count and the
    /// norm (within [`NORM_TOL`]).
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::BadAmplitudeCount {
                qubits: num_qubits,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 2.0 * NORM_TOL {
            return Err(Error::NotNormalized(norm_sq.sqrt()));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Build a state from an arbitrary nonzero amplitude vector, normalizing
    /// it. Rejects vectors with norm below [`MIN_NORM`].
    pub fn from_unnormalized(num_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::BadAmplitudeCount {
                qubits: num_qubits,
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < MIN_NORM {
            return Err(Error::DegenerateVector(norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// The N-qubit GHZ state `(|0...0> + |1...1>)/sqrt(2)`.
    pub fn ghz(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amplitudes = vec![Complex64::ZERO; dim];
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amplitudes[0] = w;
        amplitudes[dim - 1] = w;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// The separable probe `|+>^(x)N` with every amplitude `2^(-N/2)`.
    pub fn plus_product(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![a; dim],
        })
    }

    /// The all-zero computational basis state `|0...0>`.
    pub fn zero_product(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[0] = Complex64::ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Two-qubit family `cos(phi)|Phi+> + sin(phi)|Psi+>` for
    /// `phi in [0, pi/2]`, interpolating between the Bell states.
    pub fn bell_family(phi: f64) -> Result<Self> {
        if !phi.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                range: "[0, pi/2]",
            });
        }
        let c = phi.cos() * std::f64::consts::FRAC_1_SQRT_2;
        let s = phi.sin() * std::f64::consts::FRAC_1_SQRT_2;
        let amplitudes = vec![
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ];
        Self::new(2, amplitudes)
    }

    /// Haar-like random pure state: independent standard complex Gaussian
    /// amplitudes, normalized. Deterministic for a fixed seed.
    pub fn random_haar(num_qubits: usize, seed: u64) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut rng = rng::stream(seed);
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| {
                Complex64::new(
                    rng::standard_normal(&mut rng),
                    rng::standard_normal(&mut rng),
                )
            })
            .collect();
        Self::from_unnormalized(num_qubits, amplitudes)
    }

    /// Random two-qubit equatorial state (`<Z_1> = <Z_2> = 0`).
    ///
    /// Draws a mixing weight `q` uniform on [0, 1], sets
    /// `|a00|^2 = |a11|^2 = q/2` and `|a01|^2 = |a10|^2 = (1-q)/2`, and
    /// attaches four independent uniform phases. This covers a full-measure
    /// subset of the equatorial constraint surface.
    pub fn random_equatorial2(seed: u64) -> Self {
        let mut rng = rng::stream(seed);
        let q = rng::uniform(&mut rng);
        let inner = (q / 2.0).sqrt();
        let outer = ((1.0 - q) / 2.0).sqrt();
        let mags = [inner, outer, outer, inner];
        let amplitudes: Vec<Complex64> = mags
            .iter()
            .map(|m| Complex64::from_polar(*m, std::f64::consts::TAU * rng::uniform(&mut rng)))
            .collect();
        Self::from_unnormalized(2, amplitudes).expect("magnitudes sum to 1 by construction")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Apply the local phase encoding `exp(-i/2 sum_j theta_j sigma_z^(j))`:
    /// the amplitude at label `x` is multiplied by
    /// `exp(-i/2 sum_j theta_j s_j(x))`. Norm-preserving and diagonal.
    pub fn encode(&self, theta: &ParamVector) -> Result<Self> {
        if theta.len() != self.num_qubits {
            return Err(Error::DimensionMismatch(theta.len(), self.num_qubits));
        }
        let n = self.num_qubits;
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let mut phase = 0.0;
                for (j, t) in theta.angles().iter().enumerate() {
                    phase -= 0.5 * t * z_eigenvalue(n, j, x);
                }
                a * Complex64::from_polar(1.0, phase)
            })
            .collect();
        Ok(Self {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Per-sensor Pauli-Z expectations `<sigma_z^(j)>`, each in [-1, 1].
    pub fn z_expectations(&self) -> Vec<f64> {
        let n = self.num_qubits;
        let mut out = vec![0.0; n];
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += p * z_eigenvalue(n, j, x);
            }
        }
        out
    }

    /// Two-point correlations `<sigma_z^(i) sigma_z^(j)>` as a row-major
    /// N x N matrix. Symmetric with unit diagonal.
    pub fn zz_correlations(&self) -> Vec<f64> {
        let n = self.num_qubits;
        let mut out = vec![0.0; n * n];
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let signs: Vec<f64> = (0..n).map(|j| z_eigenvalue(n, j, x)).collect();
            for i in 0..n {
                for j in i..n {
                    out[i * n + j] += p * signs[i] * signs[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[i * n + j] = out[j * n + i];
            }
        }
        out
    }

    /// True iff `max_j |<Z_j>| <= tol`.
    pub fn is_equatorial(&self, tol: f64) -> bool {
        self.z_expectations().iter().all(|z| z.abs() <= tol)
    }

    /// Overlap magnitude `|<self|other>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &ProbeState) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm().min(1.0))
    }
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::ZeroQubits);
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(num_qubits));
    }
    Ok(())
}

/// Local phases, one per sensor, reduced to [0, 2*pi) on construction.
///
/// Reduction changes encoded amplitudes by at most a global sign (the
/// half-angle picks up `e^(+/- i pi)` per wrapped turn, the same factor for
/// both Z eigenvalues), so every observable quantity is unaffected.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    angles: Vec<f64>,
}

impl ParamVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFiniteAngle(*bad));
        }
        let angles = angles
            .into_iter()
            .map(|a| a.rem_euclid(std::f64::consts::TAU))
            .collect();
        Ok(Self { angles })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            angles: vec![0.0; n],
        }
    }

    /// `theta + s * u`, reduced like any other parameter vector.
    pub fn shifted(&self, u: &[f64], s: f64) -> Result<Self> {
        if u.len() != self.angles.len() {
            return Err(Error::DimensionMismatch(u.len(), self.angles.len()));
        }
        Self::new(self.angles.iter().zip(u).map(|(t, d)| t + s * d).collect())
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Sum of all phases (the total phase seen by a GHZ probe).
    pub fn total(&self) -> f64 {
        self.angles.iter().sum()
    }
}
