//! Simulation and verification toolkit for distributed quantum sensor
//! networks with local phase encoding.
//!
//! N sensors each hold one qubit of a shared pure probe state and imprint a
//! local phase `theta_j` through `exp(-i theta_j sigma_z / 2)`. A fusion
//! center estimates a target combination `w . theta` along a unit sensing
//! direction `w`. This crate computes the quantum Fisher information matrix
//! (QFIM) of arbitrary probes, verifies the duality bound
//! `F(w) + F(v) <= N` for orthogonal directions together with its equality
//! families (every two-qubit equatorial probe; GHZ probes in general),
//! reproduces the two-qubit precision-privacy Pareto frontier, runs Monte
//! Carlo estimation experiments against the quantum Cramer-Rao bound, and
//! searches the pure-state manifold for QFI-optimal probes.
//!
//! # Modules
//!
//! - [`state`]: probe states, named probe families, local phase encoding,
//!   Pauli-Z expectations.
//! - [`qfim`]: QFIM computation, directional QFI, spectral analysis, and an
//!   independent fidelity-based finite-difference oracle.
//! - [`duality`]: duality-bound reports, frontier sweeps, GHZ / separable
//!   certificates, randomized campaigns, tradeoff ceilings.
//! - [`estimation`]: measurement models, shot sampling, plug-in estimators,
//!   classical Fisher information, adversary blindness.
//! - [`optimize`]: probe parameterizations, gradient-ascent optimization,
//!   constrained frontier scans.
//! - [`io`]: probe-state and QFIM interchange documents.
//! - [`cli`]: the `qfi-lab` command-line tool.
//!
//! # Example
//!
//! ```
//! use qfi_lab::{Direction, ProbeState};
//! use qfi_lab::qfim::{compute_qfim, qfi_along};
//!
//! let ghz = ProbeState::ghz(4)?;
//! let f = compute_qfim(&ghz);
//! let w = Direction::uniform_sum(4)?;
//! assert!((qfi_along(&f, &w)? - 4.0).abs() < 1e-10);
//! # Ok::<(), qfi_lab::Error>(())
//! ```
//!
//! Runnable examples live under `examples/`; see the README for the list.
//! The `QFI_LAB_THREADS` environment variable caps worker parallelism
//! without affecting any result.

pub mod cli;
pub mod duality;
pub mod error;
pub mod estimation;
pub mod io;
pub mod optimize;
pub mod parallel;
pub mod qfim;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
pub use estimation::{EstimationResult, MeasurementModel};
pub use qfim::{Direction, QfiMatrix, SpectralDecomposition};
pub use state::{ParamVector, ProbeState};
