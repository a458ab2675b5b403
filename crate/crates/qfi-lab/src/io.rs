//! Document formats: probe-state files, QFIM exports, CSV tables.
//!
//! Writers emit floating-point values with 17 significant digits
//! (`{:.16e}`), enough to reproduce every `f64` bit-exactly on re-parse.
//! Readers accept any valid JSON numbers.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::qfim::{spectral, QfiMatrix};
use crate::state::ProbeState;

/// Version tag stamped into every emitted document.
pub const SCHEMA_VERSION: &str = "qfi-lab/1";

/// Full-precision decimal rendering of an `f64` (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON array of full-precision floats.
pub fn json_f64_array(xs: &[f64]) -> String {
    let mut s = String::from("[");
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt_f64(*x));
    }
    s.push(']');
    s
}

/// Serialize a probe state in the interchange format: a JSON document with
/// an `n` field and `2^n` two-element `[re, im]` arrays in basis-label
/// order.
pub fn probe_state_json(state: &ProbeState) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"n\": {}, \"amplitudes\": [", state.num_qubits());
    for (i, a) in state.amplitudes().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "[{}, {}]", fmt_f64(a.re), fmt_f64(a.im));
    }
    s.push_str("]}");
    s
}

#[derive(Deserialize)]
struct ProbeStateDoc {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

/// Parse a probe state from the interchange format, validating qubit count
/// and normalization.
pub fn parse_probe_state(text: &str) -> Result<ProbeState> {
    let doc: ProbeStateDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("probe state: {e}")))?;
    let amplitudes: Vec<Complex64> = doc
        .amplitudes
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ProbeState::new(doc.n, amplitudes)
}

/// Read a probe state from a file on disk.
pub fn read_probe_state_file(path: &std::path::Path) -> Result<ProbeState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read probe file {}: {e}", path.display())))?;
    parse_probe_state(&text)
}

/// QFIM export document: dimension, row-major entries, and the trace and
/// eigenvalue convenience fields.
pub fn qfim_json(f: &QfiMatrix) -> String {
    let spec = spectral(f);
    format!(
        "{{\"n\": {}, \"entries\": {}, \"trace\": {}, \"eigenvalues\": {}}}",
        f.n(),
        json_f64_array(f.entries()),
        fmt_f64(f.trace()),
        json_f64_array(spec.eigenvalues())
    )
}

/// Serialize one duality-bound check with all of its fields.
pub fn duality_report_json(r: &crate::duality::DualityReport) -> String {
    format!(
        "{{\"n\": {}, \"qfi_w\": {}, \"qfi_v\": {}, \"sum\": {}, \"bound\": {}, \"margin\": {}, \"passed\": {}}}",
        r.n,
        fmt_f64(r.qfi_w),
        fmt_f64(r.qfi_v),
        fmt_f64(r.sum),
        fmt_f64(r.bound),
        fmt_f64(r.margin),
        r.passed
    )
}

/// Assemble a CSV document: `#`-prefixed schema/config comment lines, a
/// mandatory header row, then data rows. Fully deterministic (no
/// timestamps), decimal dot, comma delimiter.
pub fn csv_document(config_json: &str, header: &str, rows: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# schema: {SCHEMA_VERSION}");
    let _ = writeln!(s, "# config: {config_json}");
    let _ = writeln!(s, "{header}");
    for row in rows {
        let _ = writeln!(s, "{row}");
    }
    s
}
