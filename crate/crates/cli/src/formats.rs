//! JSON wire schemas for core objects.

use loopnorm_core::chaos::ChaosDecomposition;
use loopnorm_core::deviations::TailEstimate;
use loopnorm_core::lattice::Lattice;
use loopnorm_core::spectral::SpectralPath;
use loopnorm_core::Complex64;
use serde_json::{json, Value};

use crate::errors::CliError;

/// `{dim, N, alpha, seed, coeffs: [[n..., re, im], ...]}` with coefficients
/// in lexicographic lattice order.
pub fn spectral_path_json(path: &SpectralPath) -> Value {
    let lattice = path.lattice();
    let coeffs: Vec<Value> = (0..lattice.len())
        .map(|i| {
            let mut entry: Vec<Value> = (0..lattice.dim())
                .map(|axis| json!(lattice.coord(i, axis)))
                .collect();
            entry.push(json!(path.coeffs()[i].re));
            entry.push(json!(path.coeffs()[i].im));
            Value::Array(entry)
        })
        .collect();
    json!({
        "dim": lattice.dim(),
        "N": lattice.radius(),
        "alpha": path.alpha(),
        "seed": path.seed(),
        "coeffs": coeffs,
    })
}

/// Read a path back from the schema written by [`spectral_path_json`].
/// Coefficients must appear in lexicographic lattice order; sampling
/// provenance is not reconstructed.
pub fn spectral_path_from_json(value: &Value) -> Result<SpectralPath, CliError> {
    let bad = |what: &str| CliError::config(format!("path json: {what}"));
    let dim = value["dim"].as_u64().ok_or_else(|| bad("missing dim"))? as usize;
    let radius = value["N"].as_u64().ok_or_else(|| bad("missing N"))? as u32;
    let lattice = Lattice::ball(dim, radius).map_err(|e| bad(&e.to_string()))?;
    let entries = value["coeffs"]
        .as_array()
        .ok_or_else(|| bad("missing coeffs"))?;
    if entries.len() != lattice.len() {
        return Err(bad("coefficient count does not match the lattice"));
    }
    let mut coeffs = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let row = entry
            .as_array()
            .filter(|row| row.len() == dim + 2)
            .ok_or_else(|| bad("coefficient rows are [n..., re, im]"))?;
        for axis in 0..dim {
            if row[axis].as_i64() != Some(lattice.coord(i, axis)) {
                return Err(bad("coefficients out of lexicographic order"));
            }
        }
        let re = row[dim].as_f64().ok_or_else(|| bad("re not a number"))?;
        let im = row[dim + 1]
            .as_f64()
            .ok_or_else(|| bad("im not a number"))?;
        coeffs.push(Complex64::new(re, im));
    }
    SpectralPath::from_coeffs(lattice, coeffs).map_err(|e| bad(&e.to_string()))
}

/// `{j, k, lhs, I, II, error_i, error_ii, III}` plus the identity residual.
pub fn decomposition_json(dec: &ChaosDecomposition) -> Value {
    let total = dec.class_total();
    json!({
        "j": dec.shell,
        "k": dec.half_order,
        "lhs": dec.lhs,
        "I": dec.paired,
        "II": dec.no_pair,
        "error_i": dec.four_of_a_kind,
        "error_ii": dec.partial_pair,
        "III": dec.diagonal,
        "identity_residual": (dec.lhs - total).abs() / dec.lhs.abs().max(f64::MIN_POSITIVE),
    })
}

/// Tail summary `{fitted_c, fit_r2, n_samples, spec, ...}`.
pub fn tail_summary_json(estimate: &TailEstimate, alpha: f64) -> Value {
    json!({
        "spec": estimate.spec.to_string_form(),
        "alpha": alpha,
        "truncation": estimate.truncation,
        "n_samples": estimate.sample_count,
        "fitted_c": estimate.fitted_c,
        "intercept": estimate.intercept,
        "fit_r2": estimate.fit_r2,
        "bins_retained": estimate
            .exceed_counts
            .iter()
            .filter(|&&c| c >= loopnorm_core::deviations::TAIL_MIN_EXCEEDANCES)
            .count(),
    })
}
