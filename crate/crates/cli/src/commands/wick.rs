//! `wick`: Hermite values on a grid and the Wick-ordered `|g|^{2n}` tables.

use loopnorm_core::chaos::{hermite, wick_abs2n};
use loopnorm_core::Complex64;

use crate::config::ExperimentConfig;
use crate::output::{fmt_f64, RunWriter};

use super::CommandResult;

pub fn run(config: &ExperimentConfig, writer: &mut RunWriter) -> CommandResult {
    let section = &config.wick;

    let mut hermite_rows = Vec::new();
    for n in 0..=section.hermite_max {
        for &x in &section.x_grid {
            hermite_rows.push(vec![n.to_string(), fmt_f64(x), fmt_f64(hermite(n, x))]);
        }
    }
    writer.write_table("hermite", &["n", "x", "value"], &hermite_rows)?;

    // Wick table over |g|² values; g placed on the real axis, the Wick
    // polynomials are radial
    let mut wick_rows = Vec::new();
    for order in 1..=3u32 {
        for &a in &[0.0f64, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let g = Complex64::new(a.sqrt(), 0.0);
            wick_rows.push(vec![
                order.to_string(),
                fmt_f64(a),
                fmt_f64(wick_abs2n(g, order).expect("order in range")),
            ]);
        }
    }
    writer.write_table("wick", &["n", "abs_g_sq", "value"], &wick_rows)?;

    writer.write_json(
        "summary",
        &serde_json::json!({
            "hermite_max": section.hermite_max,
            // coefficients of :|g|^{2n}: in powers of |g|², constant last
            "wick_coefficients": {
                "1": [1.0, -2.0],
                "2": [1.0, -8.0, 8.0],
                "3": [1.0, -18.0, 72.0, -48.0],
            },
            "variance_convention": 2.0,
        }),
    )?;
    let _ = config.seed;
    Ok(Vec::new())
}
