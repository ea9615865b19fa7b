//! `sample`: emit one spectral path (JSON schema plus a coefficient table).

use loopnorm_core::norms::Exp;
use loopnorm_core::spectral::{build_path, sample_family};

use crate::config::ExperimentConfig;
use crate::formats::spectral_path_json;
use crate::output::{fmt_f64, RunWriter};

use super::CommandResult;

pub fn run(config: &ExperimentConfig, writer: &mut RunWriter) -> CommandResult {
    let section = &config.sample;
    let family = sample_family(config.seed, section.dim, section.truncation)?;
    let path = build_path(&family, section.alpha)?;

    writer.write_json("path", &spectral_path_json(&path))?;

    let mut header: Vec<String> = (0..section.dim).map(|a| format!("n{}", a + 1)).collect();
    header.push("re".into());
    header.push("im".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = (0..path.lattice().len())
        .map(|i| {
            let mut row: Vec<String> = (0..section.dim)
                .map(|axis| path.lattice().coord(i, axis).to_string())
                .collect();
            row.push(fmt_f64(path.coeffs()[i].re));
            row.push(fmt_f64(path.coeffs()[i].im));
            row
        })
        .collect();
    writer.write_table("coefficients", &header_refs, &rows)?;

    let energy = loopnorm_core::norms::fl_norm(&path, 0.0, Exp::Finite(2.0))?;
    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "dim": section.dim,
            "truncation": section.truncation,
            "alpha": section.alpha,
            "coefficients": path.lattice().len(),
            "l2_energy": energy,
        }),
    )?;
    Ok(Vec::new())
}
