//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Tolerances and sample counts are pinned here, not configurable.

use loopnorm::commands::scan::{run_grid, ScanGrid};
use loopnorm_core::bridge::{
    bridge_to_spectrum, complex_kurtosis_ratio, rescale_to_fourier_wiener, sample_bridge,
};
use loopnorm_core::chaos::{
    chaos_project_f, hypercontractivity_check, l2k_block_decomposition, l4_block_decomposition,
    wick_abs2n,
};
use loopnorm_core::deviations::{
    chernoff_shell_bound, probe_sample_exceeds, tail_estimate_from_values, tail_sample_value,
    TailConfig,
};
use loopnorm_core::norms::{
    besov_norm, fl_norm, fourier_besov_norm, fourier_besov_norm_with, DyadicPartition, Exp,
    NormSpec, PartitionMode, WeightForm,
};
use loopnorm_core::rng::GaussianSource;
use loopnorm_core::spectral::{build_path, sample_family, sample_family_annulus};
use loopnorm_core::stats::{c_p_exact, median, summarize, x_statistic};
use loopnorm_core::Complex64;
use rayon::prelude::*;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_01_exact_fourier_identity() {
    // |lhs − (I+II+III)|/|lhs| ≤ 1e-9, 100 seeds, shells 1..=8
    let worst_l4 = (0..100u64)
        .into_par_iter()
        .map(|k| {
            let seed = GaussianSource::derive_seed(101, k);
            let mut worst = 0.0f64;
            for j in 1..=8u32 {
                let family = sample_family(seed, 1, 1 << j).unwrap();
                let dec = l4_block_decomposition(&family, j).unwrap();
                let rhs = dec.paired + dec.no_pair + dec.diagonal;
                worst = worst.max((dec.lhs - rhs).abs() / dec.lhs.abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    // k = 3, shells 1..=5, within 1e-8 (40 seeds: O(shell^5) enumeration)
    let worst_l6 = (0..40u64)
        .into_par_iter()
        .map(|k| {
            let seed = GaussianSource::derive_seed(103, k);
            let mut worst = 0.0f64;
            for j in 1..=5u32 {
                let family = sample_family(seed, 1, 1 << j).unwrap();
                let dec = l2k_block_decomposition(&family, j, 3).unwrap();
                worst = worst.max((dec.lhs - dec.class_total()).abs() / dec.lhs.abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    report(
        "criterion 1 (exact Fourier identity)",
        worst_l4 <= 1e-9 && worst_l6 <= 1e-8,
        &format!("worst l4 residual {worst_l4:.3e} over 100 seeds x j=1..8 (tol 1e-9), worst l2k k=3 residual {worst_l6:.3e} over 40 seeds x j=1..5 (tol 1e-8)"),
    );
}

#[test]
fn criterion_02_moment_oracle() {
    // c_p_exact vs 1e7-sample Monte Carlo within 3 SE for p in {1,2,3,4,6}
    const TOTAL: u64 = 10_000_000;
    const CHUNK: u64 = 100_000;
    let orders = [1.0f64, 2.0, 3.0, 4.0, 6.0];
    let source = GaussianSource::new(2020);
    let partials: Vec<([f64; 5], [f64; 5])> = (0..TOTAL / CHUNK)
        .into_par_iter()
        .map(|block| {
            let mut buf = vec![Complex64::default(); CHUNK as usize];
            source.fill_scalar(block * CHUNK, &mut buf);
            let mut sums = [0.0f64; 5];
            let mut sqs = [0.0f64; 5];
            for g in &buf {
                let a = g.norm_sqr();
                let r = a.sqrt();
                let powers = [r, a, a * r, a * a, a * a * a];
                for (i, v) in powers.into_iter().enumerate() {
                    sums[i] += v;
                    sqs[i] += v * v;
                }
            }
            (sums, sqs)
        })
        .collect();
    let mut detail = String::new();
    let mut pass = true;
    for (i, &p) in orders.iter().enumerate() {
        let sum: f64 = partials.iter().map(|(s, _)| s[i]).sum();
        let sq: f64 = partials.iter().map(|(_, q)| q[i]).sum();
        let mean = sum / TOTAL as f64;
        let var = sq / TOTAL as f64 - mean * mean;
        let se = (var / TOTAL as f64).sqrt();
        let exact = c_p_exact(p).unwrap();
        let ok = (mean - exact).abs() <= 3.0 * se;
        pass &= ok;
        detail.push_str(&format!(
            "p={p}: {mean:.5} vs {exact} ({:.1} SE); ",
            (mean - exact).abs() / se
        ));
    }
    assert_eq!(c_p_exact(2.0).unwrap(), 2.0);
    assert_eq!(c_p_exact(4.0).unwrap(), 8.0);
    report("criterion 2 (moment oracle, 1e7 samples)", pass, &detail);
}

#[test]
fn criterion_03_norm_identities() {
    // fl = fb(p,p) within 1e-12; Sharp besov(p=2) = fb dyadic within 1e-9
    let mut worst_flfb = 0.0f64;
    let mut worst_plancherel = 0.0f64;
    for k in 0..50u64 {
        let seed = GaussianSource::derive_seed(303, k);
        let family = sample_family(seed, 1, 256).unwrap();
        let path = build_path(&family, 1.0).unwrap();
        let part = DyadicPartition::covering(PartitionMode::Sharp, 256);
        let s = 0.3 + 0.4 * (k % 5) as f64 / 5.0;
        let p = Exp::Finite(1.0 + (k % 3) as f64);
        let fl = fl_norm(&path, s, p).unwrap();
        let fb = fourier_besov_norm(&path, s, p, p, &part).unwrap();
        worst_flfb = worst_flfb.max((fl - fb).abs() / fl.abs());

        let via_blocks =
            besov_norm(&path, s, Exp::Finite(2.0), Exp::Infinity, &part, 8 * 256).unwrap();
        let via_shells = fourier_besov_norm_with(
            &path,
            s,
            Exp::Finite(2.0),
            Exp::Infinity,
            &part,
            WeightForm::Dyadic,
        )
        .unwrap();
        worst_plancherel = worst_plancherel.max((via_blocks - via_shells).abs() / via_shells.abs());
    }
    report(
        "criterion 3 (norm identities, 50 paths)",
        worst_flfb <= 1e-12 && worst_plancherel <= 1e-9,
        &format!("fl vs fb(p,p) worst {worst_flfb:.3e} (tol 1e-12), besov vs Plancherel worst {worst_plancherel:.3e} (tol 1e-9)"),
    );
}

#[test]
fn criterion_04_regularity_regime_contrast() {
    // alpha = 1, p = 2, 200 seeds per cell
    let pool = rayon::ThreadPoolBuilder::new().build().unwrap();
    let fb_specs = [
        NormSpec::parse("fbesov:0.4:2:inf").unwrap(),
        NormSpec::parse("fbesov:0.6:2:inf").unwrap(),
    ];
    let (_, fb_verdicts) = run_grid(
        &ScanGrid {
            master_seed: 404,
            specs: &fb_specs,
            alpha: 1.0,
            truncations: &[1 << 10, 1 << 14],
            replicas: 200,
            converge_tol: 0.05,
            diverge_ratio: 1.7,
        },
        &pool,
    )
    .unwrap();
    let convergent_growth = fb_verdicts[0].growth;
    let divergent_growth = fb_verdicts[1].growth;

    let fl_spec = [NormSpec::parse("fl:0.5:.:2").unwrap()];
    let (_, fl_verdicts) = run_grid(
        &ScanGrid {
            master_seed: 405,
            specs: &fl_spec,
            alpha: 1.0,
            truncations: &[1 << 8, 1 << 16],
            replicas: 200,
            converge_tol: 0.05,
            diverge_ratio: 1.7,
        },
        &pool,
    )
    .unwrap();
    let endpoint_ratio = fl_verdicts[0].growth;

    let pass = (convergent_growth - 1.0).abs() < 0.05
        && divergent_growth >= 1.25
        && (1.3..=1.7).contains(&endpoint_ratio);
    report(
        "criterion 4 (regularity regime contrast)",
        pass,
        &format!("fbesov s=0.4 median growth {convergent_growth:.4} (<5%), s=0.6 growth {divergent_growth:.4} (>=1.25), fl s=0.5 ratio {endpoint_ratio:.4} in [1.3, 1.7]"),
    );
}

#[test]
fn criterion_05_large_deviation_tails() {
    // fitted_c > 0 and R² ≥ 0.9 at 1e5 samples, N = 2^10
    let mut detail = String::new();
    let mut pass = true;
    for (seed, spec_text) in [(505u64, "fl:0.3:.:2"), (506, "fbesov:0.5:2:inf")] {
        let spec = NormSpec::parse(spec_text).unwrap();
        let cfg = TailConfig::new(spec, 1.0, 1 << 10, 100_000);
        let values: Vec<f64> = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|k| tail_sample_value(&cfg, seed, k).unwrap())
            .collect();
        let estimate = tail_estimate_from_values(&cfg, &values);
        let c = estimate.fitted_c.unwrap_or(-1.0);
        let r2 = estimate.fit_r2.unwrap_or(0.0);
        pass &= c > 0.0 && r2 >= 0.9;
        detail.push_str(&format!("{spec_text}: c={c:.4}, R²={r2:.4}; "));
    }
    report(
        "criterion 5 (large deviation tails, 1e5 samples)",
        pass,
        &detail,
    );
}

#[test]
fn criterion_06_chernoff_dominance() {
    // empirical P(X_j^{(2)} > K²) ≤ chernoff bound + 3 SE, 1e6 samples
    const SAMPLES: u64 = 1_000_000;
    let mut detail = String::new();
    let mut pass = true;
    for j in [4u32, 8] {
        let inner = 1u32 << (j - 1);
        let outer = 1u32 << j;
        let exceed: (u64, u64) = (0..SAMPLES)
            .into_par_iter()
            .map(|k| {
                let seed = GaussianSource::derive_seed(606 + u64::from(j), k);
                let family = sample_family_annulus(seed, inner, outer).unwrap();
                let x = x_statistic(&family, j, 2.0).unwrap().value;
                (u64::from(x > 3.0), u64::from(x > 4.0))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        for (k_sq, count) in [(3.0f64, exceed.0), (4.0, exceed.1)] {
            let bound = chernoff_shell_bound(j, k_sq.sqrt()).unwrap();
            let p_hat = count as f64 / SAMPLES as f64;
            let slack = 3.0 * (p_hat.max(1.0 / SAMPLES as f64) / SAMPLES as f64).sqrt();
            let ok = p_hat <= bound + slack;
            pass &= ok;
            detail.push_str(&format!(
                "j={j} K²={k_sq}: p̂={p_hat:.2e} ≤ {bound:.2e}+{slack:.1e}; "
            ));
        }
    }
    report(
        "criterion 6 (Chernoff dominance, 1e6 samples)",
        pass,
        &detail,
    );
}

#[test]
fn criterion_07_wick_chaos_suite() {
    // (a) Wick orthogonality within 5 SE at 1e6 samples
    type WickPartial = ([[f64; 3]; 3], [[f64; 3]; 3], [f64; 3], [f64; 3]);
    const TOTAL: u64 = 1_000_000;
    const CHUNK: u64 = 100_000;
    let source = GaussianSource::new(707);
    let partials: Vec<WickPartial> = (0..TOTAL / CHUNK)
        .into_par_iter()
        .map(|block| {
            let mut buf = vec![Complex64::default(); CHUNK as usize];
            source.fill_scalar(block * CHUNK, &mut buf);
            let mut cross = [[0.0f64; 3]; 3];
            let mut cross_sq = [[0.0f64; 3]; 3];
            let mut single = [0.0f64; 3];
            let mut single_sq = [0.0f64; 3];
            for g in &buf {
                let w = [
                    wick_abs2n(*g, 1).unwrap(),
                    wick_abs2n(*g, 2).unwrap(),
                    wick_abs2n(*g, 3).unwrap(),
                ];
                for a in 0..3 {
                    single[a] += w[a];
                    single_sq[a] += w[a] * w[a];
                    for b in 0..3 {
                        let prod = w[a] * w[b];
                        cross[a][b] += prod;
                        cross_sq[a][b] += prod * prod;
                    }
                }
            }
            (cross, cross_sq, single, single_sq)
        })
        .collect();
    let n = TOTAL as f64;
    let mut ortho_pass = true;
    for a in 0..3 {
        let mean = partials.iter().map(|(_, _, s, _)| s[a]).sum::<f64>() / n;
        let sq = partials.iter().map(|(_, _, _, q)| q[a]).sum::<f64>() / n;
        let se = ((sq - mean * mean) / n).sqrt();
        ortho_pass &= mean.abs() <= 5.0 * se;
        for b in 0..3 {
            if a == b {
                continue;
            }
            let mean = partials.iter().map(|(c, _, _, _)| c[a][b]).sum::<f64>() / n;
            let sq = partials.iter().map(|(_, c, _, _)| c[a][b]).sum::<f64>() / n;
            let se = ((sq - mean * mean) / n).sqrt();
            ortho_pass &= mean.abs() <= 5.0 * se;
        }
    }

    // (b) chaos projection reconstruction exact to 1e-12
    let mut recon_worst = 0.0f64;
    for k in 0..20u64 {
        let family = sample_family(GaussianSource::derive_seed(717, k), 1, 1 << 6).unwrap();
        let parts = chaos_project_f(&family, 6, 2).unwrap();
        let total: f64 = parts.iter().map(|(_, v)| v).sum();
        let direct = x_statistic(&family, 6, 4.0).unwrap().value;
        recon_worst = recon_worst.max((total - direct).abs() / direct.max(1.0));
    }

    // (c) E[F_j] ≈ 8 within 3 SE over 1e4 families
    let f_values: Vec<f64> = (0..10_000u64)
        .into_par_iter()
        .map(|k| {
            let family = sample_family(GaussianSource::derive_seed(727, k), 1, 1 << 6).unwrap();
            x_statistic(&family, 6, 4.0).unwrap().value
        })
        .collect();
    let f_summary = summarize(&f_values);
    let f_pass = (f_summary.mean - 8.0).abs() <= 3.0 * f_summary.se;

    // (d) hypercontractivity ratios at (n, q) in {(2, 4), (4, 4)}
    let wick_samples: Vec<f64> = {
        let source = GaussianSource::new(737);
        let mut buf = vec![Complex64::default(); 50_000];
        source.fill_scalar(0, &mut buf);
        buf.iter().map(|g| wick_abs2n(*g, 1).unwrap()).collect()
    };
    let hyper2 = hypercontractivity_check(&wick_samples, 2, 4.0).unwrap();
    let no_pair_samples: Vec<f64> = (0..15_000u64)
        .into_par_iter()
        .map(|k| {
            let family = sample_family(GaussianSource::derive_seed(747, k), 1, 1 << 4).unwrap();
            l4_block_decomposition(&family, 4).unwrap().no_pair
        })
        .collect();
    let hyper4 = hypercontractivity_check(&no_pair_samples, 4, 4.0).unwrap();

    let pass = ortho_pass && recon_worst <= 1e-12 && f_pass && hyper2.pass && hyper4.pass;
    report(
        "criterion 7 (Wick/chaos suite)",
        pass,
        &format!(
            "orthogonality(1e6) {}; reconstruction worst {recon_worst:.2e} (tol 1e-12); E[F]={:.4} ({:.1} SE from 8); hyper (2,4) ratio {:.3} ≤ {:.0}, (4,4) ratio {:.3} ≤ {:.0}",
            if ortho_pass { "ok" } else { "FAIL" },
            f_summary.mean,
            (f_summary.mean - 8.0).abs() / f_summary.se,
            hyper2.ratio,
            hyper2.bound,
            hyper4.ratio,
            hyper4.bound
        ),
    );
}

#[test]
fn criterion_08_measurability_probe() {
    const SAMPLES: u64 = 10_000;
    // convergent regime: (s-1)p = -1.5, eps = 0.5, M0 = 2^12, 3 tail shells
    let convergent = NormSpec::parse("fbesov:0.25:2:inf").unwrap();
    let m0 = 1u32 << 12;
    let exceed: u64 = (0..SAMPLES)
        .into_par_iter()
        .map(|k| {
            u64::from(probe_sample_exceeds(&convergent, 1.0, m0, 8 * m0, 0.5, 808, k).unwrap())
        })
        .sum();
    let convergent_prob = exceed as f64 / SAMPLES as f64;

    // endpoint: (s-1)p = -1, eps = c_2^{1/2}/2 = sqrt(2)/2, one tail shell
    let endpoint = NormSpec::parse("fbesov:0.5:2:inf").unwrap();
    let eps = c_p_exact(2.0).unwrap().sqrt() / 2.0;
    let mut endpoint_probs = Vec::new();
    for m0 in [1u32 << 8, 1 << 11, 1 << 14] {
        let exceed: u64 = (0..SAMPLES)
            .into_par_iter()
            .map(|k| {
                u64::from(probe_sample_exceeds(&endpoint, 1.0, m0, 2 * m0, eps, 818, k).unwrap())
            })
            .sum();
        endpoint_probs.push(exceed as f64 / SAMPLES as f64);
    }

    let pass = convergent_prob <= 0.05 && endpoint_probs.iter().all(|&p| p >= 0.4);
    report(
        "criterion 8 (measurability probe, 1e4 samples/point)",
        pass,
        &format!(
            "convergent prob at M0=2^12: {convergent_prob:.4} (≤0.05); endpoint probs at M0=2^8,2^11,2^14: {endpoint_probs:?} (each ≥0.4)"
        ),
    );
}

#[test]
fn criterion_09_bridge_cross_validation() {
    // E|ĉ_n|² within 5 SE of 1/(πn²), n in {1, 2, 5, 10}
    let frequencies = [1i64, 2, 5, 10];
    let grid = 1usize << 11;
    let spectra: Vec<Vec<Complex64>> = (0..10_000u64)
        .into_par_iter()
        .map(|k| {
            let bridge = sample_bridge(GaussianSource::derive_seed(909, k), grid).unwrap();
            let spectrum = bridge_to_spectrum(&bridge, 16).unwrap();
            frequencies
                .iter()
                .map(|&f| spectrum.coeff_at(f).unwrap())
                .collect()
        })
        .collect();
    let mut law_pass = true;
    let mut detail = String::new();
    for (idx, &f) in frequencies.iter().enumerate() {
        let moments: Vec<f64> = spectra.iter().map(|row| row[idx].norm_sqr()).collect();
        let summary = summarize(&moments);
        let expected = 1.0 / (core::f64::consts::PI * (f * f) as f64);
        let z = (summary.mean - expected).abs() / summary.se;
        law_pass &= z <= 5.0;
        detail.push_str(&format!("n={f}: {:.1}SE; ", z));
    }

    // fourth-moment normality of √(2π)·i·n·ĉ_n in [1.9, 2.1]
    let normalized: Vec<Complex64> = spectra
        .iter()
        .flat_map(|row| {
            frequencies.iter().zip(row).map(|(&f, &c)| {
                c * Complex64::new(
                    0.0,
                    f as f64 * loopnorm_core::bridge::FOURIER_WIENER_RESCALE,
                )
            })
        })
        .collect();
    let kurtosis = complex_kurtosis_ratio(&normalized);
    let kurtosis_pass = (1.9..=2.1).contains(&kurtosis);

    // FL^{0.3,2} median agreement ≤ 5%, 1e3 seeds each
    let bridge_norms: Vec<f64> = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let bridge = sample_bridge(GaussianSource::derive_seed(919, k), 1 << 12).unwrap();
            let spectrum = rescale_to_fourier_wiener(&bridge_to_spectrum(&bridge, 1 << 9).unwrap());
            fl_norm(&spectrum, 0.3, Exp::Finite(2.0)).unwrap()
        })
        .collect();
    let direct_norms: Vec<f64> = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let family = sample_family(GaussianSource::derive_seed(929, k), 1, 1 << 9).unwrap();
            let path = build_path(&family, 1.0).unwrap();
            fl_norm(&path, 0.3, Exp::Finite(2.0)).unwrap()
        })
        .collect();
    let gap = (median(&bridge_norms) / median(&direct_norms) - 1.0).abs();
    let gap_pass = gap <= 0.05;

    report(
        "criterion 9 (bridge cross-validation)",
        law_pass && kurtosis_pass && gap_pass,
        &format!("{detail}fourth moment {kurtosis:.4} in [1.9,2.1]; median gap {gap:.4} ≤ 0.05"),
    );
}

#[test]
fn criterion_10_worker_determinism() {
    // identical config, different worker counts: byte-identical CSV bodies
    let binary = env!("CARGO_BIN_EXE_loopnorm");
    let base = std::env::temp_dir().join(format!("loopnorm-acceptance-{}", std::process::id()));
    let config_path = base.join("config.json");
    std::fs::create_dir_all(&base).unwrap();
    std::fs::write(
        &config_path,
        r#"{"seed": 1010, "tail": {"samples": 4000, "truncation": 256}, "norm": {"replicas": 32, "truncation": 256}}"#,
    )
    .unwrap();

    let mut digests = Vec::new();
    for workers in ["1", "3"] {
        let mut bodies = Vec::new();
        for sub in ["tail", "norm"] {
            let out = base.join(format!("{sub}-w{workers}"));
            let status = std::process::Command::new(binary)
                .args([
                    sub,
                    "--config",
                    config_path.to_str().unwrap(),
                    "--workers",
                    workers,
                    "--out",
                    out.to_str().unwrap(),
                ])
                .status()
                .unwrap();
            assert!(status.success(), "{sub} run failed");
            let table = if sub == "tail" {
                "tail.csv"
            } else {
                "norms.csv"
            };
            bodies.push(std::fs::read(out.join(table)).unwrap());
        }
        digests.push(bodies);
    }
    let identical = digests[0] == digests[1];
    std::fs::remove_dir_all(&base).ok();
    report(
        "criterion 10 (worker-count determinism)",
        identical,
        "tail.csv and norms.csv byte-identical for --workers 1 vs 3",
    );
}
