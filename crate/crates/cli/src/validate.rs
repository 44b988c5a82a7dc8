//! Built-in consistency suites wiring the Monte Carlo engine against
//! the analytic routes; `fbfade validate` runs them and emits a
//! machine-readable report.

use fbfade::monte_carlo::{
    empirical_second_order, ks_statistic, sample_snr_parallel, sample_trace_fixed_xi, RngSpec,
};
use fbfade::*;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Two-route MGF agreement: closed form vs the conditional-average
/// quadrature, 1e-8 relative.
pub fn suite_mgf(seed: u64) -> Vec<Check> {
    let mut mix = seed;
    let mut next = move || {
        mix = mix.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (mix >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut checks = Vec::new();
    for i in 0..5 {
        let p = ShapeParams::new(
            0.3 + 3.0 * next(),
            10.0 * next(),
            0.4 + 3.0 * next(),
            0.4 + 8.0 * next(),
            0.05 + 10.0 * next(),
            next(),
        )
        .unwrap();
        let mut worst = 0.0f64;
        for k in 1..=5 {
            let s = Complex64::new(-2.5 * k as f64 * next() - 0.01, 0.0);
            let direct = mgf(&p, s).unwrap();
            let avg = mgf_via_conditional_average(&p, s, 64).unwrap();
            worst = worst.max((direct - avg).norm() / direct.norm());
        }
        checks.push(check(
            format!("mgf_two_route_{i}"),
            worst <= 1e-8,
            format!("worst relative gap {worst:.3e} (tolerance 1e-8)"),
        ));
    }
    checks
}

/// Sampled SNR law vs the inversion CDF (KS) and density normalization.
pub fn suite_first_order(seed: u64) -> Vec<Check> {
    let sets = [
        ShapeParams::new(1.0, 1.0, 1.0, 1.0, 0.1, 0.1 / 1.1).unwrap(),
        ShapeParams::new(1.0, 10.0, 2.0, 1.5, 0.3, 0.7).unwrap(),
    ];
    let cfg = InversionConfig::default();
    let mut checks = Vec::new();
    for (i, p) in sets.iter().enumerate() {
        let n = 1_000_000;
        let mut samples = sample_snr_parallel(p, n, seed ^ (0x10 + i as u64), 16).unwrap();
        let hi = samples.iter().cloned().fold(0.0, f64::max) * 1.001;
        let grid_n = 1 << 14;
        let grid: Vec<f64> = (1..=grid_n).map(|k| hi * k as f64 / grid_n as f64).collect();
        let cdf = cdf_snr_grid(p, &grid, &cfg).unwrap();
        let step = hi / grid_n as f64;
        let ks = ks_statistic(&mut samples, |x| {
            if x <= step {
                return cdf[0] * (x / step).max(0.0);
            }
            let fidx = x / step - 1.0;
            let idx = (fidx as usize).min(grid_n - 2);
            let frac = fidx - idx as f64;
            cdf[idx] * (1.0 - frac) + cdf[idx + 1] * frac
        });
        checks.push(check(
            format!("first_order_ks_{i}"),
            ks < 0.002,
            format!("KS(ECDF@1e6, analytic CDF) = {ks:.5} (tolerance 0.002)"),
        ));

        let upper = 50.0 * p.gbar;
        let integral = quad::tanh_sinh_01(
            |x, _| upper * pdf_snr(p, (upper * x).max(1e-12), &cfg).unwrap(),
            1e-9,
            10,
        )
        .unwrap();
        checks.push(check(
            format!("first_order_normalization_{i}"),
            (integral - 1.0).abs() < 1e-6,
            format!("integral of the density = {integral:.9} (tolerance 1e-6 around 1)"),
        ));
    }
    checks
}

/// Analytic crossing rate and fade duration vs trace counting, with the
/// LoS fluctuation stratified across realizations.
pub fn suite_second_order(seed: u64) -> Vec<Check> {
    let p = ShapeParams::new(1.0, 1.0, 1.0, 1.0, 1.4, 1.0).unwrap();
    let phys = to_physical(&p).unwrap();
    let ctx = DopplerContext::clarke(1.0).unwrap();
    let cfg = LcrConfig::default();
    let realizations = 50u64;
    let samples_per = 200_000usize;
    let dt = 0.01;
    let thresholds_db = [-10.0, -5.0, 0.0];
    let thresholds: Vec<f64> = thresholds_db.iter().map(|&db| 10f64.powf(db / 20.0)).collect();

    let mut mix = seed ^ 0x2a2a;
    let mut next = move || {
        mix = mix.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (mix >> 11) as f64 / (1u64 << 53) as f64
    };
    let xi: Vec<f64> = (0..realizations)
        .map(|r| {
            let u = (r as f64 + next()) / realizations as f64;
            (-(1.0 - u).ln()).sqrt()
        })
        .collect();

    // collect in realization order, then merge sequentially so the
    // pooled floating-point sums are identical run to run
    let parts: Vec<_> = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let tr = sample_trace_fixed_xi(
                &phys,
                samples_per as f64 * dt,
                dt,
                &ctx,
                xi[r as usize],
                &RngSpec::new(seed, r),
            )
            .unwrap();
            empirical_second_order(&tr, &thresholds).unwrap()
        })
        .collect();
    let mut pooled = parts[0].clone();
    for part in &parts[1..] {
        pooled.merge(part).unwrap();
    }

    let mut checks = Vec::new();
    for (j, &u) in thresholds.iter().enumerate() {
        let analytic = lcr(&p, u, &ctx, &cfg).unwrap();
        let rel = (pooled.lcr_hat[j] - analytic).abs() / analytic;
        checks.push(check(
            format!("second_order_lcr_{}dB", thresholds_db[j]),
            rel < 0.10 && pooled.n_crossings[j] >= 200,
            format!(
                "empirical {:.5e} vs analytic {:.5e} ({:.2}% off, {} crossings, tolerance 10%)",
                pooled.lcr_hat[j],
                analytic,
                100.0 * rel,
                pooled.n_crossings[j]
            ),
        ));
    }
    let u = thresholds[0];
    let analytic = afd(&p, u, &ctx, &cfg).unwrap().seconds;
    let rel = (pooled.afd_hat[0] - analytic).abs() / analytic;
    checks.push(check(
        "second_order_afd_-10dB",
        rel < 0.10,
        format!(
            "empirical {:.5e} s vs analytic {:.5e} s ({:.2}% off, tolerance 10%)",
            pooled.afd_hat[0],
            analytic,
            100.0 * rel
        ),
    ));
    checks
}

/// Error-probability kernels averaged over sampled fading vs the
/// closed forms.
pub fn suite_sep(seed: u64) -> Vec<Check> {
    let shape = ShapeParams::new(1.0, 10.0, 2.0, 4.0, 0.5, 0.2 / 1.2).unwrap();
    let w = sample_snr_parallel(&shape, 1_000_000, seed ^ 0x5e9, 16).unwrap();
    let kernel_4fsk = |g: f64| 1.5 * (-0.5 * g).exp() - (-2.0 * g / 3.0).exp() + 0.25 * (-0.75 * g).exp();
    let kernel_dbpsk = |g: f64| 0.5 * (-g).exp();
    let mut checks = Vec::new();
    for gbar in [1.0, 10.0] {
        let p = ShapeParams::new(gbar, 10.0, 2.0, 4.0, 0.5, 0.2 / 1.2).unwrap();
        for (label, kernel, analytic) in [
            ("dbpsk", &kernel_dbpsk as &dyn Fn(f64) -> f64, sep_dbpsk(&p).unwrap()),
            ("4fsk", &kernel_4fsk as &dyn Fn(f64) -> f64, sep_mfsk_noncoherent(&p, 4).unwrap()),
        ] {
            let (mut sum, mut sum2) = (0.0, 0.0);
            for &wi in &w {
                let v = kernel(gbar * wi);
                sum += v;
                sum2 += v * v;
            }
            let n = w.len() as f64;
            let mean = sum / n;
            let se = ((sum2 / n - mean * mean) / n).sqrt();
            let z = (mean - analytic).abs() / se;
            checks.push(check(
                format!("sep_{label}_gbar{gbar}"),
                z <= 4.0,
                format!("MC {mean:.6e} vs analytic {analytic:.6e} ({z:.2} standard errors, tolerance 4)"),
            ));
        }
    }
    checks
}

pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    match suite {
        "mgf" => checks.extend(suite_mgf(seed)),
        "firstorder" => checks.extend(suite_first_order(seed)),
        "secondorder" => checks.extend(suite_second_order(seed)),
        "sep" => checks.extend(suite_sep(seed)),
        "all" => {
            checks.extend(suite_mgf(seed));
            checks.extend(suite_first_order(seed));
            checks.extend(suite_second_order(seed));
            checks.extend(suite_sep(seed));
        }
        other => {
            return Err(FbError::domain(
                "suite",
                format!("unknown suite `{other}` (expected mgf|firstorder|secondorder|sep|all)"),
            ))
        }
    }
    Ok(checks)
}
