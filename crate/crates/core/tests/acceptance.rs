//! Acceptance suite: every release-gating property of the library, one
//! test per criterion, each printing a PASS line with its runtime.
//! Tolerances are pinned in code next to the assertion they guard.

mod common;

use common::*;
use fbfade::monte_carlo::{empirical_second_order, sample_snr_parallel, RngSpec};
use fbfade::*;
use num_complex::Complex64;
use std::time::Instant;

fn pass(criterion: u32, desc: &str, start: Instant) {
    println!("acceptance {criterion:02} ({desc}): PASS in {:.2?}", start.elapsed());
}

fn random_valid_params(rng: &mut SplitMix64) -> ShapeParams {
    ShapeParams::new(
        rng.range(0.2, 5.0),
        rng.range(0.0, 15.0),
        rng.range(0.3, 5.0),
        rng.range(0.3, 20.0),
        rng.range(0.02, 50.0),
        rng.range(0.0, 1.0),
    )
    .unwrap()
}

#[test]
fn acceptance_01_mgf_exactness() {
    let start = Instant::now();
    let mut rng = SplitMix64(0xfb01);
    for _ in 0..20 {
        let p = random_valid_params(&mut rng);
        let at0 = mgf_real(&p, 0.0).unwrap();
        assert!((at0 - 1.0).abs() <= 1e-12, "M(0) = {at0} for {p:?}");
        let h = 1e-6;
        let mean = (mgf_real(&p, h).unwrap() - mgf_real(&p, -h).unwrap()) / (2.0 * h);
        assert!(
            (mean - p.gbar).abs() <= 1e-5 * p.gbar,
            "finite-difference mean {mean} vs γ̄ {} for {p:?}",
            p.gbar
        );
    }
    pass(1, "MGF normalization and mean", start);
}

#[test]
fn acceptance_02_two_route_mgf() {
    let start = Instant::now();
    let mut rng = SplitMix64(0xfb02);
    for _ in 0..10 {
        let p = random_valid_params(&mut rng);
        for k in 0..10 {
            // 7 real points and 3 off-axis points with Re(s) < 0
            let s = if k < 7 {
                Complex64::new(-rng.range(0.01, 12.0), 0.0)
            } else {
                Complex64::new(-rng.range(0.1, 6.0), rng.range(-3.0, 3.0))
            };
            let direct = mgf(&p, s).unwrap();
            let averaged = mgf_via_conditional_average(&p, s, 64).unwrap();
            assert!(
                (direct - averaged).norm() <= 1e-8 * direct.norm(),
                "two-route MGF mismatch at s={s} for {p:?}: {direct} vs {averaged}"
            );
        }
    }
    pass(2, "closed-form vs conditional-average MGF", start);
}

#[test]
fn acceptance_03_special_case_reductions() {
    let start = Instant::now();
    let gbar = 1.0;
    let s_grid: Vec<f64> = (0..50).map(|i| -20.0 + 20.0 * i as f64 / 50.0).collect();

    // (case, reference MGF, tolerance)
    type ReferenceMgf = Box<dyn Fn(f64) -> f64>;
    let rows: Vec<(SpecialCase, ReferenceMgf, f64)> = vec![
        (SpecialCase::OneSidedGaussian { gbar }, Box::new(move |s| mgf_one_sided_gaussian(gbar, s)), 1e-8),
        (SpecialCase::Rayleigh { gbar }, Box::new(move |s| mgf_rayleigh(gbar, s)), 1e-8),
        (SpecialCase::NakagamiM { m: 3.0, gbar }, Box::new(move |s| mgf_nakagami(3.0, gbar, s)), 1e-8),
        (SpecialCase::Hoyt { q: 0.3, gbar }, Box::new(move |s| mgf_hoyt(0.3f64.sqrt(), gbar, s)), 1e-8),
        (SpecialCase::EtaMu { eta: 0.25, mu: 3.0, gbar }, Box::new(move |s| mgf_eta_mu(0.25, 1.5, gbar, s)), 1e-8),
        (SpecialCase::Rice { k: 4.0, gbar }, Box::new(move |s| mgf_rice(4.0, gbar, s)), 1e-3),
        (
            SpecialCase::EtaKappaSym { eta: 0.5, kappa: 3.0, gbar },
            Box::new(move |s| mgf_beckmann(3.0, 0.5, 0.5, gbar, s)),
            1e-3,
        ),
        (
            SpecialCase::EtaKappaAsym { eta: 2.0, kappa: 1.5, gbar },
            Box::new(move |s| mgf_beckmann(1.5, 2.0, 0.0, gbar, s)),
            1e-3,
        ),
        (
            SpecialCase::Beckmann { k: 2.0, q: 0.5, r: 0.8, gbar },
            Box::new(move |s| mgf_beckmann(2.0, 0.5, 0.8, gbar, s)),
            1e-3,
        ),
        (SpecialCase::KappaMu { kappa: 2.5, mu: 3.0, gbar }, Box::new(move |s| mgf_kappa_mu(2.5, 3.0, gbar, s)), 1e-3),
        (
            SpecialCase::RicianShadowed { kappa: 3.0, m: 2.0, gbar },
            Box::new(move |s| mgf_kappa_mu_shadowed(3.0, 1.0, 2.0, gbar, s)),
            1e-8,
        ),
        (
            SpecialCase::KappaMuShadowed { kappa: 5.0, mu: 2.0, m: 1.5, gbar },
            Box::new(move |s| mgf_kappa_mu_shadowed(5.0, 2.0, 1.5, gbar, s)),
            1e-8,
        ),
    ];
    assert_eq!(rows.len(), 12);

    for (case, reference, tol) in rows {
        let p = special_case(case).unwrap();
        for &s in &s_grid {
            let got = mgf_real(&p, s).unwrap();
            let want = reference(s);
            assert!(
                (got - want).abs() <= tol * want.abs(),
                "{case:?} at s={s}: FB {got} vs reference {want} (tol {tol})"
            );
        }
    }
    pass(3, "12-row special-case reduction table", start);
}

/// Dense-grid CDF interpolator for KS tests (piecewise linear on 2^16
/// points; interpolation error far below the KS tolerance).
fn cdf_interp(p: &ShapeParams, hi: f64) -> GridInterp {
    let n = 1 << 16;
    let cfg = InversionConfig::default();
    let grid: Vec<f64> = (1..=n).map(|i| hi * i as f64 / n as f64).collect();
    let mut values = cdf_snr_grid(p, &grid, &cfg).unwrap();
    let mut padded = Vec::with_capacity(n + 1);
    padded.push(0.0);
    padded.append(&mut values);
    GridInterp::new(0.0, hi, padded)
}

#[test]
fn acceptance_04_pdf_cdf_against_sampling() {
    let start = Instant::now();
    let t01 = 0.1 / 1.1; // ϱ² = 0.1
    let sets = [
        ShapeParams::new(1.0, 1.0, 1.0, 1.0, 0.1, t01).unwrap(),
        ShapeParams::new(1.0, 1.0, 1.0, 10.0, 10.0, t01).unwrap(),
        ShapeParams::new(1.0, 10.0, 1.0, 1.0, 0.1, t01).unwrap(),
        ShapeParams::new(1.0, 10.0, 1.0, 10.0, 1.0, t01).unwrap(),
        ShapeParams::new(1.0, 1.0, 2.0, 10.0, 0.1, t01).unwrap(),
        ShapeParams::new(1.0, 10.0, 2.0, 1.0, 10.0, t01).unwrap(),
    ];
    let cfg = InversionConfig::default();

    for (i, p) in sets.iter().enumerate() {
        // normalization with a Chernoff-bounded tail beyond 50γ̄:
        // P(γ > T) <= min over 0 < s < s_min of M(s) e^(-sT)
        let upper = 50.0 * p.gbar;
        let s_min = mgf_singularity(p).unwrap();
        let tail_bound = (1..20)
            .map(|k| {
                let s0 = s_min * k as f64 / 20.0;
                mgf_real(p, s0).unwrap() * (-s0 * upper).exp()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(tail_bound < 1e-7, "set {i}: tail bound {tail_bound}");
        let integral = quad::tanh_sinh_01(
            |x, _| upper * pdf_snr(p, (upper * x).max(1e-12), &cfg).unwrap(),
            1e-9,
            10,
        )
        .unwrap();
        assert!(
            (integral - 1.0).abs() <= 1e-6 + tail_bound,
            "set {i}: ∫ pdf = {integral}"
        );

        // F' = f on a 200-point grid
        let h = 1e-4;
        for j in 1..=200 {
            let g = 6.0 * j as f64 / 200.0;
            let deriv = (cdf_snr(p, g + h, &cfg).unwrap() - cdf_snr(p, g - h, &cfg).unwrap()) / (2.0 * h);
            let f = pdf_snr(p, g, &cfg).unwrap();
            assert!(
                (deriv - f).abs() <= 1e-5 * f.max(1.0),
                "set {i} at γ={g}: F' = {deriv}, f = {f}"
            );
        }

        // KS against 10⁷ samples, with the mean-preservation check on
        // the same draws
        let mut samples = sample_snr_parallel(p, 10_000_000, 0xace0_4000 + i as u64, 16).unwrap();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(
            (mean - p.gbar).abs() <= 4.0 * (var / n).sqrt(),
            "set {i}: sample mean {mean} vs γ̄ {}",
            p.gbar
        );
        let max = samples.iter().cloned().fold(0.0, f64::max);
        let interp = cdf_interp(p, max * 1.001);
        let ks = monte_carlo::ks_statistic(&mut samples, |x| interp.eval(x));
        assert!(ks < 0.001, "set {i}: KS = {ks}");
    }
    pass(4, "PDF/CDF normalization, consistency and KS vs sampling", start);
}

#[test]
fn acceptance_05_envelope_bimodality() {
    let start = Instant::now();
    let p = ShapeParams::new(1.0, 10.0, 1.0, 1.0, 0.1, 0.1 / 1.1).unwrap();
    let cfg = InversionConfig::default();
    let n = 2000;
    let vals: Vec<f64> = (1..=n)
        .map(|i| pdf_envelope(&p, 2.5 * i as f64 / n as f64, 1.0, &cfg).unwrap())
        .collect();
    let mut maxima = 0;
    for i in 1..n - 1 {
        if vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
            maxima += 1;
        }
    }
    assert_eq!(maxima, 2, "expected a bimodal envelope density, found {maxima} local maxima");
    pass(5, "bimodal envelope density", start);
}

/// Analytic-vs-empirical crossing rates for one parameter set. Spawns
/// `realizations` independent traces of `samples_per` points on
/// dedicated RNG sub-streams and pools the counts.
///
/// The quasi-static LoS fluctuation is held fixed within each
/// realization; across realizations the ξ values are drawn by
/// stratified inversion of the m = 1 law (ξ² exponential), which keeps
/// the marginal law and the estimator mean intact while removing the
/// dominant between-realization variance (per-realization crossing
/// rates have a relative std near 3 at deep thresholds for strong LoS,
/// which plain sampling cannot average away in any reasonable number of
/// realizations).
fn lcr_trace_comparison(
    p: &ShapeParams,
    label: &str,
    realizations: u64,
    samples_per: usize,
    seed: u64,
) {
    use rayon::prelude::*;
    assert_eq!(p.m, 1.0, "stratified ξ draw below is specific to m = 1");
    let ctx = DopplerContext::clarke(1.0).unwrap();
    let cfg = LcrConfig::default();
    let thresholds_db = [-20.0, -15.0, -10.0, -5.0, 0.0, 5.0];
    let thresholds: Vec<f64> = thresholds_db.iter().map(|&db| 10f64.powf(db / 20.0)).collect();

    let phys = to_physical(p).unwrap();
    let dt = 0.01; // dt·fd = 0.01, the oversampling limit
    let duration = samples_per as f64 * dt;

    let mut strat = SplitMix64(seed ^ 0x5757_5757);
    let xi_values: Vec<f64> = (0..realizations)
        .map(|r| {
            let u = (r as f64 + strat.f64()) / realizations as f64;
            (-(1.0 - u).ln()).sqrt() // quantile of ξ² ~ Exp(1) at m = 1
        })
        .collect();

    let pooled = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let tr = monte_carlo::sample_trace_fixed_xi(
                &phys,
                duration,
                dt,
                &ctx,
                xi_values[r as usize],
                &RngSpec::new(seed, r),
            )
            .unwrap();
            empirical_second_order(&tr, &thresholds).unwrap()
        })
        .reduce_with(|mut a, b| {
            a.merge(&b).unwrap();
            a
        })
        .unwrap();

    let mut worst = 0.0f64;
    for (j, &u) in thresholds.iter().enumerate() {
        assert!(
            pooled.n_crossings[j] >= 2000,
            "{label} at {} dB: only {} crossings",
            thresholds_db[j],
            pooled.n_crossings[j]
        );
        let analytic = lcr(p, u, &ctx, &cfg).unwrap();
        let hat = pooled.lcr_hat[j];
        let rel = (hat - analytic).abs() / analytic;
        worst = worst.max(rel);
        assert!(
            rel < 0.05,
            "{label} at {} dB: empirical {hat} vs analytic {analytic} ({:.2}%)",
            thresholds_db[j],
            100.0 * rel
        );
        // mean fade duration cross-check at the deep-fade thresholds
        if thresholds_db[j] <= -10.0 {
            let analytic_afd = afd(p, u, &ctx, &cfg).unwrap().seconds;
            let rel = (pooled.afd_hat[j] - analytic_afd).abs() / analytic_afd;
            worst = worst.max(rel);
            assert!(
                rel < 0.05,
                "{label} AFD at {} dB: empirical {} vs analytic {analytic_afd}",
                thresholds_db[j],
                pooled.afd_hat[j]
            );
        }
    }
    println!("  {label}: worst relative error {:.2}%", 100.0 * worst);
}

#[test]
fn acceptance_06_lcr_against_trace_counting() {
    let start = Instant::now();
    let sets = [
        (ShapeParams::new(1.0, 1e-8, 1.0, 1.0, 1.0, 1.0).unwrap(), "near-Rayleigh"),
        (ShapeParams::new(1.0, 1.0, 1.0, 1.0, 1.4, 1.0).unwrap(), "kappa=1 eta=1.4"),
        (ShapeParams::new(1.0, 5.0, 2.0, 1.0, 0.5, 1.0).unwrap(), "kappa=5 mu=2 eta=0.5"),
    ];
    for (i, (p, label)) in sets.iter().enumerate() {
        lcr_trace_comparison(p, label, 200, 1_000_000, 0xfb06_0000 + i as u64);
    }
    pass(6, "crossing rate and fade duration vs trace counting", start);
}

#[test]
fn acceptance_07_rayleigh_second_order_limit() {
    let start = Instant::now();
    let p = ShapeParams::new(1.0, 1e-8, 1.0, 1.0, 1.0, 1.0).unwrap();
    let ctx = DopplerContext::clarke(1.0).unwrap();
    let cfg = LcrConfig::default();
    for i in 0..30 {
        let u = 0.05 + (3.0 - 0.05) * i as f64 / 29.0;
        let n = lcr(&p, u, &ctx, &cfg).unwrap();
        let n_ref = (2.0 * std::f64::consts::PI).sqrt() * u * (-u * u).exp();
        assert!((n - n_ref).abs() <= 1e-4 * n_ref, "LCR at u={u}: {n} vs {n_ref}");
        let t = afd(&p, u, &ctx, &cfg).unwrap().seconds;
        let t_ref = ((u * u).exp() - 1.0) / ((2.0 * std::f64::consts::PI).sqrt() * u);
        assert!((t - t_ref).abs() <= 1e-4 * t_ref, "AFD at u={u}: {t} vs {t_ref}");
    }
    pass(7, "classical Rayleigh LCR/AFD limit", start);
}

#[test]
fn acceptance_08_second_order_parameter_trends() {
    let start = Instant::now();
    let u = 10f64.powf(-30.0 / 20.0); // -30 dB
    let ctx = DopplerContext::clarke(1.0).unwrap();
    let cfg = LcrConfig::default();
    let base = |kappa: f64, mu: f64, eta: f64| ShapeParams::new(1.0, kappa, mu, 1.0, eta, 1.0).unwrap();

    // deep-fade crossings drop as clusters are added
    let lcr_mu1 = lcr(&base(1.0, 1.0, 1.0), u, &ctx, &cfg).unwrap();
    let lcr_mu3 = lcr(&base(1.0, 3.0, 1.0), u, &ctx, &cfg).unwrap();
    assert!(lcr_mu3 < lcr_mu1, "LCR should fall with μ: {lcr_mu1} -> {lcr_mu3}");

    // and as the LoS strengthens
    let lcr_k1 = lcr(&base(1.0, 1.0, 1.0), u, &ctx, &cfg).unwrap();
    let lcr_k10 = lcr(&base(10.0, 1.0, 1.0), u, &ctx, &cfg).unwrap();
    assert!(lcr_k10 < lcr_k1, "LCR should fall with κ: {lcr_k1} -> {lcr_k10}");

    // and grow as the diffuse imbalance is relaxed toward η = 1
    let lcr_eta_low = lcr(&base(1.0, 1.0, 0.04), u, &ctx, &cfg).unwrap();
    let lcr_eta_one = lcr(&base(1.0, 1.0, 1.0), u, &ctx, &cfg).unwrap();
    assert!(lcr_eta_one > lcr_eta_low, "LCR should grow with η: {lcr_eta_low} -> {lcr_eta_one}");

    // deep-fade duration is insensitive to η
    let afd_low = afd(&base(1.0, 1.0, 0.04), u, &ctx, &cfg).unwrap().seconds;
    let afd_one = afd(&base(1.0, 1.0, 1.0), u, &ctx, &cfg).unwrap().seconds;
    let spread = (afd_low - afd_one).abs() / afd_one;
    assert!(spread < 0.02, "AFD spread across η = {:.2}%", 100.0 * spread);
    pass(8, "deep-fade trend suite", start);
}

#[test]
fn acceptance_09_symbol_error_probability() {
    let start = Instant::now();
    let t02 = 0.2 / 1.2; // ϱ² = 0.2

    // vanishing-SNR limits
    let p0 = ShapeParams::new(1e-12, 10.0, 2.0, 4.0, 0.5, t02).unwrap();
    assert!((sep_dbpsk(&p0).unwrap() - 0.5).abs() < 1e-11);
    assert!((sep_mfsk_noncoherent(&p0, 2).unwrap() - 0.5).abs() < 1e-10);
    assert!((sep_mfsk_noncoherent(&p0, 4).unwrap() - 0.75).abs() < 1e-10);

    // DBPSK vs direct numerical averaging of the AWGN kernel
    let p = ShapeParams::new(10.0, 10.0, 2.0, 4.0, 0.5, 1.0 / 6.0).unwrap();
    let cfg = InversionConfig::default();
    let upper = 60.0;
    let quad_route = quad::tanh_sinh_01(
        |x, _| {
            let g = (upper * x).max(1e-12);
            upper * 0.5 * (-g).exp() * pdf_snr(&p, g, &cfg).unwrap()
        },
        1e-10,
        11,
    )
    .unwrap();
    let closed = sep_dbpsk(&p).unwrap();
    assert!(
        (quad_route - closed).abs() <= 1e-6 * closed,
        "DBPSK: quadrature {quad_route} vs closed {closed}"
    );

    // explicit forms equal the MGF route (the ops assert 1e-12
    // internally; exercise them across the sweep) and the published
    // ordering DBPSK < 2-FSK < 4-FSK holds above 5 dB
    for i in 0..30 {
        let gbar_db = 30.0 * i as f64 / 29.0;
        let gbar = 10f64.powf(gbar_db / 10.0);
        let pp = ShapeParams::new(gbar, 10.0, 2.0, 4.0, 0.5, t02).unwrap();
        let d = sep_dbpsk(&pp).unwrap();
        let f2 = sep_mfsk_noncoherent(&pp, 2).unwrap();
        let f4 = sep_mfsk_noncoherent(&pp, 4).unwrap();
        if gbar_db >= 5.0 {
            assert!(d < f2 && f2 < f4, "ordering at {gbar_db} dB: {d}, {f2}, {f4}");
        }
    }

    // Monte Carlo SEP oracle: kernel averaged over 10⁷ fading draws
    let shape = ShapeParams::new(1.0, 10.0, 2.0, 4.0, 0.5, 1.0 / 6.0).unwrap();
    let w = sample_snr_parallel(&shape, 10_000_000, 0xfb09, 16).unwrap();
    let kernel_4fsk = |g: f64| 1.5 * (-0.5 * g).exp() - (-2.0 * g / 3.0).exp() + 0.25 * (-0.75 * g).exp();
    let kernel_dbpsk = |g: f64| 0.5 * (-g).exp();
    for gbar_db in [0.0, 10.0, 20.0, 30.0] {
        let gbar = 10f64.powf(gbar_db / 10.0);
        let pp = ShapeParams::new(gbar, 10.0, 2.0, 4.0, 0.5, 1.0 / 6.0).unwrap();
        for (kernel, analytic, label) in [
            (&kernel_4fsk as &dyn Fn(f64) -> f64, sep_mfsk_noncoherent(&pp, 4).unwrap(), "4-FSK"),
            (&kernel_dbpsk as &dyn Fn(f64) -> f64, sep_dbpsk(&pp).unwrap(), "DBPSK"),
        ] {
            let (mut sum, mut sum2) = (0.0f64, 0.0f64);
            for &wi in &w {
                let v = kernel(gbar * wi);
                sum += v;
                sum2 += v * v;
            }
            let n = w.len() as f64;
            let mean = sum / n;
            let se = ((sum2 / n - mean * mean) / n).sqrt();
            assert!(
                (mean - analytic).abs() <= 3.0 * se,
                "{label} at {gbar_db} dB: MC {mean} (se {se}) vs analytic {analytic}"
            );
        }
    }
    pass(9, "symbol error probability routes, ordering and MC", start);
}

#[test]
fn acceptance_10_phi2_series_vs_inversion() {
    let start = Instant::now();
    // real-roots parameter set
    let p = ShapeParams::new(1.0, 1.0, 1.0, 2.0, 0.5, 0.5).unwrap();
    let f = factorize(&p).unwrap();
    for r in [f.delta1, f.delta2, f.c1, f.c2] {
        assert!(r.im == 0.0, "test set must have real roots, got {r}");
    }
    let cfg = InversionConfig::default();
    let exponents = [0.5 * p.mu, 0.5 * p.mu, -p.m, -p.m, p.m, p.m];
    for &gamma in &[0.02, 0.035, 0.05, 0.075, 0.1] {
        // the -m exponent slots take the roots of the diffuse (α₂)
        // quadratic and the +m slots the roots of the LoS-coupled (α₁)
        // quadratic; that association is forced by matching the
        // factored MGF term by term against the series transform pair
        let args = [
            -gamma / (p.gbar * (p.eta * f.alpha2).sqrt()),
            -gamma * p.eta.sqrt() / (p.gbar * f.alpha2.sqrt()),
            -gamma * f.c1.re / p.gbar,
            -gamma * f.c2.re / p.gbar,
            -gamma * f.delta1.re / p.gbar,
            -gamma * f.delta2.re / p.gbar,
        ];
        let series = phi2_series_oracle(&exponents, p.mu, &args, 30).unwrap();
        let prefactor = f.alpha2.powf(p.m - 0.5 * p.mu) * gamma.powf(p.mu - 1.0)
            / (p.gbar.powf(p.mu)
                * special::log_gamma(p.mu).unwrap().exp()
                * f.alpha1.powf(p.m));
        let assembled = prefactor * series;
        let inverted = pdf_snr(&p, gamma, &cfg).unwrap();
        assert!(
            (assembled - inverted).abs() <= 1e-6 * inverted,
            "γ={gamma}: series route {assembled} vs inversion {inverted}"
        );
    }
    pass(10, "multivariate series vs inversion at small γ", start);
}
