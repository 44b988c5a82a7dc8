//! Generative engine for the physical fading model: i.i.d. power
//! samples, time-correlated envelope traces with a Clarke Doppler
//! spectrum, and the empirical estimators (histogram, ECDF/KS, crossing
//! counting) used to validate every analytic route.
//!
//! All randomness flows from a ChaCha8 stream keyed by [`RngSpec`];
//! normal and Gamma variates are generated in-repo (Box-Muller and
//! Marsaglia-Tsang) so the (seed, stream) → sample-sequence contract
//! does not depend on distribution crates.

use crate::error::{FbError, Result};
use crate::params::PhysicalParams;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::io::{self, Read, Write};

/// Deterministic RNG addressing: a seed plus a sub-stream id. Equal
/// specs produce identical sample sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    /// Same seed, different sub-stream; the addressing scheme for
    /// parallel realizations.
    pub fn substream(&self, stream: u64) -> Self {
        RngSpec { seed: self.seed, stream }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Uniform on (0, 1], 53-bit resolution.
#[inline]
fn u01_open(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((rng.next_u64() >> 11) + 1) as f64 * SCALE
}

/// Uniform on [0, 1), 53-bit resolution.
#[inline]
fn u01_half_open(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Standard normal pair by the Box-Muller transform.
#[inline]
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = (-2.0 * u01_open(rng).ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u01_half_open(rng);
    (r * theta.cos(), r * theta.sin())
}

/// Gamma(shape, scale 1) variate by Marsaglia-Tsang rejection, with the
/// u^(1/shape) boost for shape < 1.
fn gamma_variate(rng: &mut ChaCha8Rng, shape: f64) -> f64 {
    if shape < 1.0 {
        let boost = u01_open(rng).powf(1.0 / shape);
        return boost * gamma_variate_ge1(rng, shape + 1.0);
    }
    gamma_variate_ge1(rng, shape)
}

fn gamma_variate_ge1(rng: &mut ChaCha8Rng, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, _) = normal_pair(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u = u01_open(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v3;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v3 + v3.ln()) {
            return d * v3;
        }
    }
}

/// Squared LoS fluctuation ξ² ~ Gamma(m, 1/m), E[ξ²] = 1.
#[inline]
fn xi_squared(rng: &mut ChaCha8Rng, m: f64) -> f64 {
    gamma_variate(rng, m) / m
}

fn check_phys(phys: &PhysicalParams) -> Result<()> {
    if phys.mu_int < 1 {
        return Err(FbError::domain("mu", "cluster count must be >= 1"));
    }
    if !(phys.m > 0.0) {
        return Err(FbError::domain("m", "LoS fluctuation shape must be > 0"));
    }
    if !(phys.sigma_x2 >= 0.0) || !(phys.sigma_y2 >= 0.0) {
        return Err(FbError::domain("sigma", "variances must be >= 0"));
    }
    if !(phys.omega > 0.0) {
        return Err(FbError::domain("omega", "total power must be > 0"));
    }
    Ok(())
}

/// i.i.d. received-power samples W from the generative model.
///
/// Each draw takes a fresh ξ² ~ Gamma(m, 1/m) and sums μ clusters of
/// Gaussians around the per-cluster LoS amplitudes p/√μ, q/√μ (only p²
/// and q² enter any statistic, so the equal split is one valid choice).
/// SNR samples are W·γ̄/Ω; with the default Ω = γ̄ conversion they
/// coincide with W.
pub fn sample_power(phys: &PhysicalParams, n: usize, rng_spec: &RngSpec) -> Result<Vec<f64>> {
    check_phys(phys)?;
    let mu = phys.mu_int as usize;
    let sx = phys.sigma_x2.sqrt();
    let sy = phys.sigma_y2.sqrt();
    let sqrt_mu = (mu as f64).sqrt();
    let (pi, qi) = (phys.p / sqrt_mu, phys.q / sqrt_mu);
    let mut rng = rng_spec.rng();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let xi = xi_squared(&mut rng, phys.m).sqrt();
        let mut w = 0.0;
        for _ in 0..mu {
            let (zx, zy) = normal_pair(&mut rng);
            let a = sx * zx + pi * xi;
            let b = sy * zy + qi * xi;
            w += a * a + b * b;
        }
        out.push(w);
    }
    Ok(out)
}

/// i.i.d. SNR samples for a shape-parameter set (Ω = γ̄).
pub fn sample_snr(params: &crate::params::ShapeParams, n: usize, rng_spec: &RngSpec) -> Result<Vec<f64>> {
    let phys = crate::params::to_physical(params)?;
    sample_power(&phys, n, rng_spec)
}

/// SNR samples split deterministically over `chunks` sub-streams
/// (stream ids 0..chunks of the given seed) and generated in parallel.
/// The output is independent of the worker count.
pub fn sample_snr_parallel(
    params: &crate::params::ShapeParams,
    n: usize,
    seed: u64,
    chunks: usize,
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    let phys = crate::params::to_physical(params)?;
    let chunks = chunks.max(1);
    let per = n / chunks;
    let rem = n % chunks;
    let sizes: Vec<usize> = (0..chunks).map(|i| per + usize::from(i < rem)).collect();
    let parts: Result<Vec<Vec<f64>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &sz)| sample_power(&phys, sz, &RngSpec::new(seed, i as u64)))
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

/// Number of sinusoids per Gaussian process in the sum-of-sinusoids
/// synthesizer.
const SOS_SINUSOIDS: usize = 32;

/// Oversampling guard: dt·fd above this misses crossings.
const MAX_DT_FD: f64 = 0.01;

/// A zero-mean, unit-variance Gaussian process with Clarke
/// autocorrelation J₀(2π fd τ), synthesized as a sum of sinusoids with
/// arrival angles on a randomly offset midpoint grid over [0, π).
/// Exactly stationary, no filter warm-up.
///
/// cos(z cos α) has period π in α and only even harmonics, so an
/// N-point equispaced grid over [0, π) makes the time-averaged
/// autocorrelation (1/N) Σ cos(2πfdτ cos αₙ) match J₀ to the aliasing
/// term 2 J_{2N}, which is negligible for any realizable lag — and
/// that holds for every random offset, not just on ensemble average.
pub struct ClarkeProcess {
    cos_ph: [f64; SOS_SINUSOIDS],
    sin_ph: [f64; SOS_SINUSOIDS],
    cos_st: [f64; SOS_SINUSOIDS],
    sin_st: [f64; SOS_SINUSOIDS],
    amp: f64,
    steps_since_renorm: u32,
}

impl ClarkeProcess {
    pub fn new(fd: f64, dt: f64, rng: &mut ChaCha8Rng) -> Self {
        let n = SOS_SINUSOIDS;
        let offset = u01_half_open(rng);
        let mut cos_ph = [0.0; SOS_SINUSOIDS];
        let mut sin_ph = [0.0; SOS_SINUSOIDS];
        let mut cos_st = [0.0; SOS_SINUSOIDS];
        let mut sin_st = [0.0; SOS_SINUSOIDS];
        for k in 0..n {
            let alpha = (k as f64 + offset) * std::f64::consts::PI / n as f64;
            let omega = 2.0 * std::f64::consts::PI * fd * alpha.cos();
            let phase = 2.0 * std::f64::consts::PI * u01_half_open(rng);
            cos_ph[k] = phase.cos();
            sin_ph[k] = phase.sin();
            cos_st[k] = (omega * dt).cos();
            sin_st[k] = (omega * dt).sin();
        }
        ClarkeProcess {
            cos_ph,
            sin_ph,
            cos_st,
            sin_st,
            amp: (2.0 / n as f64).sqrt(),
            steps_since_renorm: 0,
        }
    }

    /// Current sample; advances the oscillator bank by one step.
    #[inline]
    pub fn next_sample(&mut self) -> f64 {
        let mut acc = 0.0;
        for k in 0..SOS_SINUSOIDS {
            acc += self.cos_ph[k];
            let c = self.cos_ph[k] * self.cos_st[k] - self.sin_ph[k] * self.sin_st[k];
            let s = self.sin_ph[k] * self.cos_st[k] + self.cos_ph[k] * self.sin_st[k];
            self.cos_ph[k] = c;
            self.sin_ph[k] = s;
        }
        self.steps_since_renorm += 1;
        if self.steps_since_renorm == 4096 {
            self.steps_since_renorm = 0;
            for k in 0..SOS_SINUSOIDS {
                let norm = (self.cos_ph[k] * self.cos_ph[k] + self.sin_ph[k] * self.sin_ph[k]).sqrt();
                self.cos_ph[k] /= norm;
                self.sin_ph[k] /= norm;
            }
        }
        self.amp * acc
    }
}

/// Convenience wrapper generating n samples of one Clarke process.
pub fn sample_gaussian_process(n: usize, fd: f64, dt: f64, rng_spec: &RngSpec) -> Vec<f64> {
    let mut rng = rng_spec.rng();
    let mut proc = ClarkeProcess::new(fd, dt, &mut rng);
    (0..n).map(|_| proc.next_sample()).collect()
}

/// A time-sampled, Ω-normalized envelope realization.
#[derive(Debug, Clone)]
pub struct FadingTrace {
    /// Envelope samples, normalized so the ensemble mean square is 1.
    pub samples: Vec<f64>,
    /// Sample interval, seconds.
    pub dt: f64,
    /// Maximum Doppler shift, Hz.
    pub fd: f64,
    /// LoS fluctuation in effect at the start of the trace (the only
    /// one, unless a finite `ts_ratio` re-draws it).
    pub xi: f64,
    /// Generative parameters of the realization.
    pub params: PhysicalParams,
}

/// Correlated envelope trace from the physical model.
///
/// Each of the 2μ Gaussian processes carries the Clarke autocorrelation
/// J₀(2π fd τ). The LoS fluctuation ξ is quasi-static: one value per
/// trace by default (`ts_ratio` = ∞), or redrawn every ts_ratio/fd
/// seconds for finite ratios >= 1.
pub fn sample_trace(
    phys: &PhysicalParams,
    duration: f64,
    dt: f64,
    ctx: &crate::second_order::DopplerContext,
    ts_ratio: f64,
    rng_spec: &RngSpec,
) -> Result<FadingTrace> {
    if !(ts_ratio >= 1.0) {
        return Err(FbError::domain("ts_ratio", format!("time-scale separation must be >= 1, got {ts_ratio}")));
    }
    let redraw_every = if ts_ratio.is_infinite() {
        usize::MAX
    } else {
        ((ts_ratio / (ctx.fd * dt)).round() as usize).max(1)
    };
    trace_impl(phys, duration, dt, ctx, redraw_every, None, rng_spec)
}

/// Trace with the LoS fluctuation pinned to a caller-supplied ξ for the
/// whole realization; used for conditional (fixed-shadowing) studies
/// and for external variance-reduction schemes that draw ξ themselves.
pub fn sample_trace_fixed_xi(
    phys: &PhysicalParams,
    duration: f64,
    dt: f64,
    ctx: &crate::second_order::DopplerContext,
    xi: f64,
    rng_spec: &RngSpec,
) -> Result<FadingTrace> {
    if !(xi >= 0.0) {
        return Err(FbError::domain("xi", format!("LoS fluctuation must be >= 0, got {xi}")));
    }
    trace_impl(phys, duration, dt, ctx, usize::MAX, Some(xi), rng_spec)
}

fn trace_impl(
    phys: &PhysicalParams,
    duration: f64,
    dt: f64,
    ctx: &crate::second_order::DopplerContext,
    redraw_every: usize,
    fixed_xi: Option<f64>,
    rng_spec: &RngSpec,
) -> Result<FadingTrace> {
    check_phys(phys)?;
    if !(dt > 0.0) || !(duration >= dt) {
        return Err(FbError::domain("dt", format!("need 0 < dt <= duration, got dt={dt}, duration={duration}")));
    }
    if dt * ctx.fd > MAX_DT_FD * (1.0 + 1e-12) {
        return Err(FbError::domain(
            "dt",
            format!("oversampling guard: dt·fd = {} exceeds {MAX_DT_FD}", dt * ctx.fd),
        ));
    }

    let n = (duration / dt).round().max(1.0) as usize;
    let mu = phys.mu_int as usize;
    let mut rng = rng_spec.rng();

    let sx = phys.sigma_x2.sqrt();
    let sy = phys.sigma_y2.sqrt();
    let sqrt_mu = (mu as f64).sqrt();
    let (pi, qi) = (phys.p / sqrt_mu, phys.q / sqrt_mu);
    let inv_sqrt_omega = 1.0 / phys.omega.sqrt();

    let mut procs: Vec<ClarkeProcess> = (0..2 * mu).map(|_| ClarkeProcess::new(ctx.fd, dt, &mut rng)).collect();

    let mut xi = match fixed_xi {
        Some(v) => v,
        None => xi_squared(&mut rng, phys.m).sqrt(),
    };
    let xi_first = xi;
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 && redraw_every != usize::MAX && k % redraw_every == 0 {
            xi = xi_squared(&mut rng, phys.m).sqrt();
        }
        let mut w = 0.0;
        for i in 0..mu {
            let x = sx * procs[2 * i].next_sample() + pi * xi;
            let y = sy * procs[2 * i + 1].next_sample() + qi * xi;
            w += x * x + y * y;
        }
        samples.push(w.sqrt() * inv_sqrt_omega);
    }
    Ok(FadingTrace { samples, dt, fd: ctx.fd, xi: xi_first, params: *phys })
}

/// Threshold-crossing statistics measured on a trace.
///
/// The bookkeeping identity lcr_hat·afd_hat = (time fraction below u)
/// holds exactly per threshold.
#[derive(Debug, Clone)]
pub struct EmpiricalSecondOrder {
    pub thresholds: Vec<f64>,
    /// Upward crossings per second.
    pub lcr_hat: Vec<f64>,
    /// Mean fade duration, seconds; +∞ where no crossing was seen.
    pub afd_hat: Vec<f64>,
    /// Raw upcrossing counts.
    pub n_crossings: Vec<u64>,
    /// Accumulated time spent below each threshold, seconds.
    pub time_below: Vec<f64>,
    /// Observation time, seconds.
    pub total_time: f64,
    /// Set where a threshold saw fewer than 50 crossings.
    pub insufficient: Vec<bool>,
}

const MIN_CROSSINGS: u64 = 50;

impl EmpiricalSecondOrder {
    fn finalize(&mut self) {
        let k = self.thresholds.len();
        self.lcr_hat = (0..k).map(|i| self.n_crossings[i] as f64 / self.total_time).collect();
        self.afd_hat = (0..k)
            .map(|i| {
                if self.n_crossings[i] == 0 {
                    f64::INFINITY
                } else {
                    self.time_below[i] / self.n_crossings[i] as f64
                }
            })
            .collect();
        self.insufficient = self.n_crossings.iter().map(|&c| c < MIN_CROSSINGS).collect();
    }

    /// Pools counts and durations from another realization (associative,
    /// order-independent).
    pub fn merge(&mut self, other: &EmpiricalSecondOrder) -> Result<()> {
        if self.thresholds != other.thresholds {
            return Err(FbError::domain("thresholds", "cannot merge estimators over different thresholds"));
        }
        for i in 0..self.thresholds.len() {
            self.n_crossings[i] += other.n_crossings[i];
            self.time_below[i] += other.time_below[i];
        }
        self.total_time += other.total_time;
        self.finalize();
        Ok(())
    }
}

/// Counts upward crossings (sample strictly below u followed by a
/// sample at or above u) and time below per threshold.
pub fn empirical_second_order(trace: &FadingTrace, thresholds: &[f64]) -> Result<EmpiricalSecondOrder> {
    if thresholds.iter().any(|&u| !(u > 0.0)) {
        return Err(FbError::domain("thresholds", "must all be > 0"));
    }
    if trace.samples.is_empty() {
        return Err(FbError::domain("trace", "empty trace"));
    }
    let k = thresholds.len();
    let mut n_crossings = vec![0u64; k];
    let mut below_count = vec![0u64; k];
    for (i, &u) in thresholds.iter().enumerate() {
        let mut prev_below = trace.samples[0] < u;
        below_count[i] += u64::from(prev_below);
        for &s in &trace.samples[1..] {
            let below = s < u;
            if prev_below && !below {
                n_crossings[i] += 1;
            }
            below_count[i] += u64::from(below);
            prev_below = below;
        }
    }
    let mut est = EmpiricalSecondOrder {
        thresholds: thresholds.to_vec(),
        lcr_hat: vec![],
        afd_hat: vec![],
        n_crossings,
        time_below: below_count.iter().map(|&c| c as f64 * trace.dt).collect(),
        total_time: trace.samples.len() as f64 * trace.dt,
        insufficient: vec![],
    };
    est.finalize();
    Ok(est)
}

/// Density-normalized histogram with per-bin multinomial standard
/// errors.
#[derive(Debug, Clone)]
pub struct Histogram {
    /// Bin edges, length bins + 1.
    pub edges: Vec<f64>,
    /// Estimated density per bin.
    pub density: Vec<f64>,
    /// Standard error of each density estimate.
    pub stderr: Vec<f64>,
    pub counts: Vec<u64>,
    pub n: usize,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

pub fn histogram_pdf(samples: &[f64], bins: usize) -> Result<Histogram> {
    if bins < 10 {
        return Err(FbError::domain("bins", format!("need >= 10 bins, got {bins}")));
    }
    if samples.is_empty() {
        return Err(FbError::domain("samples", "no samples"));
    }
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(FbError::domain("samples", "degenerate sample range"));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &s in samples {
        let idx = (((s - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = samples.len();
    let mut density = Vec::with_capacity(bins);
    let mut stderr = Vec::with_capacity(bins);
    for &c in &counts {
        let p = c as f64 / n as f64;
        density.push(p / width);
        stderr.push((p * (1.0 - p) / n as f64).sqrt() / width);
    }
    let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
    Ok(Histogram { edges, density, stderr, counts, n })
}

/// Kolmogorov-Smirnov statistic of a sample against an analytic CDF.
/// Sorts the slice in place.
pub fn ks_statistic<F: Fn(f64) -> f64 + Sync>(samples: &mut [f64], cdf: F) -> f64 {
    use rayon::prelude::*;
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .reduce(|| 0.0, f64::max)
}

const FBTR_MAGIC: &[u8; 4] = b"FBTR";
const FBTR_VERSION: u32 = 1;

/// Contents of a binary trace file: everything except the generative
/// parameters, which the format does not carry.
#[derive(Debug, Clone, PartialEq)]
pub struct FbtrContents {
    pub dt: f64,
    pub fd: f64,
    pub xi: f64,
    pub samples: Vec<f64>,
}

/// Writes the little-endian binary trace format:
/// magic "FBTR", version u32, dt f64, fd f64, xi f64, n u64, then n
/// f64 envelope samples.
pub fn write_fbtr<W: Write>(trace: &FadingTrace, mut w: W) -> io::Result<()> {
    w.write_all(FBTR_MAGIC)?;
    w.write_all(&FBTR_VERSION.to_le_bytes())?;
    w.write_all(&trace.dt.to_le_bytes())?;
    w.write_all(&trace.fd.to_le_bytes())?;
    w.write_all(&trace.xi.to_le_bytes())?;
    w.write_all(&(trace.samples.len() as u64).to_le_bytes())?;
    for &s in &trace.samples {
        w.write_all(&s.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_fbtr<R: Read>(mut r: R) -> io::Result<FbtrContents> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != FBTR_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != FBTR_VERSION {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("unsupported version {version}")));
    }
    let mut b8 = [0u8; 8];
    let mut next_f64 = |r: &mut R| -> io::Result<f64> {
        r.read_exact(&mut b8)?;
        Ok(f64::from_le_bytes(b8))
    };
    let dt = next_f64(&mut r)?;
    let fd = next_f64(&mut r)?;
    let xi = next_f64(&mut r)?;
    let mut bn = [0u8; 8];
    r.read_exact(&mut bn)?;
    let n = u64::from_le_bytes(bn) as usize;
    let mut samples = Vec::with_capacity(n);
    let mut buf = [0u8; 8];
    for _ in 0..n {
        r.read_exact(&mut buf)?;
        samples.push(f64::from_le_bytes(buf));
    }
    Ok(FbtrContents { dt, fd, xi, samples })
}

/// Writes the CSV trace form: header `time,envelope`, one row per
/// sample.
pub fn write_trace_csv<W: Write>(trace: &FadingTrace, mut w: W) -> io::Result<()> {
    writeln!(w, "time,envelope")?;
    for (k, &s) in trace.samples.iter().enumerate() {
        writeln!(w, "{},{}", k as f64 * trace.dt, s)?;
    }
    Ok(())
}
