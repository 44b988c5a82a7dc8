//! First-order statistics of the fluctuating Beckmann SNR: closed-form
//! MGF, PDF and CDF by numerical inversion of the MGF, envelope-domain
//! transforms, and two independent oracles (conditional-MGF averaging
//! and a truncated multivariate confluent series) used to cross-check
//! the production routes.
//!
//! Inversion is the production route for the PDF/CDF at every
//! parameter combination. For half-integer μ with integer m the
//! κ-μ-shadowed-style finite sums of powers and exponentials would
//! also apply; that reduction is intentionally not implemented.

use crate::error::{FbError, Result};
use crate::laplace::{invert, InversionConfig};
use crate::params::{factorize, validate, ShapeParams};
use crate::quad::gauss_laguerre;
use crate::special::log_gamma_unchecked;
use num_complex::Complex64;
use std::cell::Cell;

/// Evaluation abscissae for grid-valued outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid {
    /// Strictly increasing, strictly positive points.
    pub points: Vec<f64>,
    pub scale: GridScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Db,
}

impl EvalGrid {
    pub fn new(points: Vec<f64>, scale: GridScale) -> Result<Self> {
        if points.is_empty() {
            return Err(FbError::domain("points", "grid must be non-empty"));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(FbError::domain("points", "grid must be strictly increasing"));
            }
        }
        if !(points[0] > 0.0) {
            return Err(FbError::domain("points", "grid points must be > 0"));
        }
        Ok(EvalGrid { points, scale })
    }

    /// n points equally spaced on [lo, hi].
    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 1 || !(lo > 0.0) || !(hi > lo) && n > 1 {
            return Err(FbError::domain("grid", format!("invalid grid spec {lo}:{hi}:{n}")));
        }
        let pts = if n == 1 {
            vec![lo]
        } else {
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        };
        EvalGrid::new(pts, GridScale::Linear)
    }

    /// n points equally spaced in dB between the linear bounds lo and
    /// hi (power convention: x dB is the linear value 10^(x/10)).
    pub fn db_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 1 || !(lo > 0.0) || !(hi > lo) && n > 1 {
            return Err(FbError::domain("grid", format!("invalid grid spec {lo}:{hi}:{n}")));
        }
        let (dlo, dhi) = (10.0 * lo.log10(), 10.0 * hi.log10());
        let pts = if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|i| 10f64.powf((dlo + (dhi - dlo) * i as f64 / (n - 1) as f64) / 10.0))
                .collect()
        };
        EvalGrid::new(pts, GridScale::Db)
    }
}

/// Precomputed MGF evaluator. The MGF in the variable z = γ̄s is
/// exactly (α₂z²+β₂z+1)^(m-μ/2) (α₁z²+β₁z+1)^(-m); both quadratics map
/// the closed left half-plane in z off the branch cut, so principal
/// powers give the analytic continuation everywhere the inversion
/// contour lives.
pub(crate) struct MgfEvaluator {
    gbar: f64,
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
    exp2: f64,
    exp1: f64,
    /// Smallest positive real singularity in s.
    s_min: f64,
}

impl MgfEvaluator {
    pub(crate) fn new(p: &ShapeParams) -> Result<Self> {
        let p = validate(*p)?;
        let f = factorize(&p)?;
        let mut s_min = f64::INFINITY;
        for r in [f.delta1, f.delta2, f.c1, f.c2] {
            if r.im == 0.0 && r.re.is_finite() && r.re > 0.0 {
                s_min = s_min.min(r.re / p.gbar);
            }
        }
        Ok(MgfEvaluator {
            gbar: p.gbar,
            alpha1: f.alpha1,
            beta1: f.beta1,
            alpha2: f.alpha2,
            beta2: f.beta2,
            exp2: p.m - 0.5 * p.mu,
            exp1: -p.m,
            s_min,
        })
    }

    pub(crate) fn singularity(&self) -> f64 {
        self.s_min
    }

    fn quadratics(&self, s: Complex64) -> (Complex64, Complex64) {
        let z = self.gbar * s;
        let one = Complex64::new(1.0, 0.0);
        let q2 = one + self.beta2 * z + self.alpha2 * z * z;
        let q1 = one + self.beta1 * z + self.alpha1 * z * z;
        (q2, q1)
    }

    pub(crate) fn eval(&self, s: Complex64) -> Complex64 {
        // single exp of the combined log: the individual powers can
        // overflow for the m → ∞ surrogate rows even though the
        // product is moderate
        let (q2, q1) = self.quadratics(s);
        (self.exp2 * q2.ln() + self.exp1 * q1.ln()).exp()
    }

    /// As [`eval`], flagging any quadratic value on the closed negative
    /// real axis (the branch cut of the principal power).
    fn eval_checked(&self, s: Complex64, branch_ok: &Cell<bool>) -> Complex64 {
        let (q2, q1) = self.quadratics(s);
        for q in [q2, q1] {
            if q.re <= 0.0 && q.im.abs() <= 1e-14 * q.re.abs() {
                branch_ok.set(false);
            }
        }
        (self.exp2 * q2.ln() + self.exp1 * q1.ln()).exp()
    }
}

/// Moment generating function M(s) = E[exp(sγ)].
///
/// Defined for every s with Re(s) below the smallest positive real
/// singularity; M(0) = 1 exactly.
pub fn mgf(p: &ShapeParams, s: Complex64) -> Result<Complex64> {
    let ev = MgfEvaluator::new(p)?;
    if s.re >= ev.s_min {
        return Err(FbError::domain(
            "s",
            format!("Re(s) = {} is at/beyond the MGF singularity {}", s.re, ev.s_min),
        ));
    }
    Ok(ev.eval(s))
}

/// MGF at real argument.
pub fn mgf_real(p: &ShapeParams, s: f64) -> Result<f64> {
    Ok(mgf(p, Complex64::new(s, 0.0))?.re)
}

/// Smallest positive real MGF singularity in s; the MGF converges for
/// Re(s) below this value.
pub fn mgf_singularity(p: &ShapeParams) -> Result<f64> {
    Ok(MgfEvaluator::new(p)?.singularity())
}

/// Negative amounts below this are treated as inversion round-off and
/// clamped to zero; anything worse raises a numerical error.
const DENSITY_NOISE_FLOOR: f64 = 1e-9;

/// Evaluation points are clamped to at least this multiple of γ̄; the
/// contour abscissa grows like 1/γ, so the γ → 0 limit is reported by
/// continuity.
const MIN_EVAL_FRACTION: f64 = 1e-8;

fn invert_fb_image<G>(ev: &MgfEvaluator, shape: G, t: f64, cfg: &InversionConfig) -> Result<f64>
where
    G: Fn(Complex64, Complex64) -> Complex64,
{
    let branch_ok = Cell::new(true);
    let value = invert(|s| shape(ev.eval_checked(-s, &branch_ok), s), t, cfg)?;
    if !branch_ok.get() {
        return Err(FbError::numerical(
            "fb_inversion",
            "MGF image touched the branch cut along the contour",
        ));
    }
    Ok(value)
}

/// PDF of the SNR at γ > 0, by inverting s ↦ M(-s).
pub fn pdf_snr(p: &ShapeParams, gamma: f64, cfg: &InversionConfig) -> Result<f64> {
    let pv = validate(*p)?;
    if !(gamma > 0.0) {
        return Err(FbError::domain("gamma", format!("must be > 0, got {gamma}")));
    }
    let ev = MgfEvaluator::new(&pv)?;
    let t = gamma.max(MIN_EVAL_FRACTION * pv.gbar);
    let v = invert_fb_image(&ev, |m, _| m, t, cfg)?;
    if v < 0.0 {
        if v >= -DENSITY_NOISE_FLOOR {
            return Ok(0.0);
        }
        return Err(FbError::numerical(
            "pdf_snr",
            format!("inversion returned {v}, below the round-off floor"),
        ));
    }
    Ok(v)
}

/// CDF of the SNR at γ > 0, by inverting s ↦ M(-s)/s; clamped to [0, 1].
pub fn cdf_snr(p: &ShapeParams, gamma: f64, cfg: &InversionConfig) -> Result<f64> {
    let pv = validate(*p)?;
    if !(gamma > 0.0) {
        return Err(FbError::domain("gamma", format!("must be > 0, got {gamma}")));
    }
    let ev = MgfEvaluator::new(&pv)?;
    let t = gamma.max(MIN_EVAL_FRACTION * pv.gbar);
    let v = invert_fb_image(&ev, |m, s| m / s, t, cfg)?;
    Ok(v.clamp(0.0, 1.0))
}

/// PDF grid evaluation, parallelized over the abscissae.
pub fn pdf_snr_grid(p: &ShapeParams, gammas: &[f64], cfg: &InversionConfig) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    gammas.par_iter().map(|&g| pdf_snr(p, g, cfg)).collect()
}

/// CDF grid evaluation, parallelized over the abscissae.
///
/// Per-point inversion noise (~1e-10 absolute) can break monotonicity
/// where the CDF saturates; a running-max pass restores the
/// non-decreasing guarantee while moving no value by more than the
/// noise itself. Requires an increasing grid.
pub fn cdf_snr_grid(p: &ShapeParams, gammas: &[f64], cfg: &InversionConfig) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    if gammas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FbError::domain("gammas", "grid must be strictly increasing"));
    }
    let mut vals: Vec<f64> = gammas.par_iter().map(|&g| cdf_snr(p, g, cfg)).collect::<Result<_>>()?;
    let mut running = 0.0f64;
    for v in &mut vals {
        running = running.max(*v);
        *v = running;
    }
    Ok(vals)
}

/// Envelope PDF f_R(r) = 2r f_γ(r²) with γ̄ replaced by Ω = E[R²].
pub fn pdf_envelope(p: &ShapeParams, r: f64, omega: f64, cfg: &InversionConfig) -> Result<f64> {
    if !(r > 0.0) {
        return Err(FbError::domain("r", format!("must be > 0, got {r}")));
    }
    if !(omega > 0.0) {
        return Err(FbError::domain("omega", format!("must be > 0, got {omega}")));
    }
    Ok(2.0 * r * pdf_snr(&p.with_gbar(omega), r * r, cfg)?)
}

/// Envelope CDF F_R(r) = F_γ(r²) with γ̄ replaced by Ω = E[R²].
pub fn cdf_envelope(p: &ShapeParams, r: f64, omega: f64, cfg: &InversionConfig) -> Result<f64> {
    if !(r > 0.0) {
        return Err(FbError::domain("r", format!("must be > 0, got {r}")));
    }
    if !(omega > 0.0) {
        return Err(FbError::domain("omega", format!("must be > 0, got {omega}")));
    }
    cdf_snr(&p.with_gbar(omega), r * r, cfg)
}

/// MGF by numerically averaging the conditional Beckmann MGF over the
/// Nakagami-m LoS fluctuation.
///
/// The conditional MGF factorizes as D(z)^(-1) exp(ξ² a(z)); the
/// average over the Nakagami density of ξ becomes, after u = mξ², a
/// Gamma-weighted integral evaluated with a generalized Gauss-Laguerre
/// rule of the given size. The rule size is doubled once and the two
/// results must agree to 1e-8 relative.
pub fn mgf_via_conditional_average(p: &ShapeParams, s: Complex64, quad_nodes: usize) -> Result<Complex64> {
    let pv = validate(*p)?;
    if quad_nodes < 64 {
        return Err(FbError::domain("quad_nodes", format!("must be >= 64, got {quad_nodes}")));
    }
    let ev = MgfEvaluator::new(&pv)?;
    if s.re >= ev.singularity() {
        return Err(FbError::domain(
            "s",
            format!("Re(s) = {} is at/beyond the MGF singularity {}", s.re, ev.singularity()),
        ));
    }

    let (eta, t) = pv.eta_t_analytic();
    let (kappa, mu, m) = (pv.kappa, pv.mu, pv.m);
    let pc = mu * (1.0 + eta) * (1.0 + kappa);
    let z = pv.gbar * s;
    let one = Complex64::new(1.0, 0.0);

    // diffuse factor D^(-1), constant in ξ
    let d_inv = (one - 2.0 * eta / pc * z).powc(Complex64::new(-0.5 * mu, 0.0))
        * (one - 2.0 / pc * z).powc(Complex64::new(-0.5 * mu, 0.0));
    // LoS exponent coefficient a(z): conditional MGF is D^(-1) exp(ξ² a)
    let a = mu * kappa * t * (1.0 + eta) * z / (pc - 2.0 * eta * z)
        + mu * kappa * (1.0 - t) * (1.0 + eta) * z / (pc - 2.0 * z);

    let lg_m = log_gamma_unchecked(m);
    let average = |n: usize| -> Result<Complex64> {
        let (nodes, weights) = gauss_laguerre(n, m - 1.0)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &w) in nodes.iter().zip(&weights) {
            acc += w * (a * (u / m)).exp();
        }
        Ok(acc / lg_m.exp())
    };

    let coarse = average(quad_nodes)?;
    let fine = average(2 * quad_nodes)?;
    if (fine - coarse).norm() > 1e-8 * fine.norm().max(1e-300) {
        return Err(FbError::convergence(
            "mgf_conditional_average",
            format!("node doubling moved the result by {:.3e}", (fine - coarse).norm()),
        ));
    }
    Ok(d_inv * fine)
}

/// Truncated confluent Lauricella series
/// Φ₂⁽⁶⁾(b₁..b₆; c; x₁..x₆) = Σ Π (bᵢ)_{nᵢ} xᵢ^{nᵢ}/nᵢ! / (c)_{n₁+..+n₆}
/// over total order ≤ `max_order`. Small-argument oracle only.
pub fn phi2_series_oracle(exponents: &[f64; 6], denominator: f64, args: &[f64; 6], max_order: usize) -> Result<f64> {
    let arg_sum: f64 = args.iter().map(|x| x.abs()).sum();
    if !(arg_sum < 5.0) {
        return Err(FbError::domain("args", format!("Σ|args| = {arg_sum} must be < 5 for the truncated series")));
    }
    if max_order > 30 {
        return Err(FbError::domain("max_order", format!("must be <= 30, got {max_order}")));
    }
    if denominator <= 0.0 {
        return Err(FbError::domain("denominator", format!("must be > 0, got {denominator}")));
    }

    let mo = max_order;
    // Pochhammer and x^n/n! tables per slot
    let mut poch = [[0.0f64; 31]; 6];
    let mut powfact = [[0.0f64; 31]; 6];
    for i in 0..6 {
        poch[i][0] = 1.0;
        powfact[i][0] = 1.0;
        for n in 0..mo {
            poch[i][n + 1] = poch[i][n] * (exponents[i] + n as f64);
            powfact[i][n + 1] = powfact[i][n] * args[i] / (n + 1) as f64;
        }
    }
    let mut den = [0.0f64; 31];
    den[0] = 1.0;
    for n in 0..mo {
        den[n + 1] = den[n] * (denominator + n as f64);
    }

    let mut sum = 0.0f64;
    let mut shell_abs = 0.0f64;
    for n1 in 0..=mo {
        let t1 = poch[0][n1] * powfact[0][n1];
        for n2 in 0..=mo - n1 {
            let t2 = t1 * poch[1][n2] * powfact[1][n2];
            for n3 in 0..=mo - n1 - n2 {
                let t3 = t2 * poch[2][n3] * powfact[2][n3];
                for n4 in 0..=mo - n1 - n2 - n3 {
                    let t4 = t3 * poch[3][n4] * powfact[3][n4];
                    for n5 in 0..=mo - n1 - n2 - n3 - n4 {
                        let t5 = t4 * poch[4][n5] * powfact[4][n5];
                        for n6 in 0..=mo - n1 - n2 - n3 - n4 - n5 {
                            let total = n1 + n2 + n3 + n4 + n5 + n6;
                            let term = t5 * poch[5][n6] * powfact[5][n6] / den[total];
                            sum += term;
                            if total == mo {
                                shell_abs += term.abs();
                            }
                        }
                    }
                }
            }
        }
    }
    if shell_abs > 1e-10 * sum.abs() {
        return Err(FbError::convergence(
            "phi2_series",
            format!("order-{mo} shell still contributes {shell_abs:.3e} against sum {sum:.3e}"),
        ));
    }
    Ok(sum)
}
