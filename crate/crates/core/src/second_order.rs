//! Second-order statistics: level crossing rate and average fade
//! duration of the Ω-normalized envelope for the fully imbalanced LoS
//! case ρ → ∞ (all LoS power on the in-phase axis), under a Clarke
//! Doppler spectrum.
//!
//! The crossing rate is a weighted integral over the in-phase power
//! share x ∈ (0, 1) with endpoint weights x^(μ/2-1) (1-x)^(μ/2-1);
//! tanh-sinh quadrature absorbs those singularities for any μ > 0, and
//! a Gauss-Jacobi rule with the weights built in is available as a
//! cross-check.

use crate::error::{FbError, Result};
use crate::first_order::cdf_envelope;
use crate::laplace::InversionConfig;
use crate::params::{validate, ShapeParams};
use crate::quad::{gauss_jacobi, tanh_sinh_01};
use crate::special::{kummer_1f1_ln, log_gamma_unchecked, Kummer1F1Config};

/// Doppler environment: maximum Doppler shift and the curvature of the
/// autocorrelation at lag zero.
#[derive(Debug, Clone, Copy)]
pub struct DopplerContext {
    /// Maximum Doppler shift in Hz.
    pub fd: f64,
    /// -ρ̈(0) in rad²/s²; 2π²fd² under the Clarke model, for which
    /// √(-ρ̈(0)) = √2 π fd.
    pub rho_dd0: f64,
}

impl DopplerContext {
    /// Clarke-model context for the given maximum Doppler shift.
    pub fn clarke(fd: f64) -> Result<Self> {
        if !(fd > 0.0) {
            return Err(FbError::domain("fd", format!("Doppler shift must be > 0, got {fd}")));
        }
        Ok(DopplerContext { fd, rho_dd0: 2.0 * std::f64::consts::PI * std::f64::consts::PI * fd * fd })
    }

    /// Context with an explicit autocorrelation curvature.
    pub fn with_rho_dd0(fd: f64, rho_dd0: f64) -> Result<Self> {
        if !(fd > 0.0) {
            return Err(FbError::domain("fd", format!("Doppler shift must be > 0, got {fd}")));
        }
        if !(rho_dd0 > 0.0) {
            return Err(FbError::domain("rho_dd0", format!("-ρ̈(0) must be > 0, got {rho_dd0}")));
        }
        Ok(DopplerContext { fd, rho_dd0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadScheme {
    TanhSinh,
    GaussJacobi,
}

/// Quadrature controls for the crossing-rate integral.
#[derive(Debug, Clone, Copy)]
pub struct LcrConfig {
    pub quad_scheme: QuadScheme,
    /// Rule size for the Gauss-Jacobi scheme.
    pub quad_points: usize,
    pub rel_tol: f64,
}

impl Default for LcrConfig {
    fn default() -> Self {
        LcrConfig { quad_scheme: QuadScheme::TanhSinh, quad_points: 200, rel_tol: 1e-8 }
    }
}

impl LcrConfig {
    fn check(&self) -> Result<()> {
        if self.quad_points < 16 {
            return Err(FbError::domain("quad_points", "must be >= 16"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(FbError::domain("rel_tol", "must be > 0"));
        }
        Ok(())
    }
}

/// Level crossing rate (upward crossings per second) of the
/// Ω-normalized envelope at threshold u > 0.
///
/// Requires `los_frac` = 1 exactly (no quadrature LoS component) and
/// 0 < η < ∞. The mean SNR plays no role: thresholds are relative to
/// the RMS envelope.
pub fn lcr(p: &ShapeParams, u: f64, ctx: &DopplerContext, cfg: &LcrConfig) -> Result<f64> {
    cfg.check()?;
    let pv = validate(*p)?;
    if pv.los_frac != 1.0 {
        return Err(FbError::domain(
            "los_frac",
            format!("crossing-rate formula requires ρ = ∞ (los_frac = 1), got {}", pv.los_frac),
        ));
    }
    if !(pv.eta > 0.0) || pv.eta.is_infinite() {
        return Err(FbError::domain("eta", format!("requires 0 < η < ∞, got {}", pv.eta)));
    }
    if !(u > 0.0) {
        return Err(FbError::domain("u", format!("threshold must be > 0, got {u}")));
    }

    let (eta, kappa, mu, m) = (pv.eta, pv.kappa, pv.mu, pv.m);
    let u2 = u * u;
    let g_los = mu * kappa * (1.0 + eta) / (2.0 * eta);
    let a_arg = kappa * mu * mu * (1.0 + eta) * (1.0 + eta) * (1.0 + kappa) / (4.0 * eta * eta) / (g_los + m);
    let c_exp = mu * (1.0 - eta * eta) * (1.0 + kappa) / (2.0 * eta);
    let shift = 0.5 * mu * (1.0 + eta) * (1.0 + kappa) * u2;

    // √(-ρ̈(0)) stays a linear factor so the crossing rate scales
    // exactly with the Doppler shift
    let log_pref = m * m.ln() + (mu - 0.5) * (mu * (1.0 + eta) * (1.0 + kappa)).ln()
        + (2.0 * mu - 1.0) * u.ln()
        - (mu - 1.0) * std::f64::consts::LN_2
        - 2.0 * log_gamma_unchecked(0.5 * mu)
        - 0.5 * mu * eta.ln()
        - m * (g_los + m).ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln();

    let kcfg = Kummer1F1Config::default();
    let half_mu = 0.5 * mu;
    // Smooth part of the integrand, assembled in log space: the ₁F₁
    // factor grows like exp(A u² x) and would overflow on its own, but
    // the combined exponent ln ₁F₁ - shift - c_exp·u²x is bounded above
    // by ~ -u²·μ(1+κ)(1+η)/(2η)·min(1,η) over [0, 1].
    let smooth = |x: f64| -> Result<f64> {
        let ln_f11 = kummer_1f1_ln(m, half_mu, a_arg * u2 * x, &kcfg)?;
        Ok((0.5 * (1.0 + (eta - 1.0) * x).ln() - shift - c_exp * u2 * x + ln_f11).exp())
    };

    let integral = match cfg.quad_scheme {
        QuadScheme::TanhSinh => tanh_sinh_01(
            |x, omx| {
                let base = x.powf(half_mu - 1.0) * omx.powf(half_mu - 1.0);
                match smooth(x) {
                    Ok(v) => base * v,
                    Err(_) => f64::NAN, // surfaces as a quadrature error
                }
            },
            cfg.rel_tol,
            11,
        )?,
        QuadScheme::GaussJacobi => {
            let alpha = half_mu - 1.0;
            let (nodes, weights) = gauss_jacobi(cfg.quad_points, alpha, alpha)?;
            let mut acc = 0.0;
            for (&xi, &wi) in nodes.iter().zip(&weights) {
                acc += wi * smooth(0.5 * (1.0 + xi))?;
            }
            acc * (1.0 - mu).exp2()
        }
    };

    let value = ctx.rho_dd0.sqrt() * log_pref.exp() * integral;
    if !value.is_finite() {
        return Err(FbError::numerical("lcr", format!("non-finite crossing rate at u={u}")));
    }
    Ok(value.max(0.0))
}

/// Average fade duration with underflow bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct Afd {
    /// Mean time below the threshold, seconds; +∞ when the crossing
    /// rate underflowed.
    pub seconds: f64,
    /// Set when the crossing rate underflowed and the +∞ sentinel was
    /// reported instead of a division.
    pub lcr_underflowed: bool,
}

/// Average fade duration T(u) = F_R(u)/N_R(u) of the Ω-normalized
/// envelope (Ω = 1 in this module; thresholds are relative to RMS).
pub fn afd(p: &ShapeParams, u: f64, ctx: &DopplerContext, cfg: &LcrConfig) -> Result<Afd> {
    let n = lcr(p, u, ctx, cfg)?;
    let f = cdf_envelope(p, u, 1.0, &InversionConfig::default())?;
    if n < 1e-300 {
        return Ok(Afd { seconds: f64::INFINITY, lcr_underflowed: true });
    }
    Ok(Afd { seconds: f / n, lcr_underflowed: false })
}
