//! Fluctuating Beckmann parameterization: shape parameters, the
//! generative (physical) parameters, conversions between the two, the
//! quadratic factorization behind the closed-form MGF, and constructors
//! for the classical models the distribution contains as special cases.

use crate::error::{FbError, Result};
use num_complex::Complex64;

/// Surrogate for m → ∞ in the special-case reductions. Replacing the
/// exact limit by this constant perturbs the MGF by a relative error of
/// roughly a²/(2·M_LARGE) where a is the LoS exponent term, which stays
/// below 1e-3 over the tested s-grids.
pub const M_LARGE: f64 = 5e4;

/// Shape parameters of the fluctuating Beckmann distribution.
///
/// The LoS amplitude imbalance ρ² = p²/q² is stored as the fraction
/// t = ρ²/(1+ρ²) ∈ [0, 1] so that both extremes (ρ = 0 and ρ = ∞) are
/// representable exactly; `los_frac` = 1 encodes ρ = ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    /// Mean SNR (linear), > 0.
    pub gbar: f64,
    /// Ratio of total LoS power to total diffuse power, >= 0.
    pub kappa: f64,
    /// Number of clusters, > 0 (real-valued; the sampler additionally
    /// requires an integer).
    pub mu: f64,
    /// Nakagami shape of the LoS fluctuation, > 0.
    pub m: f64,
    /// In-phase/quadrature diffuse variance ratio σx²/σy², in [0, ∞].
    pub eta: f64,
    /// t = ρ²/(1+ρ²), in [0, 1].
    pub los_frac: f64,
}

impl ShapeParams {
    /// Validates and canonicalizes a parameter set.
    ///
    /// With κ = 0 the LoS fluctuation and imbalance have no effect on
    /// any statistic, so `m` and `los_frac` are reset to the canonical
    /// inert values 1 and 1/2.
    pub fn new(gbar: f64, kappa: f64, mu: f64, m: f64, eta: f64, los_frac: f64) -> Result<Self> {
        validate(ShapeParams { gbar, kappa, mu, m, eta, los_frac })
    }

    /// Builder taking ρ directly (`f64::INFINITY` accepted).
    pub fn with_rho(gbar: f64, kappa: f64, mu: f64, m: f64, eta: f64, rho: f64) -> Result<Self> {
        if !(rho >= 0.0) {
            return Err(FbError::domain("rho", format!("must be >= 0 (or inf), got {rho}")));
        }
        let t = if rho.is_infinite() {
            1.0
        } else if rho > 1.0 {
            // ρ²/(1+ρ²) = 1/(1+ρ⁻²), stable for large ρ
            1.0 / (1.0 + (1.0 / rho).powi(2))
        } else {
            rho * rho / (1.0 + rho * rho)
        };
        Self::new(gbar, kappa, mu, m, eta, t)
    }

    /// LoS amplitude imbalance ρ = p/q recovered from `los_frac`.
    pub fn rho(&self) -> f64 {
        if self.los_frac >= 1.0 {
            f64::INFINITY
        } else {
            (self.los_frac / (1.0 - self.los_frac)).sqrt()
        }
    }

    /// (η, t) pair used by every analytic formula. An infinite η is
    /// mapped through the exact symmetry (η, t) → (1/η, 1-t) of the
    /// MGF, which swaps the roles of the in-phase and quadrature
    /// branches.
    pub(crate) fn eta_t_analytic(&self) -> (f64, f64) {
        if self.eta.is_infinite() {
            (0.0, 1.0 - self.los_frac)
        } else {
            (self.eta, self.los_frac)
        }
    }

    /// Copy with a different mean power; used by the envelope-domain
    /// transforms where the mean square envelope Ω plays the role of γ̄.
    pub(crate) fn with_gbar(&self, gbar: f64) -> ShapeParams {
        ShapeParams { gbar, ..*self }
    }
}

/// Rejects out-of-domain fields and canonicalizes the κ = 0 case.
pub fn validate(p: ShapeParams) -> Result<ShapeParams> {
    if !(p.gbar > 0.0) || !p.gbar.is_finite() {
        return Err(FbError::domain("gbar", format!("mean SNR must be finite and > 0, got {}", p.gbar)));
    }
    if !(p.kappa >= 0.0) || !p.kappa.is_finite() {
        return Err(FbError::domain("kappa", format!("must be finite and >= 0, got {}", p.kappa)));
    }
    if !(p.mu > 0.0) || !p.mu.is_finite() {
        return Err(FbError::domain("mu", format!("must be finite and > 0, got {}", p.mu)));
    }
    if !(p.m > 0.0) || !p.m.is_finite() {
        return Err(FbError::domain("m", format!("must be finite and > 0, got {}", p.m)));
    }
    if !(p.eta >= 0.0) {
        return Err(FbError::domain("eta", format!("must be >= 0 (inf allowed), got {}", p.eta)));
    }
    if !(0.0..=1.0).contains(&p.los_frac) {
        return Err(FbError::domain("los_frac", format!("must lie in [0, 1], got {}", p.los_frac)));
    }
    if p.kappa == 0.0 {
        return Ok(ShapeParams { m: 1.0, los_frac: 0.5, ..p });
    }
    Ok(p)
}

/// Generative parameters of the physical model: per-cluster Gaussian
/// variances, aggregate LoS amplitudes and the LoS fluctuation shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Per-cluster in-phase diffuse variance.
    pub sigma_x2: f64,
    /// Per-cluster quadrature diffuse variance.
    pub sigma_y2: f64,
    /// Total in-phase LoS amplitude, p² = Σ p_i².
    pub p: f64,
    /// Total quadrature LoS amplitude, q² = Σ q_i².
    pub q: f64,
    /// Cluster count.
    pub mu_int: u32,
    /// Nakagami shape of the LoS fluctuation ξ.
    pub m: f64,
    /// Total mean power Ω = μ(σx²+σy²) + p² + q².
    pub omega: f64,
}

/// Shape → physical conversion with the default power Ω = γ̄.
pub fn to_physical(p: &ShapeParams) -> Result<PhysicalParams> {
    to_physical_with_omega(p, p.gbar)
}

/// Shape → physical conversion with explicit total power Ω.
///
/// Requires an integer cluster count. An infinite η puts the whole
/// diffuse power on the in-phase branch (σy² = 0).
pub fn to_physical_with_omega(p: &ShapeParams, omega: f64) -> Result<PhysicalParams> {
    let p = validate(*p)?;
    if !(omega > 0.0) {
        return Err(FbError::domain("omega", format!("must be > 0, got {omega}")));
    }
    let mu_round = p.mu.round();
    if (p.mu - mu_round).abs() > 1e-9 || mu_round < 1.0 || mu_round > u32::MAX as f64 {
        return Err(FbError::domain("mu", format!("sampler requires a positive integer cluster count, got {}", p.mu)));
    }
    let mu = mu_round;
    let diffuse = omega / (1.0 + p.kappa);
    let (sigma_x2, sigma_y2) = if p.eta.is_infinite() {
        (diffuse / mu, 0.0)
    } else {
        let sy2 = diffuse / (mu * (1.0 + p.eta));
        (p.eta * sy2, sy2)
    };
    let los2 = omega * p.kappa / (1.0 + p.kappa);
    let p2 = los2 * p.los_frac;
    let q2 = los2 * (1.0 - p.los_frac);
    Ok(PhysicalParams {
        sigma_x2,
        sigma_y2,
        p: p2.sqrt(),
        q: q2.sqrt(),
        mu_int: mu as u32,
        m: p.m,
        omega,
    })
}

/// Physical → shape conversion; γ̄ is set to Ω.
pub fn to_shape(ph: &PhysicalParams) -> Result<ShapeParams> {
    if ph.mu_int < 1 {
        return Err(FbError::domain("mu", "cluster count must be >= 1"));
    }
    let mu = ph.mu_int as f64;
    let diffuse = mu * (ph.sigma_x2 + ph.sigma_y2);
    if !(diffuse > 0.0) {
        return Err(FbError::domain("sigma", "diffuse power must be > 0"));
    }
    let los2 = ph.p * ph.p + ph.q * ph.q;
    let kappa = los2 / diffuse;
    let eta = if ph.sigma_y2 == 0.0 { f64::INFINITY } else { ph.sigma_x2 / ph.sigma_y2 };
    let los_frac = if los2 > 0.0 { ph.p * ph.p / los2 } else { 0.5 };
    ShapeParams::new(ph.omega, kappa, mu, ph.m, eta, los_frac)
}

/// Coefficients and roots of the two quadratics that factor the MGF.
///
/// Written in the variable z = γ̄s, the MGF is exactly
///
/// ```text
/// M(s) = (α₂z² + β₂z + 1)^(m-μ/2) · (α₁z² + β₁z + 1)^(-m)
/// ```
///
/// with δ₁,₂ the roots of α₁z²+β₁z+1 and c₁,₂ the roots of
/// α₂z²+β₂z+1. The coefficient κ(ρ²+η)/(1+ρ²) of the published α₁ is
/// evaluated in the t-parameterization as κ(t + η(1-t)), which follows
/// from ρ²/(1+ρ²) = t and 1/(1+ρ²) = 1-t.
#[derive(Debug, Clone, Copy)]
pub struct MgfFactorization {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    /// Roots of α₁z²+β₁z+1; conjugate pair when the discriminant is
    /// negative. When α₁ = 0 the factor degenerates to 1+β₁z and the
    /// second root is reported as infinity.
    pub delta1: Complex64,
    pub delta2: Complex64,
    /// Roots of α₂z²+β₂z+1; always real for valid parameters. When
    /// α₂ = 0 (η ∈ {0, ∞}) the degenerate factor is handled explicitly
    /// and the second root is reported as infinity.
    pub c1: Complex64,
    pub c2: Complex64,
}

/// Roots of αz² + βz + 1 via the cancellation-free quadratic formula:
/// the larger-magnitude root comes from the stable branch, the other
/// from the product z₁z₂ = 1/α.
fn quadratic_roots(alpha: f64, beta: f64) -> (Complex64, Complex64) {
    if alpha == 0.0 {
        // degenerate linear factor 1 + βz
        let r = if beta == 0.0 { f64::INFINITY } else { -1.0 / beta };
        return (Complex64::new(r, 0.0), Complex64::new(f64::INFINITY, 0.0));
    }
    let disc = beta * beta - 4.0 * alpha;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let qq = -0.5 * (beta + sq.copysign(beta));
        let r1 = qq / alpha;
        let r2 = 1.0 / qq;
        (Complex64::new(r1, 0.0), Complex64::new(r2, 0.0))
    } else {
        let im = (-disc).sqrt() / (2.0 * alpha);
        let re = -beta / (2.0 * alpha);
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

/// Computes the factorization coefficients and roots for a valid
/// parameter set.
pub fn factorize(p: &ShapeParams) -> Result<MgfFactorization> {
    let p = validate(*p)?;
    let (eta, t) = p.eta_t_analytic();
    let (kappa, mu, m) = (p.kappa, p.mu, p.m);
    let pc = mu * (1.0 + eta) * (1.0 + kappa);
    let alpha2 = 4.0 * eta / (pc * pc);
    let beta2 = -2.0 / (mu * (1.0 + kappa));
    let alpha1 = alpha2 + 2.0 * kappa * (t + eta * (1.0 - t)) / (m * mu * (1.0 + eta) * (1.0 + kappa) * (1.0 + kappa));
    let beta1 = -(2.0 / mu + kappa / m) / (1.0 + kappa);
    let (delta1, delta2) = quadratic_roots(alpha1, beta1);
    let (c1, c2) = quadratic_roots(alpha2, beta2);
    Ok(MgfFactorization { alpha1, beta1, alpha2, beta2, delta1, delta2, c1, c2 })
}

impl MgfFactorization {
    /// MGF evaluated from the roots: each factor (1 - z/root) carries
    /// its own power, the grouping of the factored published form.
    /// A degenerate quadratic (α = 0, one infinite root) is evaluated
    /// through its exact linear polynomial instead of root-finding.
    /// Agrees with the polynomial route wherever the factor values stay
    /// clear of the negative real axis.
    pub fn mgf_from_roots(&self, p: &ShapeParams, s: Complex64) -> Complex64 {
        let z = p.gbar * s;
        let one = Complex64::new(1.0, 0.0);
        let e2 = Complex64::new(p.m - 0.5 * p.mu, 0.0);
        let e1 = Complex64::new(-p.m, 0.0);
        let g2 = if self.alpha2 == 0.0 {
            (one + self.beta2 * z).powc(e2)
        } else {
            (one - z / self.c1).powc(e2) * (one - z / self.c2).powc(e2)
        };
        let g1 = if self.alpha1 == 0.0 {
            (one + self.beta1 * z).powc(e1)
        } else {
            (one - z / self.delta1).powc(e1) * (one - z / self.delta2).powc(e1)
        };
        g2 * g1
    }
}

/// Classical models contained in the fluctuating Beckmann family,
/// with their native parameterizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialCase {
    OneSidedGaussian { gbar: f64 },
    Rayleigh { gbar: f64 },
    /// Nakagami-m with shape `m`.
    NakagamiM { m: f64, gbar: f64 },
    /// Hoyt with variance-ratio parameter `q` (the in-phase/quadrature
    /// variance ratio; see the crate docs for the convention caveat).
    Hoyt { q: f64, gbar: f64 },
    EtaMu { eta: f64, mu: f64, gbar: f64 },
    Rice { k: f64, gbar: f64 },
    /// Symmetrical η-κ: LoS imbalance tied to the diffuse imbalance,
    /// ρ = η.
    EtaKappaSym { eta: f64, kappa: f64, gbar: f64 },
    /// Asymmetrical η-κ: no in-phase LoS component, ρ = 0.
    EtaKappaAsym { eta: f64, kappa: f64, gbar: f64 },
    /// Classical Beckmann with Rice factor `k`, variance ratio `q` and
    /// LoS amplitude ratio `r`.
    Beckmann { k: f64, q: f64, r: f64, gbar: f64 },
    KappaMu { kappa: f64, mu: f64, gbar: f64 },
    RicianShadowed { kappa: f64, m: f64, gbar: f64 },
    KappaMuShadowed { kappa: f64, mu: f64, m: f64, gbar: f64 },
}

/// Shape parameters of the requested classical model. Limits m → ∞ are
/// realized with [`M_LARGE`].
pub fn special_case(case: SpecialCase) -> Result<ShapeParams> {
    use SpecialCase::*;
    match case {
        OneSidedGaussian { gbar } => ShapeParams::new(gbar, 0.0, 1.0, 1.0, 0.0, 0.5),
        Rayleigh { gbar } => ShapeParams::new(gbar, 0.0, 1.0, 1.0, 1.0, 0.5),
        NakagamiM { m, gbar } => {
            if !(m > 0.0) {
                return Err(FbError::domain("m", format!("Nakagami shape must be > 0, got {m}")));
            }
            ShapeParams::new(gbar, 0.0, m, 1.0, 1.0, 0.5)
        }
        Hoyt { q, gbar } => {
            if !(q >= 0.0) {
                return Err(FbError::domain("q", format!("Hoyt parameter must be >= 0, got {q}")));
            }
            ShapeParams::new(gbar, 0.0, 1.0, 1.0, q, 0.5)
        }
        EtaMu { eta, mu, gbar } => ShapeParams::new(gbar, 0.0, mu, 1.0, eta, 0.5),
        Rice { k, gbar } => {
            if !(k >= 0.0) {
                return Err(FbError::domain("k", format!("Rice factor must be >= 0, got {k}")));
            }
            ShapeParams::new(gbar, k, 1.0, M_LARGE, 1.0, 0.5)
        }
        EtaKappaSym { eta, kappa, gbar } => ShapeParams::with_rho(gbar, kappa, 1.0, M_LARGE, eta, eta),
        EtaKappaAsym { eta, kappa, gbar } => ShapeParams::new(gbar, kappa, 1.0, M_LARGE, eta, 0.0),
        Beckmann { k, q, r, gbar } => {
            if !(k >= 0.0) {
                return Err(FbError::domain("k", format!("Beckmann K must be >= 0, got {k}")));
            }
            if !(q >= 0.0) {
                return Err(FbError::domain("q", format!("Beckmann q must be >= 0, got {q}")));
            }
            ShapeParams::with_rho(gbar, k, 1.0, M_LARGE, q, r)
        }
        KappaMu { kappa, mu, gbar } => ShapeParams::new(gbar, kappa, mu, M_LARGE, 1.0, 0.5),
        RicianShadowed { kappa, m, gbar } => ShapeParams::new(gbar, kappa, 1.0, m, 1.0, 0.5),
        KappaMuShadowed { kappa, mu, m, gbar } => ShapeParams::new(gbar, kappa, mu, m, 1.0, 0.5),
    }
}
