//! Shared test fixtures: closed-form reference MGFs of the classical
//! models (written from their own published parameterizations, not by
//! reusing the library's factored form) and small numeric helpers.

#![allow(dead_code)]

/// Deterministic 64-bit mixer for reproducible "random" test points.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform on [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform on [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }
}

/// Rayleigh: M(s) = (1 - γ̄s)^(-1)
pub fn mgf_rayleigh(gbar: f64, s: f64) -> f64 {
    1.0 / (1.0 - gbar * s)
}

/// One-sided Gaussian: M(s) = (1 - 2γ̄s)^(-1/2)
pub fn mgf_one_sided_gaussian(gbar: f64, s: f64) -> f64 {
    (1.0 - 2.0 * gbar * s).powf(-0.5)
}

/// Nakagami-m: M(s) = (1 - γ̄s/m)^(-m)
pub fn mgf_nakagami(m: f64, gbar: f64, s: f64) -> f64 {
    (1.0 - gbar * s / m).powf(-m)
}

/// Hoyt with amplitude-ratio parameter q (Simon-Alouini form):
/// M(s) = (1 - 2γ̄s + (2γ̄s)² q²/(1+q²)²)^(-1/2).
/// The variance-ratio convention maps through q = √η.
pub fn mgf_hoyt(q: f64, gbar: f64, s: f64) -> f64 {
    let z = gbar * s;
    (1.0 - 2.0 * z + 4.0 * z * z * q * q / (1.0 + q * q) / (1.0 + q * q)).powf(-0.5)
}

/// η-μ (format 1) in the h/H form, with μ_E half-integer pairs of
/// Gaussians: M(s) = (4μ²h / ((2(h-H)μ - γ̄s)(2(h+H)μ - γ̄s)))^μ.
pub fn mgf_eta_mu(eta: f64, mu_e: f64, gbar: f64, s: f64) -> f64 {
    let h = (2.0 + eta + 1.0 / eta) / 4.0;
    let big_h = (1.0 / eta - eta) / 4.0;
    let z = gbar * s;
    (4.0 * mu_e * mu_e * h / ((2.0 * (h - big_h) * mu_e - z) * (2.0 * (h + big_h) * mu_e - z))).powf(mu_e)
}

/// Rice: M(s) = (1+K)/(1+K-γ̄s) exp(Kγ̄s/(1+K-γ̄s))
pub fn mgf_rice(k: f64, gbar: f64, s: f64) -> f64 {
    let z = gbar * s;
    (1.0 + k) / (1.0 + k - z) * (k * z / (1.0 + k - z)).exp()
}

/// κ-μ: M(s) = (μ(1+κ)/(μ(1+κ)-γ̄s))^μ exp(μκγ̄s/(μ(1+κ)-γ̄s))
pub fn mgf_kappa_mu(kappa: f64, mu: f64, gbar: f64, s: f64) -> f64 {
    let a = mu * (1.0 + kappa);
    let z = gbar * s;
    (a / (a - z)).powf(mu) * (mu * kappa * z / (a - z)).exp()
}

/// κ-μ shadowed in the published factored form:
/// M(s) = (μ(1+κ))^μ m^m (μ(1+κ)-γ̄s)^(m-μ)
///        / ((μκ+m)^m (mμ(1+κ)/(μκ+m) - γ̄s)^m)
pub fn mgf_kappa_mu_shadowed(kappa: f64, mu: f64, m: f64, gbar: f64, s: f64) -> f64 {
    let a = mu * (1.0 + kappa);
    let z = gbar * s;
    a.powf(mu) * m.powf(m) * (a - z).powf(m - mu) / ((mu * kappa + m).powf(m) * (m * a / (mu * kappa + m) - z).powf(m))
}

/// Classical Beckmann (fixed LoS, one cluster) from its conditional
/// MGF: M(s) = (1-2σx²s)^(-1/2) (1-2σy²s)^(-1/2)
///            × exp(p²s/(1-2σx²s) + q²s/(1-2σy²s)).
/// Power bookkeeping for mean power Ω, Rice factor K, variance ratio
/// eta and LoS amplitude ratio r is done here from first principles.
pub fn mgf_beckmann(k: f64, eta: f64, r: f64, omega: f64, s: f64) -> f64 {
    let los2 = omega * k / (1.0 + k);
    let diffuse = omega / (1.0 + k);
    let (p2, q2) = if r.is_infinite() {
        (los2, 0.0)
    } else {
        (los2 * r * r / (1.0 + r * r), los2 / (1.0 + r * r))
    };
    let sy2 = diffuse / (1.0 + eta);
    let sx2 = eta * sy2;
    (1.0 - 2.0 * sx2 * s).powf(-0.5)
        * (1.0 - 2.0 * sy2 * s).powf(-0.5)
        * (p2 * s / (1.0 - 2.0 * sx2 * s) + q2 * s / (1.0 - 2.0 * sy2 * s)).exp()
}

/// Piecewise-linear interpolator over a dense, uniformly spaced grid;
/// used to evaluate an analytic CDF at millions of sample points
/// without re-running the Laplace inversion for each.
pub struct GridInterp {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl GridInterp {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Self {
        let step = (hi - lo) / (values.len() - 1) as f64;
        GridInterp { lo, step, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo {
            return self.values[0];
        }
        let fidx = (x - self.lo) / self.step;
        let idx = fidx as usize;
        if idx + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let frac = fidx - idx as f64;
        self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
    }
}
