//! Numerical inverse Laplace transform by the Euler-summation method of
//! the Abate-Whitt framework.
//!
//! The Bromwich integral is discretized by the trapezoidal rule on the
//! contour Re(s) = A/(2t), turning f(t) into a nearly alternating
//! series whose tail is accelerated by binomial (Euler) averaging of
//! the partial sums. Discretization error is ~10^(-A/ln 10), so the
//! contour abscissa is tied to the requested decimal accuracy.

use crate::error::{FbError, Result};
use num_complex::Complex64;

/// Controls for [`invert`].
#[derive(Debug, Clone, Copy)]
pub struct InversionConfig {
    /// Number of binomial averaging terms.
    pub euler_m: usize,
    /// Depth of the partial-sum sequence before averaging starts.
    pub euler_n: usize,
    /// Target decimal accuracy A; the contour abscissa is
    /// A ln(10) / (2t).
    pub precision_decimals: u32,
    /// Largest admissible evaluation abscissa t.
    pub max_arg: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig { euler_m: 20, euler_n: 25, precision_decimals: 12, max_arg: 1e12 }
    }
}

impl InversionConfig {
    fn check(&self) -> Result<()> {
        if self.euler_m < 1 {
            return Err(FbError::domain("euler_m", "must be >= 1"));
        }
        if self.euler_n < self.euler_m {
            return Err(FbError::domain("euler_n", "must be >= euler_m"));
        }
        if !(4..=15).contains(&self.precision_decimals) {
            return Err(FbError::domain("precision_decimals", "must lie in [4, 15]"));
        }
        Ok(())
    }

    /// Abscissa error target: 10^(-precision_decimals+2) on the scale of
    /// max(1, |f|).
    pub fn abs_tolerance(&self) -> f64 {
        10f64.powi(2 - self.precision_decimals as i32)
    }
}

/// Evaluates f(t) = L^{-1}{F}(t) for t > 0.
///
/// `image` must be analytic in a right half-plane containing the
/// contour Re(s) = A/(2t). Deterministic for fixed configuration.
pub fn invert<F>(image: F, t: f64, cfg: &InversionConfig) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.check()?;
    if !(t > 0.0) {
        return Err(FbError::domain("t", format!("evaluation point must be > 0, got {t}")));
    }
    if t > cfg.max_arg {
        return Err(FbError::domain("t", format!("evaluation point {t} exceeds max_arg {}", cfg.max_arg)));
    }

    let a = cfg.precision_decimals as f64 * std::f64::consts::LN_10;
    let scale = (0.5 * a).exp() / t;
    let n = cfg.euler_n;
    let m = cfg.euler_m;

    // partial sums S_0 .. S_{n+m} of the alternating contour series
    let total = n + m + 1;
    let mut partial = Vec::with_capacity(total);
    let s0 = image(Complex64::new(a / (2.0 * t), 0.0));
    if !s0.re.is_finite() {
        return Err(FbError::numerical("laplace_invert", "image non-finite on the real contour point"));
    }
    let mut acc = 0.5 * s0.re;
    partial.push(acc);
    for k in 1..total {
        let s = Complex64::new(a / (2.0 * t), k as f64 * std::f64::consts::PI / t);
        let v = image(s);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(FbError::numerical(
                "laplace_invert",
                format!("image non-finite at contour node k={k}"),
            ));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * v.re;
        partial.push(acc);
    }

    // binomial averaging over S_n .. S_{n+m}; the same average one term
    // earlier serves as the error estimate
    let euler_avg = |offset: usize, order: usize| -> f64 {
        let mut coeff = 1.0f64; // C(order, 0)
        let mut sum = 0.0f64;
        for k in 0..=order {
            sum += coeff * partial[offset + k];
            coeff *= (order - k) as f64 / (k + 1) as f64;
        }
        sum / 2f64.powi(order as i32)
    };
    let result = scale * euler_avg(n, m);
    let check = scale * euler_avg(n - 1, m);
    let fluctuation = (result - check).abs();

    // sanity check: the accelerated sums must have settled; a large
    // fluctuation means the series never became tame (oscillatory or
    // growing image)
    if fluctuation > 1e-2 * result.abs().max(1.0) {
        return Err(FbError::numerical(
            "laplace_invert",
            format!("Euler acceleration did not settle (fluctuation {fluctuation:.3e})"),
        ));
    }
    Ok(result)
}
