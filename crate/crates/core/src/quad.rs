//! Quadrature machinery: tanh-sinh (double exponential) rules for
//! endpoint-singular integrands on (0, 1), and Gauss rules built by
//! Golub-Welsch from the symmetric tridiagonal Jacobi matrix.

use crate::error::{FbError, Result};

/// Abscissa/weight pair of one tanh-sinh node on (0, 1), carrying both
/// the distance to 0 and to 1 so integrands can evaluate endpoint
/// factors without cancellation.
#[derive(Debug, Clone, Copy)]
struct DeNode {
    x: f64,
    one_minus_x: f64,
    weight: f64,
}

/// x(t) = 1/(1 + e^{-2u}), 1-x = 1/(1 + e^{2u}), w = (π/2) cosh t · dx/du·du/dt
/// with u = (π/2) sinh t. Both tails computed in their own stable form.
fn de_node(t: f64) -> DeNode {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e2u = (-2.0 * u.abs()).exp();
    let denom = 1.0 + e2u;
    let (x, one_minus_x) = if u >= 0.0 {
        (1.0 / denom, e2u / denom)
    } else {
        (e2u / denom, 1.0 / denom)
    };
    // dx/dt = (π/2) cosh t · sech²(u) / 2, sech²(u) = 4 e^{-2|u|}/(1+e^{-2|u|})²
    let sech2 = 4.0 * e2u / (denom * denom);
    let weight = std::f64::consts::FRAC_PI_2 * t.cosh() * 0.5 * sech2;
    DeNode { x, one_minus_x, weight }
}

/// Tanh-sinh quadrature of f over (0, 1).
///
/// The integrand receives (x, 1-x); endpooint-singular factors such as
/// x^(a-1) (1-x)^(b-1) with a, b > 0 are absorbed by the
/// double-exponential decay of the weights. Level refinement halves the
/// step until two successive levels agree to `rel_tol`.
pub fn tanh_sinh_01<F: Fn(f64, f64) -> f64>(f: F, rel_tol: f64, max_levels: usize) -> Result<f64> {
    const T_MAX: f64 = 6.1;
    let mut h = 1.0f64;
    let mut prev_integral = f64::NAN;

    // level 0: t = 0, ±h, ±2h, ...
    let mut level0 = 0.0;
    let mut k = 0usize;
    loop {
        let t = k as f64 * h;
        let contrib = if k == 0 {
            let n = de_node(0.0);
            n.weight * f(n.x, n.one_minus_x)
        } else {
            let a = de_node(t);
            let b = de_node(-t);
            let mut c = 0.0;
            if a.weight > 1e-300 {
                c += a.weight * f(a.x, a.one_minus_x);
            }
            if b.weight > 1e-300 {
                c += b.weight * f(b.x, b.one_minus_x);
            }
            c
        };
        if !contrib.is_finite() {
            return Err(FbError::numerical("tanh_sinh", format!("non-finite integrand near t={t}")));
        }
        level0 += contrib;
        k += 1;
        if k as f64 * h > T_MAX {
            break;
        }
    }
    let mut sum = level0;
    let mut integral = sum * h;

    for _level in 1..=max_levels {
        h *= 0.5;
        // add the new midpoints t = ±h, ±3h, ±5h, ...
        let mut new_sum = 0.0;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            if t > T_MAX {
                break;
            }
            let a = de_node(t);
            let b = de_node(-t);
            let mut c = 0.0;
            if a.weight > 1e-300 {
                c += a.weight * f(a.x, a.one_minus_x);
            }
            if b.weight > 1e-300 {
                c += b.weight * f(b.x, b.one_minus_x);
            }
            if !c.is_finite() {
                return Err(FbError::numerical("tanh_sinh", format!("non-finite integrand near t={t}")));
            }
            new_sum += c;
            k += 2;
        }
        sum += new_sum;
        prev_integral = integral;
        integral = sum * h;
        let err = (integral - prev_integral).abs();
        if err <= rel_tol * integral.abs().max(1e-300) {
            return Ok(integral);
        }
    }
    Err(FbError::convergence(
        "tanh_sinh",
        format!(
            "no convergence after {max_levels} levels (last delta {:.3e})",
            (integral - prev_integral).abs()
        ),
    ))
}

/// Eigenvalues and first eigenvector components of a symmetric
/// tridiagonal matrix via the implicit-shift QL algorithm. `d` holds the
/// diagonal, `e` the subdiagonal in e[0..n-1] (e[n-1] is workspace).
/// On return `d` holds the eigenvalues and `z` the first component of
/// each normalized eigenvector.
fn symtri_eigen_first(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(FbError::convergence("golub_welsch", "QL iteration stalled"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Nodes and weights from Jacobi-matrix recurrence coefficients
/// (Golub-Welsch). `mu0` is the zeroth moment of the weight function.
fn golub_welsch(mut diag: Vec<f64>, mut offdiag: Vec<f64>, mu0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    offdiag.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    symtri_eigen_first(&mut diag, &mut offdiag, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap());
    let nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();
    Ok((nodes, weights))
}

/// Generalized Gauss-Laguerre rule: ∫_0^∞ u^alpha e^{-u} g(u) du ≈ Σ w_i g(u_i),
/// valid for alpha > -1.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(FbError::domain("n", "rule size must be >= 1"));
    }
    if !(alpha > -1.0) {
        return Err(FbError::domain("alpha", format!("requires alpha > -1, got {alpha}")));
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    let mu0 = crate::special::log_gamma_unchecked(alpha + 1.0).exp();
    golub_welsch(diag, offdiag, mu0)
}

/// Gauss-Jacobi rule: ∫_{-1}^{1} (1-x)^alpha (1+x)^beta g(x) dx ≈ Σ w_i g(x_i),
/// valid for alpha, beta > -1.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(FbError::domain("n", "rule size must be >= 1"));
    }
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(FbError::domain("alpha", "Jacobi weight requires alpha, beta > -1"));
    }
    let ab = alpha + beta;
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let kf = k as f64;
        if k == 0 {
            diag.push((beta - alpha) / (ab + 2.0));
        } else {
            let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
            diag.push((beta * beta - alpha * alpha) / denom);
        }
    }
    for k in 1..n {
        let kf = k as f64;
        let b2 = if k == 1 {
            // (1+ab) cancels between numerator and denominator
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                / ((2.0 * kf + ab).powi(2) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0))
        };
        offdiag.push(b2.sqrt());
    }
    // mu0 = 2^(a+b+1) B(a+1, b+1)
    let lg = |x: f64| crate::special::log_gamma_unchecked(x);
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + lg(alpha + 1.0) + lg(beta + 1.0) - lg(ab + 2.0)).exp();
    golub_welsch(diag, offdiag, mu0)
}
