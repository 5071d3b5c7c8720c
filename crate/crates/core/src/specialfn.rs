//! Special functions and Gaussian quadrature.
//!
//! Everything downstream reduces to three primitives: `ln Γ`, generalized
//! Laguerre polynomials `L_k^(α)` in the standard (non-normalized)
//! convention, and Gauss rules whose nodes come from a symmetric
//! tridiagonal eigensolve (Golub–Welsch).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires a finite x > 0, got {x}"));
    }
    Ok(lgamma(x))
}

/// Unchecked `ln |Γ(x)|`; callers guarantee `x > 0` (or non-integer `x`).
pub(crate) fn lgamma(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin().abs()).ln() - lgamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Generalized Laguerre polynomial `L_k^(α)(u)` by the three-term recurrence.
pub fn laguerre_eval(k: usize, alpha: f64, u: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return domain(format!("laguerre_eval requires alpha > -1, got {alpha}"));
    }
    if k > 200 {
        return Err(Error::Precondition(format!("laguerre_eval requires k <= 200, got {k}")));
    }
    Ok(laguerre(k, alpha, u))
}

pub(crate) fn laguerre(k: usize, alpha: f64, u: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - u;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - u) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A value `mantissa * exp(log_scale)`; used where Laguerre sums overflow f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

const RESCALE_AT: f64 = 1e150;

/// `Σ_m coeffs[m] L_m^(α)(u)` with running rescaling so large `u` cannot overflow.
pub(crate) fn laguerre_series_scaled(coeffs: &[f64], alpha: f64, u: f64) -> Scaled {
    let mut log_scale = 0.0;
    if coeffs.is_empty() {
        return Scaled { mantissa: 0.0, log_scale };
    }
    let mut prev = 1.0;
    let mut acc = coeffs[0];
    if coeffs.len() == 1 {
        return Scaled { mantissa: acc, log_scale };
    }
    let mut cur = 1.0 + alpha - u;
    acc += coeffs[1] * cur;
    for (j, &c) in coeffs.iter().enumerate().skip(2) {
        let jf = (j - 1) as f64;
        let next = ((2.0 * jf + 1.0 + alpha - u) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        acc += c * cur;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            acc /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
    }
    Scaled { mantissa: acc, log_scale }
}

/// Plain (unscaled) evaluation of `Σ_m coeffs[m] L_m^(α)(u)`.
pub(crate) fn laguerre_series(coeffs: &[f64], alpha: f64, u: f64) -> f64 {
    let s = laguerre_series_scaled(coeffs, alpha, u);
    if s.log_scale == 0.0 {
        s.mantissa
    } else {
        s.mantissa * s.log_scale.exp()
    }
}

/// `(L_n, L_{n-1})` at `u`, sharing one scale factor.
fn laguerre_pair_scaled(n: usize, alpha: f64, u: f64) -> (f64, f64, f64) {
    let mut log_scale = 0.0;
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - u;
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - u) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs().max(prev.abs()) > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
    }
    (cur, prev, log_scale)
}

/// Surface area of the unit sphere `S^{d-1}` (counting measure on `S^0`).
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * (h * PI.ln() - lgamma(h)).exp()
}

/// Volume of the unit ball in `R^d`: `π^{d/2} / Γ(d/2 + 1)`.
pub fn ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - lgamma(h + 1.0)).exp()
}

/// Generalized Gauss–Laguerre rule for `∫_0^∞ g(u) u^α e^{-u} du`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i g(x_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// Nodes and weights of the `n`-point generalized Gauss–Laguerre rule.
///
/// Nodes come from the Jacobi matrix eigensolve and are polished with
/// Newton steps on `L_n^(α)`; weights use
/// `Γ(n+α+1) / (n! x_i L_n'(x_i)^2)` evaluated in log space. For `n`
/// close to 256 the outermost weights are below `f64::MIN_POSITIVE` and
/// flush to zero.
pub fn gauss_laguerre_rule(n: usize, alpha: f64) -> Result<QuadratureRule> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("gauss_laguerre_rule requires alpha > -1, got {alpha}"));
    }
    if n == 0 || n > 256 {
        return Err(Error::Precondition(format!("gauss_laguerre_rule requires 1 <= n <= 256, got {n}")));
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    let (mut nodes, _) = symmetric_tridiagonal_eigen(&diag, &off)?;

    let nf = n as f64;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (ln, lnm1, _) = laguerre_pair_scaled(n, alpha, *x);
            let deriv = (nf * ln - (nf + alpha) * lnm1) / *x;
            if deriv == 0.0 {
                break;
            }
            let step = ln / deriv;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs() {
                break;
            }
        }
    }
    nodes.sort_by(|a, b| a.total_cmp(b));

    let log_norm = lgamma(nf + alpha + 1.0) - lgamma(nf + 1.0);
    let weights = nodes
        .iter()
        .map(|&x| {
            let (ln, lnm1, scale) = laguerre_pair_scaled(n, alpha, x);
            let deriv = (nf * ln - (nf + alpha) * lnm1) / x;
            (log_norm - x.ln() - 2.0 * (deriv.abs().ln() + scale)).exp()
        })
        .collect();
    Ok(QuadratureRule { nodes, weights, alpha })
}

/// Gauss rule on `[-1, 1]` for the weight `(1 - t^2)^a`, `a >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl IntervalRule {
    /// Integrate `g` against the rule's weight over `[-1, 1]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }

    /// Plain (`a = 0`) rule mapped onto `[lo, hi]`.
    pub fn integrate_on<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut g: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(mid + half * x)).sum::<f64>()
    }
}

/// Gauss–Gegenbauer rule: weight `(1 - t^2)^a` on `[-1, 1]`.
pub fn gauss_gegenbauer_rule(n: usize, a: f64) -> Result<IntervalRule> {
    if !(a >= 0.0) {
        return domain(format!("gauss_gegenbauer_rule requires a >= 0, got {a}"));
    }
    if n == 0 {
        return Err(Error::Precondition("rule needs at least one node".into()));
    }
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0))).sqrt()
        })
        .collect();
    let (nodes, first) = symmetric_tridiagonal_eigen(&diag, &off)?;
    let mu0 = (0.5 * PI.ln() + lgamma(a + 1.0) - lgamma(a + 1.5)).exp();
    let weights = first.iter().map(|v| mu0 * v * v).collect();
    Ok(IntervalRule { nodes, weights })
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> Result<IntervalRule> {
    gauss_gegenbauer_rule(n, 0.0)
}

/// Product Gauss rule on the unit sphere `S^{d-1}` in hyperspherical
/// coordinates: `n` Gegenbauer nodes per polar angle and `2n` equispaced
/// azimuths. Exact for polynomials of degree `< 2n` restricted to the sphere.
pub fn sphere_rule(d: usize, n: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if d == 0 || n == 0 {
        return Err(Error::Precondition("sphere_rule needs d >= 1 and n >= 1".into()));
    }
    if d == 1 {
        return Ok(vec![(vec![-1.0], 1.0), (vec![1.0], 1.0)]);
    }
    let n_phi = 2 * n;
    let circle: Vec<(Vec<f64>, f64)> = (0..n_phi)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            (vec![phi.cos(), phi.sin()], 2.0 * PI / n_phi as f64)
        })
        .collect();
    let mut points = circle;
    // build S^{k-1} from S^{k-2} by prepending a polar angle with weight sin^{k-2}
    for k in 3..=d {
        let rule = gauss_gegenbauer_rule(n, (k as f64 - 3.0) / 2.0)?;
        let mut next = Vec::with_capacity(points.len() * n);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let st = (1.0 - t * t).max(0.0).sqrt();
            for (p, pw) in &points {
                let mut q = Vec::with_capacity(k);
                q.push(t);
                q.extend(p.iter().map(|v| st * v));
                next.push((q, w * pw));
            }
        }
        points = next;
    }
    Ok(points)
}

/// Eigenvalues (ascending) and first eigenvector components of the symmetric
/// tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`). Implicit QL with Wilkinson shifts.
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::Precondition("tridiagonal sizes must be n and n-1".into()));
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
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
            if iter > 200 {
                return Err(Error::Numerical("implicit QL failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = idx.iter().map(|&i| d[i]).collect();
    let first = idx.iter().map(|&i| z[i]).collect();
    Ok((values, first))
}
