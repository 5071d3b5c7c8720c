//! Last sign change `r(Pf) = inf{r : P f ≥ 0 on |x| ≥ r}`.
//!
//! For every supported pair the product `P·f` is a non-negative angular
//! factor (`H²` or `|H|`) times `|x|^γ_r u(|x|)`, so the problem reduces to
//! the last sign change of the radial factor `u`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::reps::{FunctionRep, GaussianMixture, LaguerreFunction, Unit};
use crate::specialfn::{laguerre_series_scaled, lgamma};
use crate::weights::Weight;

pub const DEFAULT_TOL: f64 = 1e-10;
const SCAN_PANELS: usize = 4096;
const LAGUERRE_PANELS: usize = 64;
const MAX_DEPTH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    /// `+∞` when `P f` is eventually negative.
    #[serde(with = "crate::io::extended_float")]
    pub r: f64,
    #[serde(with = "crate::io::extended_float")]
    pub certified_tail_from: f64,
    #[serde(with = "crate::io::extended_float::pair")]
    pub bracketing_interval: (f64, f64),
    pub sign_at_infinity: i8,
}

impl RadiusResult {
    fn nonnegative(tail: f64, sign: i8) -> Self {
        RadiusResult { r: 0.0, certified_tail_from: tail, bracketing_interval: (0.0, 0.0), sign_at_infinity: sign }
    }
}

/// Last sign change of `P·f`.
pub fn last_sign_change(f: &FunctionRep, w: &Weight, tol: f64) -> Result<RadiusResult> {
    check_pair(f, w)?;
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    match f {
        FunctionRep::Gaussian(g) => gaussian_radius(g, tol),
        FunctionRep::Laguerre(l) => laguerre_radius(l, tol),
    }
}

fn check_pair(f: &FunctionRep, w: &Weight) -> Result<()> {
    if w.d != f.d() {
        return Err(Error::DimensionMismatch { expected: w.d, got: f.d() });
    }
    if w.harmonic != f.harmonic() {
        return Err(Error::HarmonicMismatch(format!(
            "sign of P·f is not radial: weight carries {}, function carries {}",
            w.harmonic.describe(),
            f.harmonic().describe()
        )));
    }
    Ok(())
}

/// Radius of a Gaussian mixture's radial factor.
pub fn gaussian_radius(g: &GaussianMixture, tol: f64) -> Result<RadiusResult> {
    let mut terms: Vec<(f64, f64)> = g.terms.iter().copied().filter(|t| t.0 != 0.0).collect();
    if terms.is_empty() {
        return Err(Error::ZeroFunction);
    }
    terms.sort_by(|x, y| x.1.total_cmp(&y.1));
    let (c0, a0) = terms[0];
    let sign_inf: i8 = if c0 > 0.0 { 1 } else { -1 };
    let others = (terms.len() - 1) as f64;
    // beyond tail, Σ_{j>0} |c_j| e^{-(a_j - a0)π r²} < |c_0|
    let tail2 = terms[1..].iter().map(|&(c, a)| ((others + 1.0) * c.abs() / c0.abs()).ln() / (PI * (a - a0))).fold(0.0f64, f64::max);
    let tail = tail2.sqrt();

    // same sign as u(r), without underflow
    let v = |r: f64| -> f64 {
        let s = PI * r * r;
        terms.iter().map(|&(c, a)| c * (-(a - a0) * s).exp()).sum()
    };

    if tail == 0.0 {
        return Ok(if sign_inf > 0 {
            RadiusResult::nonnegative(0.0, 1)
        } else {
            RadiusResult { r: f64::INFINITY, certified_tail_from: 0.0, bracketing_interval: (0.0, 0.0), sign_at_infinity: -1 }
        });
    }

    let mut last: Option<(f64, f64)> = None;
    let mut prev_r = 0.0;
    let mut prev_s = sgn(v(0.0));
    for i in 1..=SCAN_PANELS {
        let r = tail * i as f64 / SCAN_PANELS as f64;
        let s = sgn(v(r));
        if s != 0 {
            if prev_s != 0 && s != prev_s {
                last = Some((prev_r, r));
            }
            prev_r = r;
            prev_s = s;
        }
    }
    Ok(finish(last, tail, sign_inf, tol, |r| sgn(v(r))))
}

fn finish<F: Fn(f64) -> i8>(last: Option<(f64, f64)>, tail: f64, sign_inf: i8, tol: f64, sign: F) -> RadiusResult {
    match last {
        None if sign_inf > 0 => RadiusResult::nonnegative(tail, 1),
        None => RadiusResult { r: f64::INFINITY, certified_tail_from: tail, bracketing_interval: (0.0, 0.0), sign_at_infinity: -1 },
        Some((lo, hi)) => {
            let (lo, hi) = bisect(lo, hi, tol, &sign);
            let r = if sign_inf > 0 { hi } else { f64::INFINITY };
            RadiusResult { r, certified_tail_from: tail, bracketing_interval: (lo, hi), sign_at_infinity: sign_inf }
        }
    }
}

fn bisect<F: Fn(f64) -> i8>(mut lo: f64, mut hi: f64, tol: f64, sign: &F) -> (f64, f64) {
    let s_hi = sign(hi);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign(mid);
        if s == s_hi || s == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Radius of `H·p(2π|x|²) e^{-π|x|²}` with `p = Σ c_k L_k^(α)`.
pub fn laguerre_radius(l: &LaguerreFunction, tol: f64) -> Result<RadiusResult> {
    let Some(k_top) = l.degree() else {
        return Err(Error::ZeroFunction);
    };
    let coeffs = &l.coeffs[..=k_top];
    let alpha = l.alpha();
    // leading t^K coefficient of L_K is (-1)^K / K!
    let sign_inf: i8 = if (coeffs[k_top] > 0.0) == (k_top % 2 == 0) { 1 } else { -1 };
    if k_top == 0 {
        return Ok(finish(None, 0.0, sign_inf, tol, |_| sign_inf));
    }
    let poly = LaguerrePoly { coeffs, alpha };

    let mut t_tail = 4.0 * k_top as f64 + 2.0 * alpha + 2.0;
    let mut certified = false;
    for _ in 0..64 {
        if poly.taylor_signs_uniform(t_tail, sign_inf) {
            certified = true;
            break;
        }
        t_tail *= 2.0;
    }
    if !certified {
        return Err(Error::Numerical("could not certify the tail sign of the Laguerre polynomial".into()));
    }
    let r_of = |t: f64| (t / (2.0 * PI)).sqrt();
    let tail = r_of(t_tail);

    let width = t_tail / LAGUERRE_PANELS as f64;
    let knots: Vec<f64> = (0..=LAGUERRE_PANELS).map(|i| if i == 0 { 0.0 } else { poly.avoid_root(width * i as f64, width) }).collect();
    let mut last = None;
    for w in knots.windows(2).rev() {
        if let Some(br) = poly.largest_sign_change(w[0], w[1], 0) {
            last = Some(br);
            break;
        }
    }
    let last = last.map(|(a, b)| (r_of(a), r_of(b)));
    Ok(finish(last, tail, sign_inf, tol, |r| poly.sign(2.0 * PI * r * r)))
}

struct LaguerrePoly<'a> {
    coeffs: &'a [f64],
    alpha: f64,
}

impl LaguerrePoly<'_> {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn sign(&self, t: f64) -> i8 {
        sgn(laguerre_series_scaled(self.coeffs, self.alpha, t).mantissa)
    }

    /// A point near `t` where `p` is nonzero, so interval endpoints never sit on a root.
    fn avoid_root(&self, t: f64, scale: f64) -> f64 {
        let mut cand = t;
        for k in 1..8 {
            if self.sign(cand) != 0 {
                return cand;
            }
            cand = t + scale * 1e-3 * k as f64 * if k % 2 == 0 { 0.618 } else { -0.5 };
        }
        cand
    }

    /// `(sign, ln|·|)` of `p^{(j)}(t)/j! · w^j` for `j = 0..=K`.
    fn taylor(&self, t: f64, w: f64) -> Vec<(i8, f64)> {
        (0..=self.degree())
            .map(|j| {
                let s = laguerre_series_scaled(&self.coeffs[j..], self.alpha + j as f64, t);
                let sign = if j % 2 == 0 { sgn(s.mantissa) } else { -sgn(s.mantissa) };
                let ln = if sign == 0 {
                    f64::NEG_INFINITY
                } else {
                    s.mantissa.abs().ln() + s.log_scale + j as f64 * w.ln() - lgamma(j as f64 + 1.0)
                };
                (sign, ln)
            })
            .collect()
    }

    fn taylor_signs_uniform(&self, t: f64, sign: i8) -> bool {
        self.taylor(t, 1.0).iter().all(|&(s, _)| s == sign || s == 0) && self.sign(t) == sign
    }

    /// Sign variations of `(1+x)^K q(1/(1+x))`, `q(h) = p(t0 + h (t1 - t0))`;
    /// bounds the number of roots in `(t0, t1)`.
    fn descartes(&self, t0: f64, t1: f64) -> usize {
        let tay = self.taylor(t0, t1 - t0);
        let top = tay.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let mut a: Vec<f64> = tay.iter().rev().map(|&(s, ln)| s as f64 * (ln - top).exp()).collect();
        let n = a.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                a[j] += a[j + 1];
            }
        }
        let mut count = 0;
        let mut prev = 0i8;
        for v in a {
            let s = sgn(v);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Bracket of the largest odd-multiplicity root in `[t0, t1]`.
    fn largest_sign_change(&self, t0: f64, t1: f64, depth: usize) -> Option<(f64, f64)> {
        let v = self.descartes(t0, t1);
        let (s0, s1) = (self.sign(t0), self.sign(t1));
        match v {
            0 => None,
            1 => (s0 != 0 && s1 != 0 && s0 != s1).then_some((t0, t1)),
            _ if depth >= MAX_DEPTH => {
                // interval too narrow to split further; fall back to sampling
                let n = 64;
                let mut found = None;
                let mut prev = (t0, s0);
                for i in 1..=n {
                    let t = t0 + (t1 - t0) * i as f64 / n as f64;
                    let s = self.sign(t);
                    if s != 0 {
                        if prev.1 != 0 && s != prev.1 {
                            found = Some((prev.0, t));
                        }
                        prev = (t, s);
                    }
                }
                found
            }
            _ => {
                let mid = self.avoid_root(0.5 * (t0 + t1), t1 - t0);
                self.largest_sign_change(mid, t1, depth + 1).or_else(|| self.largest_sign_change(t0, mid, depth + 1))
            }
        }
    }
}

/// `√(r(Pf) · r(s(-i)^𝔯 P f̂))` for a Gaussian mixture.
pub fn scaled_radius_product(f: &GaussianMixture, s: i8, w: &Weight, tol: f64) -> Result<f64> {
    let img = f.fourier_transform();
    let factor = Unit::from_sign(s).mul(Unit::bochner(w.parity() as usize)).mul(img.phase);
    let Some(sigma) = factor.real_sign() else {
        return domain("s(-i)^𝔯 f̂ is not real for this weight and function");
    };
    let f_side = last_sign_change(&f.clone().into(), w, tol)?.r;
    let hat = img.mixture.scale(sigma as f64);
    let hat_side = last_sign_change(&hat.into(), w, tol)?.r;
    if f_side == 0.0 || hat_side == 0.0 {
        if f_side.is_infinite() || hat_side.is_infinite() {
            return domain("radius product of zero and infinity is undefined");
        }
        return Ok(0.0);
    }
    Ok((f_side * hat_side).sqrt())
}
