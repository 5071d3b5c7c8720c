//! One-dimensional family `f_t = h_t + ĥ_t`, `h_t = g(x) cos(2πtx)`, showing
//! that `‖f|x|^α‖_{L^q} ≤ C ‖f|x|^γ‖_1` fails on eigenfunctions when
//! `α < γ + 1/q'`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::specialfn::{gauss_legendre_rule, IntervalRule};

const NODES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NazarovReport {
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub q: f64,
    pub ts: Vec<f64>,
    /// `‖f_t |x|^α‖_{L^q[-δ,δ]}`
    pub numerators: Vec<f64>,
    /// `‖f_t |x|^γ‖_{L^1(R)}`
    pub denominators: Vec<f64>,
    pub ratios: Vec<f64>,
    pub violates_admissibility: bool,
    pub increasing: bool,
}

struct Bump {
    delta: f64,
    rule: IntervalRule,
}

impl Bump {
    fn new(delta: f64) -> Result<Self> {
        Ok(Bump { delta, rule: gauss_legendre_rule(NODES)? })
    }

    fn g(&self, x: f64) -> f64 {
        let u = x / self.delta;
        if u.abs() >= 1.0 {
            0.0
        } else {
            let v = 1.0 - u * u;
            v * v * v
        }
    }

    /// `ĝ(ξ) = 2δ ∫_0^1 (1-u²)³ cos(2πδξu) du` by composite Gauss–Legendre.
    fn g_hat(&self, xi: f64) -> f64 {
        let w = self.delta * xi;
        let panels = 1 + (2.0 * w.abs()).ceil() as usize;
        let h = 1.0 / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let lo = p as f64 * h;
            acc += self.rule.integrate_on(lo, lo + h, |u| {
                let v = 1.0 - u * u;
                v * v * v * (2.0 * PI * w * u).cos()
            });
        }
        2.0 * self.delta * acc
    }

    fn h_hat(&self, t: f64, x: f64) -> f64 {
        0.5 * (self.g_hat(x - t) + self.g_hat(x + t))
    }

    fn f(&self, t: f64, x: f64) -> f64 {
        self.g(x) * (2.0 * PI * t * x).cos() + self.h_hat(t, x)
    }

    /// `∫_{-δ}^{δ} |F(x)| |x|^e dx` for even `F`, via `x = δ v^p`, `p = 1/(1+e)`.
    fn singular_integral<F: Fn(f64) -> f64>(&self, e: f64, cycles: f64, f: F) -> f64 {
        let p = 1.0 / (1.0 + e);
        let panels = 32 + (4.0 * cycles * p.max(1.0)).ceil() as usize;
        let h = 1.0 / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let lo = k as f64 * h;
            acc += self.rule.integrate_on(lo, lo + h, |v| f(self.delta * v.powf(p)));
        }
        2.0 * self.delta.powf(1.0 + e) * p * acc
    }
}

/// `‖g |x|^γ‖_1` for the bump of half-width `δ`.
pub fn bump_weighted_l1(delta: f64, gamma: f64) -> Result<f64> {
    if !(delta > 0.0) || !(gamma > -1.0) {
        return domain("need δ > 0 and γ > -1");
    }
    let b = Bump::new(delta)?;
    Ok(b.singular_integral(gamma, 1.0, |x| b.g(x).abs()))
}

/// Ratios `R(t) = ‖f_t|x|^α‖_{L^q[-δ,δ]} / ‖f_t|x|^γ‖_1` over `ts`.
pub fn nazarov_demo(delta: f64, alpha: f64, gamma: f64, q: f64, ts: &[f64]) -> Result<NazarovReport> {
    if !(delta > 0.0 && delta.is_finite()) {
        return domain(format!("δ must be positive, got {delta}"));
    }
    if !(gamma > -1.0 && gamma < 0.0) {
        return domain(format!("γ must lie in (-1, 0), got {gamma}"));
    }
    if !(q > 1.0 && q.is_finite()) {
        return domain(format!("q must lie in (1, ∞), got {q}"));
    }
    if !(alpha * q > -1.0) {
        return domain(format!("|x|^(αq) must be locally integrable, got α = {alpha}, q = {q}"));
    }
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return domain("t values must be positive");
    }
    let b = Bump::new(delta)?;
    let mut numerators = Vec::with_capacity(ts.len());
    let mut denominators = Vec::with_capacity(ts.len());
    for &t in ts {
        let cycles = t * delta + delta * 1.0;
        let num = b.singular_integral(alpha * q, cycles, |x| b.f(t, x).abs().powf(q)).powf(1.0 / q);

        let inner = b.singular_integral(gamma, cycles, |x| b.f(t, x).abs());
        // outside [-δ, δ] only ĥ_t survives; it is negligible beyond t + 50/δ
        let hi = t + 50.0 / delta;
        let width = 0.25 / delta;
        let panels = ((hi - delta) / width).ceil() as usize;
        let step = (hi - delta) / panels as f64;
        let mut outer = 0.0;
        for k in 0..panels {
            let lo = delta + k as f64 * step;
            outer += b.rule.integrate_on(lo, lo + step, |x| b.h_hat(t, x).abs() * x.powf(gamma));
        }
        numerators.push(num);
        denominators.push(inner + 2.0 * outer);
    }
    let ratios: Vec<f64> = numerators.iter().zip(&denominators).map(|(n, d)| n / d).collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    Ok(NazarovReport {
        delta,
        alpha,
        gamma,
        q,
        ts: ts.to_vec(),
        numerators,
        denominators,
        ratios,
        violates_admissibility: alpha < gamma + (1.0 - 1.0 / q),
        increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::lgamma;

    #[test]
    fn bump_transform_at_zero() {
        // ∫ (1-u²)³ over [-1, 1] = 32/35
        let b = Bump::new(0.1).unwrap();
        assert!((b.g_hat(0.0) - 0.1 * 32.0 / 35.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_bump_norm() {
        // 2δ^{γ+1} ∫_0^1 (1-u²)³ u^γ du = δ^{γ+1} B((γ+1)/2, 4)
        let (delta, gamma) = (0.2, -0.5);
        let beta = (lgamma((gamma + 1.0) / 2.0) + lgamma(4.0) - lgamma((gamma + 1.0) / 2.0 + 4.0)).exp();
        let got = bump_weighted_l1(delta, gamma).unwrap();
        assert!((got - delta.powf(gamma + 1.0) * beta).abs() < 1e-12);
    }

    #[test]
    fn parameter_checks() {
        assert!(nazarov_demo(0.1, -0.3, 0.5, 2.0, &[10.0]).is_err());
        assert!(nazarov_demo(0.1, -0.6, -0.5, 2.0, &[10.0]).is_err());
        assert!(nazarov_demo(0.1, -0.3, -0.5, 1.0, &[10.0]).is_err());
        assert!(nazarov_demo(0.1, -0.3, -0.5, 2.0, &[]).is_err());
    }
}
