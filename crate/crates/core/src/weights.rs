//! Weights `P(x) = H(x)·|x|^γ_r` and `sgn(H(x))·|x|^γ_r`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specialfn::{ball_volume, lgamma, sphere_area};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicKind {
    One,
    CoordinateProduct,
    PlaneHarmonic,
}

impl HarmonicKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            HarmonicKind::One => "one",
            HarmonicKind::CoordinateProduct => "coordinate_product",
            HarmonicKind::PlaneHarmonic => "plane_harmonic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(HarmonicKind::One),
            "coordinate_product" | "coord" => Ok(HarmonicKind::CoordinateProduct),
            "plane_harmonic" | "plane" => Ok(HarmonicKind::PlaneHarmonic),
            other => Err(Error::Parse(format!("unknown harmonic kind '{other}'"))),
        }
    }
}

/// Homogeneous harmonic polynomial `H` of degree `ell`:
/// `1`, `x_1⋯x_ℓ`, or `Re((x_1 + i x_2)^ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicFactor {
    pub kind: HarmonicKind,
    pub ell: usize,
}

impl HarmonicFactor {
    pub const ONE: HarmonicFactor = HarmonicFactor { kind: HarmonicKind::One, ell: 0 };

    pub fn coordinate_product(ell: usize) -> Self {
        if ell == 0 {
            return Self::ONE;
        }
        HarmonicFactor { kind: HarmonicKind::CoordinateProduct, ell }
    }

    pub fn plane(ell: usize) -> Self {
        if ell == 0 {
            return Self::ONE;
        }
        HarmonicFactor { kind: HarmonicKind::PlaneHarmonic, ell }
    }

    pub fn new(kind: HarmonicKind, ell: usize) -> Self {
        match kind {
            HarmonicKind::One => HarmonicFactor { kind, ell },
            HarmonicKind::CoordinateProduct => Self::coordinate_product(ell),
            HarmonicKind::PlaneHarmonic => Self::plane(ell),
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        match self.kind {
            HarmonicKind::One if self.ell != 0 => domain("harmonic kind 'one' requires ell = 0"),
            HarmonicKind::CoordinateProduct if self.ell == 0 || self.ell > d => {
                domain(format!("coordinate product needs 1 <= ell <= d, got ell = {} in d = {d}", self.ell))
            }
            HarmonicKind::PlaneHarmonic if self.ell == 0 || d < 2 => {
                domain(format!("plane harmonic needs ell >= 1 and d >= 2, got ell = {} in d = {d}", self.ell))
            }
            _ => Ok(()),
        }
    }

    pub fn is_one(&self) -> bool {
        self.kind == HarmonicKind::One
    }

    /// Number of leading coordinates `H` depends on.
    pub fn support_dim(&self) -> usize {
        match self.kind {
            HarmonicKind::One => 0,
            HarmonicKind::CoordinateProduct => self.ell,
            HarmonicKind::PlaneHarmonic => 2,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.kind {
            HarmonicKind::One => 1.0,
            HarmonicKind::CoordinateProduct => x[..self.ell].iter().product(),
            HarmonicKind::PlaneHarmonic => {
                let (a, b) = (x[0], x[1]);
                let (mut re, mut im) = (1.0, 0.0);
                for _ in 0..self.ell {
                    let t = re * a - im * b;
                    im = re * b + im * a;
                    re = t;
                }
                re
            }
        }
    }

    /// Parity of `H` under `x_k ↦ -x_k` (axis index from 0): `true` if odd.
    pub fn odd_in_axis(&self, axis: usize) -> bool {
        match self.kind {
            HarmonicKind::One => false,
            HarmonicKind::CoordinateProduct => axis < self.ell,
            HarmonicKind::PlaneHarmonic => axis == 0 && self.ell % 2 == 1,
        }
    }

    /// `∫_{S^{d-1}} H(ω)² dσ(ω)`.
    pub fn sphere_moment(&self, d: usize) -> f64 {
        let h = d as f64 / 2.0;
        let l = self.ell as f64;
        match self.kind {
            HarmonicKind::One => sphere_area(d),
            HarmonicKind::CoordinateProduct => (2f64.ln() + h * PI.ln() - l * 2f64.ln() - lgamma(h + l)).exp(),
            HarmonicKind::PlaneHarmonic => (lgamma(l + 1.0) + h * PI.ln() - lgamma(h + l)).exp(),
        }
    }

    /// `∫_{S^{d-1}} |H(ω)|^p dσ(ω)`, `+∞` when the integral diverges (`p <= -1`, `ell >= 1`).
    pub fn abs_sphere_moment(&self, d: usize, p: f64) -> f64 {
        if self.is_one() || d == 1 {
            // S^0 = {±1} and |x_1| = 1 there
            return sphere_area(d);
        }
        if p <= -1.0 {
            return f64::INFINITY;
        }
        let l = self.ell as f64;
        let m = (d as f64 + l * p) / 2.0;
        // ∫_{R^d} |H|^p e^{-π|x|²} dx divided by the radial factor Γ(m)/(2π^m)
        let radial_inv = 2f64.ln() + m * PI.ln() - lgamma(m);
        let ln_gauss = match self.kind {
            HarmonicKind::CoordinateProduct => {
                let q = (p + 1.0) / 2.0;
                l * (lgamma(q) - q * PI.ln())
            }
            HarmonicKind::PlaneHarmonic => {
                let q = (l * p + 2.0) / 2.0;
                let angular = 2f64.ln() + 0.5 * PI.ln() + lgamma((p + 1.0) / 2.0) - lgamma(p / 2.0 + 1.0);
                angular + lgamma(q) - 2f64.ln() - q * PI.ln()
            }
            HarmonicKind::One => unreachable!(),
        };
        (ln_gauss + radial_inv).exp()
    }

    /// `sup_{|ω|=1} |H(ω)|`.
    pub fn sphere_sup(&self) -> f64 {
        match self.kind {
            HarmonicKind::One | HarmonicKind::PlaneHarmonic => 1.0,
            HarmonicKind::CoordinateProduct => (self.ell as f64).powf(-(self.ell as f64) / 2.0),
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            HarmonicKind::One => "1".into(),
            HarmonicKind::CoordinateProduct => (1..=self.ell).map(|i| format!("x{i}")).collect::<Vec<_>>().join("*"),
            HarmonicKind::PlaneHarmonic => format!("Re((x1+i*x2)^{})", self.ell),
        }
    }
}

/// `P(x) = H(x)|x|^γ_r`, or `sgn(H(x))|x|^γ_r` when `sign_wrap` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub d: usize,
    pub harmonic: HarmonicFactor,
    pub gamma_r: f64,
    pub sign_wrap: bool,
}

impl Weight {
    pub fn new(d: usize, harmonic: HarmonicFactor, gamma_r: f64, sign_wrap: bool) -> Result<Self> {
        let w = Weight { d, harmonic, gamma_r, sign_wrap };
        w.validate()?;
        Ok(w)
    }

    /// `P = 1` in dimension `d`.
    pub fn constant(d: usize) -> Self {
        Weight { d, harmonic: HarmonicFactor::ONE, gamma_r: 0.0, sign_wrap: false }
    }

    /// `P = |x|^γ`.
    pub fn power(d: usize, gamma: f64) -> Result<Self> {
        Self::new(d, HarmonicFactor::ONE, gamma, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return domain("dimension must be positive");
        }
        if !self.gamma_r.is_finite() {
            return domain("radial exponent must be finite");
        }
        self.harmonic.validate(self.d)?;
        if !(self.gamma_tot() > -(self.d as f64)) {
            return domain(format!("total homogeneity {} must exceed -d = -{}", self.gamma_tot(), self.d));
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.harmonic.ell
    }

    /// Total homogeneity degree: `P(δx) = δ^γ_tot P(x)`.
    pub fn gamma_tot(&self) -> f64 {
        if self.sign_wrap {
            self.gamma_r
        } else {
            self.gamma_r + self.harmonic.ell as f64
        }
    }

    /// `𝔯` with `P(-x) = (-1)^𝔯 P(x)`.
    pub fn parity(&self) -> u8 {
        (self.harmonic.ell % 2) as u8
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: x.len() });
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 && self.gamma_r < 0.0 {
            return Ok(f64::NAN);
        }
        let h = self.harmonic.eval(x);
        let h = if self.sign_wrap { sign(h) } else { h };
        let radial = if self.gamma_r == 0.0 { 1.0 } else { r2.powf(self.gamma_r / 2.0) };
        Ok(h * radial)
    }

    /// `∫_{S^{d-1}} H(ω)² dσ(ω)` for the weight's harmonic factor.
    pub fn sphere_moment(&self) -> f64 {
        self.harmonic.sphere_moment(self.d)
    }

    /// Angular factor of `∫ P f` for `f = H·u(|x|)`: `∫_S H·P(ω) dσ`,
    /// which is `∫_S H²` unwrapped and `∫_S |H|` wrapped.
    pub fn angular_factor(&self) -> f64 {
        if self.sign_wrap {
            self.harmonic.abs_sphere_moment(self.d, 1.0)
        } else {
            self.sphere_moment()
        }
    }

    /// `ess inf |P|` over the unit sphere.
    pub fn sphere_ess_inf(&self) -> f64 {
        if self.harmonic.is_one() || self.sign_wrap {
            1.0
        } else {
            0.0
        }
    }

    /// `K = sup_{B_1} |P|`; infinite when `γ_tot < 0` or `γ_r < 0` under the wrap.
    pub fn sup_unit_ball(&self) -> f64 {
        if self.sign_wrap {
            if self.gamma_r < 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        } else if self.gamma_tot() < 0.0 {
            f64::INFINITY
        } else {
            self.harmonic.sphere_sup()
        }
    }

    /// Volume of `A_λ = {x : |P(x)| ≤ λ}`.
    pub fn sublevel_volume(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return domain(format!("sublevel_volume requires λ > 0, got {lambda}"));
        }
        let g = self.gamma_tot();
        if g < 0.0 {
            return Err(Error::Unsupported("sub-level sets of weights with negative homogeneity are unbounded".into()));
        }
        if g == 0.0 {
            return Ok(if lambda < self.sphere_ess_inf() { 0.0 } else { f64::INFINITY });
        }
        let d = self.d as f64;
        Ok(lambda.powf(d / g) * self.unit_sublevel_volume(g))
    }

    fn unit_sublevel_volume(&self, g: f64) -> f64 {
        let d = self.d as f64;
        if self.harmonic.is_one() || self.sign_wrap {
            return ball_volume(self.d);
        }
        self.harmonic.abs_sphere_moment(self.d, -d / g) / d
    }

    pub fn describe(&self) -> String {
        let h = self.harmonic.describe();
        let h = if self.sign_wrap { format!("sgn({h})") } else { h };
        if self.gamma_r == 0.0 {
            h
        } else if self.harmonic.is_one() {
            format!("|x|^{}", self.gamma_r)
        } else {
            format!("{h}*|x|^{}", self.gamma_r)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (d={})", self.describe(), self.d)
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
