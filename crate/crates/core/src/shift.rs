//! Dimension shifts between radial problems in `R^{d+2ℓ}` and
//! `H`-factored problems in `R^d`.
//!
//! `drop` attaches a harmonic factor to a radial profile, `lift` strips a
//! coordinate-product factor back off. Both act on the harmonic factor
//! alone: the radial coefficients (and the Laguerre parameter
//! `α = d/2 + ℓ - 1 = (d + 2ℓ)/2 - 1`) are unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::reps::{FunctionRep, GaussianMixture, LaguerreFunction};
use crate::weights::{HarmonicFactor, HarmonicKind, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Drop,
    Lift,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub source_dim: usize,
    pub target_dim: usize,
    pub ell: usize,
    pub sign_in: i8,
    pub sign_out: i8,
    pub direction: Direction,
    pub harmonic: HarmonicFactor,
}

/// `s · (-1)^{(𝔯(ℓ) + ℓ)/2}` in exact integer arithmetic.
pub fn sign_law(s: i8, ell: usize) -> i8 {
    let e = (ell % 2 + ell) / 2;
    if e.is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// Factor applied to the target weight by the drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropQ {
    /// `P̃ = H·P_0(|x|)`.
    One,
    /// `P̃ = sgn(H)|x|^ℓ P_0(|x|)`.
    SignNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shifted {
    pub f: FunctionRep,
    pub weight: Weight,
    pub record: ShiftRecord,
}

/// `f ↦ f♭ = H·f_0(|x|)`: radial function in `R^{d+2ℓ}` to `R^d`.
///
/// `w` is the radial source weight `|x|^γ` in `R^{d+2ℓ}`; `s` is the sign
/// of the source class.
pub fn drop(f: &FunctionRep, w: &Weight, h: HarmonicFactor, q: DropQ, s: i8) -> Result<Shifted> {
    if !f.harmonic().is_one() {
        return Err(Error::Precondition("drop needs a radial function".into()));
    }
    if !w.harmonic.is_one() || w.sign_wrap {
        return Err(Error::Precondition("drop needs a radial source weight".into()));
    }
    if w.d != f.d() {
        return Err(Error::DimensionMismatch { expected: w.d, got: f.d() });
    }
    let n = f.d();
    let l = h.ell;
    if n <= 2 * l {
        return domain(format!("cannot drop {l} harmonic degrees from dimension {n}"));
    }
    let d = n - 2 * l;
    h.validate(d)?;
    let out = match f {
        FunctionRep::Gaussian(g) => FunctionRep::Gaussian(GaussianMixture { d, harmonic: h, terms: g.terms.clone() }),
        FunctionRep::Laguerre(lf) => FunctionRep::Laguerre(LaguerreFunction { d, harmonic: h, coeffs: lf.coeffs.clone() }),
    };
    let weight = match q {
        DropQ::One => Weight::new(d, h, w.gamma_r, false)?,
        DropQ::SignNormalized => Weight::new(d, h, w.gamma_r + l as f64, !h.is_one())?,
    };
    let record =
        ShiftRecord { source_dim: n, target_dim: d, ell: l, sign_in: s, sign_out: sign_law(s, l), direction: Direction::Drop, harmonic: h };
    Ok(Shifted { f: out, weight, record })
}

/// `g ↦ g#`: strips `H = x_1⋯x_ℓ` and returns the radial function in `R^{d+2ℓ}`.
///
/// `w` is the target-side weight `x_1⋯x_ℓ |x|^γ`; the returned weight is `|y|^γ`.
pub fn lift(f: &FunctionRep, w: &Weight, s: i8) -> Result<Shifted> {
    let h = f.harmonic();
    if h.kind != HarmonicKind::CoordinateProduct {
        return Err(Error::Unsupported(format!("lift needs a coordinate-product factor, got {}", h.describe())));
    }
    if w.harmonic != h || w.sign_wrap {
        return Err(Error::HarmonicMismatch("lift needs the weight x_1⋯x_ℓ |x|^γ matching the function".into()));
    }
    let d = f.d();
    let l = h.ell;
    let n = d + 2 * l;
    let out = match f {
        FunctionRep::Gaussian(g) => FunctionRep::Gaussian(GaussianMixture { d: n, harmonic: HarmonicFactor::ONE, terms: g.terms.clone() }),
        FunctionRep::Laguerre(lf) => {
            FunctionRep::Laguerre(LaguerreFunction { d: n, harmonic: HarmonicFactor::ONE, coeffs: lf.coeffs.clone() })
        }
    };
    let weight = Weight::new(n, HarmonicFactor::ONE, w.gamma_r, false)?;
    let record =
        ShiftRecord { source_dim: d, target_dim: n, ell: l, sign_in: s, sign_out: sign_law(s, l), direction: Direction::Lift, harmonic: h };
    Ok(Shifted { f: out, weight, record })
}

/// `(2π)^ℓ = ω_2^ℓ / 2^ℓ`: ratio of `∫ P g#` in `R^{d+2ℓ}` to `∫ P̃ f` in `R^d`.
pub fn integral_transport_factor(ell: usize) -> f64 {
    (2.0 * std::f64::consts::PI).powi(ell as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symmetrized {
    /// `f(x) - f(R_k x) = 2f`.
    Doubled(GaussianMixture),
    /// `f` is even in the axis, its odd part vanishes.
    Zero,
}

/// `f(x) - f(x_1, …, -x_k, …)` for axis `k` (0-based).
pub fn symmetrize_odd(f: &GaussianMixture, axis: usize) -> Result<Symmetrized> {
    if axis >= f.d {
        return Err(Error::DimensionMismatch { expected: f.d, got: axis + 1 });
    }
    if f.harmonic.odd_in_axis(axis) {
        Ok(Symmetrized::Doubled(f.scale(2.0)))
    } else {
        Ok(Symmetrized::Zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParity {
    Odd,
    Even,
    Neither,
}

/// Parity in each axis, checked by evaluation at fixed sample points.
pub fn axis_parities(f: &GaussianMixture) -> Vec<AxisParity> {
    let samples: Vec<Vec<f64>> =
        (0..6).map(|k| (0..f.d).map(|i| 0.37 + 0.21 * ((k * 7 + i * 3) % 11) as f64 - 0.9 * ((k + i) % 2) as f64).collect()).collect();
    (0..f.d)
        .map(|axis| {
            let (mut odd, mut even) = (true, true);
            for x in &samples {
                let mut y = x.clone();
                y[axis] = -y[axis];
                let a = f.evaluate(x).unwrap_or(f64::NAN);
                let b = f.evaluate(&y).unwrap_or(f64::NAN);
                let tol = 1e-12 * a.abs().max(b.abs()).max(1e-300);
                odd &= (a + b).abs() <= tol;
                even &= (a - b).abs() <= tol;
            }
            match (odd, even) {
                (true, false) => AxisParity::Odd,
                (false, true) => AxisParity::Even,
                (true, true) => AxisParity::Even,
                _ => AxisParity::Neither,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadializeReport {
    pub radial: bool,
    /// The rotation average vanishes (nontrivial harmonic factor).
    pub average_is_zero: bool,
}

/// Whether the rotation average of `f` is `f` itself or the zero function.
pub fn radialize_check(f: &GaussianMixture) -> RadializeReport {
    let radial = f.harmonic.is_one();
    RadializeReport { radial, average_is_zero: !radial }
}
