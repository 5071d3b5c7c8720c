//! Closed-form function representations `f(x) = H(x)·u(|x|)`.
//!
//! Two families: finite Gaussian mixtures, whose Fourier transforms follow
//! from `F[H e^{-aπ|x|²}] = (-i)^ℓ a^{-(d+2ℓ)/2} H e^{-π|x|²/a}`, and
//! expansions in the Laguerre eigenbasis `H·L_k^(α)(2π|x|²) e^{-π|x|²}`,
//! `α = d/2 + ℓ - 1`, whose `k`-th member has eigenvalue `(-i)^ℓ (-1)^k`.

pub mod constructions;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::specialfn::{gauss_laguerre_rule, laguerre_series, lgamma};
use crate::weights::{HarmonicFactor, HarmonicKind, Weight};

pub use constructions::{build_f0, build_g1, build_g1_h1_f1, build_psi_t, F1Family, PsiT, F0};

/// A fourth root of unity `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unit(u8);

impl Unit {
    pub const ONE: Unit = Unit(0);
    pub const I: Unit = Unit(1);
    pub const MINUS_ONE: Unit = Unit(2);
    pub const MINUS_I: Unit = Unit(3);

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Unit {
        Unit(k.rem_euclid(4) as u8)
    }

    /// `(-i)^ℓ`, the Bochner phase of a degree-`ℓ` harmonic factor.
    pub fn bochner(ell: usize) -> Unit {
        Unit::i_pow(-(ell as i64))
    }

    pub fn from_sign(s: i8) -> Unit {
        if s >= 0 {
            Unit::ONE
        } else {
            Unit::MINUS_ONE
        }
    }

    pub fn exponent(&self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Unit) -> Unit {
        Unit((self.0 + other.0) % 4)
    }

    pub fn conj(self) -> Unit {
        Unit((4 - self.0) % 4)
    }

    pub fn is_real(&self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `±1` for real units.
    pub fn real_sign(&self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        ["1", "i", "-1", "-i"][self.0 as usize]
    }

    pub fn parse(s: &str) -> Result<Unit> {
        match s.trim() {
            "1" | "+1" => Ok(Unit::ONE),
            "i" | "+i" => Ok(Unit::I),
            "-1" => Ok(Unit::MINUS_ONE),
            "-i" => Ok(Unit::MINUS_I),
            other => Err(Error::Parse(format!("not a unit: '{other}'"))),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Unit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Unit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Unit::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// `f(x) = H(x)·Σ_j c_j e^{-a_j π|x|²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    pub d: usize,
    pub harmonic: HarmonicFactor,
    pub terms: Vec<(f64, f64)>,
}

/// Transform of a mixture: `phase · mixture`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierImage {
    pub phase: Unit,
    pub mixture: GaussianMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenStatus {
    pub is_eigen: bool,
    pub eigenvalue: Option<Unit>,
}

impl EigenStatus {
    pub const NONE: EigenStatus = EigenStatus { is_eigen: false, eigenvalue: None };

    fn of(u: Unit) -> Self {
        EigenStatus { is_eigen: true, eigenvalue: Some(u) }
    }
}

impl GaussianMixture {
    pub fn new(d: usize, harmonic: HarmonicFactor, terms: Vec<(f64, f64)>) -> Result<Self> {
        let g = GaussianMixture { d, harmonic, terms };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return domain("dimension must be positive");
        }
        self.harmonic.validate(self.d)?;
        if self.terms.is_empty() || self.terms.iter().all(|&(c, _)| c == 0.0) {
            return Err(Error::ZeroFunction);
        }
        for (i, &(c, a)) in self.terms.iter().enumerate() {
            if !(a > 0.0) || !a.is_finite() || !c.is_finite() {
                return domain(format!("mixture term {i} has invalid (c, a) = ({c}, {a})"));
            }
            if self.terms[..i].iter().any(|&(_, b)| b == a) {
                return domain(format!("duplicate Gaussian width a = {a}"));
            }
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.harmonic.ell
    }

    /// Radial factor `u(r) = Σ c_j e^{-a_j π r²}`.
    pub fn radial(&self, r: f64) -> f64 {
        let r2 = PI * r * r;
        self.terms.iter().map(|&(c, a)| c * (-a * r2).exp()).sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.d, x)?;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(self.harmonic.eval(x) * self.radial(r))
    }

    /// Closed-form Fourier transform.
    pub fn fourier_transform(&self) -> FourierImage {
        let n = (self.d + 2 * self.ell()) as f64 / 2.0;
        let terms = self.terms.iter().map(|&(c, a)| (c * a.powf(-n), 1.0 / a)).collect();
        FourierImage { phase: Unit::bochner(self.ell()), mixture: GaussianMixture { d: self.d, harmonic: self.harmonic, terms } }
    }

    /// Compare `F[f]` with `f` term by term.
    pub fn eigen_status(&self) -> EigenStatus {
        let img = self.fourier_transform();
        let own: Vec<(f64, f64)> = self.terms.iter().copied().filter(|t| t.0 != 0.0).collect();
        let other: Vec<(f64, f64)> = img.mixture.terms.iter().copied().filter(|t| t.0 != 0.0).collect();
        if own.is_empty() || own.len() != other.len() {
            return EigenStatus::NONE;
        }
        let mut ratio: Option<f64> = None;
        for &(c, a) in &own {
            let Some(&(c2, _)) = other.iter().find(|&&(_, b)| (b - a).abs() <= 1e-12 * a.max(b)) else {
                return EigenStatus::NONE;
            };
            let q = c2 / c;
            match ratio {
                None => ratio = Some(q),
                Some(r0) if (q - r0).abs() <= 1e-10 * r0.abs().max(1.0) => {}
                _ => return EigenStatus::NONE,
            }
        }
        let q = ratio.unwrap();
        if (q - 1.0).abs() <= 1e-10 {
            EigenStatus::of(img.phase)
        } else if (q + 1.0).abs() <= 1e-10 {
            EigenStatus::of(img.phase.mul(Unit::MINUS_ONE))
        } else {
            EigenStatus::NONE
        }
    }

    /// `x ↦ f(δx)`.
    pub fn dilate(&self, delta: f64) -> GaussianMixture {
        let hl = delta.powi(self.ell() as i32);
        let terms = self.terms.iter().map(|&(c, a)| (c * hl, a * delta * delta)).collect();
        GaussianMixture { d: self.d, harmonic: self.harmonic, terms }
    }

    pub fn scale(&self, k: f64) -> GaussianMixture {
        let terms = self.terms.iter().map(|&(c, a)| (k * c, a)).collect();
        GaussianMixture { d: self.d, harmonic: self.harmonic, terms }
    }

    /// `self + k·other`, merging equal widths.
    pub fn add_scaled(&self, other: &GaussianMixture, k: f64) -> Result<GaussianMixture> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: other.d });
        }
        if other.harmonic != self.harmonic {
            return Err(Error::HarmonicMismatch(format!("{:?} vs {:?}", self.harmonic, other.harmonic)));
        }
        let mut terms = self.terms.clone();
        for &(c, a) in &other.terms {
            match terms.iter_mut().find(|t| t.1 == a) {
                Some(t) => t.0 += k * c,
                None => terms.push((k * c, a)),
            }
        }
        Ok(GaussianMixture { d: self.d, harmonic: self.harmonic, terms })
    }
}

/// `f(x) = H(x)·Σ_k c_k L_k^(α)(2π|x|²) e^{-π|x|²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreFunction {
    pub d: usize,
    pub harmonic: HarmonicFactor,
    pub coeffs: Vec<f64>,
}

impl LaguerreFunction {
    pub fn new(d: usize, harmonic: HarmonicFactor, coeffs: Vec<f64>) -> Result<Self> {
        let f = LaguerreFunction { d, harmonic, coeffs };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return domain("dimension must be positive");
        }
        self.harmonic.validate(self.d)?;
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return domain("non-finite Laguerre coefficient");
        }
        if self.coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::ZeroFunction);
        }
        if self.coeffs.len() > 201 {
            return precondition("Laguerre expansions are limited to degree 200");
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.harmonic.ell
    }

    /// Laguerre parameter `α = d/2 + ℓ - 1`.
    pub fn alpha(&self) -> f64 {
        laguerre_alpha(self.d, self.ell())
    }

    /// Eigenvalue of the `k`-th basis member.
    pub fn term_eigenvalue(&self, k: usize) -> Unit {
        Unit::bochner(self.ell()).mul(Unit::i_pow(2 * k as i64))
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// Polynomial part `p(t) = Σ c_k L_k^(α)(t)`.
    pub fn poly(&self, t: f64) -> f64 {
        laguerre_series(&self.coeffs, self.alpha(), t)
    }

    pub fn radial(&self, r: f64) -> f64 {
        let t = 2.0 * PI * r * r;
        self.poly(t) * (-0.5 * t).exp()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.d, x)?;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(self.harmonic.eval(x) * self.radial(r))
    }

    /// `F[f] = (-i)^ℓ · Σ (-1)^k c_k (basis)_k`.
    pub fn fourier_transform(&self) -> (Unit, LaguerreFunction) {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c } else { -c }).collect();
        (Unit::bochner(self.ell()), LaguerreFunction { d: self.d, harmonic: self.harmonic, coeffs })
    }

    pub fn eigen_status(&self) -> EigenStatus {
        let mut parity = None;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            match parity {
                None => parity = Some(k % 2),
                Some(p) if p == k % 2 => {}
                _ => return EigenStatus::NONE,
            }
        }
        match parity {
            Some(p) => EigenStatus::of(self.term_eigenvalue(p)),
            None => EigenStatus::NONE,
        }
    }
}

pub fn laguerre_alpha(d: usize, ell: usize) -> f64 {
    d as f64 / 2.0 + ell as f64 - 1.0
}

/// Either representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub enum FunctionRep {
    Gaussian(GaussianMixture),
    Laguerre(LaguerreFunction),
}

impl FunctionRep {
    pub fn d(&self) -> usize {
        match self {
            FunctionRep::Gaussian(g) => g.d,
            FunctionRep::Laguerre(l) => l.d,
        }
    }

    pub fn harmonic(&self) -> HarmonicFactor {
        match self {
            FunctionRep::Gaussian(g) => g.harmonic,
            FunctionRep::Laguerre(l) => l.harmonic,
        }
    }

    pub fn radial(&self, r: f64) -> f64 {
        match self {
            FunctionRep::Gaussian(g) => g.radial(r),
            FunctionRep::Laguerre(l) => l.radial(r),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        match self {
            FunctionRep::Gaussian(g) => g.evaluate(x),
            FunctionRep::Laguerre(l) => l.evaluate(x),
        }
    }

    pub fn eigen_status(&self) -> EigenStatus {
        match self {
            FunctionRep::Gaussian(g) => g.eigen_status(),
            FunctionRep::Laguerre(l) => l.eigen_status(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionRep::Gaussian(g) => g.validate(),
            FunctionRep::Laguerre(l) => l.validate(),
        }
    }
}

impl From<GaussianMixture> for FunctionRep {
    fn from(g: GaussianMixture) -> Self {
        FunctionRep::Gaussian(g)
    }
}

impl From<LaguerreFunction> for FunctionRep {
    fn from(l: LaguerreFunction) -> Self {
        FunctionRep::Laguerre(l)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FunctionFile {
    Gaussian { d: usize, ell: usize, harmonic_kind: HarmonicKind, terms: Vec<[f64; 2]> },
    Laguerre { d: usize, ell: usize, harmonic_kind: HarmonicKind, coeffs: Vec<f64> },
}

impl TryFrom<FunctionFile> for FunctionRep {
    type Error = Error;

    fn try_from(f: FunctionFile) -> Result<Self> {
        match f {
            FunctionFile::Gaussian { d, ell, harmonic_kind, terms } => {
                let h = HarmonicFactor { kind: harmonic_kind, ell };
                let terms = terms.into_iter().map(|[c, a]| (c, a)).collect();
                Ok(FunctionRep::Gaussian(GaussianMixture::new(d, h, terms)?))
            }
            FunctionFile::Laguerre { d, ell, harmonic_kind, coeffs } => {
                let h = HarmonicFactor { kind: harmonic_kind, ell };
                Ok(FunctionRep::Laguerre(LaguerreFunction::new(d, h, coeffs)?))
            }
        }
    }
}

impl From<FunctionRep> for FunctionFile {
    fn from(f: FunctionRep) -> Self {
        match f {
            FunctionRep::Gaussian(g) => FunctionFile::Gaussian {
                d: g.d,
                ell: g.harmonic.ell,
                harmonic_kind: g.harmonic.kind,
                terms: g.terms.into_iter().map(|(c, a)| [c, a]).collect(),
            },
            FunctionRep::Laguerre(l) => {
                FunctionFile::Laguerre { d: l.d, ell: l.harmonic.ell, harmonic_kind: l.harmonic.kind, coeffs: l.coeffs }
            }
        }
    }
}

fn check_dim(d: usize, x: &[f64]) -> Result<()> {
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    Ok(())
}

/// Angular factor and radial exponent `m` with `∫ P f = A ∫_0^∞ u(r) r^{m-1} dr`.
///
/// Returns `None` when the angular factor vanishes identically
/// (a radial weight against a function with nontrivial harmonic factor).
pub(crate) fn integral_structure(d: usize, h: HarmonicFactor, w: &Weight) -> Result<Option<(f64, f64)>> {
    if w.d != d {
        return Err(Error::DimensionMismatch { expected: w.d, got: d });
    }
    if w.harmonic != h {
        if w.harmonic.is_one() && !h.is_one() && !w.sign_wrap {
            return Ok(None);
        }
        return Err(Error::HarmonicMismatch(format!("weight carries {}, function carries {}", w.harmonic.describe(), h.describe())));
    }
    let m = d as f64 + h.ell as f64 + w.gamma_tot();
    if !(m > 0.0) {
        return precondition(format!("∫ P f diverges at the origin (radial exponent {m} <= 0)"));
    }
    Ok(Some((w.angular_factor(), m)))
}

/// `∫_0^∞ e^{-aπr²} r^{m-1} dr = Γ(m/2) / (2 (aπ)^{m/2})`.
pub(crate) fn gaussian_moment(a: f64, m: f64) -> f64 {
    (lgamma(m / 2.0) - 2f64.ln() - (m / 2.0) * (a * PI).ln()).exp()
}

/// `∫_{R^d} P f`.
pub fn weighted_integral(f: &FunctionRep, w: &Weight) -> Result<f64> {
    match f {
        FunctionRep::Gaussian(g) => weighted_integral_gaussian(g, w),
        FunctionRep::Laguerre(l) => weighted_integral_laguerre(l, w),
    }
}

pub fn weighted_integral_gaussian(g: &GaussianMixture, w: &Weight) -> Result<f64> {
    let Some((ang, m)) = integral_structure(g.d, g.harmonic, w)? else {
        return Ok(0.0);
    };
    Ok(ang * g.terms.iter().map(|&(c, a)| c * gaussian_moment(a, m)).sum::<f64>())
}

pub fn weighted_integral_laguerre(l: &LaguerreFunction, w: &Weight) -> Result<f64> {
    let Some((ang, m)) = integral_structure(l.d, l.harmonic, w)? else {
        return Ok(0.0);
    };
    Ok(ang * laguerre_radial_moments(l.d, l.ell(), m, l.coeffs.len())?.iter().zip(&l.coeffs).map(|(mk, c)| mk * c).sum::<f64>())
}

/// `∫_0^∞ L_k^(α)(2πr²) e^{-πr²} r^{m-1} dr` for `k < count`, by a Gauss–Laguerre
/// rule exact for the polynomial part.
pub fn laguerre_radial_moments(d: usize, ell: usize, m: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let alpha = laguerre_alpha(d, ell);
    let n = count.div_ceil(2).max(1);
    let rule = gauss_laguerre_rule(n, m / 2.0 - 1.0)?;
    let pre = 0.5 * PI.powf(-m / 2.0);
    let mut out = vec![0.0; count];
    for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let t = 2.0 * u;
        let mut prev = 1.0;
        let mut cur = 1.0 + alpha - t;
        out[0] += wt;
        if count > 1 {
            out[1] += wt * cur;
        }
        for k in 2..count {
            let jf = (k - 1) as f64;
            let next = ((2.0 * jf + 1.0 + alpha - t) * cur - (jf + alpha) * prev) / (jf + 1.0);
            prev = cur;
            cur = next;
            out[k] += wt * cur;
        }
    }
    Ok(out.into_iter().map(|v| pre * v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mix(d: usize, h: HarmonicFactor, terms: &[(f64, f64)]) -> GaussianMixture {
        GaussianMixture::new(d, h, terms.to_vec()).unwrap()
    }

    #[test]
    fn transform_examples() {
        for d in 1..5 {
            let img = mix(d, HarmonicFactor::ONE, &[(1.0, 1.0)]).fourier_transform();
            assert_eq!(img.phase, Unit::ONE);
            assert_eq!(img.mixture.terms, vec![(1.0, 1.0)]);
        }
        let img = mix(1, HarmonicFactor::coordinate_product(1), &[(1.0, 1.0)]).fourier_transform();
        assert_eq!(img.phase, Unit::MINUS_I);
        assert_eq!(img.mixture.terms, vec![(1.0, 1.0)]);

        let img = mix(2, HarmonicFactor::ONE, &[(1.0, 4.0)]).fourier_transform();
        assert_eq!(img.phase, Unit::ONE);
        assert_relative_eq!(img.mixture.terms[0].0, 0.25, max_relative = 1e-15);
        assert_relative_eq!(img.mixture.terms[0].1, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn involution_is_reflection() {
        let g = mix(3, HarmonicFactor::plane(3), &[(0.7, 0.3), (-1.2, 2.5), (2.0, 1.0)]);
        let once = g.fourier_transform();
        let twice = once.mixture.fourier_transform();
        assert_eq!(once.phase.mul(twice.phase), Unit::MINUS_ONE);
        for (a, b) in g.terms.iter().zip(&twice.mixture.terms) {
            assert_relative_eq!(a.0, b.0, max_relative = 1e-14);
            assert_relative_eq!(a.1, b.1, max_relative = 1e-15);
        }
    }

    #[test]
    fn eigen_status_examples() {
        assert_eq!(mix(2, HarmonicFactor::ONE, &[(1.0, 2.0)]).eigen_status(), EigenStatus::NONE);
        // e^{-π|x|²/2} - 2^{1/2} e^{-2π|x|²} in d = 1 is a -1 eigenfunction
        let g = mix(1, HarmonicFactor::ONE, &[(1.0, 0.5), (-2f64.sqrt(), 2.0)]);
        assert_eq!(g.eigen_status().eigenvalue, Some(Unit::MINUS_ONE));
        let g = mix(2, HarmonicFactor::coordinate_product(1), &[(1.0, 1.0)]);
        assert_eq!(g.eigen_status().eigenvalue, Some(Unit::MINUS_I));
    }

    #[test]
    fn laguerre_eigen_and_transform() {
        let f = LaguerreFunction::new(3, HarmonicFactor::ONE, vec![1.0, 0.0, -0.5]).unwrap();
        assert_eq!(f.eigen_status().eigenvalue, Some(Unit::ONE));
        let f = LaguerreFunction::new(3, HarmonicFactor::ONE, vec![0.0, 1.0, 0.0, 2.0]).unwrap();
        assert_eq!(f.eigen_status().eigenvalue, Some(Unit::MINUS_ONE));
        let f = LaguerreFunction::new(3, HarmonicFactor::coordinate_product(2), vec![1.0, 1.0]).unwrap();
        assert!(!f.eigen_status().is_eigen);
        let (phase, g) = f.fourier_transform();
        assert_eq!(phase, Unit::MINUS_ONE);
        assert_eq!(g.coeffs, vec![1.0, -1.0]);
    }

    #[test]
    fn radial_profile_examples() {
        let g = mix(1, HarmonicFactor::ONE, &[(1.0, 1.0)]);
        assert_relative_eq!(g.radial(1.0), (-PI).exp(), max_relative = 1e-15);
        let g = mix(2, HarmonicFactor::coordinate_product(1), &[(1.0, 1.0)]);
        assert_eq!(g.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn single_gaussian_integral() {
        for (d, h) in [(3, HarmonicFactor::ONE), (3, HarmonicFactor::coordinate_product(2)), (4, HarmonicFactor::plane(3))] {
            let w = Weight::new(d, h, 0.0, false).unwrap();
            let g: FunctionRep = mix(d, h, &[(1.0, 1.0)]).into();
            let n = (d + 2 * h.ell) as f64 / 2.0;
            let expect = h.sphere_moment(d) * (lgamma(n) - 2f64.ln() - n * PI.ln()).exp();
            assert_relative_eq!(weighted_integral(&g, &w).unwrap(), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn laguerre_integral_matches_gaussian_for_k0() {
        let h = HarmonicFactor::coordinate_product(1);
        let w = Weight::new(3, h, 0.7, false).unwrap();
        let l: FunctionRep = LaguerreFunction::new(3, h, vec![1.0]).unwrap().into();
        let g: FunctionRep = mix(3, h, &[(1.0, 1.0)]).into();
        assert_relative_eq!(weighted_integral(&l, &w).unwrap(), weighted_integral(&g, &w).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn integral_errors() {
        let g: FunctionRep = mix(2, HarmonicFactor::coordinate_product(1), &[(1.0, 1.0)]).into();
        let w = Weight::new(2, HarmonicFactor::plane(1), 0.0, false).unwrap();
        assert!(matches!(weighted_integral(&g, &w), Err(Error::HarmonicMismatch(_))));
        assert_eq!(weighted_integral(&g, &Weight::constant(2)).unwrap(), 0.0);
        assert!(matches!(weighted_integral(&g, &Weight::constant(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_shape() {
        let g: FunctionRep = mix(2, HarmonicFactor::coordinate_product(2), &[(1.0, 2.0)]).into();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["kind"], "gaussian");
        assert_eq!(v["harmonic_kind"], "coordinate_product");
        assert_eq!(v["ell"], 2);
        let back: FunctionRep = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
        let bad = serde_json::json!({"kind": "gaussian", "d": 1, "ell": 0, "harmonic_kind": "one", "terms": [[1.0, -1.0]]});
        assert!(serde_json::from_value::<FunctionRep>(bad).is_err());
    }
}
