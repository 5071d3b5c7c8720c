//! Explicit Gaussian-mixture eigenfunctions used for upper bounds.
//!
//! All exponents use `γ` = total homogeneity degree of the weight, so that
//! `∫ P·H e^{-aπ|x|²} ∝ a^{-(d+ℓ+γ)/2}`.

use serde::Serialize;

use super::{FourierImage, GaussianMixture};
use crate::error::{domain, precondition, Result};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F0 {
    #[serde(skip)]
    pub f: GaussianMixture,
    pub a0: f64,
    pub big_a0: f64,
}

/// `f_0 = H(e^{-π|x|²/a₀} + a₀^{(d+2ℓ)/2} e^{-a₀π|x|²} - A₀ e^{-π|x|²})`
/// with `A₀ = a₀^{(d+ℓ+γ)/2} + a₀^{(ℓ-γ)/2}`.
pub fn build_f0(w: &Weight, a0: f64) -> Result<F0> {
    if !(a0 > 1.0) || !a0.is_finite() {
        return domain(format!("a0 must exceed 1, got {a0}"));
    }
    let (d, l, g) = dims(w);
    let big_a0 = a0.powf((d + l + g) / 2.0) + a0.powf((l - g) / 2.0);
    let terms = vec![(1.0, 1.0 / a0), (a0.powf((d + 2.0 * l) / 2.0), a0), (-big_a0, 1.0)];
    Ok(F0 { f: GaussianMixture::new(w.d, w.harmonic, terms)?, a0, big_a0 })
}

/// `g_1 = H(e^{-π|x|²/a} - a^{(d+2ℓ)/2} e^{-aπ|x|²})`, a `-1`-type eigenfunction up to the phase `(-i)^ℓ`.
pub fn build_g1(w: &Weight, a1: f64) -> Result<GaussianMixture> {
    if !(a1 > 1.0) || !a1.is_finite() {
        return domain(format!("a1 must exceed 1, got {a1}"));
    }
    let (d, l, _) = dims(w);
    GaussianMixture::new(w.d, w.harmonic, vec![(1.0, 1.0 / a1), (-a1.powf((d + 2.0 * l) / 2.0), a1)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F1Family {
    #[serde(skip)]
    pub g1: GaussianMixture,
    #[serde(skip)]
    pub h1: GaussianMixture,
    #[serde(skip)]
    pub f1: GaussianMixture,
    pub a1: f64,
    pub b1: f64,
    pub big_a1: f64,
}

/// `f_1 = g_1 - A₁ h_1` where `h_1` is `g_1` built with `b₁` and
/// `A₁ = (a₁^{(d+ℓ+γ)/2} - a₁^{(ℓ-γ)/2}) / (b₁^{(d+ℓ+γ)/2} - b₁^{(ℓ-γ)/2})`.
pub fn build_g1_h1_f1(w: &Weight, a1: f64, b1: f64) -> Result<F1Family> {
    if !(b1 > 1.0 && a1 > b1) || !a1.is_finite() {
        return domain(format!("need 1 < b1 < a1, got a1 = {a1}, b1 = {b1}"));
    }
    let (d, l, g) = dims(w);
    let hi = (d + l + g) / 2.0;
    let lo = (l - g) / 2.0;
    if hi == lo {
        return precondition("A1 is undefined when d + 2γ = 0");
    }
    let big_a1 = (a1.powf(hi) - a1.powf(lo)) / (b1.powf(hi) - b1.powf(lo));
    let g1 = build_g1(w, a1)?;
    let h1 = build_g1(w, b1)?;
    let f1 = g1.add_scaled(&h1, -big_a1)?;
    Ok(F1Family { g1, h1, f1, a1, b1, big_a1 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiT {
    pub psi: GaussianMixture,
    pub psi_hat: FourierImage,
    pub t: f64,
}

/// `ψ_t = H(e^{-tπ|x|²} - 2^{-(γ-ℓ)/2} e^{-2tπ|x|²})`, requires `γ ≥ ℓ`.
pub fn build_psi_t(w: &Weight, t: f64) -> Result<PsiT> {
    let (_, l, g) = dims(w);
    if g < l {
        return domain(format!("ψ_t needs γ >= ℓ, got γ = {g}, ℓ = {l}"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("t must be positive, got {t}"));
    }
    let psi = GaussianMixture::new(w.d, w.harmonic, vec![(1.0, t), (-(2f64.powf(-(g - l) / 2.0)), 2.0 * t)])?;
    let psi_hat = psi.fourier_transform();
    Ok(PsiT { psi, psi_hat, t })
}

fn dims(w: &Weight) -> (f64, f64, f64) {
    (w.d as f64, w.ell() as f64, w.gamma_tot())
}
