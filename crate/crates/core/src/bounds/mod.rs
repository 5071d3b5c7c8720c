//! Closed-form upper and lower bounds, sharp-constant fixtures and the
//! power-weight case analysis.

mod nazarov;

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{domain, precondition, Error, Result};
use crate::radius::{last_sign_change, DEFAULT_TOL};
use crate::reps::{build_f0, build_g1, build_g1_h1_f1, GaussianMixture};
use crate::specialfn::lgamma;
use crate::weights::{HarmonicFactor, HarmonicKind, Weight};

pub use nazarov::{bump_weighted_l1, nazarov_demo, NazarovReport};

/// `s · i^{ℓ+𝔯}` as `±1`; `ℓ + 𝔯` is always even for supported weights.
pub fn regime_sign(s: i8, w: &Weight) -> i8 {
    let e = w.ell() + w.parity() as usize;
    debug_assert!(e.is_multiple_of(2));
    if (e / 2).is_multiple_of(2) {
        s
    } else {
        -s
    }
}

fn check_sign(s: i8) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        domain(format!("s must be +1 or -1, got {s}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRegime {
    /// `s i^{ℓ+𝔯} = 1`, witness `f_0`.
    F0,
    /// `s i^{ℓ+𝔯} = -1` and `-d < γ ≤ -d/2`: the infimum is zero.
    Vanishing,
    /// `s i^{ℓ+𝔯} = -1` and `γ > -d/2`, witness `f_1`.
    F1,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianUpper {
    pub regime: WitnessRegime,
    /// Explicit bound; `0` in the vanishing regime.
    pub analytic: f64,
    /// Certified last sign change of the witness.
    pub numeric: f64,
    #[serde(skip)]
    pub witness: GaussianMixture,
    /// Construction parameters (`a0` or `a1, b1`) and the matching `A` constant.
    pub params: Vec<(String, f64)>,
    /// `(a1, r(P g1), explicit bound)` in the vanishing regime.
    pub g1_sequence: Vec<(f64, f64, f64)>,
}

/// Upper bound from the explicit Gaussian constructions.
pub fn gaussian_upper(s: i8, w: &Weight) -> Result<GaussianUpper> {
    check_sign(s)?;
    w.validate()?;
    let (d, l, g) = (w.d as f64, w.ell() as f64, w.gamma_tot());
    let rho = (d + l + g).max(l - g);
    let radius = |f: &GaussianMixture| -> Result<f64> { Ok(last_sign_change(&f.clone().into(), w, DEFAULT_TOL)?.r) };

    if regime_sign(s, w) == 1 {
        let a0 = 1.0 + 1.0 / rho.sqrt();
        let f0 = build_f0(w, a0)?;
        let analytic = (a0 * f0.big_a0.ln() / (PI * (a0 - 1.0))).sqrt();
        let numeric = radius(&f0.f)?;
        return Ok(GaussianUpper {
            regime: WitnessRegime::F0,
            analytic,
            numeric,
            witness: f0.f,
            params: vec![("a0".into(), a0), ("A0".into(), f0.big_a0)],
            g1_sequence: Vec::new(),
        });
    }

    if g <= -d / 2.0 {
        let n = d + 2.0 * l;
        let mut seq = Vec::new();
        let mut witness = None;
        for a1 in [10.0, 100.0, 1000.0] {
            let g1 = build_g1(w, a1)?;
            let bound = g1_bound(n, a1);
            seq.push((a1, radius(&g1)?, bound));
            witness = Some(g1);
        }
        let numeric = seq.last().map(|t| t.1).unwrap_or(0.0);
        return Ok(GaussianUpper {
            regime: WitnessRegime::Vanishing,
            analytic: 0.0,
            numeric,
            witness: witness.expect("three widths"),
            params: vec![("a1".into(), 1000.0)],
            g1_sequence: seq,
        });
    }

    let alpha = 1.0 / rho.sqrt();
    let (a1, b1) = (1.0 + 2.0 * alpha, 1.0 + alpha);
    let fam = build_g1_h1_f1(w, a1, b1)?;
    let n = d + 2.0 * l;
    let r1 = ((n / 2.0 * a1.ln() + 2f64.ln()) / (PI * (a1 - 1.0 / a1))).sqrt();
    let r2 = ((2.0 * fam.big_a1).ln() / PI * a1 * b1 / (a1 - b1)).sqrt();
    let numeric = radius(&fam.f1)?;
    Ok(GaussianUpper {
        regime: WitnessRegime::F1,
        analytic: r1.max(r2),
        numeric,
        witness: fam.f1,
        params: vec![("a1".into(), a1), ("b1".into(), b1), ("A1".into(), fam.big_a1), ("r1".into(), r1), ("r2".into(), r2)],
        g1_sequence: Vec::new(),
    })
}

/// `√((d+2ℓ) log a / (2π(a - 1/a)))`, the explicit radius bound for `g_1`.
pub fn g1_bound(n: f64, a1: f64) -> f64 {
    (n * a1.ln() / (2.0 * PI * (a1 - 1.0 / a1))).sqrt()
}

/// Admissibility constant `C(P;d;1)` for homogeneous weights.
pub fn admissibility_constant(w: &Weight) -> Result<f64> {
    let g = w.gamma_tot();
    if g < 0.0 {
        return Err(Error::Unsupported("admissibility constant needs γ >= 0".into()));
    }
    if g == 0.0 {
        let inf = w.sphere_ess_inf();
        if inf == 0.0 {
            return precondition("ess inf |P| = 0: sub-level sets have infinite measure");
        }
        return Ok(1.0 / inf);
    }
    let d = w.d as f64;
    let a1 = w.sublevel_volume(1.0)?;
    if !a1.is_finite() {
        return precondition("sub-level sets of P have infinite measure");
    }
    Ok((1.0 + g / d) * ((1.0 + d / g) * a1).powf(g / d))
}

/// Lower bound `((d + γq')Γ(d/2) / (2π^{d/2}(2KC)^{q'}))^{1/(d+γq')}`, `q = ∞` allowed.
pub fn admissible_lower(w: &Weight, q: f64, k: f64, c: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return domain(format!("q must lie in [1, ∞], got {q}"));
    }
    if !(k > 0.0 && k.is_finite() && c > 0.0 && c.is_finite()) {
        return domain("K and C must be positive and finite");
    }
    let g = w.gamma_tot();
    if g < 0.0 {
        return Err(Error::Unsupported("lower bound chain needs γ >= 0".into()));
    }
    let d = w.d as f64;
    if q == 1.0 {
        if g == 0.0 {
            return domain("q = 1 needs γ > 0");
        }
        return Ok((2.0 * k * c).powf(-1.0 / g));
    }
    let qp = if q.is_infinite() { 1.0 } else { q / (q - 1.0) };
    let e = d + g * qp;
    let ln = e.ln() + lgamma(d / 2.0) - 2f64.ln() - (d / 2.0) * PI.ln() - qp * (2.0 * k * c).ln();
    Ok((ln / e).exp())
}

/// `(1/√π)(Γ(d/2+1)/2)^{1/d}`, the `P = 1` lower bound.
pub fn constant_weight_lower(d: usize) -> f64 {
    let d = d as f64;
    ((lgamma(d / 2.0 + 1.0) - 2f64.ln()) / d - 0.5 * PI.ln()).exp()
}

/// Explicit power-weight lower bound for `γ ≥ 0`.
pub fn power_lower(d: usize, gamma: f64) -> f64 {
    let df = d as f64;
    if gamma == 0.0 {
        return constant_weight_lower(d);
    }
    let base = ((lgamma(df / 2.0 + 1.0) - (df / 2.0) * PI.ln()) / df).exp();
    base * 0.5f64.powf(1.0 / (df + gamma)) * (gamma / (df + gamma)).powf(gamma / (df * (df + gamma)))
}

/// `γ`-uniform floor `(Γ(d/2+1)/(2π^{d/2}e^{1/2e}))^{1/d}`.
pub fn power_floor(d: usize) -> f64 {
    let df = d as f64;
    ((lgamma(df / 2.0 + 1.0) - 2f64.ln() - (df / 2.0) * PI.ln() - 1.0 / (2.0 * E)) / df).exp()
}

/// The constant `c` with `power_floor(1) = c·√(1/2πe)`.
pub fn uniform_constant_d1() -> f64 {
    power_floor(1) / (1.0 / (2.0 * PI * E)).sqrt()
}

/// Width of the uncovered window around `-d/2`.
pub fn epsilon(d: usize) -> f64 {
    match d {
        1 | 3 => 0.5,
        _ if d.is_multiple_of(2) => 1.0,
        _ => 1.5,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub s: i8,
    pub d: usize,
    pub gamma: f64,
    pub ell: usize,
    pub weight: String,
    pub lower: Option<f64>,
    pub lower_method: String,
    pub lower_floor: Option<f64>,
    pub upper_analytic: Option<f64>,
    pub upper_numeric: Option<f64>,
    pub upper_method: String,
    pub sharp: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// `lower ≤ sharp ≤ upper` (or `lower ≤ upper` without a sharp value), `1e-9` slack.
    pub fn consistent(&self) -> bool {
        let slack = 1e-9;
        let lo = self.lower.unwrap_or(0.0);
        let up = match (self.upper_analytic, self.upper_numeric) {
            (Some(a), Some(n)) => a.min(n),
            (Some(a), None) => a,
            (None, Some(n)) => n,
            (None, None) => f64::INFINITY,
        };
        match self.sharp {
            Some(v) => lo <= v + slack && v <= up + slack,
            None => lo <= up + slack,
        }
    }
}

/// Full case analysis for `P = |x|^γ`.
pub fn power_weight_report(s: i8, d: usize, gamma: f64) -> Result<BoundReport> {
    check_sign(s)?;
    if d == 0 {
        return domain("dimension must be positive");
    }
    let df = d as f64;
    if !(gamma > -df) {
        return domain(format!("γ must exceed -d = -{d}, got {gamma}"));
    }
    let w = Weight::power(d, gamma)?;
    let eps = epsilon(d);
    let mut notes = Vec::new();

    let (lower, lower_method, lower_floor) = if s == -1 && gamma <= -df / 2.0 {
        (Some(0.0), "vanishing".to_string(), None)
    } else if gamma >= 0.0 {
        (Some(power_lower(d, gamma)), "power".to_string(), Some(power_floor(d)))
    } else if gamma >= -df / 2.0 + eps {
        let (l, dd) = shift_params(d, gamma);
        notes.push(format!("shifted to sgn(H)|x|^{} in d = {dd} with ℓ = {l}", gamma + l as f64));
        (Some(power_lower(dd, gamma + l as f64)), "shift".to_string(), Some(power_floor(dd)))
    } else if s == 1 && gamma <= -df / 2.0 - eps {
        let reflected = -df - gamma;
        let (l, dd) = shift_params(d, reflected);
        notes.push(format!("reflected to γ' = {reflected}, shifted to d = {dd} with ℓ = {l}"));
        (Some(power_lower(dd, reflected + l as f64)), "reflect+shift".to_string(), Some(power_floor(dd)))
    } else {
        notes.push("γ lies in the window not covered by the known lower bounds".into());
        (None, "none".to_string(), None)
    };

    let up = gaussian_upper(s, &w)?;
    let (upper_analytic, upper_numeric) = match up.regime {
        WitnessRegime::Vanishing => (Some(0.0), Some(up.numeric)),
        _ => (Some(up.analytic), Some(up.numeric)),
    };
    let sharp = if gamma == 0.0 { sharp_constant(s, d, 0) } else { None };
    if gamma == 0.0 {
        if let Some(c) = conjectured_constant(s, d) {
            notes.push(format!("conjectured value {c}"));
        }
    }
    Ok(BoundReport {
        s,
        d,
        gamma,
        ell: 0,
        weight: w.describe(),
        lower,
        lower_method,
        lower_floor,
        upper_analytic,
        upper_numeric,
        upper_method: format!("{:?}", up.regime).to_lowercase(),
        sharp,
        notes,
    })
}

/// `(ℓ, d - 2ℓ)` used to shift away a negative exponent.
fn shift_params(d: usize, gamma: f64) -> (usize, usize) {
    let l = if d == 3 { 1 } else { (-gamma.floor()) as usize };
    (l, d - 2 * l)
}

/// Harmonic factor used by the shift for `(d, γ)`.
pub fn shift_harmonic(d: usize, gamma: f64) -> HarmonicFactor {
    let (l, _) = shift_params(d, gamma);
    if d == 3 {
        HarmonicFactor::coordinate_product(l)
    } else {
        HarmonicFactor::plane(l)
    }
}

/// Report for an arbitrary supported weight.
pub fn bounds_report(s: i8, w: &Weight) -> Result<BoundReport> {
    w.validate()?;
    if w.harmonic.is_one() && !w.sign_wrap {
        return power_weight_report(s, w.d, w.gamma_r);
    }
    check_sign(s)?;
    let mut notes = Vec::new();
    let (lower, lower_method) = if w.gamma_tot() >= 0.0 {
        match admissibility_constant(w) {
            Ok(c) => (Some(admissible_lower(w, f64::INFINITY, w.sup_unit_ball(), c)?), "admissibility".to_string()),
            Err(e) => {
                notes.push(format!("no lower bound: {e}"));
                (None, "none".to_string())
            }
        }
    } else {
        (None, "none".to_string())
    };
    let up = gaussian_upper(s, w)?;
    let sharp = match (w.harmonic.kind, w.sign_wrap, w.gamma_r == 0.0) {
        (HarmonicKind::CoordinateProduct, false, true) => sharp_constant(s, w.d, w.ell()),
        _ => None,
    };
    Ok(BoundReport {
        s,
        d: w.d,
        gamma: w.gamma_tot(),
        ell: w.ell(),
        weight: w.describe(),
        lower,
        lower_method,
        lower_floor: None,
        upper_analytic: Some(up.analytic),
        upper_numeric: Some(up.numeric),
        upper_method: format!("{:?}", up.regime).to_lowercase(),
        sharp,
        notes,
    })
}

/// One known sharp value: `𝔸_s(x_1⋯x_ℓ; d) = value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpEntry {
    pub base: usize,
    pub ell: usize,
    pub d: usize,
    pub s: i8,
    pub value: f64,
}

/// Sign `s` attached to `(base, ℓ)`; exponent `(𝔯(ℓ)+ℓ+2)/2` for bases 8, 24 and `(𝔯(ℓ)+ℓ)/2` for 12.
pub fn sharp_sign(base: usize, ell: usize) -> Option<i8> {
    let r = ell % 2;
    let e = match base {
        8 | 24 => (r + ell + 2) / 2,
        12 => (r + ell) / 2,
        _ => return None,
    };
    Some(if e % 2 == 0 { 1 } else { -1 })
}

/// Largest admissible `ℓ` for each base.
pub fn sharp_max_ell(base: usize) -> Option<usize> {
    match base {
        8 => Some(2),
        12 => Some(4),
        24 => Some(8),
        _ => None,
    }
}

/// All 18 sharp fixtures: `𝔸_{-1}(1)=1` plus the three base families for `0 ≤ ℓ ≤ ℓ_max`.
pub fn sharp_table() -> Vec<SharpEntry> {
    let mut out = vec![SharpEntry { base: 1, ell: 0, d: 1, s: -1, value: 1.0 }];
    for base in [8, 12, 24] {
        let value = if base == 24 { 2.0 } else { 2f64.sqrt() };
        for ell in 0..=sharp_max_ell(base).unwrap() {
            out.push(SharpEntry { base, ell, d: base - 2 * ell, s: sharp_sign(base, ell).unwrap(), value });
        }
    }
    out
}

/// Known exact value for the weight `x_1⋯x_ℓ` (or `1` when `ℓ = 0`) in dimension `d`.
pub fn sharp_constant(s: i8, d: usize, ell: usize) -> Option<f64> {
    sharp_table().into_iter().find(|e| e.s == s && e.d == d && e.ell == ell).map(|e| e.value)
}

/// Conjectured values, reported as annotations only.
pub fn conjectured_constant(s: i8, d: usize) -> Option<f64> {
    match (s, d) {
        (-1, 2) => Some((4.0f64 / 3.0).powf(0.25)),
        (1, 1) => Some((1.0 + 5f64.sqrt()).powf(-0.5)),
        _ => None,
    }
}
