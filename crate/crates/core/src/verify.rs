//! Cross-module invariant suites: closed forms against direct quadrature,
//! and the exact identities linking the modules.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::bounds::{sharp_max_ell, sharp_sign};
use crate::error::{domain, Result};
use crate::radius::{last_sign_change, DEFAULT_TOL};
use crate::reps::{weighted_integral, weighted_integral_gaussian, FunctionRep, GaussianMixture, Unit};
use crate::shift::{integral_transport_factor, lift, sign_law};
use crate::specialfn::{gauss_legendre_rule, lgamma, sphere_rule};
use crate::weights::{HarmonicFactor, HarmonicKind, Weight};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub const SUITES: [&str; 6] = ["bochner", "fourier", "integrals", "riesz", "transport", "sign-law"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub elapsed_ms: f64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn finish(suite: &str, start: Instant, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            checks,
        }
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", self.suite, c.name)).collect()
    }
}

fn check(name: String, max_error: f64, tolerance: f64, detail: String) -> Check {
    Check { name, passed: max_error <= tolerance, max_error, tolerance, detail }
}

/// Runs one suite by name (`all` runs every suite).
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    match name {
        "bochner" => Ok(vec![bochner_suite(seed)?]),
        "fourier" => Ok(vec![fourier_suite(seed)?]),
        "integrals" => Ok(vec![integral_suite(seed)?]),
        "riesz" => Ok(vec![riesz_suite(seed)?]),
        "transport" => Ok(vec![transport_suite(seed)?]),
        "sign-law" | "sign_law" => Ok(vec![sign_law_suite()]),
        "all" => SUITES.iter().map(|s| run_suite(s, seed).map(|mut v| v.remove(0))).collect(),
        other => domain(format!("unknown suite '{other}', expected one of {} or all", SUITES.join(", "))),
    }
}

fn random_terms(rng: &mut StdRng, count: usize, widths: (f64, f64)) -> Vec<(f64, f64)> {
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(count);
    while terms.len() < count {
        let a = rng.gen_range(widths.0..widths.1);
        if terms.iter().all(|t| (t.1 - a).abs() > 1e-3) {
            terms.push((rng.gen_range(-1.0..1.0), a));
        }
    }
    terms
}

fn a_min(f: &GaussianMixture) -> f64 {
    f.terms.iter().map(|t| t.1).fold(f64::INFINITY, f64::min)
}

fn random_point(rng: &mut StdRng, d: usize, radius: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-radius..radius)).collect()
}

fn unit_value(u: Unit) -> Complex64 {
    Complex64::i().powu(u.exponent() as u32)
}

/// `∫_{R^d} f(x) e^{-2πi x·ξ} dx` by the tensor trapezoid rule, `d ≤ 2`.
///
/// Spectrally accurate for Gaussian integrands once the box covers the decay.
pub fn trapezoid_transform(f: &GaussianMixture, xi: &[f64], step: f64) -> Complex64 {
    let half = (45.0 / (PI * a_min(f))).sqrt() + 1.0;
    let n = (half / step).ceil() as i64;
    let xs: Vec<f64> = (-n..=n).map(|i| i as f64 * step).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    match f.d {
        1 => {
            for &x in &xs {
                let v = f.evaluate(&[x]).unwrap_or(0.0);
                acc += v * Complex64::from_polar(1.0, -2.0 * PI * x * xi[0]);
            }
            acc * step
        }
        2 => {
            for &x in &xs {
                let ex = Complex64::from_polar(1.0, -2.0 * PI * x * xi[0]);
                let mut row = Complex64::new(0.0, 0.0);
                for &y in &xs {
                    let v = f.evaluate(&[x, y]).unwrap_or(0.0);
                    row += v * Complex64::from_polar(1.0, -2.0 * PI * y * xi[1]);
                }
                acc += ex * row;
            }
            acc * step * step
        }
        _ => separable_transform(f, xi, step),
    }
}

/// Transform of `H·Σ c e^{-aπ|x|²}` as a product of one-dimensional factors;
/// a plane harmonic takes a two-dimensional factor in `(x_1, x_2)`.
pub fn separable_transform(f: &GaussianMixture, xi: &[f64], step: f64) -> Complex64 {
    let h = f.harmonic;
    let mut total = Complex64::new(0.0, 0.0);
    for &(c, a) in &f.terms {
        let one = GaussianMixture { d: 1, harmonic: HarmonicFactor::ONE, terms: vec![(1.0, a)] };
        let odd = GaussianMixture { d: 1, harmonic: HarmonicFactor::coordinate_product(1), terms: vec![(1.0, a)] };
        let mut prod = Complex64::new(c, 0.0);
        let mut start = 0;
        if h.kind == HarmonicKind::PlaneHarmonic {
            let plane = GaussianMixture { d: 2, harmonic: h, terms: vec![(1.0, a)] };
            prod *= trapezoid_transform(&plane, &xi[..2], step);
            start = 2;
        }
        for (i, &x) in xi.iter().enumerate().skip(start) {
            let odd_axis = h.kind == HarmonicKind::CoordinateProduct && i < h.ell;
            prod *= trapezoid_transform(if odd_axis { &odd } else { &one }, &[x], step);
        }
        total += prod;
    }
    total
}

/// `F_d[H·h](ξ)` by quadrature against `(-i)^ℓ H(ξ)·F_{d+2ℓ}[h](ξ, 0)` in closed form.
pub fn bochner_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed);
    let configs = [
        (1, HarmonicFactor::coordinate_product(1)),
        (2, HarmonicFactor::coordinate_product(1)),
        (2, HarmonicFactor::coordinate_product(2)),
        (2, HarmonicFactor::plane(2)),
    ];
    let mut checks = Vec::new();
    for (d, h) in configs {
        let l = h.ell;
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let terms = random_terms(&mut rng, 3, (0.5, 2.0));
            let f = GaussianMixture::new(d, h, terms.clone())?;
            let lifted = GaussianMixture::new(d + 2 * l, HarmonicFactor::ONE, terms)?.fourier_transform();
            for _ in 0..10 {
                let xi = random_point(&mut rng, d, 1.2);
                let numeric = trapezoid_transform(&f, &xi, 0.04);
                let mut padded = xi.clone();
                padded.resize(d + 2 * l, 0.0);
                let closed = unit_value(Unit::bochner(l).mul(lifted.phase)) * h.eval(&xi) * lifted.mixture.evaluate(&padded)?;
                worst = worst.max((numeric - closed).norm());
            }
        }
        checks.push(check(format!("d={d}, {}", h.describe()), worst, 1e-6, "10 mixtures x 10 points".into()));
    }
    checks.push(Check {
        name: "d=1, ell=2".into(),
        passed: true,
        max_error: 0.0,
        tolerance: 0.0,
        detail: "skipped: no harmonic polynomial of degree 2 exists on the line".into(),
    });
    Ok(SuiteReport::finish("bochner", start, checks))
}

/// Closed-form transforms against direct quadrature for `d ≤ 3`.
pub fn fourier_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed ^ 0xf0);
    let mut checks = Vec::new();
    for d in 1..=3usize {
        let mut choices = vec![HarmonicFactor::ONE];
        choices.extend((1..=d).map(HarmonicFactor::coordinate_product));
        if d >= 2 {
            choices.extend((1..=3).map(HarmonicFactor::plane));
        }
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let h = choices[rng.gen_range(0..choices.len())];
            let f = GaussianMixture::new(d, h, random_terms(&mut rng, 3, (0.5, 2.0)))?;
            let img = f.fourier_transform();
            for _ in 0..10 {
                let xi = random_point(&mut rng, d, 1.0);
                let numeric = if d <= 2 { trapezoid_transform(&f, &xi, 0.04) } else { separable_transform(&f, &xi, 0.04) };
                let closed = unit_value(img.phase) * img.mixture.evaluate(&xi)?;
                worst = worst.max((numeric - closed).norm());
            }
        }
        checks.push(check(format!("d={d}"), worst, 1e-7, "20 mixtures x 10 points".into()));
    }
    Ok(SuiteReport::finish("fourier", start, checks))
}

/// `∫ P f` in closed form against a product sphere rule and composite radial quadrature.
pub fn integral_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x1f);
    let configs = [
        (1, HarmonicFactor::ONE, -0.5),
        (1, HarmonicFactor::coordinate_product(1), 1.5),
        (3, HarmonicFactor::ONE, 2.0),
        (3, HarmonicFactor::coordinate_product(2), -1.0),
        (4, HarmonicFactor::plane(2), 0.7),
        (6, HarmonicFactor::coordinate_product(3), 3.0),
    ];
    let gl = gauss_legendre_rule(20)?;
    let mut checks = Vec::new();
    for (d, h, gamma_r) in configs {
        let w = Weight::new(d, h, gamma_r, false)?;
        let m = d as f64 + h.ell as f64 + w.gamma_tot();
        let ang: f64 = sphere_rule(d, 12)?.iter().map(|(x, wt)| wt * h.eval(x).powi(2)).sum();
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let f = GaussianMixture::new(d, h, random_terms(&mut rng, 3, (0.3, 3.0)))?;
            let exact = weighted_integral_gaussian(&f, &w)?;
            // r = v^{1/m} on [0, 1] flattens r^{m-1}; geometric panels absorb the leftover v^{2/m}
            let mut radial = 0.0;
            for k in 0..80 {
                let (lo, hi) = (0.5f64.powi(k + 1), 0.5f64.powi(k));
                radial += gl.integrate_on(lo, hi, |v| f.radial(v.powf(1.0 / m))) / m;
            }
            let r_max = 1.0 + (60.0 / (PI * a_min(&f))).sqrt();
            let panels = 200;
            let step = (r_max - 1.0) / panels as f64;
            for p in 0..panels {
                let lo = 1.0 + p as f64 * step;
                radial += gl.integrate_on(lo, lo + step, |r| f.radial(r) * r.powf(m - 1.0));
            }
            let numeric = ang * radial;
            let scale: f64 = f.terms.iter().map(|t| t.0.abs()).sum::<f64>() * ang;
            worst = worst.max((numeric - exact).abs() / exact.abs().max(1e-3 * scale));
        }
        checks.push(check(format!("d={d}, {}, gamma_r={gamma_r}", h.describe()), worst, 1e-9, "5 mixtures".into()));
    }
    Ok(SuiteReport::finish("integrals", start, checks))
}

/// `Γ((d+γ)/2)π^{-(d+γ)/2} ∫|x|^{-d-γ} f̂ = Γ(-γ/2)π^{γ/2} ∫|x|^γ f` on radial eigenfunction mixtures.
pub fn riesz_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x71);
    let mut checks = Vec::new();
    for (d, gamma) in [(2usize, -1.0f64), (3, -1.5), (4, -2.5)] {
        let mut worst = 0.0f64;
        for k in 0..20 {
            let f = random_eigen_mixture(&mut rng, d, if k % 2 == 0 { 1 } else { -1 })?;
            let img = f.fourier_transform();
            let f_hat = img.mixture.scale(img.phase.real_sign().unwrap_or(1) as f64);
            let (dual_w, w) = (Weight::power(d, -(d as f64) - gamma)?, Weight::power(d, gamma)?);
            let k_lhs = lgamma((d as f64 + gamma) / 2.0).exp() * PI.powf(-(d as f64 + gamma) / 2.0);
            let k_rhs = lgamma(-gamma / 2.0).exp() * PI.powf(gamma / 2.0);
            let lhs = k_lhs * weighted_integral_gaussian(&f_hat, &dual_w)?;
            let rhs = k_rhs * weighted_integral_gaussian(&f, &w)?;
            // at γ = -d/2 both sides vanish for λ = -1; measure against the absolute mixture
            let abs = |g: &GaussianMixture| GaussianMixture { terms: g.terms.iter().map(|t| (t.0.abs(), t.1)).collect(), ..g.clone() };
            let scale = k_lhs * weighted_integral_gaussian(&abs(&f_hat), &dual_w)?;
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        checks.push(check(format!("d={d}, gamma={gamma}"), worst, 1e-9, "20 eigenfunction mixtures".into()));
    }
    Ok(SuiteReport::finish("riesz", start, checks))
}

/// `Σ c_j (e^{-a_jπ|x|²} + λ a_j^{-d/2} e^{-π|x|²/a_j})`, an eigenfunction with eigenvalue `λ`.
pub fn random_eigen_mixture(rng: &mut StdRng, d: usize, lambda: i8) -> Result<GaussianMixture> {
    let mut terms = Vec::new();
    let mut widths: Vec<f64> = Vec::new();
    while widths.len() < 3 {
        let a: f64 = rng.gen_range(1.2..4.0);
        if widths.iter().all(|b| (a - b).abs() > 1e-2) {
            widths.push(a);
        }
    }
    for a in widths {
        let c: f64 = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        terms.push((c, a));
        terms.push((c * lambda as f64 * a.powf(-(d as f64) / 2.0), 1.0 / a));
    }
    GaussianMixture::new(d, HarmonicFactor::ONE, terms)
}

/// Lift of coordinate-product mixtures: radius and weighted-integral transport.
pub fn transport_suite(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x7a);
    let mut checks = Vec::new();
    for (d, l) in [(1usize, 1usize), (2, 2), (4, 2)] {
        let h = HarmonicFactor::coordinate_product(l);
        let (mut r_err, mut i_err) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let gamma_r: f64 = rng.gen_range(0.0..2.0);
            let f: FunctionRep = GaussianMixture::new(d, h, random_terms(&mut rng, 3, (0.3, 3.0)))?.into();
            let w = Weight::new(d, h, gamma_r, false)?;
            let up = lift(&f, &w, 1)?;
            let r_low = last_sign_change(&f, &w, DEFAULT_TOL)?.r;
            let r_high = last_sign_change(&up.f, &up.weight, DEFAULT_TOL)?.r;
            if r_low.is_finite() || r_high.is_finite() {
                r_err = r_err.max((r_low - r_high).abs());
            }
            let lo = weighted_integral(&f, &w)?;
            let hi = weighted_integral(&up.f, &up.weight)?;
            let want = integral_transport_factor(l) * lo;
            i_err = i_err.max((hi - want).abs() / want.abs().max(1e-300));
        }
        checks.push(check(format!("radius d={d}, ell={l}"), r_err, 1e-9, "20 mixtures".into()));
        checks.push(check(format!("integral d={d}, ell={l}"), i_err, 1e-9, "20 mixtures".into()));
    }
    Ok(SuiteReport::finish("transport", start, checks))
}

/// The shift sign law reproduces the sign attached to every `(base, ℓ)` fixture.
pub fn sign_law_suite() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for base in [8usize, 12, 24] {
        let s_base = sharp_sign(base, 0).expect("known base");
        for ell in 1..=sharp_max_ell(base).expect("known base") {
            let got = sign_law(s_base, ell);
            let want = sharp_sign(base, ell).expect("in range");
            checks.push(Check {
                name: format!("base={base}, ell={ell}"),
                passed: got == want,
                max_error: f64::from(u8::from(got != want)),
                tolerance: 0.0,
                detail: format!("shift gives {got:+}, table gives {want:+}"),
            });
        }
    }
    SuiteReport::finish("sign-law", start, checks)
}
