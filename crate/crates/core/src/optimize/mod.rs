//! Numerical upper bounds by LP feasibility over a truncated Laguerre
//! eigenbasis, bisection on the radius and independent re-certification.
//!
//! Only the certified last sign change of a witness is ever reported, so the
//! grid may be coarse without compromising validity.

pub mod simplex;

use std::f64::consts::PI;

use serde::Serialize;

use crate::bounds::{bounds_report, gaussian_upper, sharp_constant, sharp_max_ell, sharp_sign};
use crate::error::{domain, Error, Result};
use crate::radius::{last_sign_change, RadiusResult, DEFAULT_TOL};
use crate::reps::{integral_structure, laguerre_alpha, laguerre_radial_moments, FunctionRep, LaguerreFunction, Unit};
use crate::specialfn::{laguerre, lgamma};
use crate::weights::{HarmonicFactor, Weight};
use simplex::{LinearProgram, LpOutcome, Relation};

/// Relative slack allowed on `∫ P f ≤ 0` at certification.
pub const INTEGRAL_TOL: f64 = 1e-10;

const DUAL_PERTURBATION: f64 = 1e-9;

/// Indices `k ≤ 2N` whose basis function has eigenvalue `s·i^𝔯`, with `𝔯 = ℓ mod 2`.
pub fn eigen_indices(s: i8, ell: usize, n: usize) -> Result<Vec<usize>> {
    if s != 1 && s != -1 {
        return domain(format!("s must be ±1, got {s}"));
    }
    if n < 2 {
        return domain(format!("basis size must be at least 2, got {n}"));
    }
    let target = Unit::from_sign(s).mul(Unit::i_pow((ell % 2) as i64));
    let phase = Unit::bochner(ell);
    let first = (0..2).find(|&k| phase.mul(Unit::from_sign(if k % 2 == 0 { 1 } else { -1 })) == target);
    let Some(k0) = first else {
        return Err(Error::ParityMismatch(format!("no basis function has eigenvalue {target} for ℓ = {ell}")));
    };
    Ok((0..n).map(|j| k0 + 2 * j).collect())
}

/// The `N` basis functions `H·L_k^(α)(2π|x|²)e^{-π|x|²}` with the requested eigenvalue.
pub fn eigenbasis(s: i8, d: usize, h: HarmonicFactor, n: usize) -> Result<Vec<LaguerreFunction>> {
    h.validate(d)?;
    eigen_indices(s, h.ell, n)?
        .into_iter()
        .map(|k| {
            let mut coeffs = vec![0.0; k + 1];
            coeffs[k] = 1.0;
            LaguerreFunction::new(d, h, coeffs)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpProblem {
    /// Strictly increasing radii where `p(2πr²) ≥ 0` is imposed.
    pub grid: Vec<f64>,
    /// `k` indices of the columns.
    pub indices: Vec<usize>,
    pub alpha: f64,
    /// Column scale: `c_k = norm_k · y_k`.
    pub norms: Vec<f64>,
    /// Row-normalised `norm_k L_k(2πr_i²)`.
    pub rows: Vec<Vec<f64>>,
    /// Row-normalised `norm_k ∫ P φ_k`, absent when the integral vanishes identically.
    pub integral_row: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    /// Full coefficient vector indexed by `k`.
    pub coeffs: Vec<f64>,
    /// Smallest normalised grid value.
    pub margin: f64,
    pub pivots: usize,
}

fn check_basis(basis: &[LaguerreFunction], w: &Weight) -> Result<(usize, HarmonicFactor, Vec<usize>)> {
    let first = basis.first().ok_or_else(|| Error::Domain("empty basis".into()))?;
    let (d, h) = (first.d, first.harmonic);
    let mut idx = Vec::with_capacity(basis.len());
    for b in basis {
        if b.d != d || b.harmonic != h {
            return Err(Error::Precondition("basis functions must share dimension and harmonic factor".into()));
        }
        let k = b.degree().ok_or(Error::ZeroFunction)?;
        if b.coeffs[..k].iter().any(|c| *c != 0.0) {
            return Err(Error::Precondition("basis functions must be single Laguerre terms".into()));
        }
        idx.push(k);
    }
    if idx.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Precondition("basis indices must increase".into()));
    }
    if w.d != d {
        return Err(Error::DimensionMismatch { expected: w.d, got: d });
    }
    if w.harmonic != h {
        return Err(Error::HarmonicMismatch("the sign of P·f must be radial".into()));
    }
    if w.gamma_r < 0.0 {
        return Err(Error::Unsupported("the optimizer takes weights with γ ≥ 0 only".into()));
    }
    Ok((d, h, idx))
}

/// Largest-root bound `4K + 2α + 2` of `L_K^(α)`, as a radius.
fn root_bound_radius(k: usize, alpha: f64) -> f64 {
    ((4.0 * k as f64 + 2.0 * alpha + 2.0) / (2.0 * PI)).sqrt()
}

/// Discretised class constraints at radius `r` with `m` Chebyshev–Lobatto grid points.
pub fn build_problem(basis: &[LaguerreFunction], w: &Weight, r: f64, m: usize) -> Result<LpProblem> {
    build_problem_with(basis, w, r, m, &[])
}

/// As `build_problem`, with additional radii `extra ≥ r` merged into the grid.
pub fn build_problem_with(basis: &[LaguerreFunction], w: &Weight, r: f64, m: usize, extra: &[f64]) -> Result<LpProblem> {
    let (d, h, idx) = check_basis(basis, w)?;
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius must be positive, got {r}"));
    }
    if m < 4 * idx.len() {
        return domain(format!("grid size {m} below 4N = {}", 4 * idx.len()));
    }
    let alpha = laguerre_alpha(d, h.ell);
    let top = *idx.last().unwrap();
    let r_max = root_bound_radius(top, alpha).max(1.25 * r);
    let mut grid: Vec<f64> = (0..m).map(|i| 0.5 * (r + r_max) - 0.5 * (r_max - r) * (PI * i as f64 / (m - 1) as f64).cos()).collect();
    grid[0] = r;
    grid[m - 1] = r_max;
    for f in [1.25, 1.5, 2.0, 3.0] {
        grid.push(r_max * f);
    }
    grid.extend(extra.iter().copied().filter(|x| x.is_finite() && *x >= r));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs());
    let norms: Vec<f64> = idx.iter().map(|&k| (0.5 * (lgamma(k as f64 + 1.0) - lgamma(k as f64 + alpha + 1.0))).exp()).collect();
    let rows = grid
        .iter()
        .map(|&ri| {
            let t = 2.0 * PI * ri * ri;
            normalise(idx.iter().zip(&norms).map(|(&k, nk)| nk * laguerre(k, alpha, t)).collect())
        })
        .collect();
    let integral_row = match integral_structure(d, h, w)? {
        None => None,
        Some((_, mexp)) => {
            let mom = laguerre_radial_moments(d, h.ell, mexp, top + 1)?;
            Some(normalise(idx.iter().zip(&norms).map(|(&k, nk)| nk * mom[k]).collect()))
        }
    };
    Ok(LpProblem { grid, indices: idx, alpha, norms, rows, integral_row })
}

fn normalise(v: Vec<f64>) -> Vec<f64> {
    let s = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if s > 0.0 && s.is_finite() {
        v.into_iter().map(|x| x / s).collect()
    } else {
        v
    }
}

/// Max-margin feasibility LP at radius `r`.
///
/// In the scaled coefficients `y` and a margin `τ`: `row_i·y ≥ τ`,
/// `(-1)^K y_K ≥ 0`, `∫ P f ≤ 0`, `Σ_i row_i·y = 1`, maximise `τ`.
/// Returns `None` when the optimal margin is negative.
pub fn solve_at_radius(basis: &[LaguerreFunction], w: &Weight, r: f64, m: usize) -> Result<Option<LpSolution>> {
    let prob = build_problem(basis, w, r, m)?;
    solve_problem(&prob)
}

/// Solves the margin LP through its dual, which has only `N + 1` equality rows;
/// `y` and `τ` are read off the dual's simplex multipliers.
pub fn solve_problem(prob: &LpProblem) -> Result<Option<LpSolution>> {
    let n = prob.indices.len();
    let g = prob.rows.len();
    let top = *prob.indices.last().unwrap();
    let mut tail = vec![0.0; n];
    tail[n - 1] = if top.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = vec![0.0; n];
    for row in &prob.rows {
        for (s, v) in sum.iter_mut().zip(row) {
            *s += v;
        }
    }
    // columns: μ (free), λ_i for grid rows, λ_tail, λ_int
    let has_int = prob.integral_row.is_some();
    let cols = 1 + g + 1 + usize::from(has_int);
    let mut lp = LinearProgram::new(cols);
    lp.free[0] = true;
    lp.objective[0] = -1.0;
    for j in 0..n {
        let mut a = vec![0.0; cols];
        a[0] = sum[j];
        for (i, row) in prob.rows.iter().enumerate() {
            a[1 + i] = -row[j];
        }
        a[1 + g] = -tail[j];
        if let Some(int) = &prob.integral_row {
            a[2 + g] = int[j];
        }
        // a tiny deterministic right-hand side breaks the dual's degeneracy; it only
        // tilts the primal objective, so the recovered y stays exactly feasible
        lp.add_row(a, Relation::Eq, DUAL_PERTURBATION * (1.0 + ((j * 7919) % 101) as f64 / 101.0));
    }
    let mut a = vec![0.0; cols];
    a[1..=g].iter_mut().for_each(|v| *v = 1.0);
    lp.add_row(a, Relation::Eq, 1.0);
    match lp.solve()? {
        LpOutcome::Optimal { duals, pivots, .. } => {
            let margin = -duals[n];
            if margin < 0.0 {
                return Ok(None);
            }
            let mut coeffs = vec![0.0; top + 1];
            for ((&k, nk), p) in prob.indices.iter().zip(&prob.norms).zip(&duals) {
                coeffs[k] = -nk * p;
            }
            Ok(Some(LpSolution { coeffs, margin, pivots }))
        }
        // an unbounded dual means the class constraints are inconsistent
        LpOutcome::Unbounded { .. } => Ok(None),
        LpOutcome::Infeasible { .. } => Err(Error::Numerical("margin LP dual reported infeasible".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub radius: RadiusResult,
    pub integral: f64,
    pub coeff_norm: f64,
    pub passed: bool,
}

/// Independent check: eigenvalue, `∫ P f ≤ 1e-10‖c‖`, finite last sign change.
pub fn certify(f: &LaguerreFunction, s: i8, w: &Weight) -> Result<Certification> {
    let rep: FunctionRep = f.clone().into();
    let radius = last_sign_change(&rep, w, DEFAULT_TOL)?;
    let integral = crate::reps::weighted_integral_laguerre(f, w)?;
    let coeff_norm = f.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let want = Unit::from_sign(s).mul(Unit::i_pow((f.ell() % 2) as i64));
    let eigen = f.eigen_status().eigenvalue == Some(want);
    let passed = eigen && radius.r.is_finite() && integral <= INTEGRAL_TOL * coeff_norm;
    Ok(Certification { radius, integral, coeff_norm, passed })
}

/// Exchange rounds per radius before giving up on certification.
const EXCHANGE_ROUNDS: usize = 24;
const DIP_SAMPLES: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusAttempt {
    pub r: f64,
    /// The discretised LP had a nonnegative margin in every round.
    pub lp_feasible: bool,
    /// Certified radius of the best candidate seen, if any passed.
    pub certified: Option<f64>,
    pub rounds: usize,
    pub pivots: usize,
    #[serde(skip)]
    pub witness: Option<(LaguerreFunction, Certification)>,
}

impl RadiusAttempt {
    /// A witness certified at or below the probed radius.
    pub fn success(&self) -> bool {
        self.certified.is_some_and(|c| c <= self.r + 1e-9)
    }
}

/// Solves the LP at `r`, then repeatedly adds grid points at the negative
/// dips of the candidate until it certifies with radius `≤ r` or the LP
/// becomes infeasible.
pub fn certified_at_radius(basis: &[LaguerreFunction], s: i8, w: &Weight, r: f64, m: usize) -> Result<RadiusAttempt> {
    let mut extra: Vec<f64> = Vec::new();
    let mut out = RadiusAttempt { r, lp_feasible: true, certified: None, rounds: 0, pivots: 0, witness: None };
    for _ in 0..EXCHANGE_ROUNDS {
        out.rounds += 1;
        let prob = build_problem_with(basis, w, r, m, &extra)?;
        let Some(sol) = solve_problem(&prob)? else {
            out.lp_feasible = false;
            return Ok(out);
        };
        out.pivots += sol.pivots;
        let f = LaguerreFunction::new(w.d, w.harmonic, sol.coeffs)?;
        let cert = certify(&f, s, w)?;
        let far = 4.0 * prob.grid.last().copied().unwrap_or(r);
        let hi = if cert.radius.r.is_finite() { cert.radius.r } else { far };
        if cert.passed && out.certified.is_none_or(|c| cert.radius.r < c) {
            out.certified = Some(cert.radius.r);
            out.witness = Some((f.clone(), cert.clone()));
        }
        if out.success() {
            return Ok(out);
        }
        let dips = negative_dips(&f, r, hi);
        if dips.is_empty() {
            return Ok(out);
        }
        extra.extend(dips);
    }
    Ok(out)
}

/// Local minima of the negative runs of the radial profile on `[lo, hi]`;
/// falls back to a point just inside the last sign change.
fn negative_dips(f: &LaguerreFunction, lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) {
        return Vec::new();
    }
    let step = (hi - lo) / DIP_SAMPLES as f64;
    let xs: Vec<f64> = (0..=DIP_SAMPLES).map(|i| lo + i as f64 * step).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f.poly(2.0 * PI * x * x)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if vs[i] < 0.0 {
            let mut j = i;
            let mut best = i;
            while j < xs.len() && vs[j] < 0.0 {
                if vs[j] < vs[best] {
                    best = j;
                }
                j += 1;
            }
            let a = xs[best.saturating_sub(1)];
            let b = xs[(best + 1).min(xs.len() - 1)];
            out.push(golden_min(|x| f.poly(2.0 * PI * x * x), a, b));
            i = j;
        } else {
            i += 1;
        }
    }
    if out.is_empty() && hi > lo {
        out.push(hi - 1e-7 * hi.max(1.0));
    }
    out
}

fn golden_min<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    for _ in 0..40 {
        if g(c) < g(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub s: i8,
    pub d: usize,
    pub weight: String,
    pub n: usize,
    pub grid_size: usize,
    pub r_upper: f64,
    pub witness: FunctionRep,
    /// `true` when no LP candidate beat the explicit Gaussian witness.
    pub fallback: bool,
    pub lp_iterations: usize,
    pub certification: Certification,
    pub lower_bound: Option<f64>,
    pub analytic_upper: f64,
    pub history: Vec<RadiusAttempt>,
}

/// Grid size used by `bisect_upper_bound`.
pub fn default_grid_size(n: usize) -> usize {
    (12 * n).clamp(64, 596)
}

/// Smallest certified radius found by bisection on `[0, analytic Gaussian bound]`.
///
/// Runs first on `⌊N/2⌋` basis functions (recursively) and only bisects below
/// that result, so a larger basis never certifies a worse radius.
pub fn bisect_upper_bound(s: i8, w: &Weight, n: usize, tolerance: f64) -> Result<OptimizeResult> {
    if !(tolerance >= 1e-4) {
        return domain(format!("tolerance must be at least 1e-4, got {tolerance}"));
    }
    w.validate()?;
    if w.sign_wrap {
        return Err(Error::Unsupported("the optimizer takes unwrapped weights only".into()));
    }
    let basis = eigenbasis(s, w.d, w.harmonic, n)?;
    let m = default_grid_size(n);
    let explicit = gaussian_upper(s, w)?;
    let lower_bound = bounds_report(s, w)?.lower;

    let seed = if n >= 4 { Some(bisect_upper_bound(s, w, n / 2, tolerance)?) } else { None };
    let mut pivots = seed.as_ref().map_or(0, |r| r.lp_iterations);
    let mut best: Option<(FunctionRep, Certification)> = None;
    let mut hi = explicit.analytic;
    if let Some(seed) = &seed {
        if !seed.fallback {
            hi = hi.min(seed.r_upper);
            best = Some((seed.witness.clone(), seed.certification.clone()));
        }
    }
    let mut history = Vec::new();
    let mut take = |att: RadiusAttempt, best: &mut Option<(FunctionRep, Certification)>, pivots: &mut usize| -> bool {
        *pivots += att.pivots;
        let ok = att.success();
        if let Some((f, c)) = &att.witness {
            if best.as_ref().is_none_or(|(_, b)| c.radius.r < b.radius.r) {
                *best = Some((FunctionRep::Laguerre(f.clone()), c.clone()));
            }
        }
        history.push(att);
        ok
    };

    let mut lo = 0.0;
    if seed.as_ref().is_none_or(|s| s.fallback) {
        take(certified_at_radius(&basis, s, w, hi, m)?, &mut best, &mut pivots);
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if take(certified_at_radius(&basis, s, w, mid, m)?, &mut best, &mut pivots) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let (witness, certification, fallback) = match best {
        Some((f, c)) if c.radius.r <= explicit.numeric => (f, c, false),
        _ => {
            let rep: FunctionRep = explicit.witness.clone().into();
            let radius = last_sign_change(&rep, w, DEFAULT_TOL)?;
            let integral = crate::reps::weighted_integral(&rep, w)?;
            let coeff_norm = explicit.witness.terms.iter().map(|t| t.0 * t.0).sum::<f64>().sqrt();
            let passed = radius.r.is_finite() && integral <= INTEGRAL_TOL * coeff_norm;
            (rep, Certification { radius, integral, coeff_norm, passed }, true)
        }
    };
    let r_upper = certification.radius.r;
    if let Some(lb) = lower_bound {
        if r_upper < lb - 1e-9 {
            return Err(Error::Numerical(format!("certified radius {r_upper} is below the lower bound {lb}")));
        }
    }
    Ok(OptimizeResult {
        s,
        d: w.d,
        weight: w.describe(),
        n,
        grid_size: m,
        r_upper,
        witness,
        fallback,
        lp_iterations: pivots,
        certification,
        lower_bound,
        analytic_upper: explicit.analytic,
        history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpShiftReport {
    pub base: usize,
    pub ell: usize,
    pub d: usize,
    pub s: i8,
    pub sharp: f64,
    pub upper: f64,
    pub gap: f64,
    pub passed: bool,
}

/// Runs the optimizer on `x_1⋯x_ℓ` in dimension `base - 2ℓ` and compares with the sharp value.
pub fn verify_sharp_shift(base: usize, ell: usize, n: usize, tolerance: f64) -> Result<SharpShiftReport> {
    let max = sharp_max_ell(base).ok_or_else(|| Error::Domain(format!("no sharp family with base {base}")))?;
    if ell > max {
        return domain(format!("ℓ = {ell} is outside 0..={max} for base {base}"));
    }
    let d = base - 2 * ell;
    let s = sharp_sign(base, ell).expect("base checked");
    let sharp = sharp_constant(s, d, ell).expect("entry in table");
    let h = if ell == 0 { HarmonicFactor::ONE } else { HarmonicFactor::coordinate_product(ell) };
    let w = Weight::new(d, h, 0.0, false)?;
    let res = bisect_upper_bound(s, &w, n, tolerance)?;
    Ok(SharpShiftReport { base, ell, d, s, sharp, upper: res.r_upper, gap: res.r_upper - sharp, passed: res.r_upper >= sharp - 1e-3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_index_parities() {
        assert_eq!(eigen_indices(1, 0, 3).unwrap(), vec![0, 2, 4]);
        assert_eq!(eigen_indices(-1, 0, 3).unwrap(), vec![1, 3, 5]);
        assert_eq!(eigen_indices(-1, 2, 2).unwrap(), vec![0, 2]);
        // ℓ = 1: (-i)(-1)^k = s·i → s = +1 needs odd k
        assert_eq!(eigen_indices(1, 1, 2).unwrap(), vec![1, 3]);
        assert!(eigen_indices(1, 0, 1).is_err());
    }

    #[test]
    fn basis_functions_are_eigen() {
        let h = HarmonicFactor::coordinate_product(3);
        for f in eigenbasis(-1, 5, h, 4).unwrap() {
            assert_eq!(f.eigen_status().eigenvalue, Some(Unit::MINUS_ONE.mul(Unit::I)));
        }
    }

    #[test]
    fn problem_shape() {
        let w = Weight::constant(4);
        let basis = eigenbasis(1, 4, HarmonicFactor::ONE, 5).unwrap();
        let p = build_problem(&basis, &w, 1.0, 20).unwrap();
        assert!(p.grid.windows(2).all(|g| g[1] > g[0]));
        assert_eq!(p.grid[0], 1.0);
        assert!(build_problem(&basis, &w, 1.0, 19).is_err());
        assert!(build_problem(&basis, &Weight::power(4, -1.0).unwrap(), 1.0, 20).is_err());
    }
}
