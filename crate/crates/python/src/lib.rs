//! Python module `sul`: thin wrappers over `sul_core` that exchange canonical JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sul_core::io::{from_canonical_str, to_canonical_string};
use sul_core::reps::FunctionRep;
use sul_core::weights::{HarmonicFactor, HarmonicKind, Weight};

fn err(e: sul_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn weight(d: usize, gamma: f64, harmonic: &str, ell: usize, sign_wrap: bool) -> PyResult<Weight> {
    let kind = HarmonicKind::parse(harmonic).map_err(err)?;
    let h = if ell == 0 { HarmonicFactor::ONE } else { HarmonicFactor::new(kind, ell) };
    Weight::new(d, h, gamma, sign_wrap).map_err(err)
}

/// Bound report for `P = H|x|^gamma` as canonical JSON.
#[pyfunction]
#[pyo3(signature = (s, d, gamma = 0.0, harmonic = "coord", ell = 0, sign_wrap = false))]
fn bounds(s: i8, d: usize, gamma: f64, harmonic: &str, ell: usize, sign_wrap: bool) -> PyResult<String> {
    let w = weight(d, gamma, harmonic, ell, sign_wrap)?;
    let rep = sul_core::bounds::bounds_report(s, &w).map_err(err)?;
    to_canonical_string(&rep).map_err(err)
}

/// `(analytic, numeric)` upper bounds from the explicit Gaussian witness.
#[pyfunction]
#[pyo3(signature = (s, d, gamma = 0.0, harmonic = "coord", ell = 0))]
fn gaussian_upper(s: i8, d: usize, gamma: f64, harmonic: &str, ell: usize) -> PyResult<(f64, f64)> {
    let w = weight(d, gamma, harmonic, ell, false)?;
    let t = sul_core::bounds::gaussian_upper(s, &w).map_err(err)?;
    Ok((t.analytic, t.numeric))
}

/// Last sign change of `P f` for a function document, with `P = H|x|^gamma` matching `f`.
#[pyfunction]
#[pyo3(signature = (function, gamma = 0.0, sign_wrap = false))]
fn radius(function: &str, gamma: f64, sign_wrap: bool) -> PyResult<f64> {
    let f: FunctionRep = from_canonical_str(function).map_err(err)?;
    let w = Weight::new(f.d(), f.harmonic(), gamma, sign_wrap).map_err(err)?;
    Ok(sul_core::radius::last_sign_change(&f, &w, sul_core::radius::DEFAULT_TOL).map_err(err)?.r)
}

/// Weighted integral `∫ P f` for a function document.
#[pyfunction]
#[pyo3(signature = (function, gamma = 0.0, sign_wrap = false))]
fn integral(function: &str, gamma: f64, sign_wrap: bool) -> PyResult<f64> {
    let f: FunctionRep = from_canonical_str(function).map_err(err)?;
    let w = Weight::new(f.d(), f.harmonic(), gamma, sign_wrap).map_err(err)?;
    sul_core::reps::weighted_integral(&f, &w).map_err(err)
}

/// LP upper bound; returns the full result as canonical JSON.
#[pyfunction]
#[pyo3(signature = (s, d, n = 20, gamma = 0.0, harmonic = "coord", ell = 0, tol = 1e-4))]
fn optimize(py: Python<'_>, s: i8, d: usize, n: usize, gamma: f64, harmonic: &str, ell: usize, tol: f64) -> PyResult<String> {
    let w = weight(d, gamma, harmonic, ell, false)?;
    let res = py.detach(|| sul_core::optimize::bisect_upper_bound(s, &w, n, tol)).map_err(err)?;
    to_canonical_string(&res).map_err(err)
}

/// Lifts `x_1⋯x_ℓ f` to a radial function in `d + 2ℓ`; returns `(function, sign_out)`.
#[pyfunction]
#[pyo3(signature = (function, s, gamma = 0.0))]
fn lift(function: &str, s: i8, gamma: f64) -> PyResult<(String, i8)> {
    let f: FunctionRep = from_canonical_str(function).map_err(err)?;
    let w = Weight::new(f.d(), f.harmonic(), gamma, false).map_err(err)?;
    let up = sul_core::shift::lift(&f, &w, s).map_err(err)?;
    Ok((to_canonical_string(&up.f).map_err(err)?, up.record.sign_out))
}

/// `s·(-1)^{(ℓ mod 2 + ℓ)/2}`.
#[pyfunction]
fn sign_law(s: i8, ell: usize) -> i8 {
    sul_core::shift::sign_law(s, ell)
}

/// Runs an invariant suite (or `"all"`); returns the reports as canonical JSON.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = sul_core::verify::DEFAULT_SEED))]
fn verify(py: Python<'_>, suite: &str, seed: u64) -> PyResult<String> {
    let reps = py.detach(|| sul_core::verify::run_suite(suite, seed)).map_err(err)?;
    to_canonical_string(&reps).map_err(err)
}

/// Runs the command-line front end with `args` (without the program name); returns the exit code.
#[pyfunction]
fn main(args: Vec<String>) -> i32 {
    sul_core::cli::run(std::iter::once("sul".to_string()).chain(args))
}

#[pymodule]
fn sul(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_upper, m)?)?;
    m.add_function(wrap_pyfunction!(radius, m)?)?;
    m.add_function(wrap_pyfunction!(integral, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(sign_law, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(main, m)?)?;
    m.add("SCHEMA_VERSION", sul_core::io::SCHEMA_VERSION)?;
    Ok(())
}
