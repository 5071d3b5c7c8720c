use std::f64::consts::PI;

use proptest::prelude::*;
use sul_core::radius::{last_sign_change, DEFAULT_TOL};
use sul_core::reps::{build_f0, build_g1, FunctionRep, GaussianMixture, LaguerreFunction};
use sul_core::weights::{HarmonicFactor, Weight};

fn radius(f: &FunctionRep, w: &Weight) -> f64 {
    last_sign_change(f, w, DEFAULT_TOL).unwrap().r
}

/// Last point of a uniform grid on `[0, 20]` where the radial profile is negative.
fn dense_scan(f: &FunctionRep, points: usize) -> (f64, f64) {
    let h = 20.0 / points as f64;
    let mut last_neg = None;
    for i in 0..=points {
        if f.radial(i as f64 * h) < 0.0 {
            last_neg = Some(i);
        }
    }
    match last_neg {
        Some(i) => (i as f64 * h, h),
        None => (0.0, h),
    }
}

#[test]
fn single_gaussian_is_nonnegative() {
    let f: FunctionRep = GaussianMixture::new(3, HarmonicFactor::ONE, vec![(2.0, 1.5)]).unwrap().into();
    let res = last_sign_change(&f, &Weight::constant(3), DEFAULT_TOL).unwrap();
    assert_eq!(res.r, 0.0);
    assert_eq!(res.sign_at_infinity, 1);
}

#[test]
fn g1_root_matches_exponential_equation() {
    // e^{-πr²/a} = a^{n/2} e^{-aπr²}  ⇔  r² = (n/2) ln a / (π(a - 1/a)), n = d + 2ℓ
    for (d, h, a) in
        [(1usize, HarmonicFactor::ONE, 2.0), (4, HarmonicFactor::coordinate_product(2), 10.0), (3, HarmonicFactor::plane(1), 1000.0)]
    {
        let w = Weight::new(d, h, 0.0, false).unwrap();
        let g: FunctionRep = build_g1(&w, a).unwrap().into();
        let n = (d + 2 * h.ell) as f64;
        let want = (n / 2.0 * a.ln() / (PI * (a - 1.0 / a))).sqrt();
        assert!((radius(&g, &w) - want).abs() < 1e-9, "d={d}, a={a}");
    }
}

#[test]
fn f0_dilation_covariance() {
    let w = Weight::constant(12);
    let f0 = build_f0(&w, 1.0 + 1.0 / 12f64.sqrt()).unwrap().f;
    let r = radius(&f0.clone().into(), &w);
    for delta in [0.5, 2.0, 10.0] {
        let rd = radius(&f0.dilate(delta).into(), &w);
        assert!((rd - r / delta).abs() <= 1e-8 * r / delta, "δ={delta}: {rd} vs {}", r / delta);
    }
}

#[test]
fn eventually_negative_profile_has_infinite_radius() {
    let f: FunctionRep = GaussianMixture::new(2, HarmonicFactor::ONE, vec![(1.0, 2.0), (-0.1, 0.5)]).unwrap().into();
    let res = last_sign_change(&f, &Weight::constant(2), DEFAULT_TOL).unwrap();
    assert!(res.r.is_infinite());
    assert_eq!(res.sign_at_infinity, -1);
}

#[test]
fn laguerre_against_million_point_scan() {
    let cases: [&[f64]; 4] =
        [&[1.0, -0.5, 0.2], &[-1.0, 0.3, 0.7, -0.1, 0.4], &[0.2, 0.9, -0.6, 0.1, -0.3, 0.05, 0.5, -0.2], &[1.0, 1.0, -3.0, 0.5]];
    for (i, coeffs) in cases.iter().enumerate() {
        for d in [1usize, 3, 8] {
            let f: FunctionRep = LaguerreFunction::new(d, HarmonicFactor::ONE, coeffs.to_vec()).unwrap().into();
            let res = last_sign_change(&f, &Weight::constant(d), DEFAULT_TOL).unwrap();
            if res.sign_at_infinity < 0 {
                assert!(res.r.is_infinite());
                continue;
            }
            let (scan, h) = dense_scan(&f, 1_000_000);
            assert!(res.r >= scan - 1e-12 && res.r <= scan + h + 1e-12, "case {i}, d={d}: {} vs scan {scan}", res.r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sign_at_infinity_follows_widest_term(
        d in 1usize..6,
        terms in proptest::collection::vec((-2.0f64..2.0, 0.2f64..5.0), 1..5),
    ) {
        let mut terms = terms;
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        terms.dedup_by(|a, b| (a.1 - b.1).abs() < 1e-3);
        terms.retain(|t| t.0.abs() > 1e-3);
        prop_assume!(!terms.is_empty());
        let dominant = terms[0].0.signum() as i8;
        let f: FunctionRep = GaussianMixture::new(d, HarmonicFactor::ONE, terms).unwrap().into();
        let res = last_sign_change(&f, &Weight::constant(d), DEFAULT_TOL).unwrap();
        prop_assert_eq!(res.sign_at_infinity, dominant);
    }

    #[test]
    fn laguerre_radius_brackets_last_negative_sample(
        d in 1usize..6,
        coeffs in proptest::collection::vec(-1.0f64..1.0, 2..9),
    ) {
        let f: FunctionRep = LaguerreFunction::new(d, HarmonicFactor::ONE, coeffs).unwrap().into();
        let res = last_sign_change(&f, &Weight::constant(d), DEFAULT_TOL).unwrap();
        prop_assume!(res.sign_at_infinity > 0);
        let (scan, h) = dense_scan(&f, 20_000);
        prop_assert!(res.r >= scan - 1e-12, "{} < scan {scan}", res.r);
        // anything negative after r would be a missed sign change
        let mut x = res.r + 1e-6;
        while x < 20.0 {
            prop_assert!(f.radial(x) >= -1e-12, "negative at {x} beyond r = {}", res.r);
            x += h / 3.0;
        }
    }
}
