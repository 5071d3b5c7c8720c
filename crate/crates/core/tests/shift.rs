use proptest::prelude::*;
use sul_core::radius::{last_sign_change, DEFAULT_TOL};
use sul_core::reps::{weighted_integral, FunctionRep, GaussianMixture, Unit};
use sul_core::shift::{drop, integral_transport_factor, lift, sign_law, Direction, DropQ};
use sul_core::weights::{HarmonicFactor, Weight};

/// Sign of the radial class in `R^{d+2ℓ}` solving `s·i^𝔯 = (-i)^ℓ·s'`.
fn sign_by_phase(s: i8, ell: usize) -> i8 {
    let target = Unit::from_sign(s).mul(Unit::i_pow((ell % 2) as i64));
    target.mul(Unit::bochner(ell).conj()).real_sign().expect("real for 𝔯 ≡ ℓ")
}

/// `H·Σ c (e^{-aπ|x|²} + λ a^{-(d+2ℓ)/2} e^{-π|x|²/a})`, with `F f = (-i)^ℓ λ f`.
fn eigen_mixture(d: usize, ell: usize, lambda: f64, raw: &[(f64, f64)]) -> Option<GaussianMixture> {
    let n = (d + 2 * ell) as f64 / 2.0;
    let mut terms = Vec::new();
    for &(c, a) in raw {
        if terms.iter().any(|t: &(f64, f64)| (t.1 - a).abs() < 1e-3 || (t.1 - 1.0 / a).abs() < 1e-3) {
            continue;
        }
        terms.push((c, a));
        terms.push((c * lambda * a.powf(-n), 1.0 / a));
    }
    GaussianMixture::new(d, HarmonicFactor::coordinate_product(ell), terms).ok()
}

fn lift_case() -> impl Strategy<Value = (usize, usize, Vec<(f64, f64)>, f64)> {
    (1usize..=4).prop_flat_map(|d| (Just(d), 1..=d, proptest::collection::vec((-2.0f64..2.0, 0.25f64..4.0), 1..5), 0.0f64..2.0))
}

#[test]
fn fourteen_fixture_signs() {
    // (base, ℓ) → sign attached to the ℓ-th member of each family
    let expected: [(usize, usize, i8); 14] = [
        (8, 1, 1),
        (8, 2, 1),
        (12, 1, -1),
        (12, 2, -1),
        (12, 3, 1),
        (12, 4, 1),
        (24, 1, 1),
        (24, 2, 1),
        (24, 3, -1),
        (24, 4, -1),
        (24, 5, 1),
        (24, 6, 1),
        (24, 7, -1),
        (24, 8, -1),
    ];
    for (base, ell, want) in expected {
        let s_base = if base == 12 { 1 } else { -1 };
        assert_eq!(sign_law(s_base, ell), want, "base={base}, ℓ={ell}");
    }
}

#[test]
fn lift_of_x1x2_fixture_in_dimension_8() {
    let w = Weight::new(8, HarmonicFactor::coordinate_product(2), 0.0, false).unwrap();
    let f: FunctionRep = GaussianMixture::new(8, HarmonicFactor::coordinate_product(2), vec![(1.0, 1.0)]).unwrap().into();
    let up = lift(&f, &w, 1).unwrap();
    assert_eq!(up.f.d(), 12);
    assert!(up.f.harmonic().is_one());
    assert_eq!(up.record.direction, Direction::Lift);
    assert_eq!(up.record.sign_out, -1);
}

#[test]
fn transport_factor_is_two_pi_power() {
    for l in 0..6 {
        let want = (4.0 * std::f64::consts::PI).powi(l as i32) / 2f64.powi(l as i32);
        assert!((integral_transport_factor(l) - want).abs() <= 1e-15 * want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sign_law_matches_phase_algebra(ell in 0usize..200, s in prop_oneof![Just(1i8), Just(-1i8)]) {
        prop_assert_eq!(sign_law(s, ell), sign_by_phase(s, ell));
    }

    #[test]
    fn lifted_eigenfunction_has_predicted_sign((d, ell, raw, _g) in lift_case(), s in prop_oneof![Just(1i8), Just(-1i8)]) {
        // class sign s means F f = s i^𝔯 f; solve for λ in (-i)^ℓ λ = s i^𝔯
        let lambda = f64::from(Unit::from_sign(s).mul(Unit::i_pow((ell % 2) as i64)).mul(Unit::bochner(ell).conj()).real_sign().unwrap());
        let Some(g) = eigen_mixture(d, ell, lambda, &raw) else { return Ok(()) };
        let f: FunctionRep = g.into();
        let w = Weight::new(d, f.harmonic(), 0.0, false).unwrap();
        let up = lift(&f, &w, s).unwrap();
        let want = Unit::from_sign(up.record.sign_out);
        prop_assert_eq!(up.f.eigen_status().eigenvalue, Some(want));
    }

    #[test]
    fn drop_after_lift_is_identity((d, ell, raw, g) in lift_case()) {
        let mut terms = raw;
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        terms.dedup_by(|a, b| (a.1 - b.1).abs() < 1e-3);
        let h = HarmonicFactor::coordinate_product(ell);
        let Ok(mix) = GaussianMixture::new(d, h, terms) else { return Ok(()) };
        let f: FunctionRep = mix.into();
        let w = Weight::new(d, h, g, false).unwrap();
        let up = lift(&f, &w, 1).unwrap();
        let back = drop(&up.f, &up.weight, h, DropQ::One, up.record.sign_out).unwrap();
        prop_assert_eq!(&back.f, &f);
        prop_assert_eq!(back.weight, w);
        prop_assert_eq!(back.record.sign_out, 1);
    }

    #[test]
    fn radius_and_integral_transport((d, ell, raw, g) in lift_case()) {
        let mut terms = raw;
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        terms.dedup_by(|a, b| (a.1 - b.1).abs() < 1e-3);
        let h = HarmonicFactor::coordinate_product(ell);
        let Ok(mix) = GaussianMixture::new(d, h, terms) else { return Ok(()) };
        let f: FunctionRep = mix.into();
        let w = Weight::new(d, h, g, false).unwrap();
        let up = lift(&f, &w, 1).unwrap();
        let r_low = last_sign_change(&f, &w, DEFAULT_TOL).unwrap().r;
        let r_high = last_sign_change(&up.f, &up.weight, DEFAULT_TOL).unwrap().r;
        if r_low.is_finite() || r_high.is_finite() {
            prop_assert!((r_low - r_high).abs() <= 1e-9, "{r_low} vs {r_high}");
        }
        let lo = weighted_integral(&f, &w).unwrap();
        let hi = weighted_integral(&up.f, &up.weight).unwrap();
        let want = integral_transport_factor(ell) * lo;
        prop_assert!((hi - want).abs() <= 1e-9 * want.abs().max(1e-300), "{hi} vs {want}");
    }
}
