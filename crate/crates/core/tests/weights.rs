use std::f64::consts::PI;

use proptest::prelude::*;
use sul_core::specialfn::sphere_rule;
use sul_core::weights::{HarmonicFactor, HarmonicKind, Weight};

fn harmonic_strategy(d: usize) -> BoxedStrategy<HarmonicFactor> {
    let mut options: Vec<BoxedStrategy<HarmonicFactor>> = vec![Just(HarmonicFactor::ONE).boxed()];
    options.push((1..=d.min(4)).prop_map(HarmonicFactor::coordinate_product).boxed());
    if d >= 2 {
        options.push((1usize..=4).prop_map(HarmonicFactor::plane).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

fn weight_strategy() -> impl Strategy<Value = Weight> {
    (1usize..=6)
        .prop_flat_map(|d| (Just(d), harmonic_strategy(d), -0.4f64..3.0, any::<bool>()))
        .prop_map(|(d, h, g, wrap)| Weight::new(d, h, g, wrap && !h.is_one()).unwrap())
}

fn point_strategy(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0f64..3.0, d).prop_filter("away from the origin", |x| x.iter().map(|v| v * v).sum::<f64>() > 1e-4)
}

fn weight_and_point() -> impl Strategy<Value = (Weight, Vec<f64>)> {
    weight_strategy().prop_flat_map(|w| (Just(w), point_strategy(w.d)))
}

/// Orthonormalizes the rows of a random matrix (modified Gram-Schmidt).
fn orthogonal(mut m: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    for i in 0..m.len() {
        for j in 0..i {
            let dot: f64 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
            let row_j = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(row_j) {
                *a -= dot * b;
            }
        }
        let norm = m[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        m[i].iter_mut().for_each(|v| *v /= norm);
    }
    Some(m)
}

#[test]
fn sphere_moments_against_quadrature() {
    for d in 1..=5 {
        let rule = sphere_rule(d, 10).unwrap();
        let mut hs = vec![HarmonicFactor::ONE];
        hs.extend((1..=d.min(4)).map(HarmonicFactor::coordinate_product));
        if d >= 2 {
            hs.extend((1..=4).map(HarmonicFactor::plane));
        }
        for h in hs {
            let numeric: f64 = rule.iter().map(|(x, wt)| wt * h.eval(x).powi(2)).sum();
            let exact = h.sphere_moment(d);
            assert!((numeric - exact).abs() <= 1e-11 * exact, "d={d}, {}: {numeric} vs {exact}", h.describe());
        }
    }
}

#[test]
fn circle_moment_of_plane_harmonic() {
    // ∫_0^{2π} cos²(ℓθ) dθ = π
    for l in 1..6 {
        assert!((HarmonicFactor::plane(l).sphere_moment(2) - PI).abs() < 1e-12);
    }
}

#[test]
fn sublevel_volume_of_radial_weight_is_a_ball() {
    // {|x|^γ ≤ λ} is the ball of radius λ^{1/γ}
    let w = Weight::power(3, 2.0).unwrap();
    let want = 4.0 / 3.0 * PI * 5f64.powf(1.5);
    assert!((w.sublevel_volume(5.0).unwrap() - want).abs() < 1e-12 * want);
}

#[test]
fn invalid_weights() {
    assert!(Weight::new(2, HarmonicFactor::coordinate_product(3), 0.0, false).is_err());
    assert!(Weight::new(1, HarmonicFactor::plane(1), 0.0, false).is_err());
    assert!(Weight::power(3, -3.0).is_err());
    assert!(Weight::power(0, 0.0).is_err());
    assert_eq!(HarmonicKind::parse("coord").unwrap(), HarmonicKind::CoordinateProduct);
    assert!(HarmonicKind::parse("cubic").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parity_under_reflection((w, x) in weight_and_point()) {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let sign = if w.parity() == 1 { -1.0 } else { 1.0 };
        let a = w.evaluate(&neg).unwrap();
        let b = w.evaluate(&x).unwrap();
        prop_assert!((a - sign * b).abs() <= 1e-12 * b.abs().max(1e-300));
    }

    #[test]
    fn homogeneity((w, x) in weight_and_point(), di in 0usize..3) {
        let delta = [0.5, 2.0, 7.3][di];
        let scaled: Vec<f64> = x.iter().map(|v| delta * v).collect();
        let lhs = w.evaluate(&scaled).unwrap();
        let rhs = delta.powf(w.gamma_tot()) * w.evaluate(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300), "{lhs} vs {rhs}");
    }

    #[test]
    fn sublevel_scaling(w in weight_strategy(), lambda in 0.05f64..20.0) {
        prop_assume!(w.gamma_tot() > 0.0);
        let one = w.sublevel_volume(1.0).unwrap();
        prop_assume!(one.is_finite());
        let got = w.sublevel_volume(lambda).unwrap();
        let want = lambda.powf(w.d as f64 / w.gamma_tot()) * one;
        prop_assume!(want.is_normal());
        prop_assert!((got - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn rotation_invariant_sphere_moment(
        d in 2usize..=4,
        l in 1usize..=4,
        entries in proptest::collection::vec(-1.0f64..1.0, 16),
    ) {
        prop_assume!(l <= d);
        let m: Vec<Vec<f64>> = (0..d).map(|i| entries[i * d..(i + 1) * d].to_vec()).collect();
        let r = orthogonal(m);
        prop_assume!(r.is_some());
        let r = r.unwrap();
        let h = HarmonicFactor::coordinate_product(l);
        let rule = sphere_rule(d, 10).unwrap();
        let rotated: f64 = rule
            .iter()
            .map(|(x, wt)| {
                let y: Vec<f64> = r.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
                wt * h.eval(&y).powi(2)
            })
            .sum();
        let exact = h.sphere_moment(d);
        prop_assert!((rotated - exact).abs() <= 1e-8 * exact, "{rotated} vs {exact}");
    }
}
