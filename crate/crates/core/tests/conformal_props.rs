use proptest::prelude::*;

use fbt_core::conformal::{
    generator_upper_bounds, grid_extremal_length, lambda_closed_form, prop1a_lambda3_upper, AnnulusSpec, BoundaryRule,
    Family, GridDomain, TorusWithHole,
};

#[test]
fn enlarging_an_annulus_lowers_lambda() {
    let radii = [1.5, 2.0, 3.0, 4.0];
    let h = 1.0 / 40.0;
    let mut last = (f64::INFINITY, f64::INFINITY);
    for big_r in radii {
        let exact = lambda_closed_form(&AnnulusSpec::Round { r: 1.0, big_r }).unwrap();
        let grid =
            grid_extremal_length(&GridDomain::annulus(1.0, big_r, h, BoundaryRule::Fractional).unwrap()).unwrap();
        assert!(exact < last.0 && grid < last.1, "R = {big_r}");
        assert!((grid / exact - 1.0).abs() < 0.02, "R = {big_r}: {grid} vs {exact}");
        last = (exact, grid);
    }
}

#[test]
fn staircase_rule_also_orders_annuli() {
    let h = 1.0 / 40.0;
    let l2 = grid_extremal_length(&GridDomain::annulus(1.0, 2.0, h, BoundaryRule::Staircase).unwrap()).unwrap();
    let l3 = grid_extremal_length(&GridDomain::annulus(1.0, 3.0, h, BoundaryRule::Staircase).unwrap()).unwrap();
    assert!(l3 < l2);
}

#[test]
fn rectangle_duality() {
    let h = 1.0 / 40.0;
    for (a, b) in [(1.0, 2.0), (1.5, 0.5), (2.0, 3.0), (0.25, 1.0)] {
        let conn = |horizontal| {
            grid_extremal_length(&GridDomain::rectangle(a, b, h, horizontal, Family::Connecting).unwrap()).unwrap()
        };
        let (lh, lv) = (conn(true), conn(false));
        assert!((lh * lv - 1.0).abs() < 0.02, "{a} x {b}: {lh} * {lv}");
        let sep = grid_extremal_length(&GridDomain::rectangle(a, b, h, true, Family::Separating).unwrap()).unwrap();
        assert!((sep * lh - 1.0).abs() < 0.02, "{a} x {b}: separating {sep}");
        let exact = lambda_closed_form(&AnnulusSpec::Rectangle { a, b }).unwrap();
        assert!((exact * lambda_closed_form(&AnnulusSpec::Rectangle { a: b, b: a }).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn flat_cylinder_matches_closed_form() {
    let spec = AnnulusSpec::FlatCylinder {
        circumference: 2.0,
        height: 0.5,
    };
    let exact = lambda_closed_form(&spec).unwrap();
    let grid = grid_extremal_length(&GridDomain::from_spec(&spec, 1.0 / 40.0).unwrap()).unwrap();
    assert!((grid / exact - 1.0).abs() < 0.02, "{grid} vs {exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generator_bounds_below_prop1a(alpha in 1.0..20.0f64, sigma in 1e-4..0.999f64) {
        let x = TorusWithHole::new(alpha, sigma).unwrap();
        let g = generator_upper_bounds(&x);
        let p = prop1a_lambda3_upper(&x);
        prop_assert!(g.e <= p && g.e_prime <= p);
        prop_assert!(p == 4.0 * (2.0 * alpha + 1.0) / sigma);
    }

    #[test]
    fn closed_form_round_annulus(r in 0.1..10.0f64, ratio in 1.01..50.0f64) {
        let l = lambda_closed_form(&AnnulusSpec::Round { r, big_r: r * ratio }).unwrap();
        prop_assert!((l * ratio.ln() / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-12);
    }
}
