mod common;

use proptest::prelude::*;

use fbt_core::braid::{
    braid_count_bound, census, equal, expand, matrix_image, normal_form, theta, Ambient, BraidGen, BraidNormalForm,
    BraidWord,
};
use fbt_core::word::l_minus;

use common::burau_equal;

fn gen() -> impl Strategy<Value = BraidGen> {
    prop_oneof![
        2 => Just(BraidGen::S1),
        2 => Just(BraidGen::S2),
        1 => Just(BraidGen::Delta),
    ]
}

fn braid(max: usize, ambient: Ambient) -> impl Strategy<Value = BraidWord> {
    let exp = prop_oneof![-3i64..=-1, 1i64..=3];
    prop::collection::vec((gen(), exp), 0..=max).prop_map(move |v| BraidWord::new(v, ambient))
}

fn any_braid(max: usize) -> impl Strategy<Value = BraidWord> {
    prop_oneof![braid(max, Ambient::B3), braid(max, Ambient::ModCenter)]
}

fn d(l: i64, a: Ambient) -> BraidWord {
    BraidWord::new([(BraidGen::Delta, l)], a)
}

/// Unit-exponent letters of `b` with `d` spelled out.
fn units(b: &BraidWord) -> Vec<(BraidGen, i64)> {
    b.expand_delta()
        .letters()
        .iter()
        .flat_map(|l| std::iter::repeat_n((l.gen, l.exp.signum()), l.exp.unsigned_abs() as usize))
        .collect()
}

/// Applies one braid relation or inserts / removes a cancelling pair.
fn rewrite(mut v: Vec<(BraidGen, i64)>, seed: u64) -> Vec<(BraidGen, i64)> {
    use BraidGen::*;
    let n = v.len();
    let pos = if n == 0 { 0 } else { (seed as usize / 4) % (n + 1) };
    match seed % 4 {
        0 | 1 => {
            // s1 s2 s1 <-> s2 s1 s2, either sign
            for i in (0..n.saturating_sub(2)).map(|k| (pos + k) % (n - 2)) {
                let w = [v[i], v[i + 1], v[i + 2]];
                let e = w[0].1;
                if w.iter().all(|l| l.1 == e) && w[0].0 == w[2].0 && w[0].0 != w[1].0 {
                    let (a, b) = (w[1].0, w[0].0);
                    v.splice(i..i + 3, [(a, e), (b, e), (a, e)]);
                    break;
                }
            }
            v
        }
        2 => {
            let g = if seed % 8 < 4 { S1 } else { S2 };
            v.splice(pos..pos, [(g, 1), (g, -1)]);
            v
        }
        _ => {
            if let Some(i) = (0..n.saturating_sub(1)).find(|&i| v[i].0 == v[i + 1].0 && v[i].1 == -v[i + 1].1) {
                v.drain(i..i + 2);
            }
            v
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn equal_under_random_rewrites(b in braid(30, Ambient::B3), seeds in prop::collection::vec(any::<u64>(), 1..6)) {
        let mut v = units(&b);
        for s in seeds {
            v = rewrite(v, s);
        }
        let r = BraidWord::new(v, Ambient::B3);
        prop_assert!(equal(&b, &r).unwrap());
        prop_assert!(burau_equal(&b, &r));
    }

    #[test]
    fn normal_form_round_trip(b in any_braid(30)) {
        let nf = normal_form(&b).unwrap();
        let e = expand(&nf, b.ambient());
        prop_assert!(burau_equal(&b, &e), "{} -> {}", b, e);
        prop_assert!(equal(&b, &e).unwrap());
        if let BraidNormalForm::General { j, k, b1, l } = &nf {
            prop_assert!(*j == 1 || *j == 2);
            prop_assert!(*k != 0);
            if let Some(t) = b1.terms().first() {
                prop_assert_ne!(t.gen, *j);
            }
            if b.ambient() == Ambient::ModCenter {
                prop_assert!(*l == 0 || *l == 1);
            }
        }
        // the normal form of the expansion is itself
        prop_assert_eq!(normal_form(&e).unwrap(), nf);
    }

    #[test]
    fn theta_is_central_invariant(b in any_braid(30)) {
        let c = b.concat(&d(2, b.ambient()));
        prop_assert_eq!(theta(&c).unwrap(), theta(&b).unwrap());
        let c = d(-2, b.ambient()).concat(&b);
        prop_assert_eq!(theta(&c).unwrap(), theta(&b).unwrap());
    }

    #[test]
    fn mirror_symmetry(b in any_braid(30)) {
        let a = b.ambient();
        let m = d(1, a).concat(&b).concat(&d(-1, a));
        prop_assert!((l_minus(&theta(&m).unwrap()) - l_minus(&theta(&b).unwrap())).abs() <= 1e-12);
    }

    #[test]
    fn matrix_image_is_multiplicative(x in braid(15, Ambient::B3), y in braid(15, Ambient::B3)) {
        let (mx, my, mxy) = (matrix_image(&x), matrix_image(&y), matrix_image(&x.concat(&y)));
        prop_assert_eq!(&mx.matrix * &my.matrix, mxy.matrix);
        prop_assert_eq!(mx.exponent_sum + my.exponent_sum, mxy.exponent_sum);
    }
}

#[test]
fn identity_families() {
    for k in 1..=50i64 {
        let want = 2.0 * (3.0 * k as f64).ln();
        let b = BraidWord::new(
            [(BraidGen::S1, -2 * k), (BraidGen::Delta, 1), (BraidGen::S1, 2 * k)],
            Ambient::B3,
        );
        assert!((l_minus(&theta(&b).unwrap()) - want).abs() <= 1e-12, "k = {k}");
        let b = BraidWord::new(
            [
                (BraidGen::S2, -2 * k),
                (BraidGen::S1, 1),
                (BraidGen::S2, 1),
                (BraidGen::S2, 2 * k),
            ],
            Ambient::B3,
        );
        assert!((l_minus(&theta(&b).unwrap()) - want).abs() <= 1e-12, "k = {k}");
    }
}

#[test]
fn census_matches_brute_force_and_is_unique() {
    let ln3 = 3f64.ln();
    for (y, want) in [(0.0, 10usize), (ln3, 42), (6f64.ln(), 106)] {
        let got = census(y).unwrap();
        assert_eq!(got.len(), want, "Y = {y}");
        assert!((want as f64).ln() <= braid_count_bound(y).ln());
        let formal = common::formal_census(y);
        assert_eq!(formal.len(), want, "formal census at Y = {y}");
        // formal forms are pairwise distinct group elements
        for (i, x) in formal.iter().enumerate() {
            for z in &formal[i + 1..] {
                assert!(!burau_equal(x, z), "{x} = {z}");
            }
        }
        for b in &got {
            assert_eq!(formal.iter().filter(|f| burau_equal(b, f)).count(), 1, "{b}");
        }
    }
}

#[test]
fn census_uniqueness_by_projective_image() {
    let got = census(3f64.ln()).unwrap();
    let mut keys: Vec<_> = got.iter().map(|b| matrix_image(b).projective()).collect();
    let n = keys.len();
    keys.sort_by_key(|m| format!("{m:?}"));
    keys.dedup();
    assert_eq!(keys.len(), n);
    let mut forms: Vec<_> = got.iter().map(|b| format!("{:?}", normal_form(b).unwrap())).collect();
    forms.sort();
    forms.dedup();
    assert_eq!(forms.len(), n);
}

#[test]
fn oracle_separates_and_respects_the_center() {
    let p = |s: &str| s.parse::<BraidWord>().unwrap();
    assert!(burau_equal(&p("s1 s2 s1"), &p("s2 s1 s2")));
    assert!(burau_equal(&p("d^1"), &p("s1 s2 s1")));
    assert!(!burau_equal(&p("s1"), &p("s2")));
    assert!(!burau_equal(&p("s1 s2"), &p("s2 s1")));
    assert!(!burau_equal(&p("d^2"), &p("")));
    assert!(burau_equal(&p("@mod-center d^2"), &p("@mod-center")));
    assert!(burau_equal(&p("@mod-center s1 d^-2"), &p("@mod-center s1")));
    assert!(!burau_equal(&p("@mod-center d^1"), &p("@mod-center")));
    assert!(!burau_equal(&p("@mod-center s1^6"), &p("@mod-center")));
}
