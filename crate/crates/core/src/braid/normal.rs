use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::matrix::{gamma2_word, Mat2};
use super::{matrix_image, Ambient, BraidGen, BraidWord};
use crate::error::{Error, Result};
use crate::word::{l_minus, FreeWord, Term};

/// `s_j^k b1 d^l` with `b1` a word in `a1 = s1^2`, `a2 = s2^2` whose first
/// term (if any) is a power of the other generator; or a pure power of `d`.
/// In the quotient ambient `l` is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BraidNormalForm {
    DeltaPower { l: i64 },
    General { j: u32, k: i64, b1: FreeWord, l: i64 },
}

impl BraidNormalForm {
    pub fn is_delta_power(&self) -> bool {
        matches!(self, BraidNormalForm::DeltaPower { .. })
    }

    pub fn l(&self) -> i64 {
        match self {
            BraidNormalForm::DeltaPower { l } | BraidNormalForm::General { l, .. } => *l,
        }
    }

    /// `s_j^{q(k)} b1` read in `a1, a2`; the identity for powers of `d`.
    pub fn theta(&self) -> FreeWord {
        match self {
            BraidNormalForm::DeltaPower { .. } => FreeWord::identity(),
            BraidNormalForm::General { j, k, b1, .. } => {
                let head = FreeWord::power(*j, q_unchecked(*k) / 2);
                head.concat(b1)
            }
        }
    }

    /// Sort key: powers of `d` first, then by `(j, k, b1, l)`.
    pub fn sort_key(&self) -> (u8, u32, i64, Vec<u64>, i64) {
        match self {
            BraidNormalForm::DeltaPower { l } => (0, 0, 0, Vec::new(), *l),
            BraidNormalForm::General { j, k, b1, l } => (1, *j, *k, b1.letter_key(), *l),
        }
    }
}

impl Serialize for BraidNormalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BraidNormalForm::DeltaPower { l } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("kind", "delta-power")?;
                m.serialize_entry("l", l)?;
                m.end()
            }
            BraidNormalForm::General { j, k, b1, l } => {
                let mut m = s.serialize_map(Some(5))?;
                m.serialize_entry("kind", "general")?;
                m.serialize_entry("j", j)?;
                m.serialize_entry("k", k)?;
                m.serialize_entry("b1", &b1.to_string())?;
                m.serialize_entry("l", l)?;
                m.end()
            }
        }
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("normal form exponent {x} exceeds 64 bits")))
}

/// Freely reduced `a1/a2` word from the raw exponent list, keeping exponents
/// small enough that `2e` still fits.
fn word_from(raw: Vec<(u32, BigInt)>) -> Result<FreeWord> {
    let mut terms: Vec<(u32, BigInt)> = Vec::with_capacity(raw.len());
    for (g, n) in raw {
        if n.is_zero() {
            continue;
        }
        match terms.last_mut() {
            Some((lg, ln)) if *lg == g => {
                *ln += n;
                if ln.is_zero() {
                    terms.pop();
                }
            }
            _ => terms.push((g, n)),
        }
    }
    let mut out = Vec::with_capacity(terms.len());
    for (g, n) in terms {
        to_i64(&(&n * 2))?;
        out.push(Term::new(g, to_i64(&n)?));
    }
    Ok(FreeWord::from_terms(out))
}

fn sigma_inv(j: u32) -> Mat2 {
    if j == 1 {
        Mat2::new(1, -1, 0, 1)
    } else {
        Mat2::new(1, 0, 1, 1)
    }
}

/// Normal form of `b` in its ambient. Fails only if an exponent of the
/// result leaves the `i64` range.
pub fn normal_form(b: &BraidWord) -> Result<BraidNormalForm> {
    let img = matrix_image(b);
    // right-multiply by d^-1 until the permutation class is in {1, (12), (23)}
    let d_inv = Mat2::new(0, -1, 1, 0);
    let mut m = img.matrix;
    let mut l0 = 0i64;
    let class = loop {
        match m.mod2() {
            [1, 0, 0, 1] => break 0u32,
            [1, 1, 0, 1] => break 1,
            [1, 0, 1, 1] => break 2,
            _ => {
                m = &m * &d_inv;
                l0 += 1;
                debug_assert!(l0 < 2);
            }
        }
    };
    let (j, k, b1) = if class == 0 {
        let w = word_from(gamma2_word(&m).expect("level-2 matrix"))?;
        let Some((first, rest)) = w.terms().split_first() else {
            let l = match b.ambient() {
                Ambient::B3 => {
                    let (l, r) = img.exponent_sum.div_rem(&BigInt::from(3));
                    debug_assert!(r.is_zero());
                    to_i64(&l)?
                }
                Ambient::ModCenter => l0,
            };
            return Ok(BraidNormalForm::DeltaPower { l });
        };
        let k = first
            .exp
            .checked_mul(2)
            .ok_or_else(|| Error::InvalidArgument("normal form exponent exceeds 64 bits".into()))?;
        (first.gen, k, FreeWord::from_terms(rest.iter().copied()))
    } else {
        let j = class;
        let r = &sigma_inv(j) * &m;
        let w = word_from(gamma2_word(&r).expect("level-2 matrix"))?;
        match w.terms().split_first() {
            Some((first, rest)) if first.gen == j => {
                let k = first
                    .exp
                    .checked_mul(2)
                    .and_then(|x| x.checked_add(1))
                    .ok_or_else(|| Error::InvalidArgument("normal form exponent exceeds 64 bits".into()))?;
                if k == 0 {
                    unreachable!("odd k");
                }
                (j, k, FreeWord::from_terms(rest.iter().copied()))
            }
            _ => (j, 1, w),
        }
    };
    let l = match b.ambient() {
        Ambient::B3 => {
            let mut rest = img.exponent_sum - BigInt::from(k);
            for t in b1.terms() {
                rest -= BigInt::from(t.exp) * 2;
            }
            let (l, r) = rest.div_rem(&BigInt::from(3));
            debug_assert!(r.is_zero());
            to_i64(&l)?
        }
        Ambient::ModCenter => l0,
    };
    Ok(BraidNormalForm::General { j, k, b1, l })
}

/// The braid word `s_j^k b1 d^l` spelled out in `ambient`.
pub fn expand(nf: &BraidNormalForm, ambient: Ambient) -> BraidWord {
    match nf {
        BraidNormalForm::DeltaPower { l } => BraidWord::new([(BraidGen::Delta, *l)], ambient),
        BraidNormalForm::General { j, k, b1, l } => {
            let mut letters = vec![(BraidGen::sigma(*j), *k)];
            letters.extend(b1.terms().iter().map(|t| (BraidGen::sigma(t.gen), 2 * t.exp)));
            letters.push((BraidGen::Delta, *l));
            BraidWord::new(letters, ambient)
        }
    }
}

/// The even neighbour of `k` closest to zero.
pub fn q(k: i64) -> Result<i64> {
    if k == 0 {
        return Err(Error::InvalidArgument("q(k) needs k != 0".into()));
    }
    Ok(q_unchecked(k))
}

fn q_unchecked(k: i64) -> i64 {
    if k % 2 == 0 {
        k
    } else {
        k - k.signum()
    }
}

/// `theta(b)` as a reduced word in `a1, a2`.
pub fn theta(b: &BraidWord) -> Result<FreeWord> {
    Ok(normal_form(b)?.theta())
}

/// Lower bound for the extremal length of the braid's conjugacy class
/// (in the rectangle sense); zero for `s_j^k d^l` and powers of `d`.
pub fn lambda_tr_lower(b: &BraidWord) -> Result<f64> {
    let nf = normal_form(b)?;
    Ok(match &nf {
        BraidNormalForm::General { b1, .. } if !b1.is_identity() => l_minus(&nf.theta()) / (2.0 * PI),
        _ => 0.0,
    })
}

/// Whether `L-(theta(b)) <= 2 pi lambda`. Braids `s_j^k d^{2l}` and powers
/// of `d` are exempt and always admissible.
pub fn lemma4_admissible(b: &BraidWord, lambda: f64) -> Result<bool> {
    check_lambda(lambda)?;
    let nf = normal_form(b)?;
    let exempt = match &nf {
        BraidNormalForm::DeltaPower { .. } => true,
        BraidNormalForm::General { b1, l, .. } => b1.is_identity() && l % 2 == 0,
    };
    Ok(exempt || l_minus(&nf.theta()) <= 2.0 * PI * lambda + crate::word::BUDGET_TOL)
}

/// `log+(3 [|k|/2]) + log+(3 [|k'|/2]) <= pi lambda`.
pub fn lemma3a_check(k: i64, k2: i64, lambda: f64) -> Result<bool> {
    check_lambda(lambda)?;
    if k == 0 || k2 == 0 {
        return Err(Error::InvalidArgument("lemma3a_check needs nonzero k, k'".into()));
    }
    let lhs = log_plus(3.0 * (k.unsigned_abs() / 2) as f64) + log_plus(3.0 * (k2.unsigned_abs() / 2) as f64);
    Ok(lhs <= PI * lambda + crate::word::BUDGET_TOL)
}

fn log_plus(t: f64) -> f64 {
    if t >= 1.0 {
        t.ln()
    } else {
        0.0
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "extremal length must be finite and >= 0, got {lambda}"
        )))
    }
}
