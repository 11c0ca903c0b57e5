//! The three-strand braid group `B3` and its quotient by the center
//! `<d^2>`, with `s1`, `s2` the standard generators and `d = s1 s2 s1`.
//!
//! The word problem is solved through the image in `SL(2,Z)`
//! (`s1 -> [[1,1],[0,1]]`, `s2 -> [[1,0],[-1,1]]`). Together with the
//! exponent sum this image is faithful on `B3`; its projectivization is
//! faithful on the quotient.

mod census;
mod matrix;
mod normal;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::parse_exponent;

pub use census::{braid_count_bound, census, census_capped};
pub use matrix::{gamma2_word, Mat2};
pub use normal::{expand, lambda_tr_lower, lemma3a_check, lemma4_admissible, normal_form, q, theta, BraidNormalForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BraidGen {
    S1,
    S2,
    Delta,
}

impl BraidGen {
    pub fn symbol(self) -> &'static str {
        match self {
            BraidGen::S1 => "s1",
            BraidGen::S2 => "s2",
            BraidGen::Delta => "d",
        }
    }

    /// `s1 <-> s2`, the effect of conjugating by `d`.
    pub fn mirror(self) -> BraidGen {
        match self {
            BraidGen::S1 => BraidGen::S2,
            BraidGen::S2 => BraidGen::S1,
            BraidGen::Delta => BraidGen::Delta,
        }
    }

    /// `s1` or `s2` from the index 1 or 2.
    pub fn sigma(j: u32) -> BraidGen {
        match j {
            1 => BraidGen::S1,
            2 => BraidGen::S2,
            _ => panic!("no braid generator s{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ambient {
    B3,
    ModCenter,
}

impl Ambient {
    pub fn as_str(self) -> &'static str {
        match self {
            Ambient::B3 => "b3",
            Ambient::ModCenter => "mod-center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub gen: BraidGen,
    pub exp: i64,
}

/// A braid word as written; no rewriting happens on construction beyond
/// dropping zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<BraidLetter>,
    ambient: Ambient,
}

impl BraidWord {
    pub fn new<I: IntoIterator<Item = (BraidGen, i64)>>(letters: I, ambient: Ambient) -> Self {
        let letters = letters
            .into_iter()
            .filter(|&(_, e)| e != 0)
            .map(|(gen, exp)| BraidLetter { gen, exp })
            .collect();
        BraidWord { letters, ambient }
    }

    pub fn identity(ambient: Ambient) -> Self {
        BraidWord {
            letters: Vec::new(),
            ambient,
        }
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn with_ambient(&self, ambient: Ambient) -> Self {
        BraidWord {
            letters: self.letters.clone(),
            ambient,
        }
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            letters,
            ambient: self.ambient,
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| BraidLetter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
            ambient: self.ambient,
        }
    }

    /// Replaces every `d^k` by `(s1 s2 s1)^k`.
    pub fn expand_delta(&self) -> BraidWord {
        let mut letters = Vec::new();
        for l in &self.letters {
            if l.gen != BraidGen::Delta {
                letters.push(*l);
                continue;
            }
            // s1 s2 s1 is a palindrome, so its inverse is s1^-1 s2^-1 s1^-1
            let a = l.exp.signum();
            let b = [BraidGen::S1, BraidGen::S2, BraidGen::S1];
            for _ in 0..l.exp.unsigned_abs() {
                letters.extend(b.iter().map(|&gen| BraidLetter { gen, exp: a }));
            }
        }
        BraidWord {
            letters,
            ambient: self.ambient,
        }
    }

    pub fn matrix_image(&self) -> MatrixImage {
        matrix_image(self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.ambient == Ambient::ModCenter {
            f.write_str("@mod-center")?;
            first = false;
        }
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}^{}", l.gen.symbol(), l.exp)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Tokens `s1^k`, `s2^k`, `d^k` separated by whitespace; a bare symbol
    /// means exponent 1. A leading `@mod-center` selects the quotient.
    fn from_str(s: &str) -> Result<Self> {
        let mut ambient = Ambient::B3;
        let mut letters = Vec::new();
        for (i, tok) in s.split_whitespace().enumerate() {
            if tok == "@mod-center" {
                if i != 0 {
                    return Err(Error::Parse(format!(
                        "'@mod-center' must be the first token (found at token {i})"
                    )));
                }
                ambient = Ambient::ModCenter;
                continue;
            }
            let (sym, exp) = match tok.split_once('^') {
                Some((sym, e)) => match parse_exponent(e) {
                    Some(k) if k != 0 => (sym, k),
                    _ => return Err(Error::Parse(format!("bad exponent in token {tok:?}"))),
                },
                None => (tok, 1),
            };
            let gen = match sym {
                "s1" => BraidGen::S1,
                "s2" => BraidGen::S2,
                "d" => BraidGen::Delta,
                _ => return Err(Error::Parse(format!("unknown braid generator in token {tok:?}"))),
            };
            letters.push(BraidLetter { gen, exp });
        }
        Ok(BraidWord { letters, ambient })
    }
}

/// Image in `SL(2,Z)` together with the exponent sum (`d` counts 3).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MatrixImage {
    pub matrix: Mat2,
    #[serde(serialize_with = "matrix::ser_bigint")]
    pub exponent_sum: BigInt,
}

impl MatrixImage {
    pub fn projective(&self) -> Mat2 {
        self.matrix.projective()
    }
}

fn letter_matrix(l: &BraidLetter) -> Mat2 {
    let k = BigInt::from(l.exp);
    let one = || BigInt::from(1);
    let zero = || BigInt::from(0);
    match l.gen {
        BraidGen::S1 => Mat2 {
            a: one(),
            b: k,
            c: zero(),
            d: one(),
        },
        BraidGen::S2 => Mat2 {
            a: one(),
            b: zero(),
            c: -k,
            d: one(),
        },
        BraidGen::Delta => match l.exp.rem_euclid(4) {
            0 => Mat2::new(1, 0, 0, 1),
            1 => Mat2::new(0, 1, -1, 0),
            2 => Mat2::new(-1, 0, 0, -1),
            _ => Mat2::new(0, -1, 1, 0),
        },
    }
}

pub fn matrix_image(b: &BraidWord) -> MatrixImage {
    let mut m = Mat2::identity();
    let mut e = BigInt::from(0);
    for l in &b.letters {
        m = &m * &letter_matrix(l);
        let w = if l.gen == BraidGen::Delta { 3 } else { 1 };
        e += BigInt::from(l.exp) * w;
    }
    MatrixImage {
        matrix: m,
        exponent_sum: e,
    }
}

/// Group equality in the common ambient of `x` and `y`.
pub fn equal(x: &BraidWord, y: &BraidWord) -> Result<bool> {
    if x.ambient != y.ambient {
        return Err(Error::AmbientMismatch(
            x.ambient.as_str().into(),
            y.ambient.as_str().into(),
        ));
    }
    let (mx, my) = (matrix_image(x), matrix_image(y));
    Ok(match x.ambient {
        Ambient::B3 => mx == my,
        Ambient::ModCenter => mx.projective() == my.projective(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn braid_relation_and_delta() {
        assert!(equal(&bw("s1 s2 s1"), &bw("s2 s1 s2")).unwrap());
        assert!(equal(&bw("s1 s2 s1"), &bw("d")).unwrap());
        assert!(equal(&bw("s1 d"), &bw("d s2")).unwrap());
        assert!(!equal(&bw("s1"), &bw("s2")).unwrap());
        let d2 = matrix_image(&bw("d^2"));
        assert_eq!(d2.matrix, Mat2::new(-1, 0, 0, -1));
        assert_eq!(d2.exponent_sum, BigInt::from(6));
        let id = matrix_image(&bw(""));
        assert_eq!(id.matrix, Mat2::identity());
        assert_eq!(id.exponent_sum, BigInt::from(0));
    }

    #[test]
    fn center_quotient() {
        assert!(!equal(&bw("s1"), &bw("s1 d^2")).unwrap());
        assert!(equal(&bw("@mod-center s1"), &bw("@mod-center s1 d^2")).unwrap());
        // d^4 is the identity matrix but not the identity braid
        assert!(!equal(&bw("d^4"), &bw("")).unwrap());
        assert!(matches!(
            equal(&bw("s1"), &bw("@mod-center s1")),
            Err(Error::AmbientMismatch(..))
        ));
    }

    #[test]
    fn expand_delta_agrees() {
        for s in ["d", "d^-1", "s1^3 d^-2 s2", "d^5"] {
            let b = bw(s);
            assert!(equal(&b, &b.expand_delta()).unwrap(), "{s}");
        }
    }

    #[test]
    fn parse_and_display() {
        let b = bw("@mod-center s1^-4 d s1^4");
        assert_eq!(b.ambient(), Ambient::ModCenter);
        assert_eq!(b.to_string(), "@mod-center s1^-4 d^1 s1^4");
        assert_eq!(bw(&b.to_string()), b);
        assert_eq!(bw("").letters().len(), 0);
        for bad in ["s3", "s1^0", "s1^", "x", "s1 @mod-center", "s1^1.5"] {
            assert!(bad.parse::<BraidWord>().is_err(), "{bad}");
        }
    }
}
