use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A 2x2 integer matrix of determinant one, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Inverse (the adjugate, since the determinant is one).
    pub fn inverse(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Representative of `±M` whose first nonzero top-row entry is positive.
    pub fn projective(&self) -> Self {
        let lead = if self.a.is_zero() { &self.b } else { &self.a };
        if lead.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Entries reduced mod 2, as `[a, b, c, d]`.
    pub fn mod2(&self) -> [u8; 4] {
        let r = |x: &BigInt| u8::from(x.is_odd());
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }

    pub fn to_i64(&self) -> Option<[[i64; 2]; 2]> {
        use num_traits::ToPrimitive;
        Some([
            [self.a.to_i64()?, self.b.to_i64()?],
            [self.c.to_i64()?, self.d.to_i64()?],
        ])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ];
        rows.serialize(s)
    }
}

pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `[[1,2],[0,1]]^n`, the image of `a1 = s1^2`.
pub fn a1_pow(n: &BigInt) -> Mat2 {
    Mat2 {
        a: BigInt::one(),
        b: n * 2,
        c: BigInt::zero(),
        d: BigInt::one(),
    }
}

/// `[[1,0],[-2,1]]^n`, the image of `a2 = s2^2`.
pub fn a2_pow(n: &BigInt) -> Mat2 {
    Mat2 {
        a: BigInt::one(),
        b: BigInt::zero(),
        c: n * -2,
        d: BigInt::one(),
    }
}

/// Writes a matrix of the level-2 congruence subgroup (entries `a, d` odd,
/// `b, c` even) as `±` a product of powers of `a1`, `a2`. Returns the
/// exponent sequence `(generator, power)` in left-to-right order, not yet
/// freely reduced. `None` if the matrix is not in the subgroup.
pub fn gamma2_word(m: &Mat2) -> Option<Vec<(u32, BigInt)>> {
    if m.mod2() != [1, 0, 0, 1] || !m.det().is_one() {
        return None;
    }
    let mut m = m.clone();
    // left multipliers applied so far, as (generator, power)
    let mut ops: Vec<(u32, BigInt)> = Vec::new();
    while !m.c.is_zero() {
        if m.a.abs() > m.c.abs() {
            // a + 2nc into (-|c|, |c|)
            let n = nearest_shift(&m.a, &m.c);
            m = &a1_pow(&n) * &m;
            ops.push((1, n));
        } else {
            // c - 2na into (-|a|, |a|)
            let n = -nearest_shift(&m.c, &m.a);
            m = &a2_pow(&n) * &m;
            ops.push((2, n));
        }
    }
    // now m = ±[[1, 2t], [0, 1]]
    let t = if m.a.is_negative() { -&m.b } else { m.b.clone() } / 2;
    let mut word: Vec<(u32, BigInt)> = ops.into_iter().map(|(g, n)| (g, -n)).collect();
    word.push((1, t));
    Some(word)
}

/// The `n` with `x + 2 n y` of least absolute value; `x` odd, `y` even and
/// nonzero, or `x` even and `y` odd.
fn nearest_shift(x: &BigInt, y: &BigInt) -> BigInt {
    let m = y.abs() * 2;
    let mut r = x.mod_floor(&m);
    if r > y.abs() {
        r -= &m;
    }
    // x + 2 n y = r
    (r - x) / (y * 2)
}
