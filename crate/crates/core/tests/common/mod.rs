#![allow(dead_code)]

use rand::Rng;

use fbt_core::braid::{Ambient, BraidGen, BraidWord};

const P: u64 = (1 << 61) - 1;

/// Evaluation points for `t`; equality at both is a strong oracle for
/// equality of the Laurent matrices.
const TS: [u64; 2] = [0x01d4_c07f_29e3_ba51, 0x00b7_e151_628a_ed2a];

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addm(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn negm(a: u64) -> u64 {
    (P - a) % P
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn powz(t: u64, e: i64) -> u64 {
    let x = powm(t, e.unsigned_abs());
    if e >= 0 {
        x
    } else {
        powm(x, P - 2)
    }
}

type M = [[u64; 2]; 2];

fn mmul(a: &M, b: &M) -> M {
    let e = |i: usize, j: usize| addm(mulm(a[i][0], b[0][j]), mulm(a[i][1], b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Reduced Burau matrix of one generator letter at `t`.
fn generator(g: BraidGen, inverse: bool, t: u64) -> M {
    let ti = powz(t, -1);
    match (g, inverse) {
        (BraidGen::S1, false) => [[negm(t), 1], [0, 1]],
        (BraidGen::S1, true) => [[negm(ti), ti], [0, 1]],
        (BraidGen::S2, false) => [[1, 0], [t, negm(t)]],
        (BraidGen::S2, true) => [[1, 0], [1, negm(ti)]],
        (BraidGen::Delta, false) => [[0, negm(t)], [negm(mulm(t, t)), 0]],
        (BraidGen::Delta, true) => [[0, negm(mulm(ti, ti))], [negm(ti), 0]],
    }
}

/// Reduced Burau image evaluated at `t` modulo a prime; the Burau
/// representation is faithful on `B3`.
pub fn burau_at(b: &BraidWord, t: u64) -> M {
    let mut acc = [[1, 0], [0, 1]];
    for l in b.letters() {
        let g = generator(l.gen, l.exp < 0, t);
        for _ in 0..l.exp.unsigned_abs() {
            acc = mmul(&acc, &g);
        }
    }
    acc
}

pub fn exponent_sum(b: &BraidWord) -> i64 {
    b.letters()
        .iter()
        .map(|l| if l.gen == BraidGen::Delta { 3 * l.exp } else { l.exp })
        .sum()
}

/// Equality in the ambient of `x`: exact in `B3`; up to the center in the
/// quotient, where `d^2` acts as `t^3` and the power is fixed by the
/// exponent sums.
pub fn burau_equal(x: &BraidWord, y: &BraidWord) -> bool {
    let shift = match x.ambient() {
        Ambient::B3 => 0,
        Ambient::ModCenter => {
            let d = exponent_sum(x) - exponent_sum(y);
            if d % 6 != 0 {
                return false;
            }
            d / 2
        }
    };
    TS.iter().all(|&t| {
        let (a, b) = (burau_at(x, t), burau_at(y, t));
        let s = powz(t, shift);
        (0..2).all(|i| (0..2).all(|j| a[i][j] == mulm(s, b[i][j])))
    })
}

pub fn random_braid<R: Rng>(rng: &mut R, max_len: usize, ambient: Ambient) -> BraidWord {
    let n = rng.gen_range(0..=max_len);
    let letters: Vec<(BraidGen, i64)> = (0..n)
        .map(|_| {
            let g = match rng.gen_range(0..5) {
                0 | 1 => BraidGen::S1,
                2 | 3 => BraidGen::S2,
                _ => BraidGen::Delta,
            };
            let mut e = rng.gen_range(-3i64..=3);
            if e == 0 {
                e = 1;
            }
            (g, e)
        })
        .collect();
    BraidWord::new(letters, ambient)
}

/// Syllable degrees of a reduced letter sequence (letters are `+-1, +-2`):
/// group letters into terms, split off powers with `|k| >= 2`, then split
/// the remaining unit terms into runs of constant sign.
pub fn syllable_degrees(letters: &[i64]) -> Vec<u64> {
    let mut terms: Vec<(i64, i64)> = Vec::new();
    for &l in letters {
        let (g, s) = (l.abs(), l.signum());
        match terms.last_mut() {
            Some((lg, e)) if *lg == g => *e += s,
            _ => terms.push((g, s)),
        }
    }
    let mut out = Vec::new();
    let mut run: Option<(i64, u64)> = None;
    for (_, e) in terms {
        if e.abs() >= 2 {
            if let Some((_, d)) = run.take() {
                out.push(d);
            }
            out.push(e.unsigned_abs());
            continue;
        }
        run = match run {
            Some((s, d)) if s == e => Some((s, d + 1)),
            Some((_, d)) => {
                out.push(d);
                Some((e, 1))
            }
            None => Some((e, 1)),
        };
    }
    if let Some((_, d)) = run {
        out.push(d);
    }
    out
}

pub fn l_minus_of(degrees: &[u64]) -> f64 {
    degrees.iter().map(|&d| (3.0 * d as f64).ln()).sum::<f64>() + 0.0
}

/// All reduced letter strings with `L- <= budget`, by brute force over
/// every reduced string of bounded length.
pub fn brute_words(budget: f64) -> Vec<Vec<i64>> {
    let cap = budget.exp() * (1.0 + 1e-12);
    // with s syllables the letter count is at most cap/3^s + s - 1
    let mut max_len = 0usize;
    let mut s = 1u32;
    while 3f64.powi(s as i32) <= cap {
        max_len = max_len.max((cap / 3f64.powi(s as i32)).floor() as usize + s as usize - 1);
        s += 1;
    }
    let mut out = vec![vec![]];
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    while let Some(w) = stack.pop() {
        if w.len() == max_len {
            continue;
        }
        for l in [1i64, -1, 2, -2] {
            if w.last() == Some(&-l) {
                continue;
            }
            let mut v = w.clone();
            v.push(l);
            if l_minus_of(&syllable_degrees(&v)) <= budget + 1e-12 {
                out.push(v.clone());
            }
            stack.push(v);
        }
    }
    out
}

pub fn brute_word_count(budget: f64) -> usize {
    brute_words(budget).len()
}

/// Every formal quotient normal form `s_j^k b1 d^l` with `L-(theta) <= Y`,
/// built from brute-force word lists and scored by the independent
/// syllable reader.
pub fn formal_census(budget: f64) -> Vec<BraidWord> {
    let a = Ambient::ModCenter;
    let d = |l: i64| BraidWord::new([(BraidGen::Delta, l)], a);
    let mut out = vec![d(0), d(1)];
    let words = brute_words(budget);
    let kmax = (2.0 * budget.exp() / 3.0).floor() as i64 + 1;
    for j in [1u32, 2] {
        let sj = if j == 1 { BraidGen::S1 } else { BraidGen::S2 };
        for k in (-kmax..=kmax).filter(|&k| k != 0) {
            let q = if k % 2 == 0 { k } else { k - k.signum() };
            for b1 in &words {
                if b1.first().is_some_and(|l| l.unsigned_abs() == j as u64) {
                    continue;
                }
                let head = std::iter::repeat_n(j as i64 * (q / 2).signum(), (q / 2).unsigned_abs() as usize);
                let th: Vec<i64> = head.chain(b1.iter().copied()).collect();
                if l_minus_of(&syllable_degrees(&th)) > budget + 1e-12 {
                    continue;
                }
                for l in [0, 1] {
                    let mut letters = vec![(sj, k)];
                    letters.extend(b1.iter().map(|&x| {
                        let g = if x.abs() == 1 { BraidGen::S1 } else { BraidGen::S2 };
                        (g, 2 * x.signum())
                    }));
                    letters.push((BraidGen::Delta, l));
                    out.push(BraidWord::new(letters, a));
                }
            }
        }
    }
    out
}

pub mod hp {
    //! 200-digit reference arithmetic.
    use astro_float::{BigFloat, Consts, RoundingMode};

    pub const P: usize = 704;
    const RM: RoundingMode = RoundingMode::ToEven;

    pub struct Hp {
        cc: Consts,
    }

    impl Hp {
        pub fn new() -> Self {
            Hp {
                cc: Consts::new().expect("constants cache"),
            }
        }

        pub fn num(&self, x: f64) -> BigFloat {
            BigFloat::from_f64(x, P)
        }

        pub fn pi(&mut self) -> BigFloat {
            self.cc.pi(P, RM)
        }

        pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
            a.add(b, P, RM)
        }

        pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
            a.mul(b, P, RM)
        }

        pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
            a.div(b, P, RM)
        }

        pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
            a.powi(n, P, RM)
        }

        pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
            a.exp(P, RM, &mut self.cc)
        }

        pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
            a.ln(P, RM, &mut self.cc)
        }

        pub fn to_f64(&self, a: &BigFloat) -> f64 {
            let s = format!("{a}");
            s.parse().unwrap_or_else(|_| panic!("unparseable {s}"))
        }
    }

    /// The bounds as actual 200-digit numbers, logged only at the end.
    pub struct Oracle {
        hp: Hp,
    }

    impl Oracle {
        pub fn new() -> Self {
            Oracle { hp: Hp::new() }
        }

        /// `k * pi * x` as a 200-digit number.
        fn pi_times(&mut self, k: f64, x: f64) -> BigFloat {
            let pi = self.hp.pi();
            let kx = self.hp.mul(&self.hp.num(k), &self.hp.num(x));
            self.hp.mul(&pi, &kx)
        }

        fn ln_of(&mut self, v: &BigFloat) -> f64 {
            let l = self.hp.ln(v);
            self.hp.to_f64(&l)
        }

        pub fn thm1(&mut self, n: usize, lambda: f64) -> f64 {
            let e = self.pi_times(24.0, lambda);
            let e = self.hp.exp(&e);
            let f = self.hp.mul(&self.hp.num(1.5), &e);
            let v = self.hp.mul(&self.hp.num(3.0), &self.hp.powi(&f, n));
            self.ln_of(&v)
        }

        pub fn thm2(&mut self, n: usize, lambda: f64) -> f64 {
            let e = self.pi_times(36.0, lambda);
            let e = self.hp.exp(&e);
            let c = self.hp.num(2.0 * 729.0 * 15625.0);
            let f = self.hp.mul(&c, &e);
            let v = self.hp.powi(&f, n);
            self.ln_of(&v)
        }

        pub fn thm3(&mut self, n: usize, lambda: f64) -> f64 {
            let e = self.pi_times(6.0, lambda);
            let e = self.hp.exp(&e);
            let f = self.hp.mul(&self.hp.num(15.0), &e);
            let v = self.hp.powi(&f, 6 * n);
            self.ln_of(&v)
        }

        pub fn prop1a(&mut self, alpha: f64, sigma: f64) -> f64 {
            let num = self.pi_times(192.0, 2.0 * alpha + 1.0);
            let x = self.hp.div(&num, &self.hp.num(sigma));
            let e = self.hp.exp(&x);
            let v = self.hp.mul(&self.hp.num(7.0), &e);
            self.ln_of(&v)
        }
    }
}
