//! Reduced words in a free group, their syllable decomposition and the
//! length functionals `L-` / `L+`.
//!
//! Words are stored as a sequence of terms `a_j^k` with adjacent terms on
//! distinct generators and `k != 0`. A *letter* is a signed generator index:
//! `+j` for `a_j`, `-j` for `a_j^-1`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognum::LogNumber;

/// Absolute slack used when comparing an `L-` value against a budget.
pub const BUDGET_TOL: f64 = 1e-12;

/// Default upper limit on the enumeration budget (about 10^5 words).
pub const DEFAULT_ENUM_CAP: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub gen: u32,
    pub exp: i64,
}

impl Term {
    pub fn new(gen: u32, exp: i64) -> Self {
        Term { gen, exp }
    }
}

/// A reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    terms: Vec<Term>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord { terms: Vec::new() }
    }

    pub fn generator(gen: u32) -> Self {
        FreeWord::power(gen, 1)
    }

    /// `a_gen^exp`; identity when `exp == 0`.
    pub fn power(gen: u32, exp: i64) -> Self {
        FreeWord::from_terms([Term::new(gen, exp)])
    }

    /// Freely reduces an arbitrary sequence of terms (zero exponents and
    /// repeated generators are allowed on input).
    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut out: Vec<Term> = Vec::new();
        for t in terms {
            push_term(&mut out, t);
        }
        FreeWord { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.terms.is_empty()
    }

    /// Word length `d(w)`: the sum of absolute exponents.
    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|t| t.exp.unsigned_abs()).sum()
    }

    /// Largest generator index occurring in the word (0 for the identity).
    pub fn rank_hint(&self) -> u32 {
        self.terms.iter().map(|t| t.gen).max().unwrap_or(0)
    }

    pub fn letters(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for t in &self.terms {
            let l = if t.exp > 0 { t.gen as i64 } else { -(t.gen as i64) };
            out.extend(std::iter::repeat_n(l, t.exp.unsigned_abs() as usize));
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            terms: self.terms.iter().rev().map(|t| Term::new(t.gen, -t.exp)).collect(),
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.terms.clone();
        for &t in &other.terms {
            push_term(&mut out, t);
        }
        FreeWord { terms: out }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn conjugate_by(&self, u: &FreeWord) -> FreeWord {
        u.concat(self).concat(&u.inverse())
    }

    /// Exponent sum per generator (the image in the abelianization).
    pub fn abelianization(&self, rank: u32) -> Vec<i64> {
        let mut v = vec![0i64; rank as usize];
        for t in &self.terms {
            if t.gen >= 1 && t.gen <= rank {
                v[(t.gen - 1) as usize] += t.exp;
            }
        }
        v
    }

    pub fn syllables(&self) -> Vec<Syllable> {
        syllables(self)
    }

    pub fn l_minus(&self) -> f64 {
        l_minus(self)
    }

    pub fn l_plus(&self) -> f64 {
        l_plus(self)
    }

    /// Ordering key: letters compared as `a1 < a1^-1 < a2 < a2^-1 < ...`,
    /// sequences lexicographically.
    pub fn letter_key(&self) -> Vec<u64> {
        self.letters().into_iter().map(letter_rank).collect()
    }
}

fn letter_rank(l: i64) -> u64 {
    let g = l.unsigned_abs();
    2 * (g - 1) + u64::from(l < 0)
}

fn push_term(out: &mut Vec<Term>, t: Term) {
    if t.exp == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.gen == t.gen => {
            last.exp += t.exp;
            if last.exp == 0 {
                out.pop();
            }
        }
        _ => out.push(t),
    }
}

/// Free reduction of a sequence of letters (`+j` / `-j`, never 0).
pub fn reduce(letters: &[i64]) -> Result<FreeWord> {
    let mut terms = Vec::with_capacity(letters.len());
    for &l in letters {
        if l == 0 {
            return Err(Error::Parse("letter 0 is not a generator".into()));
        }
        let gen =
            u32::try_from(l.unsigned_abs()).map_err(|_| Error::Parse(format!("generator index {l} out of range")))?;
        push_term(&mut terms, Term::new(gen, l.signum()));
    }
    Ok(FreeWord { terms })
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if t.exp == 1 {
                write!(f, "a{}", t.gen)?;
            } else {
                write!(f, "a{}^{}", t.gen, t.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Whitespace-separated `a1^k` / `a2^k` tokens; `aJ` means `aJ^1`; empty input is
    /// the identity. Input need not be reduced.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for tok in s.split_whitespace() {
            let rest = tok
                .strip_prefix('a')
                .ok_or_else(|| Error::Parse(format!("bad token {tok:?}")))?;
            let (g, e) = match rest.split_once('^') {
                Some((g, e)) => (g, Some(e)),
                None => (rest, None),
            };
            let gen: u32 = parse_digits(g).ok_or_else(|| Error::Parse(format!("bad generator in {tok:?}")))?;
            if gen != 1 && gen != 2 {
                return Err(Error::Parse(format!("generator must be a1 or a2 in {tok:?}")));
            }
            let exp: i64 = match e {
                None => 1,
                Some(e) => parse_exponent(e).ok_or_else(|| Error::Parse(format!("bad exponent in {tok:?}")))?,
            };
            if exp == 0 {
                return Err(Error::Parse(format!("zero exponent in {tok:?}")));
            }
            terms.push(Term::new(gen, exp));
        }
        Ok(FreeWord::from_terms(terms))
    }
}

fn parse_digits<T: FromStr>(s: &str) -> Option<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Decimal integer with optional leading minus.
pub(crate) fn parse_exponent(s: &str) -> Option<i64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyllableKind {
    BigPower,
    PlusRun,
    MinusRun,
}

impl SyllableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SyllableKind::BigPower => "big-power",
            SyllableKind::PlusRun => "plus-run",
            SyllableKind::MinusRun => "minus-run",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub kind: SyllableKind,
    pub degree: u64,
    /// Range into the word's letter sequence.
    pub span: Range<usize>,
}

/// Syllable decomposition. A term `a_j^k` with `|k| >= 2` is a syllable on
/// its own; maximal blocks of consecutive `+1` (resp. `-1`) terms form the
/// runs. Degrees are `|k|` and the block length respectively.
pub fn syllables(w: &FreeWord) -> Vec<Syllable> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    let mut run: Option<(SyllableKind, usize, u64)> = None;
    let close = |run: &mut Option<(SyllableKind, usize, u64)>, out: &mut Vec<Syllable>| {
        if let Some((kind, start, len)) = run.take() {
            out.push(Syllable {
                kind,
                degree: len,
                span: start..start + len as usize,
            });
        }
    };
    for t in w.terms() {
        let d = t.exp.unsigned_abs();
        if d >= 2 {
            close(&mut run, &mut out);
            out.push(Syllable {
                kind: SyllableKind::BigPower,
                degree: d,
                span: pos..pos + d as usize,
            });
        } else {
            let kind = if t.exp > 0 {
                SyllableKind::PlusRun
            } else {
                SyllableKind::MinusRun
            };
            match &mut run {
                Some((k, _, len)) if *k == kind => *len += 1,
                _ => {
                    close(&mut run, &mut out);
                    run = Some((kind, pos, 1));
                }
            }
        }
        pos += d as usize;
    }
    close(&mut run, &mut out);
    out
}

/// `L-(w) = sum log(3 d_k)`, zero for the identity.
pub fn l_minus(w: &FreeWord) -> f64 {
    syllables(w)
        .iter()
        .map(|s| (3.0 * s.degree as f64).ln())
        .fold(0.0, |a, x| a + x)
}

/// `L+(w) = sum log(4 d_k)`, zero for the identity.
pub fn l_plus(w: &FreeWord) -> f64 {
    syllables(w)
        .iter()
        .map(|s| (4.0 * s.degree as f64).ln())
        .fold(0.0, |a, x| a + x)
}

fn cyclically_reduced_letters(w: &FreeWord) -> Vec<i64> {
    let letters = w.letters();
    let (mut lo, mut hi) = (0usize, letters.len());
    while hi - lo >= 2 && letters[lo] == -letters[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    letters[lo..hi].to_vec()
}

/// Index of the lexicographically least rotation.
fn least_rotation(s: &[u64]) -> usize {
    let n = s.len();
    let rot = |r: usize| s[r..].iter().chain(&s[..r]);
    (0..n).min_by(|&a, &b| rot(a).cmp(rot(b))).unwrap_or(0)
}

/// Canonical representative of the conjugacy class: cyclically reduce, then
/// take the least rotation of the letter sequence.
pub fn cyclic_canonical(w: &FreeWord) -> FreeWord {
    let letters = cyclically_reduced_letters(w);
    if letters.is_empty() {
        return FreeWord::identity();
    }
    let keys: Vec<u64> = letters.iter().copied().map(letter_rank).collect();
    let r = least_rotation(&keys);
    let rotated: Vec<i64> = letters[r..].iter().chain(&letters[..r]).copied().collect();
    reduce(&rotated).expect("letters come from a valid word")
}

/// True iff `w` is not a proper power `u^k`, `k >= 2`.
pub fn is_primitive(w: &FreeWord) -> Result<bool> {
    if w.is_identity() {
        return Err(Error::IdentityPrimitivity);
    }
    let c = cyclically_reduced_letters(w);
    let n = c.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| c[i] == c[i - p]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
struct EnumState {
    last_gen: u32,
    closed: f64,
    run: Option<(i64, u64)>,
}

impl EnumState {
    fn value(&self) -> f64 {
        self.closed + self.run.map_or(0.0, |(_, len)| (3.0 * len as f64).ln())
    }

    fn push(&self, gen: u32, exp: i64) -> EnumState {
        let d = exp.unsigned_abs();
        let run_value = |run: Option<(i64, u64)>| run.map_or(0.0, |(_, len)| (3.0 * len as f64).ln());
        if d >= 2 {
            EnumState {
                last_gen: gen,
                closed: self.closed + run_value(self.run) + (3.0 * d as f64).ln(),
                run: None,
            }
        } else {
            match self.run {
                Some((s, len)) if s == exp => EnumState {
                    last_gen: gen,
                    closed: self.closed,
                    run: Some((s, len + 1)),
                },
                _ => EnumState {
                    last_gen: gen,
                    closed: self.closed + run_value(self.run),
                    run: Some((exp, 1)),
                },
            }
        }
    }
}

/// All reduced words on `a1, a2` (identity included) with `L- <= budget`,
/// ordered by (syllable count, letter sequence).
pub fn enumerate_words(budget: f64) -> Result<Vec<FreeWord>> {
    enumerate_words_capped(budget, DEFAULT_ENUM_CAP)
}

pub fn enumerate_words_capped(budget: f64, cap: f64) -> Result<Vec<FreeWord>> {
    if !(budget >= 0.0) {
        return Err(Error::InvalidArgument(format!("budget must be >= 0, got {budget}")));
    }
    if budget > cap {
        return Err(Error::BudgetExceeded { budget, cap });
    }
    let limit = budget + BUDGET_TOL;
    let mut out = Vec::new();
    let mut terms = Vec::new();
    let start = EnumState {
        last_gen: 0,
        closed: 0.0,
        run: None,
    };
    enumerate_rec(&start, limit, &mut terms, &mut out);
    let mut keyed: Vec<(usize, Vec<u64>, FreeWord)> = out
        .into_iter()
        .map(|w| (syllables(&w).len(), w.letter_key(), w))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(keyed.into_iter().map(|(_, _, w)| w).collect())
}

fn enumerate_rec(state: &EnumState, limit: f64, terms: &mut Vec<Term>, out: &mut Vec<FreeWord>) {
    out.push(FreeWord { terms: terms.clone() });
    for gen in [1u32, 2] {
        if gen == state.last_gen {
            continue;
        }
        for sign in [1i64, -1] {
            let mut d = 1i64;
            loop {
                let next = state.push(gen, sign * d);
                if next.value() > limit {
                    break;
                }
                terms.push(Term::new(gen, sign * d));
                enumerate_rec(&next, limit, terms, out);
                terms.pop();
                d += 1;
            }
        }
    }
}

/// `1/2 e^{3Y} + 1`, an upper bound for the number of words with `L- <= Y`.
pub fn word_count_bound(budget: f64) -> LogNumber {
    LogNumber::from_ln(3.0 * budget - std::f64::consts::LN_2) + LogNumber::one()
}

/// Images of the generators of a surface group of genus `g` with `m + 1`
/// holes; there are `2g + m` of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyTuple {
    g: u32,
    m: u32,
    entries: Vec<FreeWord>,
}

impl MonodromyTuple {
    pub fn new(g: u32, m: u32, entries: Vec<FreeWord>) -> Result<Self> {
        let expected = 2 * g as usize + m as usize;
        if entries.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "monodromy tuple for (g, m) = ({g}, {m}) needs {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(MonodromyTuple { g, m, entries })
    }

    pub fn topology(&self) -> (u32, u32) {
        (self.g, self.m)
    }

    pub fn entries(&self) -> &[FreeWord] {
        &self.entries
    }

    pub fn conjugate_by(&self, u: &FreeWord) -> MonodromyTuple {
        MonodromyTuple {
            g: self.g,
            m: self.m,
            entries: self.entries.iter().map(|w| w.conjugate_by(u)).collect(),
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.entries.iter().map(FreeWord::degree).sum()
    }

    fn key(&self) -> Vec<Vec<u64>> {
        self.entries.iter().map(FreeWord::letter_key).collect()
    }
}

/// Canonical representative of the simultaneous-conjugacy class.
///
/// The total degree of `u T u^-1`, as a function of `u` on the Cayley tree,
/// is convex, so greedy single-letter descent reaches its minimum and the
/// minimizing tuples form a connected set under single-letter conjugations
/// of equal degree. The least of those tuples (entry-wise letter order) is
/// returned.
pub fn tuple_canonical(t: &MonodromyTuple) -> MonodromyTuple {
    let rank = t.entries.iter().map(FreeWord::rank_hint).max().unwrap_or(0);
    if rank == 0 {
        return t.clone();
    }
    let moves: Vec<FreeWord> = (1..=rank)
        .flat_map(|g| [FreeWord::power(g, 1), FreeWord::power(g, -1)])
        .collect();

    let mut cur = t.clone();
    loop {
        let d = cur.total_degree();
        let better = moves.iter().map(|x| cur.conjugate_by(x)).find(|c| c.total_degree() < d);
        match better {
            Some(c) => cur = c,
            None => break,
        }
    }

    let d = cur.total_degree();
    let mut seen: HashSet<MonodromyTuple> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(cur.clone());
    queue.push_back(cur);
    while let Some(c) = queue.pop_front() {
        for x in &moves {
            let n = c.conjugate_by(x);
            if n.total_degree() == d && !seen.contains(&n) {
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
    }
    seen.into_iter()
        .min_by(|a, b| cmp_keys(&a.key(), &b.key()))
        .expect("at least the starting tuple")
}

fn cmp_keys(a: &[Vec<u64>], b: &[Vec<u64>]) -> Ordering {
    a.cmp(b)
}

/// Generators appearing in a set of words, as a sorted set.
pub fn generators_of<'a, I: IntoIterator<Item = &'a FreeWord>>(words: I) -> BTreeSet<u32> {
    words
        .into_iter()
        .flat_map(|w| w.terms().iter().map(|t| t.gen))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[1, -1]).unwrap(), FreeWord::identity());
        assert_eq!(reduce(&[1, 2, -2, 1]).unwrap(), w("a1^2"));
        assert_eq!(reduce(&[1, 1, -2, -2, -2]).unwrap(), w("a1^2 a2^-3"));
        assert!(reduce(&[1, 0]).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("a1^2 a2^-3").to_string(), "a1^2 a2^-3");
        assert_eq!(w("a1 a1").to_string(), "a1^2");
        assert_eq!(w("").to_string(), "");
        assert_eq!(w("  a2  "), FreeWord::generator(2));
        assert!("b1".parse::<FreeWord>().is_err());
        assert!("a1^0".parse::<FreeWord>().is_err());
        assert!("a1^".parse::<FreeWord>().is_err());
        assert!("a1^+2".parse::<FreeWord>().is_err());
        assert!("a0".parse::<FreeWord>().is_err());
    }

    #[test]
    fn syllable_examples() {
        let s = syllables(&w("a1^3 a2^-2"));
        assert_eq!(s.len(), 2);
        assert_eq!(
            (s[0].kind, s[0].degree, s[0].span.clone()),
            (SyllableKind::BigPower, 3, 0..3)
        );
        assert_eq!(
            (s[1].kind, s[1].degree, s[1].span.clone()),
            (SyllableKind::BigPower, 2, 3..5)
        );

        let s = syllables(&w("a1 a2 a1"));
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].kind, s[0].degree), (SyllableKind::PlusRun, 3));

        assert!(syllables(&FreeWord::identity()).is_empty());

        let s = syllables(&w("a1 a2^-1 a1^-1 a2^4 a1"));
        let kinds: Vec<_> = s.iter().map(|s| (s.kind, s.degree)).collect();
        assert_eq!(
            kinds,
            vec![
                (SyllableKind::PlusRun, 1),
                (SyllableKind::MinusRun, 2),
                (SyllableKind::BigPower, 4),
                (SyllableKind::PlusRun, 1)
            ]
        );
    }

    #[test]
    fn l_values() {
        for (k, kp) in [(2i64, 2i64), (3, -5), (-7, 4)] {
            let word = FreeWord::from_terms([Term::new(1, k), Term::new(2, kp)]);
            let expected = (3.0 * k.abs() as f64).ln() + (3.0 * kp.abs() as f64).ln();
            assert!((l_minus(&word) - expected).abs() < 1e-12);
        }
        assert_eq!(l_minus(&FreeWord::identity()), 0.0);
        assert_eq!(l_plus(&FreeWord::identity()), 0.0);
        assert!((l_minus(&w("a1")) - 3f64.ln()).abs() < 1e-15);
        assert!((l_plus(&w("a1")) - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn invert_concat() {
        assert_eq!(w("a1^2 a2").inverse(), w("a2^-1 a1^-2"));
        assert_eq!(w("a1").concat(&w("a1^-1")), FreeWord::identity());
        assert_eq!(w("a1^2").concat(&w("a2^3")), w("a1^2 a2^3"));
        assert_eq!(w("a1 a2 a1").concat(&w("a1^-1 a2^-1 a1")), w("a1^2"));
    }

    #[test]
    fn cyclic_canonical_examples() {
        assert_eq!(cyclic_canonical(&w("a2 a1 a2^-1")), w("a1"));
        assert_eq!(cyclic_canonical(&w("a1 a2")), cyclic_canonical(&w("a2 a1")));
        assert_eq!(cyclic_canonical(&w("a1^2 a2 a1^-1")), cyclic_canonical(&w("a1 a2")));
        assert_ne!(cyclic_canonical(&w("a1 a2")), cyclic_canonical(&w("a1 a2^-1")));
        assert_eq!(cyclic_canonical(&FreeWord::identity()), FreeWord::identity());
        assert_eq!(cyclic_canonical(&w("a2 a1^-1 a2")), w("a1^-1 a2^2"));
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&w("a1^2")).unwrap());
        assert!(is_primitive(&w("a1 a2")).unwrap());
        assert!(!is_primitive(&w("a1 a2 a1 a2")).unwrap());
        assert!(!is_primitive(&w("a2 a1^2 a2^-1 a1^2 a2^-2")).unwrap());
        assert!(is_primitive(&w("a1 a2 a1^-1")).unwrap());
        assert_eq!(is_primitive(&FreeWord::identity()), Err(Error::IdentityPrimitivity));
    }

    #[test]
    fn enumeration_small_budgets() {
        assert_eq!(enumerate_words(0.0).unwrap(), vec![FreeWord::identity()]);
        let five = enumerate_words(3f64.ln()).unwrap();
        assert_eq!(five.len(), 5);
        assert_eq!(
            five,
            vec![FreeWord::identity(), w("a1"), w("a1^-1"), w("a2"), w("a2^-1")]
        );
        assert_eq!(enumerate_words(6f64.ln()).unwrap().len(), 13);
        assert!(matches!(enumerate_words(5.0), Err(Error::BudgetExceeded { .. })));
        assert!(enumerate_words_capped(5.0, 6.0).is_ok());
        assert!(enumerate_words(-1.0).is_err());
    }

    #[test]
    fn count_bound_values() {
        assert!((word_count_bound(0.0).to_f64() - 1.5).abs() < 1e-12);
        assert!((word_count_bound(3f64.ln()).to_f64() - 14.5).abs() < 1e-12);
        assert!((word_count_bound(6f64.ln()).to_f64() - 109.0).abs() < 1e-10);
    }

    #[test]
    fn tuple_canonical_examples() {
        let a = MonodromyTuple::new(1, 0, vec![w("a1"), w("a2")]).unwrap();
        let b = MonodromyTuple::new(1, 0, vec![w("a2 a1 a2^-1"), w("a2")]).unwrap();
        assert_eq!(tuple_canonical(&a), tuple_canonical(&b));

        let id = MonodromyTuple::new(0, 2, vec![FreeWord::identity(), FreeWord::identity()]).unwrap();
        assert_eq!(tuple_canonical(&id), id);

        let p = MonodromyTuple::new(0, 1, vec![w("a1^2")]).unwrap();
        let q = MonodromyTuple::new(0, 1, vec![w("a2^2")]).unwrap();
        assert_ne!(tuple_canonical(&p), tuple_canonical(&q));

        assert!(MonodromyTuple::new(1, 1, vec![w("a1")]).is_err());
    }
}
