use std::collections::HashSet;

use super::normal::{expand, normal_form, BraidNormalForm};
use super::{matrix_image, Ambient, BraidGen, BraidWord};
use crate::error::Result;
use crate::lognum::LogNumber;
use crate::word::{enumerate_words_capped, FreeWord, DEFAULT_ENUM_CAP};

/// Elements of `B3 / <d^2>` with `L-(theta(b)) <= budget`, one normal-form
/// representative each, sorted by normal form.
pub fn census(budget: f64) -> Result<Vec<BraidWord>> {
    census_capped(budget, DEFAULT_ENUM_CAP)
}

pub fn census_capped(budget: f64, cap: f64) -> Result<Vec<BraidWord>> {
    let words = enumerate_words_capped(budget, cap)?;
    let amb = Ambient::ModCenter;
    let mut seen = HashSet::new();
    let mut out: Vec<(BraidNormalForm, BraidWord)> = Vec::new();
    for w in &words {
        for cand in candidates(w) {
            let b = BraidWord::new(cand, amb);
            if !seen.insert(matrix_image(&b).projective()) {
                continue;
            }
            let nf = normal_form(&b)?;
            out.push((nf.clone(), expand(&nf, amb)));
        }
    }
    out.sort_by_key(|(nf, _)| nf.sort_key());
    Ok(out.into_iter().map(|(_, b)| b).collect())
}

/// The braids `x w d^l` (`l` in {0, 1}) whose theta is `w`.
fn candidates(w: &FreeWord) -> Vec<Vec<(BraidGen, i64)>> {
    let body: Vec<(BraidGen, i64)> = w.terms().iter().map(|t| (BraidGen::sigma(t.gen), 2 * t.exp)).collect();
    let heads: Vec<Option<(BraidGen, i64)>> = match w.terms().first() {
        None => vec![
            None,
            Some((BraidGen::S1, 1)),
            Some((BraidGen::S1, -1)),
            Some((BraidGen::S2, 1)),
            Some((BraidGen::S2, -1)),
        ],
        Some(t) => {
            let other = BraidGen::sigma(3 - t.gen);
            vec![
                None,
                Some((BraidGen::sigma(t.gen), t.exp.signum())),
                Some((other, 1)),
                Some((other, -1)),
            ]
        }
    };
    let mut out = Vec::with_capacity(2 * heads.len());
    for h in heads {
        for l in 0..2 {
            let mut v: Vec<(BraidGen, i64)> = h.into_iter().collect();
            v.extend_from_slice(&body);
            v.push((BraidGen::Delta, l));
            out.push(v);
        }
    }
    out
}

/// `15 e^{3Y}`.
pub fn braid_count_bound(budget: f64) -> LogNumber {
    LogNumber::from_ln(15f64.ln() + 3.0 * budget)
}
