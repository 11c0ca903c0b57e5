//! Configurations of three distinct points in the plane, the real
//! collinearity locus `H`, and decoders that read sampled loops as braids
//! or as words in `pi_1(C \ {-1, 1})`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::braid::{Ambient, BraidGen, BraidWord};
use crate::error::{Error, Result};
use crate::word::{FreeWord, Term};

/// Default tolerance of [`in_h`] on the normalized ratio.
pub const IN_H_TOL: f64 = 1e-9;

/// Minimal distance of a plane loop to the punctures `±1`.
pub const PUNCTURE_CLEARANCE: f64 = 1e-9;

/// Closedness tolerance for the first and last samples of a loop.
pub const CLOSE_TOL: f64 = 1e-12;

/// Projection angles tried by [`decode_braid`] before giving up.
pub const GENERIC_ATTEMPTS: usize = 8;

/// Three pairwise distinct points, stored sorted by `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triple {
    points: [Complex64; 3],
}

impl Triple {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        let mut points = [z1, z2, z3];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if points[i] == points[j] {
                return Err(Error::DegenerateTriple(format!(
                    "points {i} and {j} coincide at {}",
                    points[i]
                )));
            }
        }
        points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(Triple { points })
    }

    pub fn points(&self) -> [Complex64; 3] {
        self.points
    }

    /// The point other than the two given ones (matched exactly).
    fn third(&self, p: Complex64, q: Complex64) -> Option<Complex64> {
        let rest: Vec<Complex64> = self.points.iter().copied().filter(|&z| z != p && z != q).collect();
        (rest.len() == 1).then(|| rest[0])
    }
}

/// Whether the three points lie on a real line, up to `tol` on
/// `Im((z2 - z1) / (z3 - z1))`.
pub fn in_h(t: &Triple, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    let [z1, z2, z3] = t.points;
    Ok(((z2 - z1) / (z3 - z1)).im.abs() <= tol)
}

/// `z -> a z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    /// `|a|`, the dilation factor.
    pub fn dilation(&self) -> f64 {
        self.a.norm()
    }
}

/// The affine map sending `anchor.0 -> -1` and `anchor.1 -> 1`, and the
/// image `{-1, f, 1}` of the triple. Both anchors must be points of `t`.
pub fn affine_normalize(t: &Triple, anchors: (Complex64, Complex64)) -> Result<(Triple, AffineMap)> {
    let (p, q) = anchors;
    if p == q {
        return Err(Error::InvalidArgument(format!("anchors coincide at {p}")));
    }
    let third = t
        .third(p, q)
        .ok_or_else(|| Error::InvalidArgument(format!("anchors {p}, {q} are not two points of the triple")))?;
    let a = 2.0 / (q - p);
    let map = AffineMap { a, b: -1.0 - a * p };
    let image = Triple::new(Complex64::new(-1.0, 0.0), map.apply(third), Complex64::new(1.0, 0.0))?;
    Ok((image, map))
}

/// A closed loop of unordered triples. Columns give a labelling of the
/// points per sample, but decoding does not rely on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigLoop {
    t: Vec<f64>,
    samples: Vec<[Complex64; 3]>,
}

/// A closed loop in `C \ {-1, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneLoop {
    t: Vec<f64>,
    samples: Vec<Complex64>,
}

fn check_times(t: &[f64], n: usize) -> Result<()> {
    if t.len() != n {
        return Err(Error::InvalidArgument(format!("{} times for {n} samples", t.len())));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("a loop needs at least two samples".into()));
    }
    if let Some(i) = t.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(format!(
            "t is not strictly increasing at row {}",
            i + 1
        )));
    }
    Ok(())
}

fn default_times(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64).collect()
}

fn same_set(a: &[Complex64; 3], b: &[Complex64; 3], tol: f64) -> bool {
    let mut used = [false; 3];
    a.iter()
        .all(|z| match (0..3).find(|&j| !used[j] && (b[j] - z).norm() <= tol) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        })
}

impl ConfigLoop {
    pub fn new(t: Vec<f64>, samples: Vec<[Complex64; 3]>) -> Result<Self> {
        check_times(&t, samples.len())?;
        let (first, last) = (samples[0], samples[samples.len() - 1]);
        if !same_set(&first, &last, CLOSE_TOL) {
            return Err(Error::InvalidArgument(
                "loop is not closed: first and last triples differ".into(),
            ));
        }
        Ok(ConfigLoop { t, samples })
    }

    /// Samples at unit time steps.
    pub fn from_samples(samples: Vec<[Complex64; 3]>) -> Result<Self> {
        ConfigLoop::new(default_times(samples.len()), samples)
    }

    pub fn samples(&self) -> &[[Complex64; 3]] {
        &self.samples
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    /// This loop followed by `other`, which must start where this one ends.
    pub fn compose(&self, other: &ConfigLoop) -> Result<ConfigLoop> {
        if !same_set(&self.samples[self.samples.len() - 1], &other.samples[0], CLOSE_TOL) {
            return Err(Error::InvalidArgument("loops do not share a base point".into()));
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples[1..]);
        ConfigLoop::from_samples(samples)
    }

    pub fn reversed(&self) -> ConfigLoop {
        let mut samples = self.samples.clone();
        samples.reverse();
        ConfigLoop {
            t: default_times(samples.len()),
            samples,
        }
    }

    /// Inserts `factor - 1` linearly interpolated samples in every step.
    /// Each point moves to the nearest point of the next sample, so
    /// relabelled columns (as left by [`ConfigLoop::compose`]) are fine.
    pub fn refined(&self, factor: usize) -> ConfigLoop {
        let factor = factor.max(1);
        let mut samples = Vec::with_capacity((self.samples.len() - 1) * factor + 1);
        for w in self.samples.windows(2) {
            let p = PERMS
                .iter()
                .min_by(|p, q| {
                    let d = |p: &[usize; 3]| (0..3).map(|k| (w[1][p[k]] - w[0][k]).norm()).fold(0.0, f64::max);
                    d(p).total_cmp(&d(q))
                })
                .expect("six permutations");
            for k in 0..factor {
                let s = k as f64 / factor as f64;
                samples.push([0, 1, 2].map(|i| w[0][i] + (w[1][p[i]] - w[0][i]) * s));
            }
        }
        samples.push(self.samples[self.samples.len() - 1]);
        ConfigLoop {
            t: default_times(samples.len()),
            samples,
        }
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r, &["t", "re1", "im1", "re2", "im2", "re3", "im3"])?;
        let t = rows.iter().map(|r| r[0]).collect();
        let samples = rows
            .iter()
            .map(|r| {
                [
                    Complex64::new(r[1], r[2]),
                    Complex64::new(r[3], r[4]),
                    Complex64::new(r[5], r[6]),
                ]
            })
            .collect();
        ConfigLoop::new(t, samples)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
        wr.write_record(["t", "re1", "im1", "re2", "im2", "re3", "im3"])
            .map_err(io)?;
        for (t, s) in self.t.iter().zip(&self.samples) {
            let rec = [*t, s[0].re, s[0].im, s[1].re, s[1].im, s[2].re, s[2].im];
            wr.write_record(rec.iter().map(|x| format!("{x:e}"))).map_err(io)?;
        }
        wr.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
        Ok(())
    }
}

impl PlaneLoop {
    pub fn new(t: Vec<f64>, samples: Vec<Complex64>) -> Result<Self> {
        check_times(&t, samples.len())?;
        if (samples[0] - samples[samples.len() - 1]).norm() > CLOSE_TOL {
            return Err(Error::InvalidArgument(
                "loop is not closed: first and last samples differ".into(),
            ));
        }
        Ok(PlaneLoop { t, samples })
    }

    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        PlaneLoop::new(default_times(samples.len()), samples)
    }

    /// `n` samples of the circle `c + r e^{i s}`, counterclockwise when
    /// `turns > 0`, starting and ending at `c + r`.
    pub fn circle(c: Complex64, r: f64, turns: i32, n: usize) -> Result<Self> {
        let total = 2.0 * std::f64::consts::PI * f64::from(turns);
        let mut samples: Vec<Complex64> = (0..n)
            .map(|k| c + Complex64::from_polar(r, total * k as f64 / n as f64))
            .collect();
        samples.push(c + r);
        PlaneLoop::from_samples(samples)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn compose(&self, other: &PlaneLoop) -> Result<PlaneLoop> {
        if (self.samples[self.samples.len() - 1] - other.samples[0]).norm() > CLOSE_TOL {
            return Err(Error::InvalidArgument("loops do not share a base point".into()));
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples[1..]);
        PlaneLoop::from_samples(samples)
    }

    pub fn reversed(&self) -> PlaneLoop {
        let mut samples = self.samples.clone();
        samples.reverse();
        PlaneLoop {
            t: default_times(samples.len()),
            samples,
        }
    }

    pub fn refined(&self, factor: usize) -> PlaneLoop {
        let factor = factor.max(1);
        let mut samples = Vec::with_capacity((self.samples.len() - 1) * factor + 1);
        for w in self.samples.windows(2) {
            for k in 0..factor {
                samples.push(w[0] + (w[1] - w[0]) * (k as f64 / factor as f64));
            }
        }
        samples.push(self.samples[self.samples.len() - 1]);
        PlaneLoop {
            t: default_times(samples.len()),
            samples,
        }
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r, &["t", "re", "im"])?;
        let t = rows.iter().map(|r| r[0]).collect();
        let samples = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
        PlaneLoop::new(t, samples)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
        wr.write_record(["t", "re", "im"]).map_err(io)?;
        for (t, z) in self.t.iter().zip(&self.samples) {
            wr.write_record([t, &z.re, &z.im].iter().map(|x| format!("{x:e}")))
                .map_err(io)?;
        }
        wr.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
        Ok(())
    }
}

fn read_rows<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let got: Vec<String> = rd
        .headers()
        .map_err(|e| Error::Parse(format!("csv header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    if got != header {
        return Err(Error::Parse(format!(
            "expected header {}, got {}",
            header.join(","),
            got.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv row {}: {e}", i + 1)))?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse(format!("csv row {}: bad number {f:?}", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Follows the three points through the samples by nearest matching.
/// Returns `paths[strand][sample]`.
const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn track(samples: &[[Complex64; 3]]) -> Result<[Vec<Complex64>; 3]> {
    let gap = |s: &[Complex64; 3]| (s[0] - s[1]).norm().min((s[0] - s[2]).norm()).min((s[1] - s[2]).norm());
    let mut cur = samples[0];
    let mut paths: [Vec<Complex64>; 3] = Default::default();
    for (i, s) in samples.iter().enumerate() {
        let g = gap(s);
        if !(g > 0.0) {
            return Err(Error::Tracking {
                index: i,
                detail: "two points coincide".into(),
            });
        }
        if i > 0 {
            let limit = 0.5 * gap(&cur).min(g);
            let best = PERMS
                .iter()
                .map(|p| {
                    let m = (0..3).map(|k| (s[p[k]] - cur[k]).norm()).fold(0.0, f64::max);
                    (m, p)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("six permutations");
            if !(best.0 < limit) {
                return Err(Error::Tracking {
                    index: i,
                    detail: format!("step {:e} is not below half the point gap {:e}", best.0, 2.0 * limit),
                });
            }
            cur = [s[best.1[0]], s[best.1[1]], s[best.1[2]]];
        }
        for k in 0..3 {
            paths[k].push(cur[k]);
        }
    }
    Ok(paths)
}

struct Crossing {
    time: f64,
    pair: (usize, usize),
    /// `y` of the first strand minus `y` of the second at the crossing.
    dy: f64,
}

/// The braid of the geometric loop, read from signed crossings of a
/// generic linear projection. The result lives in `B3`.
///
/// A crossing is positive when the strand moving from right to left lies
/// above the other one, so a counterclockwise half turn of `{-1, 0, 1}`
/// reads as `d`.
pub fn decode_braid(lp: &ConfigLoop) -> Result<BraidWord> {
    let paths = track(&lp.samples)?;
    let scale = paths.iter().flatten().map(|z| z.norm()).fold(1.0f64, f64::max);
    let min_gap = (0..lp.samples.len())
        .map(|i| {
            let p = [paths[0][i], paths[1][i], paths[2][i]];
            (p[0] - p[1]).norm().min((p[0] - p[2]).norm()).min((p[1] - p[2]).norm())
        })
        .fold(f64::INFINITY, f64::min);
    let eta = (1e-7 * scale).min(min_gap / 8.0);
    for attempt in 0..GENERIC_ATTEMPTS {
        let theta = 0.3 + attempt as f64 * 2.399_963_229_728_653;
        if let Some(w) = read_projection(&paths, theta, eta, scale) {
            return Ok(w);
        }
    }
    Err(Error::NonGeneric {
        attempts: GENERIC_ATTEMPTS,
    })
}

/// `None` when the projection at angle `theta` is not generic.
fn read_projection(paths: &[Vec<Complex64>; 3], theta: f64, eta: f64, scale: f64) -> Option<BraidWord> {
    let n = paths[0].len();
    let rot = Complex64::from_polar(1.0, -theta);
    let rotated: Vec<Vec<Complex64>> = paths.iter().map(|p| p.iter().map(|z| z * rot).collect()).collect();
    // constant per-strand shifts by initial x-rank separate simultaneous
    // coincidences of all three projections
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| rotated[a][0].re.total_cmp(&rotated[b][0].re));
    // unequal steps, so that symmetric motions still split into three times
    let mut shift = [0.0; 3];
    for (w, &s) in [0.0, 1.0, 3.0].iter().zip(&order) {
        shift[s] = eta * w;
    }
    let x = |s: usize, i: usize| rotated[s][i].re + shift[s];
    let y = |s: usize, i: usize| rotated[s][i].im;
    let tiny = 1e-13 * scale;
    // base point must be well separated in x, both at the start and the end
    for i in [0, n - 1] {
        let mut xs = [x(0, i), x(1, i), x(2, i)];
        xs.sort_by(f64::total_cmp);
        if xs[1] - xs[0] < 4.0 * eta || xs[2] - xs[1] < 4.0 * eta {
            return None;
        }
    }
    let mut crossings = Vec::new();
    for i in 0..n - 1 {
        let mut local: Vec<Crossing> = Vec::new();
        for (s, t) in [(0, 1), (0, 2), (1, 2)] {
            let d0 = x(s, i) - x(t, i);
            let d1 = x(s, i + 1) - x(t, i + 1);
            if d0.abs() < tiny || d1.abs() < tiny {
                return None;
            }
            if (d0 > 0.0) == (d1 > 0.0) {
                continue;
            }
            let tau = d0 / (d0 - d1);
            let ys = y(s, i) + (y(s, i + 1) - y(s, i)) * tau;
            let yt = y(t, i) + (y(t, i + 1) - y(t, i)) * tau;
            if (ys - yt).abs() < tiny {
                return None;
            }
            local.push(Crossing {
                time: i as f64 + tau,
                pair: (s, t),
                dy: ys - yt,
            });
        }
        local.sort_by(|a, b| a.time.total_cmp(&b.time));
        if local.windows(2).any(|w| w[1].time - w[0].time < 1e-12) {
            return None;
        }
        crossings.extend(local);
    }
    // positions in the x-order, left to right
    let mut pos = order.clone();
    let mut letters: Vec<(BraidGen, i64)> = Vec::new();
    for c in &crossings {
        let ps = pos.iter().position(|&v| v == c.pair.0)?;
        let pt = pos.iter().position(|&v| v == c.pair.1)?;
        if ps.abs_diff(pt) != 1 {
            return None;
        }
        let left = ps.min(pt);
        // dy is y(first) - y(second); orient it as y(right) - y(left)
        let right_minus_left = if ps > pt { c.dy } else { -c.dy };
        let sign = if right_minus_left > 0.0 { 1 } else { -1 };
        let gen = if left == 0 { BraidGen::S1 } else { BraidGen::S2 };
        match letters.last_mut() {
            Some((g, e)) if *g == gen => {
                *e += sign;
                if *e == 0 {
                    letters.pop();
                }
            }
            _ => letters.push((gen, sign)),
        }
        pos.swap(left, left + 1);
    }
    Some(BraidWord::new(letters, Ambient::B3))
}

/// The word of a loop in `C \ {-1, 1}` over `a1` (counterclockwise about
/// `-1`) and `a2` (counterclockwise about `1`), read from its crossings of
/// the real axis. Samples with `Im >= 0` count as upper.
pub fn decode_word(lp: &PlaneLoop) -> Result<FreeWord> {
    let z = &lp.samples;
    for (i, p) in z.iter().enumerate() {
        let d = (p - 1.0).norm().min((p + 1.0).norm());
        if d < PUNCTURE_CLEARANCE {
            return Err(Error::Clearance { index: i, distance: d });
        }
    }
    let mut terms = Vec::new();
    for i in 0..z.len() - 1 {
        let (a, b) = (z[i], z[i + 1]);
        let (ua, ub) = (a.im >= 0.0, b.im >= 0.0);
        if ua == ub {
            continue;
        }
        let x = a.re + (b.re - a.re) * (a.im / (a.im - b.im));
        let d = (x - 1.0).abs().min((x + 1.0).abs());
        if d < PUNCTURE_CLEARANCE {
            return Err(Error::Clearance { index: i, distance: d });
        }
        let down = ua && !ub;
        if x < -1.0 {
            terms.push(Term::new(1, if down { 1 } else { -1 }));
        } else if x > 1.0 {
            terms.push(Term::new(2, if down { -1 } else { 1 }));
        }
    }
    Ok(FreeWord::from_terms(terms))
}
