//! Extremal length: closed forms for annuli and rectangles, upper bounds
//! for the torus with a rectangular hole, and a resistor-network solver
//! on square grids to check the closed forms numerically.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Analytic annuli and quadrilaterals.
///
/// `Rectangle { a, b }` has vertical side `a` and horizontal side `b`; its
/// extremal length is that of the curves joining the horizontal sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum AnnulusSpec {
    Round { r: f64, big_r: f64 },
    Rectangle { a: f64, b: f64 },
    FlatCylinder { circumference: f64, height: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

impl AnnulusSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnnulusSpec::Round { r, big_r } => {
                positive("r", r)?;
                positive("R", big_r)?;
                if !(r < big_r) {
                    return Err(Error::InvalidArgument(format!("need r < R, got r={r}, R={big_r}")));
                }
                Ok(())
            }
            AnnulusSpec::Rectangle { a, b } => positive("a", a).and(positive("b", b)),
            AnnulusSpec::FlatCylinder { circumference, height } => {
                positive("circumference", circumference).and(positive("height", height))
            }
        }
    }
}

/// Extremal length of the core-curve family (annuli) or of the curves
/// joining the horizontal sides (rectangles).
pub fn lambda_closed_form(spec: &AnnulusSpec) -> Result<f64> {
    spec.validate()?;
    Ok(match *spec {
        AnnulusSpec::Round { r, big_r } => 2.0 * PI / (big_r / r).ln(),
        AnnulusSpec::Rectangle { a, b } => a / b,
        AnnulusSpec::FlatCylinder { circumference, height } => circumference / height,
    })
}

/// The flat torus `C / (Z + i alpha Z)` with a closed rectangle of sides
/// `(1 - sigma) x (alpha - sigma)` removed, leaving a cross of width `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusWithHole {
    pub alpha: f64,
    pub sigma: f64,
}

impl TorusWithHole {
    pub fn new(alpha: f64, sigma: f64) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
        }
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidArgument(format!("sigma must lie in (0, 1), got {sigma}")));
        }
        Ok(TorusWithHole { alpha, sigma })
    }
}

/// Upper bounds for the extremal length of the annuli attached to the
/// vertical generator `e` and the horizontal generator `e'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorBounds {
    pub e: f64,
    pub e_prime: f64,
}

/// The vertical strip `|Re z| < sigma/2` is an embedded flat cylinder of
/// circumference `alpha` and height `sigma` around `e`, and the horizontal
/// strip one of circumference 1 around `e'`.
pub fn generator_upper_bounds(x: &TorusWithHole) -> GeneratorBounds {
    GeneratorBounds {
        e: x.alpha / x.sigma,
        e_prime: 1.0 / x.sigma,
    }
}

/// `4 (2 alpha + 1) / sigma`: a skeleton curve of length at most
/// `2 alpha + 1` thickened to width `sigma/2`, straightened by a
/// 2-quasiconformal map.
pub fn prop1a_lambda3_upper(x: &TorusWithHole) -> f64 {
    4.0 * (2.0 * x.alpha + 1.0) / x.sigma
}

/// Which curve family of a domain with two marked boundary sets is meant:
/// curves joining the sets, or curves separating them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Connecting,
    Separating,
}

/// Treatment of grid edges that leave a curved domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryRule {
    /// The outside node itself carries the boundary value.
    Staircase,
    /// The boundary value sits where the edge meets the curve, and the
    /// edge conductance is scaled by the inverse of the cut fraction.
    Fractional,
}

const NONE: u32 = u32::MAX;

/// A resistor network on the cell centres of a square grid. Free nodes
/// carry unknown potentials; boundary edges tie a free node to a fixed
/// potential 0 or 1.
#[derive(Debug, Clone)]
pub struct GridDomain {
    h: f64,
    family: Family,
    /// Copies of the computed piece that make up the full domain.
    symmetry: f64,
    pos: Vec<(f64, f64)>,
    nbr: Vec<[u32; 4]>,
    g: Vec<[f64; 4]>,
    /// Per free node: summed conductance to fixed nodes, and the part of
    /// it tied to potential 1.
    fixed_g: Vec<f64>,
    fixed_g1: Vec<f64>,
}

impl GridDomain {
    fn with_nodes(h: f64, family: Family, symmetry: f64, pos: Vec<(f64, f64)>) -> Self {
        let n = pos.len();
        GridDomain {
            h,
            family,
            symmetry,
            pos,
            nbr: vec![[NONE; 4]; n],
            g: vec![[0.0; 4]; n],
            fixed_g: vec![0.0; n],
            fixed_g1: vec![0.0; n],
        }
    }

    fn link(&mut self, p: usize, q: usize, g: f64) {
        for (a, b) in [(p, q), (q, p)] {
            let slot = self.nbr[a]
                .iter()
                .position(|&x| x == NONE)
                .expect("at most four neighbours");
            self.nbr[a][slot] = b as u32;
            self.g[a][slot] = g;
        }
    }

    fn fix(&mut self, p: usize, g: f64, value: u8) {
        self.fixed_g[p] += g;
        if value == 1 {
            self.fixed_g1[p] += g;
        }
    }

    /// Round annulus `r < |z| < R` with potential 0 inside and 1 outside;
    /// the family is the core curves. Only the first quadrant is stored,
    /// with reflecting axes.
    pub fn annulus(r: f64, big_r: f64, h: f64, rule: BoundaryRule) -> Result<Self> {
        AnnulusSpec::Round { r, big_r }.validate()?;
        positive("h", h)?;
        let n = (big_r / h).ceil() as usize + 1;
        let centre = |i: usize| (i as f64 + 0.5) * h;
        let inside = |i: usize, j: usize| {
            let rho = centre(i).hypot(centre(j));
            rho > r && rho < big_r
        };
        let mut index = vec![NONE; n * n];
        let mut pos = Vec::new();
        for j in 0..n {
            for i in 0..n {
                if inside(i, j) {
                    index[j * n + i] = pos.len() as u32;
                    pos.push((centre(i), centre(j)));
                }
            }
        }
        if pos.is_empty() {
            return Err(Error::InvalidArgument(format!("mesh h={h} resolves no interior node")));
        }
        let mut d = GridDomain::with_nodes(h, Family::Separating, 4.0, pos);
        for j in 0..n {
            for i in 0..n {
                let p = index[j * n + i];
                if p == NONE {
                    continue;
                }
                let p = p as usize;
                // right and up neighbours make each edge once; left and down
                // only for fixed nodes (the axes reflect)
                let steps: [(isize, isize); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
                for (di, dj) in steps {
                    let (qi, qj) = (i as isize + di, j as isize + dj);
                    if qi < 0 || qj < 0 {
                        continue;
                    }
                    let (qi, qj) = (qi as usize, qj as usize);
                    let q = if qi < n && qj < n { index[qj * n + qi] } else { NONE };
                    if q != NONE {
                        if di + dj > 0 {
                            d.link(p, q as usize, 1.0);
                        }
                        continue;
                    }
                    let (px, py) = (centre(i), centre(j));
                    let (qx, qy) = (centre(qi), centre(qj));
                    let rho_q = qx.hypot(qy);
                    let (radius, value) = if rho_q <= r { (r, 0) } else { (big_r, 1) };
                    let g = match rule {
                        BoundaryRule::Staircase => 1.0,
                        BoundaryRule::Fractional => 1.0 / cut_fraction((px, py), (qx, qy), radius),
                    };
                    d.fix(p, g, value);
                }
            }
        }
        Ok(d)
    }

    /// Rectangle `[0, b] x [0, a]` with the horizontal sides (`marked_horizontal`)
    /// or the vertical sides held at potentials 0 and 1. Side lengths are
    /// rounded to whole cells.
    pub fn rectangle(a: f64, b: f64, h: f64, marked_horizontal: bool, family: Family) -> Result<Self> {
        AnnulusSpec::Rectangle { a, b }.validate()?;
        positive("h", h)?;
        let nx = ((b / h).round() as usize).max(1);
        let ny = ((a / h).round() as usize).max(1);
        Ok(GridDomain::block(nx, ny, h, marked_horizontal, false, family))
    }

    /// Flat cylinder, periodic in `x`, potentials 0 and 1 on the bottom and
    /// top circles; the family is the core curves.
    pub fn flat_cylinder(circumference: f64, height: f64, h: f64) -> Result<Self> {
        AnnulusSpec::FlatCylinder { circumference, height }.validate()?;
        positive("h", h)?;
        let nx = ((circumference / h).round() as usize).max(3);
        let ny = ((height / h).round() as usize).max(1);
        Ok(GridDomain::block(nx, ny, h, true, true, Family::Separating))
    }

    fn block(nx: usize, ny: usize, h: f64, marked_horizontal: bool, periodic: bool, family: Family) -> Self {
        let pos = (0..ny)
            .flat_map(|j| (0..nx).map(move |i| ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)))
            .collect();
        let mut d = GridDomain::with_nodes(h, family, 1.0, pos);
        let at = |i: usize, j: usize| j * nx + i;
        for j in 0..ny {
            for i in 0..nx {
                let p = at(i, j);
                if i + 1 < nx {
                    d.link(p, at(i + 1, j), 1.0);
                } else if periodic {
                    d.link(p, at(0, j), 1.0);
                }
                if j + 1 < ny {
                    d.link(p, at(i, j + 1), 1.0);
                }
                // the boundary lies half a cell away
                if marked_horizontal {
                    if j == 0 {
                        d.fix(p, 2.0, 0);
                    }
                    if j + 1 == ny {
                        d.fix(p, 2.0, 1);
                    }
                } else {
                    if i == 0 {
                        d.fix(p, 2.0, 0);
                    }
                    if i + 1 == nx {
                        d.fix(p, 2.0, 1);
                    }
                }
            }
        }
        d
    }

    /// Grid for an analytic spec, with the family its closed form refers to.
    pub fn from_spec(spec: &AnnulusSpec, h: f64) -> Result<Self> {
        match *spec {
            AnnulusSpec::Round { r, big_r } => GridDomain::annulus(r, big_r, h, BoundaryRule::Fractional),
            AnnulusSpec::Rectangle { a, b } => GridDomain::rectangle(a, b, h, true, Family::Connecting),
            AnnulusSpec::FlatCylinder { circumference, height } => GridDomain::flat_cylinder(circumference, height, h),
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn node_count(&self) -> usize {
        self.pos.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for p in 0..x.len() {
            let mut acc = self.fixed_g[p] * x[p];
            for k in 0..4 {
                let q = self.nbr[p][k];
                if q == NONE {
                    break;
                }
                acc += self.g[p][k] * (x[p] - x[q as usize]);
            }
            y[p] = acc;
        }
    }

    fn diag(&self) -> Vec<f64> {
        (0..self.pos.len())
            .map(|p| self.fixed_g[p] + self.g[p].iter().sum::<f64>())
            .collect()
    }

    /// Dirichlet energy of `u` with the fixed potentials, over the full
    /// domain.
    fn energy(&self, u: &[f64]) -> f64 {
        let mut e = 0.0;
        for p in 0..u.len() {
            for k in 0..4 {
                let q = self.nbr[p][k];
                if q == NONE {
                    break;
                }
                if (q as usize) > p {
                    e += self.g[p][k] * (u[p] - u[q as usize]).powi(2);
                }
            }
            let g0 = self.fixed_g[p] - self.fixed_g1[p];
            e += g0 * u[p] * u[p] + self.fixed_g1[p] * (1.0 - u[p]).powi(2);
        }
        e * self.symmetry
    }
}

/// Fraction along `p -> q` where the segment meets the circle of the
/// given radius about the origin; `p` is inside the domain, `q` is not.
fn cut_fraction(p: (f64, f64), q: (f64, f64), radius: f64) -> f64 {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let a = dx * dx + dy * dy;
    let b = 2.0 * (p.0 * dx + p.1 * dy);
    let c = p.0 * p.0 + p.1 * p.1 - radius * radius;
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let roots = [(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)];
    let t = roots
        .into_iter()
        .filter(|t| *t > 0.0 && *t <= 1.0 + 1e-12)
        .fold(f64::INFINITY, f64::min);
    // guard against a vanishing cut, which would make the edge stiff
    if t.is_finite() {
        t.clamp(0.05, 1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub lambda: f64,
    pub h: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Solver result with the node potentials.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub report: GridReport,
    pub conductance: f64,
    pub potential: Vec<f64>,
}

impl GridSolution {
    /// CSV node list `x,y,u` of the computed piece.
    pub fn write_nodes_csv<W: Write>(&self, d: &GridDomain, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
        wr.write_record(["x", "y", "u"]).map_err(io)?;
        for (&(x, y), u) in d.pos.iter().zip(&self.potential) {
            wr.write_record([x, y, *u].iter().map(|v| format!("{v:e}")))
                .map_err(io)?;
        }
        wr.flush()
            .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
        Ok(())
    }
}

/// Extremal length of the domain's curve family from the effective
/// conductance of its grid.
pub fn grid_extremal_length(d: &GridDomain) -> Result<f64> {
    Ok(solve_grid(d, &SolverOptions::default())?.report.lambda)
}

/// Jacobi-preconditioned conjugate gradients for the node potentials.
pub fn solve_grid(d: &GridDomain, opts: &SolverOptions) -> Result<GridSolution> {
    let n = d.pos.len();
    let b: Vec<f64> = d.fixed_g1.clone();
    let b_norm = norm(&b);
    if b_norm == 0.0 || d.fixed_g.iter().zip(&d.fixed_g1).all(|(g, g1)| g == g1) {
        return Err(Error::InvalidArgument(
            "grid needs nodes tied to both potentials".into(),
        ));
    }
    let inv_diag: Vec<f64> = d.diag().iter().map(|x| 1.0 / x).collect();
    let mut u = vec![0.0; n];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, m)| a * m).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    let mut rel = norm(&r) / b_norm;
    while rel > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                residual: rel,
            });
        }
        d.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        let mut rz_new = 0.0;
        let mut rr = 0.0;
        for i in 0..n {
            u[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] * inv_diag[i];
            rz_new += r[i] * z[i];
            rr += r[i] * r[i];
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
        rel = rr.sqrt() / b_norm;
    }
    // true residual, not the recursively updated one
    d.apply(&u, &mut ap);
    let residual = ap.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() / b_norm;
    let conductance = d.energy(&u);
    let lambda = match d.family {
        Family::Connecting => 1.0 / conductance,
        Family::Separating => conductance,
    };
    Ok(GridSolution {
        report: GridReport {
            lambda,
            h: d.h,
            iterations,
            residual,
        },
        conductance,
        potential: u,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let round = AnnulusSpec::Round {
            r: 1.0,
            big_r: (2.0 * PI).exp(),
        };
        assert!((lambda_closed_form(&round).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(
            lambda_closed_form(&AnnulusSpec::Rectangle { a: 2.0, b: 1.0 }).unwrap(),
            2.0
        );
        let cyl = AnnulusSpec::FlatCylinder {
            circumference: 2.0,
            height: 0.1,
        };
        assert!((lambda_closed_form(&cyl).unwrap() - 20.0).abs() < 1e-12);
        assert!(lambda_closed_form(&AnnulusSpec::Round { r: 2.0, big_r: 1.0 }).is_err());
    }

    #[test]
    fn spec_json() {
        let s: AnnulusSpec = serde_json::from_str(r#"{"kind":"round","params":{"r":1,"big_r":2}}"#).unwrap();
        assert_eq!(s, AnnulusSpec::Round { r: 1.0, big_r: 2.0 });
        let back = serde_json::to_string(&AnnulusSpec::Rectangle { a: 2.0, b: 1.0 }).unwrap();
        assert_eq!(back, r#"{"kind":"rectangle","params":{"a":2.0,"b":1.0}}"#);
    }

    #[test]
    fn torus_bounds() {
        let x = TorusWithHole::new(1.0, 0.1).unwrap();
        assert!((generator_upper_bounds(&x).e - 10.0).abs() < 1e-12);
        assert!((prop1a_lambda3_upper(&x) - 120.0).abs() < 1e-12);
        let y = TorusWithHole::new(2.0, 0.1).unwrap();
        let g = generator_upper_bounds(&y);
        assert!((g.e - 20.0).abs() < 1e-12 && (g.e_prime - 10.0).abs() < 1e-12);
        let z = TorusWithHole::new(2.0, 0.2).unwrap();
        assert!((prop1a_lambda3_upper(&z) - 100.0).abs() < 1e-12);
        assert!(TorusWithHole::new(0.5, 0.1).is_err());
        assert!(TorusWithHole::new(1.0, 1.0).is_err());
    }

    #[test]
    fn rectangles_are_exact() {
        let d = GridDomain::rectangle(2.0, 1.0, 1.0 / 20.0, true, Family::Connecting).unwrap();
        assert!((grid_extremal_length(&d).unwrap() - 2.0).abs() < 1e-8);
        let d = GridDomain::rectangle(1.0, 1.0, 1.0 / 16.0, true, Family::Connecting).unwrap();
        assert!((grid_extremal_length(&d).unwrap() - 1.0).abs() < 1e-8);
        let d = GridDomain::flat_cylinder(2.0, 0.5, 1.0 / 20.0).unwrap();
        assert!((grid_extremal_length(&d).unwrap() - 4.0).abs() < 1e-8);
    }

    #[test]
    fn coarse_annulus() {
        let d = GridDomain::annulus(1.0, 2.0, 1.0 / 25.0, BoundaryRule::Fractional).unwrap();
        let lam = grid_extremal_length(&d).unwrap();
        let exact = 2.0 * PI / 2f64.ln();
        assert!((lam - exact).abs() / exact < 0.02, "{lam}");
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let d = GridDomain::annulus(1.0, 2.0, 1.0 / 25.0, BoundaryRule::Fractional).unwrap();
        let opts = SolverOptions {
            tol: 1e-10,
            max_iter: 3,
        };
        assert!(matches!(
            solve_grid(&d, &opts),
            Err(Error::NonConvergence { iterations: 3, .. })
        ));
    }
}
