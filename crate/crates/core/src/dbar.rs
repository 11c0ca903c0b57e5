//! Doubly periodic dbar problems on the torus `C / (Z + i alpha Z)`.
//!
//! The torus with a hole `T^{alpha,sigma}` is modelled by its fundamental
//! cross: the strips `|Im z| < sigma/2` and `|Re z| < sigma/2` of the
//! fundamental domain `[-1/2, 1/2) x [-alpha/2, alpha/2)`. A map `g` that is
//! holomorphic on a vertical strip is cut off with `chi(Re z)` to give
//! `g1 = chi g + (1 - chi) g(0)`, whose dbar derivative
//! `phi = chi'(Re z) (g - g(0)) / 2` lives on the two pieces
//! `delta/2 <= |Re z| <= 3 delta/2` of the horizontal lath. The correction
//!
//! ```text
//! f(z) = -(1/pi) ∬ phi(zeta) wp_nu(zeta - z) dm(zeta)
//! ```
//!
//! has `dbar f = phi` on the cross and is holomorphic elsewhere, so
//! `h = g1 - f` is holomorphic on the cross.
//!
//! Quadrature: `phi` is held piecewise constant on a tensor grid over the
//! lath. The Cauchy term `1/(zeta - z0)` is integrated exactly over cells
//! near the target and by a corrected midpoint rule elsewhere; the smooth
//! remainder of the kernel is expanded in a Taylor series about the centres
//! `±delta` of the two support pieces and paired with precomputed moments
//! of `phi`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::config3::{decode_word, PlaneLoop};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::word::FreeWord;

/// Minimum distance from a pole of a truncated kernel.
pub const POLE_TOL: f64 = 1e-6;
/// Relative Cauchy-Riemann tolerance for sampled holomorphic maps.
pub const CR_TOL: f64 = 1e-8;
/// Largest Taylor order kept for the smooth part of the kernel.
const TAYLOR_MAX: usize = 64;
/// Columns within this many cell widths of the target are integrated exactly.
const NEAR_COLS: f64 = 4.0;
/// Largest admissible ratio of support radius to singularity distance.
const TAYLOR_RATIO: f64 = 0.6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Lattice `Z + i alpha Z`, the shift `nu` and the truncation `|n|, |m| <= N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub alpha: f64,
    pub nu: Complex64,
    pub n: usize,
}

impl KernelParams {
    /// `nu = 1/2 + i alpha / 2`.
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        KernelParams::with_nu(alpha, c(0.5, alpha / 2.0), n)
    }

    pub fn with_nu(alpha: f64, nu: Complex64, n: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("truncation N must be positive".into()));
        }
        if !(nu.re.is_finite() && nu.im.is_finite()) {
            return Err(Error::InvalidArgument("nu must be finite".into()));
        }
        let p = KernelParams { alpha, nu, n };
        if (nu - p.point(nu.re.round() as i64, (nu.im / alpha).round() as i64)).norm() < 1e-12 {
            return Err(Error::InvalidArgument(format!("nu = {nu} lies in the lattice")));
        }
        Ok(p)
    }

    fn point(&self, n: i64, m: i64) -> Complex64 {
        c(n as f64, m as f64 * self.alpha)
    }

    fn bound(&self) -> i64 {
        self.n as i64
    }

    fn lattice(&self) -> impl Iterator<Item = (i64, i64)> {
        let b = self.bound();
        (-b..=b).flat_map(move |n| (-b..=b).map(move |m| (n, m)))
    }

    /// Nearest truncated lattice point to `z` (the box is a rectangle, so
    /// clamping the rounded indices is exact).
    fn nearest(&self, z: Complex64) -> (i64, i64) {
        let b = self.bound();
        let n = (z.re.round() as i64).clamp(-b, b);
        let m = ((z.im / self.alpha).round() as i64).clamp(-b, b);
        (n, m)
    }

    fn check_pole(&self, z: Complex64, shift: Complex64) -> Result<()> {
        let (n, m) = self.nearest(z - shift);
        let pole = self.point(n, m) + shift;
        let d = (z - pole).norm();
        if d < POLE_TOL {
            return Err(Error::PoleProximity {
                distance: d,
                pole_re: pole.re,
                pole_im: pole.im,
            });
        }
        Ok(())
    }

    /// `sum_{omega != 0} nu / omega^2` over the truncated lattice.
    fn nu_sum(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (n, m) in self.lattice() {
            if n != 0 || m != 0 {
                let w = self.point(n, m);
                s += (w * w).inv();
            }
        }
        s * self.nu
    }
}

/// Truncated Weierstrass function
/// `1/z^2 + sum' (1/(z - omega)^2 - 1/omega^2)`.
pub fn wp(p: &KernelParams, z: Complex64) -> Result<Complex64> {
    p.check_pole(z, Complex64::new(0.0, 0.0))?;
    let mut s = (z * z).inv();
    for (n, m) in p.lattice() {
        if n != 0 || m != 0 {
            let w = p.point(n, m);
            let d = z - w;
            s += (d * d).inv() - (w * w).inv();
        }
    }
    Ok(s)
}

/// Truncated elliptic function with simple poles at the lattice and at the
/// lattice shifted by `nu`:
/// `1/z - 1/(z - nu) + sum' (1/(z - omega) - 1/(z - omega - nu) + nu/omega^2)`.
pub fn wp_nu(p: &KernelParams, z: Complex64) -> Result<Complex64> {
    p.check_pole(z, Complex64::new(0.0, 0.0))?;
    Ok(z.inv() + wp_nu_regular(p, z)?)
}

/// `wp_nu(z) - 1/z`, summed without the `1/z` term (no cancellation near 0).
pub fn wp_nu_regular(p: &KernelParams, z: Complex64) -> Result<Complex64> {
    p.check_pole(z, p.nu)?;
    let mut s = -(z - p.nu).inv() + p.nu_sum();
    for (n, m) in p.lattice() {
        if n != 0 || m != 0 {
            let w = p.point(n, m);
            s += (z - w).inv() - (z - w - p.nu).inv();
        }
    }
    Ok(s)
}

/// Direction of a period shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Period {
    /// `z -> z + 1`
    Real,
    /// `z -> z + i alpha`
    Imaginary,
}

/// Bound on `|wp_nu(z + T) - wp_nu(z)|` for the truncated sum. Only the two
/// boundary rows (columns) of the box fail to telescope; each of their
/// `2(2N+1)` terms is `nu / ((v)(v - nu))` with `|v| >= R - |z|`, where `R`
/// is `N` or `N alpha`. Infinite when `z` is too far out.
pub fn wp_nu_tail_bound(p: &KernelParams, z: Complex64, period: Period) -> f64 {
    let r = reach(p, period) - z.norm();
    let nu = p.nu.norm();
    if r - nu <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * (2 * p.n + 1) as f64 * nu / (r * (r - nu))
}

/// Bound on `|wp(z + T) - wp(z)|`. The two boundary rows cancel in pairs up
/// to a difference quotient of `x^-2`, so the bound is `O(1/N^2)`.
pub fn wp_tail_bound(p: &KernelParams, z: Complex64, period: Period) -> f64 {
    let r = reach(p, period) - z.norm();
    if r <= 0.0 {
        return f64::INFINITY;
    }
    let step = match period {
        Period::Real => 1.0,
        Period::Imaginary => p.alpha,
    };
    2.0 * (2 * p.n + 1) as f64 * (step + 2.0 * z.norm()) / r.powi(3)
}

fn reach(p: &KernelParams, period: Period) -> f64 {
    match period {
        Period::Real => p.n as f64,
        Period::Imaginary => p.n as f64 * p.alpha,
    }
}

// Cutoff. chi0' is the trapezoid 3/2 with both shoulders replaced by the
// cubic smoothstep over a third of the interval, so chi0 is C^2, rises from
// 0 to 1 and has slope at most 3/2.
const RAMP: f64 = 1.0 / 3.0;

fn smoothstep(s: f64) -> f64 {
    s * s * (3.0 - 2.0 * s)
}

/// The ramp `chi0` on `[0, 1]`, extended by 0 and 1.
pub fn chi0(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else if t < RAMP {
        let s = t / RAMP;
        1.5 * RAMP * (s.powi(3) - 0.5 * s.powi(4))
    } else if t <= 1.0 - RAMP {
        0.25 + 1.5 * (t - RAMP)
    } else {
        1.0 - chi0(1.0 - t)
    }
}

pub fn chi0_prime(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else if t < RAMP {
        1.5 * smoothstep(t / RAMP)
    } else if t <= 1.0 - RAMP {
        1.5
    } else {
        1.5 * smoothstep((1.0 - t) / RAMP)
    }
}

fn check_chi_arg(delta: f64, t: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if !(t.abs() <= 1.5 * delta * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "chi is defined for |t| <= 3 delta / 2, got t = {t}"
        )));
    }
    Ok(())
}

/// `chi0(t/delta + 3/2)` left of `-delta/2`, `1` in the middle and
/// `chi0(3/2 - t/delta)` right of `delta/2`.
pub fn chi(delta: f64, t: f64) -> Result<f64> {
    check_chi_arg(delta, t)?;
    Ok(chi_unchecked(delta, t))
}

pub fn chi_prime(delta: f64, t: f64) -> Result<f64> {
    check_chi_arg(delta, t)?;
    Ok(chi_prime_unchecked(delta, t))
}

fn chi_unchecked(delta: f64, t: f64) -> f64 {
    if t <= -0.5 * delta {
        chi0(t / delta + 1.5)
    } else if t < 0.5 * delta {
        1.0
    } else {
        chi0(1.5 - t / delta)
    }
}

fn chi_prime_unchecked(delta: f64, t: f64) -> f64 {
    if t <= -0.5 * delta {
        chi0_prime(t / delta + 1.5) / delta
    } else if t < 0.5 * delta {
        0.0
    } else {
        -chi0_prime(1.5 - t / delta) / delta
    }
}

/// Geometry, truncation and constants of one dbar problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DbarConfig {
    pub alpha: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub n_trunc: usize,
    pub quad_nx: usize,
    pub quad_ny: usize,
    /// Bound with `|g| <= C1` and `|g'| <= C1/delta` on the strip; estimated
    /// from samples when absent.
    pub c1: Option<f64>,
    /// Bound on `|wp_nu(zeta - z) - 1/(zeta - z)|`; estimated when absent.
    pub c2: Option<f64>,
}

impl Default for DbarConfig {
    fn default() -> Self {
        DbarConfig {
            alpha: 1.0,
            delta: 0.1,
            epsilon: 0.01,
            n_trunc: 50,
            quad_nx: 400,
            quad_ny: 400,
            c1: None,
            c2: None,
        }
    }
}

impl DbarConfig {
    pub fn sigma(&self) -> f64 {
        self.epsilon * self.delta
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be >= 1, got {}",
                self.alpha
            )));
        }
        // the lath must fit in one period and miss the hole
        if !(self.delta > 0.0 && self.delta <= 0.2) {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in (0, 0.2], got {}",
                self.delta
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.n_trunc == 0 {
            return Err(Error::InvalidArgument("truncation N must be positive".into()));
        }
        if self.quad_nx < 24 || self.quad_ny < 2 {
            return Err(Error::Unresolved(format!(
                "quadrature grid {}x{} too coarse (need at least 24x2)",
                self.quad_nx, self.quad_ny
            )));
        }
        for (name, v) in [("C1", self.c1), ("C2", self.c2)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidArgument(format!("{name} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> Result<KernelParams> {
        KernelParams::new(self.alpha, self.n_trunc)
    }
}

/// Samples of `phi` on the quadrature grid over the lath
/// `[-3 delta/2, 3 delta/2] x [-sigma/2, sigma/2]`, one value per cell.
#[derive(Debug, Clone)]
pub struct PhiData {
    pub alpha: f64,
    pub delta: f64,
    pub sigma: f64,
    pub g0: Complex64,
    /// Largest `|phi|` over the cells.
    pub max_phi: f64,
    pub c1: f64,
    /// Largest relative Cauchy-Riemann residual seen while sampling `g`.
    pub cr_residual: f64,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
    // column major: cell (i, j) at i * ny + j
    values: Vec<Complex64>,
}

impl PhiData {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.hx, self.hy)
    }

    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        c(
            -1.5 * self.delta + (i as f64 + 0.5) * self.hx,
            -0.5 * self.sigma + (j as f64 + 0.5) * self.hy,
        )
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.ny + j]
    }

    /// `(3/2) C1 / delta`.
    pub fn phi_bound(&self) -> f64 {
        1.5 * self.c1 / self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// `∬ |phi|`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.hx * self.hy
    }

    /// Whether `z` (taken modulo the lattice) lies in `Q_eps`: the lath or
    /// the vertical piece `|Re z| <= sigma/2, |Im z| <= delta/2`.
    pub fn in_support(&self, z: Complex64) -> bool {
        let z = reduce(z, self.alpha);
        let lath = z.re.abs() <= 1.5 * self.delta && z.im.abs() <= 0.5 * self.sigma;
        let post = z.re.abs() <= 0.5 * self.sigma && z.im.abs() <= 0.5 * self.delta;
        lath || post
    }

    /// `g1(z) = chi(Re z) g(z) + (1 - chi(Re z)) g(0)`, with `Re z` taken
    /// modulo 1 and `g1 = g(0)` away from the vertical strip.
    pub fn g1<G: Fn(Complex64) -> Complex64>(&self, g: &G, z: Complex64) -> Complex64 {
        let x = z.re - z.re.round();
        if x.abs() >= 1.5 * self.delta {
            return self.g0;
        }
        let k = chi_unchecked(self.delta, x);
        g(z) * k + self.g0 * (1.0 - k)
    }
}

/// Representative of `z` in `[-1/2, 1/2] x [-alpha/2, alpha/2]`.
fn reduce(z: Complex64, alpha: f64) -> Complex64 {
    c(z.re - z.re.round(), z.im - alpha * (z.im / alpha).round())
}

/// Checks that `g` is holomorphic on the strip `|Re z| <= 3 delta/2`,
/// estimates `C1` unless configured, and samples `phi = dbar g1`.
pub fn blend_and_phi<G: Fn(Complex64) -> Complex64>(g: &G, cfg: &DbarConfig) -> Result<PhiData> {
    cfg.validate()?;
    let (delta, sigma, alpha) = (cfg.delta, cfg.sigma(), cfg.alpha);
    let g0 = g(Complex64::new(0.0, 0.0));
    if !(g0.re.is_finite() && g0.im.is_finite()) {
        return Err(Error::InvalidArgument("g(0) is not finite".into()));
    }

    // Cauchy-Riemann check and C1 on a sample grid of the strip
    let step = 1e-5 * delta;
    let (mut sup_g, mut sup_dg, mut sup_dbar) = (0f64, 0f64, 0f64);
    let (kx, ky) = (25, 101);
    for a in 0..kx {
        let x = -1.5 * delta + 3.0 * delta * a as f64 / (kx - 1) as f64;
        for b in 0..ky {
            let y = -0.5 * alpha + alpha * b as f64 / (ky - 1) as f64;
            let z = c(x, y);
            let gx = (g(z + step) - g(z - step)) / (2.0 * step);
            let gy = (g(z + c(0.0, step)) - g(z - c(0.0, step))) / (2.0 * step);
            let dz = (gx - Complex64::i() * gy) * 0.5;
            let dbar = (gx + Complex64::i() * gy) * 0.5;
            sup_g = sup_g.max(g(z).norm());
            sup_dg = sup_dg.max(dz.norm());
            sup_dbar = sup_dbar.max(dbar.norm());
        }
    }
    if !(sup_g.is_finite() && sup_dg.is_finite()) {
        return Err(Error::InvalidArgument("g is not finite on the strip".into()));
    }
    let cr_residual = sup_dbar / sup_dg.max(1.0);
    if !(cr_residual < CR_TOL) {
        return Err(Error::NotAnalytic(cr_residual));
    }
    let c1 = cfg
        .c1
        .unwrap_or_else(|| sup_g.max(delta * sup_dg).max(f64::MIN_POSITIVE));

    let (nx, ny) = (cfg.quad_nx, cfg.quad_ny);
    let (hx, hy) = (3.0 * delta / nx as f64, sigma / ny as f64);
    let mut values = Vec::with_capacity(nx * ny);
    let mut max_phi = 0f64;
    for i in 0..nx {
        let x = -1.5 * delta + (i as f64 + 0.5) * hx;
        let k = 0.5 * chi_prime_unchecked(delta, x);
        for j in 0..ny {
            let v = if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let z = c(x, -0.5 * sigma + (j as f64 + 0.5) * hy);
                (g(z) - g0) * k
            };
            max_phi = max_phi.max(v.norm());
            values.push(v);
        }
    }
    let data = PhiData {
        alpha,
        delta,
        sigma,
        g0,
        max_phi,
        c1,
        cr_residual,
        nx,
        ny,
        hx,
        hy,
        values,
    };
    if max_phi > data.phi_bound() * (1.0 + 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "max |phi| = {max_phi:e} exceeds (3/2) C1 / delta = {:e}; C1 is too small",
            data.phi_bound()
        )));
    }
    Ok(data)
}

/// `∬_{[u1,u2]x[v1,v2]} du dv / (u + i v)`, exact.
fn rect_integral(u1: f64, u2: f64, v1: f64, v2: f64) -> Complex64 {
    // antiderivatives of u/(u^2+v^2) and v/(u^2+v^2), up to terms that
    // cancel in the corner sum
    fn xlog(a: f64, r2: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else {
            a * r2.ln()
        }
    }
    fn xatan(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else {
            a * (b / a).atan()
        }
    }
    let f = |u: f64, v: f64| {
        let r2 = u * u + v * v;
        0.5 * (xlog(v, r2) + 2.0 * xatan(u, v))
    };
    let g = |u: f64, v: f64| {
        let r2 = u * u + v * v;
        0.5 * (xlog(u, r2) + 2.0 * xatan(v, u))
    };
    let corner = |h: &dyn Fn(f64, f64) -> f64| h(u2, v2) - h(u1, v2) - h(u2, v1) + h(u1, v1);
    c(corner(&f), -corner(&g))
}

struct Center {
    at: Complex64,
    radius: f64,
    moments: Vec<Complex64>,
}

/// Evaluator of the solution `f` for fixed `phi` and kernel.
pub struct DbarSolver<'a> {
    phi: &'a PhiData,
    params: KernelParams,
    lattice: Vec<(i64, i64, Complex64)>,
    nu_sum: Complex64,
    centers: Vec<Center>,
    active: Vec<usize>,
}

impl<'a> DbarSolver<'a> {
    pub fn new(phi: &'a PhiData, params: KernelParams) -> Result<Self> {
        if (params.alpha - phi.alpha).abs() > 1e-12 {
            return Err(Error::InvalidArgument("kernel and data disagree on alpha".into()));
        }
        let lattice = params.lattice().map(|(n, m)| (n, m, params.point(n, m))).collect();
        let active: Vec<usize> = (0..phi.nx)
            .filter(|&i| (0..phi.ny).any(|j| phi.value(i, j).norm() > 0.0))
            .collect();
        let half_diag = 0.5 * phi.hx.hypot(phi.hy);
        let area = phi.hx * phi.hy;
        let mut centers = Vec::new();
        for side in [-1.0, 1.0] {
            let at = c(side * phi.delta, 0.0);
            let mut radius = 0f64;
            let mut moments = vec![Complex64::new(0.0, 0.0); TAYLOR_MAX];
            for &i in &active {
                if phi.center(i, 0).re.signum() != side {
                    continue;
                }
                for j in 0..phi.ny {
                    let v = phi.value(i, j) * area;
                    let d = phi.center(i, j) - at;
                    radius = radius.max(d.norm() + half_diag);
                    let mut p = v;
                    for m in moments.iter_mut() {
                        *m += p;
                        p *= d;
                    }
                }
            }
            if radius > 0.0 {
                centers.push(Center { at, radius, moments });
            }
        }
        Ok(DbarSolver {
            phi,
            params,
            lattice,
            nu_sum: params.nu_sum(),
            centers,
            active,
        })
    }

    pub fn phi(&self) -> &PhiData {
        self.phi
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// `f(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_anchored(z, z)
    }

    /// `f(z)` with the exact-cell set and the lattice split chosen for
    /// `anchor`; used so that finite-difference stencils see one smooth
    /// formula.
    pub fn eval_anchored(&self, z: Complex64, anchor: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument("target is not finite".into()));
        }
        if self.active.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let p = &self.params;
        let (ns, ms) = (anchor.re.round() as i64, (anchor.im / p.alpha).round() as i64);
        if ns.abs() > p.bound() || ms.abs() > p.bound() {
            return Err(Error::Unresolved(format!("target {z} outside the truncated lattice")));
        }
        let shift = p.point(ns, ms);
        let cauchy = self.cauchy(z - shift, (anchor - shift).re);
        let smooth = self.smooth(z, (-ns, -ms))?;
        Ok(-(cauchy + smooth) / PI)
    }

    /// `∬ phi(zeta) / (zeta - z0)`.
    fn cauchy(&self, z0: Complex64, anchor_x: f64) -> Complex64 {
        let phi = self.phi;
        let (hx, hy, ny) = (phi.hx, phi.hy, phi.ny);
        let area = hx * hy;
        let corr = (hx * hx - hy * hy) / 12.0;
        let y0 = -0.5 * phi.sigma;
        let mut acc = Complex64::new(0.0, 0.0);
        for &i in &self.active {
            let xc = -1.5 * phi.delta + (i as f64 + 0.5) * hx;
            let col = &phi.values[i * ny..(i + 1) * ny];
            if (xc - anchor_x).abs() <= NEAR_COLS * hx {
                let u1 = xc - 0.5 * hx - z0.re;
                let u2 = u1 + hx;
                for (j, v) in col.iter().enumerate() {
                    let v1 = y0 + j as f64 * hy - z0.im;
                    acc += v * rect_integral(u1, u2, v1, v1 + hy);
                }
            } else {
                let dx = xc - z0.re;
                let mut col_acc = Complex64::new(0.0, 0.0);
                for (j, v) in col.iter().enumerate() {
                    let inv = c(dx, y0 + (j as f64 + 0.5) * hy - z0.im).inv();
                    col_acc += v * (inv + inv * inv * inv * corr);
                }
                acc += col_acc * area;
            }
        }
        acc
    }

    /// `∬ phi(zeta) R(zeta - z)` where `R` is the truncated kernel minus its
    /// term at the lattice point `excluded`.
    fn smooth(&self, z: Complex64, excluded: (i64, i64)) -> Result<Complex64> {
        let nu = self.params.nu;
        let mut total = Complex64::new(0.0, 0.0);
        for ctr in &self.centers {
            let w = ctr.at - z;
            let dist = self.singular_distance(w, excluded);
            let ratio = ctr.radius / dist;
            if !(ratio < TAYLOR_RATIO) {
                return Err(Error::Unresolved(format!(
                    "target {z} within {dist:.3e} of a kernel pole seen from the support"
                )));
            }
            let terms = ((1e-17f64.ln() / ratio.ln()).ceil() as usize + 1).clamp(2, TAYLOR_MAX);
            let mut s = vec![Complex64::new(0.0, 0.0); terms];
            for &(n, m, om) in &self.lattice {
                let b = (w - om - nu).inv();
                let a = if (n, m) == excluded {
                    Complex64::new(0.0, 0.0)
                } else {
                    (w - om).inv()
                };
                let (mut pa, mut pb) = (a, b);
                for sk in s.iter_mut() {
                    *sk += pa - pb;
                    pa *= a;
                    pb *= b;
                }
            }
            s[0] += self.nu_sum;
            for (k, sk) in s.iter().enumerate() {
                let ck = if k % 2 == 0 { *sk } else { -*sk };
                total += ck * ctr.moments[k];
            }
        }
        Ok(total)
    }

    fn singular_distance(&self, w: Complex64, excluded: (i64, i64)) -> f64 {
        let p = &self.params;
        let b = p.bound();
        let mut best = f64::INFINITY;
        for (shift, skip) in [(Complex64::new(0.0, 0.0), Some(excluded)), (p.nu, None)] {
            let (n0, m0) = p.nearest(w - shift);
            for n in (n0 - 2).max(-b)..=(n0 + 2).min(b) {
                for m in (m0 - 2).max(-b)..=(m0 + 2).min(b) {
                    if skip == Some((n, m)) {
                        continue;
                    }
                    best = best.min((w - p.point(n, m) - shift).norm());
                }
            }
        }
        best
    }

    /// Central-difference `dbar f` at `z` with step `h`.
    pub fn dbar_fd(&self, z: Complex64, h: f64) -> Result<Complex64> {
        let e = |d: Complex64| self.eval_anchored(z + d, z);
        let fx = (e(c(h, 0.0))? - e(c(-h, 0.0))?) / (2.0 * h);
        let fy = (e(c(0.0, h))? - e(c(0.0, -h))?) / (2.0 * h);
        Ok((fx + Complex64::i() * fy) * 0.5)
    }

    /// `f` at every target, in order, spread over worker threads.
    pub fn eval_many(&self, targets: &[Complex64]) -> Result<Vec<Complex64>> {
        par_map(targets, |z| self.eval(*z)).into_iter().collect()
    }
}

/// `f` at the given targets.
pub fn solve_dbar(phi: &PhiData, params: &KernelParams, targets: &[Complex64]) -> Result<Vec<Complex64>> {
    DbarSolver::new(phi, *params)?.eval_many(targets)
}

/// The sup-norm budget
/// `(6 C1 C2 eps delta + 3 C1 (2 sqrt2 pi eps delta + 4 eps delta log(3/eps)) / delta) / pi`.
pub fn budget(c1: f64, c2: f64, epsilon: f64, delta: f64) -> f64 {
    let ed = epsilon * delta;
    6.0 * c1 * c2 * ed / PI + 3.0 * c1 / (PI * delta) * (2.0 * 2f64.sqrt() * PI * ed + 4.0 * ed * (3.0 / epsilon).ln())
}

/// Sample points of the fundamental cross of `T^{alpha,sigma}`: three rows
/// across each strip, dense near the lath (spacing `delta/40` for
/// `|Re z| <= 2 delta`) and spacing `1/50` of the period elsewhere.
pub fn cross_grid(alpha: f64, sigma: f64, delta: f64) -> Vec<Complex64> {
    let mut xs = Vec::new();
    let dense = 2.0 * delta;
    let mut x = -0.5;
    while x < -dense - 1e-12 {
        xs.push(x);
        x += 0.02;
    }
    for k in -80..=80 {
        xs.push(dense * k as f64 / 80.0);
    }
    let mut x = dense + 0.02;
    while x < 0.5 - 1e-12 {
        xs.push(x);
        x += 0.02;
    }
    let mut out = Vec::new();
    for &x in &xs {
        for y in [-0.5 * sigma, 0.0, 0.5 * sigma] {
            out.push(c(x, y));
        }
    }
    for k in 0..50 {
        let y = -0.5 * alpha + alpha * k as f64 / 50.0;
        if y.abs() <= 0.5 * sigma {
            continue;
        }
        for x in [-0.5 * sigma, 0.0, 0.5 * sigma] {
            out.push(c(x, y));
        }
    }
    out
}

/// Points of the cross well away from `Q_eps`, for holomorphy residuals.
pub fn off_support_points(alpha: f64, sigma: f64, delta: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for k in 1..=8 {
        let y = (2.0 * sigma).max(delta) + (0.5 * alpha - delta) * k as f64 / 9.0;
        for s in [-1.0, 1.0] {
            out.push(c(0.25 * sigma * s, y * s));
        }
    }
    for x in [0.2f64, 0.3, 0.45] {
        let x = x.max(2.0 * delta);
        for s in [-1.0, 1.0] {
            out.push(c(x * s, 0.25 * sigma * s));
        }
    }
    out
}

/// Estimate of `C2 = sup |wp_nu(zeta - z) - 1/(zeta - z)|` over `zeta` in
/// the support of `phi` and `z` on a subsample of the cross.
pub fn estimate_c2(params: &KernelParams, cfg: &DbarConfig) -> Result<f64> {
    let (delta, sigma) = (cfg.delta, cfg.sigma());
    let targets: Vec<Complex64> = cross_grid(cfg.alpha, sigma, delta).into_iter().step_by(7).collect();
    let mut zetas = Vec::new();
    for side in [-1.0, 1.0] {
        for a in 0..9 {
            let x = side * (0.5 * delta + delta * a as f64 / 8.0);
            for y in [-0.5 * sigma, 0.0, 0.5 * sigma] {
                zetas.push(c(x, y));
            }
        }
    }
    let rows = par_map(&targets, |z| -> Result<f64> {
        let mut best = 0f64;
        for zeta in &zetas {
            best = best.max(wp_nu_regular(params, zeta - z)?.norm());
        }
        Ok(best)
    });
    let mut best = 0f64;
    for r in rows {
        best = best.max(r?);
    }
    Ok(best)
}

/// Outcome of [`verify_dbar`].
#[derive(Debug, Clone, Serialize)]
pub struct DbarCheck {
    pub alpha: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub sigma: f64,
    pub n_trunc: usize,
    pub quad: [usize; 2],
    pub c1: f64,
    pub c2: f64,
    pub max_phi: f64,
    pub phi_bound: f64,
    /// `sup |f|` over [`cross_grid`].
    pub sup_f: f64,
    pub budget: f64,
    /// Largest `|FD dbar f - phi|` over sampled interior nodes of the lath.
    pub fd_residual: f64,
    /// Largest `|FD dbar f|` at [`off_support_points`].
    pub off_support_residual: f64,
    /// Largest `|f(z + T) - f(z)|` over both periods.
    pub periodic_defect: f64,
    /// Truncation-tail allowance for `periodic_defect`.
    pub periodic_bound: f64,
}

/// Builds `phi` from `g`, evaluates `f` and runs the dbar, holomorphy,
/// periodicity and sup-norm checks.
pub fn verify_dbar<G: Fn(Complex64) -> Complex64 + Sync>(g: &G, cfg: &DbarConfig) -> Result<DbarCheck> {
    let phi = blend_and_phi(g, cfg)?;
    let params = cfg.kernel()?;
    let solver = DbarSolver::new(&phi, params)?;
    let (alpha, delta, sigma) = (cfg.alpha, cfg.delta, cfg.sigma());
    let c2 = match cfg.c2 {
        Some(v) => v,
        None => estimate_c2(&params, cfg)?,
    };

    let grid = cross_grid(alpha, sigma, delta);
    let sup_f = solver.eval_many(&grid)?.iter().fold(0f64, |m, v| m.max(v.norm()));

    // interior lath nodes: about 16 columns, three rows
    let (hx, hy) = phi.cell_size();
    let _ = hx;
    let cols: Vec<usize> = {
        let act = &solver.active;
        let stride = (act.len() / 16).max(1);
        act.iter().copied().step_by(stride).collect()
    };
    let mut nodes = Vec::new();
    for &i in &cols {
        for j in [phi.ny / 4, phi.ny / 2, 3 * phi.ny / 4] {
            nodes.push((i, j));
        }
    }
    let fd_step = hy / 8.0;
    let fd = par_map(&nodes, |&(i, j)| -> Result<f64> {
        Ok((solver.dbar_fd(phi.center(i, j), fd_step)? - phi.value(i, j)).norm())
    });
    let mut fd_residual = 0f64;
    for r in fd {
        fd_residual = fd_residual.max(r?);
    }

    let off = off_support_points(alpha, sigma, delta);
    let mut off_support_residual = 0f64;
    for r in par_map(&off, |z| solver.dbar_fd(*z, 1e-6)) {
        off_support_residual = off_support_residual.max(r?.norm());
    }

    let mut pairs = Vec::new();
    for s in [-0.25, 0.0, 0.25] {
        pairs.push((c(-0.5, s * sigma), Period::Real));
        pairs.push((c(s * sigma, -0.5 * alpha), Period::Imaginary));
    }
    let mut periodic_defect = 0f64;
    let mut periodic_bound = 0f64;
    let l1 = phi.l1_norm();
    for (z, per) in pairs {
        let t = match per {
            Period::Real => c(1.0, 0.0),
            Period::Imaginary => c(0.0, alpha),
        };
        periodic_defect = periodic_defect.max((solver.eval(z + t)? - solver.eval(z)?).norm());
        // |zeta - z| is at most |z| + 3 delta/2 + sigma/2
        let u = c(z.norm() + 1.5 * delta + 0.5 * sigma, 0.0);
        periodic_bound = periodic_bound.max(l1 / PI * wp_nu_tail_bound(&params, u, per));
    }

    Ok(DbarCheck {
        alpha,
        delta,
        epsilon: cfg.epsilon,
        sigma,
        n_trunc: cfg.n_trunc,
        quad: [cfg.quad_nx, cfg.quad_ny],
        c1: phi.c1,
        c2,
        max_phi: phi.max_phi,
        phi_bound: phi.phi_bound(),
        sup_f,
        budget: budget(phi.c1, c2, cfg.epsilon, delta),
        fd_residual,
        off_support_residual,
        periodic_defect,
        periodic_bound,
    })
}

/// `sup |f|` over [`cross_grid`] and the budget, without the other checks.
pub fn sup_f_and_budget<G: Fn(Complex64) -> Complex64 + Sync>(g: &G, cfg: &DbarConfig) -> Result<(f64, f64)> {
    let phi = blend_and_phi(g, cfg)?;
    let params = cfg.kernel()?;
    let solver = DbarSolver::new(&phi, params)?;
    let c2 = match cfg.c2 {
        Some(v) => v,
        None => estimate_c2(&params, cfg)?,
    };
    let grid = cross_grid(cfg.alpha, cfg.sigma(), cfg.delta);
    let sup = solver.eval_many(&grid)?.iter().fold(0f64, |m, v| m.max(v.norm()));
    Ok((sup, budget(phi.c1, c2, cfg.epsilon, cfg.delta)))
}

/// Settings of [`demo_construct`] besides `alpha`, `sigma` and the target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoConfig {
    pub delta: f64,
    pub rho: f64,
    pub n_trunc: usize,
    pub quad_nx: usize,
    pub quad_ny: usize,
    pub loop_samples: usize,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            delta: 0.1,
            rho: 0.5,
            n_trunc: 50,
            quad_nx: 400,
            quad_ny: 400,
            loop_samples: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub alpha: f64,
    pub sigma: f64,
    pub target: String,
    pub sup_f: f64,
    pub clearance: f64,
    pub decoded: String,
    pub dbar_residual: f64,
}

#[derive(Debug, Clone)]
pub struct DemoOutput {
    pub report: DemoReport,
    pub decoded: FreeWord,
    /// `(z, f(z))` over the cross grid followed by the skeleton circle.
    pub samples: Vec<(Complex64, Complex64)>,
    /// `h = g1 - f` along `Re z = 0`, based at `0`.
    pub h_loop: PlaneLoop,
}

/// The map `c - s rho exp(2 pi n z / alpha)` with `c = -1, s = -1` for
/// `a1` and `c = 1, s = 1` for `a2`: on `Re z = 0` it winds `n` times around
/// `c` and passes through `c ∓ rho` at `z = 0`.
pub fn demo_map(alpha: f64, rho: f64, gen: u32, n: i64) -> impl Fn(Complex64) -> Complex64 + Sync {
    let (center, sign) = if gen == 1 { (-1.0, -1.0) } else { (1.0, 1.0) };
    let k = 2.0 * PI * n as f64 / alpha;
    move |z: Complex64| c(center, 0.0) - (z * k).exp() * (sign * rho)
}

/// Builds `h = g1 - f` on `T^{alpha,sigma}` for a target `a1^n` or `a2^n`
/// and decodes its monodromy along the vertical skeleton circle.
pub fn demo_construct(alpha: f64, sigma: f64, target: &FreeWord, dc: &DemoConfig) -> Result<DemoOutput> {
    let (gen, n) = match target.terms() {
        [t] => (t.gen, t.exp),
        [] => return Err(Error::InvalidArgument("target must be a1^n or a2^n with n != 0".into())),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "target must be a single generator power, got {target}"
            )))
        }
    };
    if !(dc.rho > 0.0 && dc.rho < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rho must lie in (0, 1), got {}",
            dc.rho
        )));
    }
    if !(sigma > 0.0) || dc.loop_samples < 8 {
        return Err(Error::InvalidArgument(
            "sigma must be positive and the loop needs >= 8 samples".into(),
        ));
    }
    let cfg = DbarConfig {
        alpha,
        delta: dc.delta,
        epsilon: sigma / dc.delta,
        n_trunc: dc.n_trunc,
        quad_nx: dc.quad_nx,
        quad_ny: dc.quad_ny,
        c1: None,
        c2: None,
    };
    cfg.validate()?;
    let g = demo_map(alpha, dc.rho, gen, n);
    let phi = blend_and_phi(&g, &cfg)?;
    let solver = DbarSolver::new(&phi, cfg.kernel()?)?;

    let grid = cross_grid(alpha, sigma, dc.delta);
    let m = dc.loop_samples;
    let circle: Vec<Complex64> = (0..=m).map(|k| c(0.0, alpha * k as f64 / m as f64)).collect();
    let mut points = grid;
    points.extend_from_slice(&circle);
    let f = solver.eval_many(&points)?;

    let sup_f = f.iter().fold(0f64, |a, v| a.max(v.norm()));
    let clearance = points.iter().fold(f64::INFINITY, |a, z| {
        let w = phi.g1(&g, *z);
        a.min((w - 1.0).norm()).min((w + 1.0).norm())
    });
    if sup_f >= clearance {
        return Err(Error::EpsilonTooLarge { sup_f, clearance });
    }

    let base = points.len() - circle.len();
    let mut h: Vec<Complex64> = circle
        .iter()
        .zip(&f[base..])
        .map(|(z, fz)| phi.g1(&g, *z) - fz)
        .collect();
    // the two ends differ by the periodicity defect of the truncated kernel
    h[m] = h[0];
    let h_loop = PlaneLoop::from_samples(h)?;
    let decoded = decode_word(&h_loop)?;

    let off = off_support_points(alpha, sigma, dc.delta);
    let step = 1e-6;
    let mut dbar_residual = 0f64;
    for r in par_map(&off, |z| -> Result<Complex64> {
        let hh = |d: Complex64| -> Result<Complex64> { Ok(phi.g1(&g, z + d) - solver.eval_anchored(z + d, *z)?) };
        let hx = (hh(c(step, 0.0))? - hh(c(-step, 0.0))?) / (2.0 * step);
        let hy = (hh(c(0.0, step))? - hh(c(0.0, -step))?) / (2.0 * step);
        Ok((hx + Complex64::i() * hy) * 0.5)
    }) {
        dbar_residual = dbar_residual.max(r?.norm());
    }

    let report = DemoReport {
        alpha,
        sigma,
        target: target.to_string(),
        sup_f,
        clearance,
        decoded: decoded.to_string(),
        dbar_residual,
    };
    Ok(DemoOutput {
        report,
        decoded,
        samples: points.into_iter().zip(f).collect(),
        h_loop,
    })
}

/// CSV with header `re_z,im_z,re_f,im_f`.
pub fn write_samples_csv<W: Write>(out: W, samples: &[(Complex64, Complex64)]) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv write: {e}"));
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["re_z", "im_z", "re_f", "im_f"]).map_err(io)?;
    for (z, f) in samples {
        wr.write_record([z.re, z.im, f.re, f.im].iter().map(|x| format!("{x:e}")))
            .map_err(io)?;
    }
    wr.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv write: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        c(re, im)
    }

    #[test]
    fn chi_values() {
        let d = 0.1;
        assert_eq!(chi(d, 0.0).unwrap(), 1.0);
        assert!(chi(d, 1.5 * d).unwrap().abs() < 1e-15);
        assert!(chi(d, -1.5 * d).unwrap().abs() < 1e-15);
        assert!((chi(d, -d).unwrap() - chi0(0.5)).abs() < 1e-15);
        assert!((chi0(0.5) - 0.5).abs() < 1e-15);
        assert!(chi(d, 0.2).is_err());
        assert!(chi(0.0, 0.0).is_err());
    }

    #[test]
    fn chi0_shape() {
        // slope bound, monotone, C^2 at the junctions
        let mut prev = 0.0;
        for k in 0..=3000 {
            let t = k as f64 / 3000.0;
            assert!(chi0_prime(t) <= 1.5 + 1e-15);
            assert!(chi0(t) >= prev - 1e-15);
            prev = chi0(t);
        }
        let h = 1e-6;
        for t in [RAMP, 1.0 - RAMP] {
            assert!((chi0(t + h) - chi0(t - h)) / (2.0 * h) - chi0_prime(t) < 1e-8);
            let left = (chi0_prime(t) - chi0_prime(t - h)) / h;
            let right = (chi0_prime(t + h) - chi0_prime(t)) / h;
            assert!((left - right).abs() < 1e-4, "{t} {left} {right}");
        }
        // derivative matches the antiderivative
        for k in 1..100 {
            let t = k as f64 / 100.0;
            let fd = (chi0(t + h) - chi0(t - h)) / (2.0 * h);
            assert!((fd - chi0_prime(t)).abs() < 1e-7);
        }
        assert!(chi0_prime(0.0) == 0.0 && chi0_prime(1.0) == 0.0);
    }

    #[test]
    fn wp_even_and_principal_part() {
        let p = KernelParams::new(1.0, 60).unwrap();
        for s in [z(0.13, 0.27), z(-0.31, 0.05), z(0.4, -0.35)] {
            let (a, b) = (wp(&p, s).unwrap(), wp(&p, -s).unwrap());
            assert!((a - b).norm() < 1e-8);
        }
        let r3 = (wp(&p, z(1e-3, 0.0)).unwrap() - 1e6).norm();
        let r4 = (wp(&p, z(0.0, 1e-4)).unwrap() + 1e8).norm();
        assert!(r3 < 1.0 && r4 < 1.0, "{r3} {r4}");
    }

    #[test]
    fn periodicity_within_tail_bounds() {
        for alpha in [1.0, 2.0] {
            let mut prev = f64::INFINITY;
            for n in [30, 60] {
                let p = KernelParams::new(alpha, n).unwrap();
                let mut worst = 0f64;
                for a in -3..=3 {
                    for b in -3..=3 {
                        let s = z(0.11 * a as f64 + 0.02, 0.1 * alpha * b as f64 + 0.03);
                        for (per, t) in [(Period::Real, z(1.0, 0.0)), (Period::Imaginary, z(0.0, alpha))] {
                            let d = (wp_nu(&p, s + t).unwrap() - wp_nu(&p, s).unwrap()).norm();
                            assert!(d <= wp_nu_tail_bound(&p, s, per), "{alpha} {n} {s}");
                            let e = (wp(&p, s + t).unwrap() - wp(&p, s).unwrap()).norm();
                            assert!(e <= wp_tail_bound(&p, s, per), "{alpha} {n} {s}");
                            worst = worst.max(d);
                        }
                    }
                }
                assert!(worst < prev);
                prev = worst;
            }
        }
    }

    #[test]
    fn pole_proximity() {
        let p = KernelParams::new(1.0, 10).unwrap();
        match wp(&p, z(1.0, 1e-8)) {
            Err(Error::PoleProximity { pole_re, pole_im, .. }) => {
                assert_eq!((pole_re, pole_im), (1.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
        assert!(wp_nu(&p, z(0.5, 0.5 + 1e-9)).is_err());
        assert!(wp_nu_regular(&p, z(0.0, 0.0)).is_ok());
        assert!(KernelParams::with_nu(1.0, z(1.0, 1.0), 5).is_err());
        assert!(KernelParams::new(0.5, 5).is_err());
    }

    #[test]
    fn rectangle_integral() {
        // far cell against a fine midpoint sum; cell holding the pole
        // against a polar-free refinement
        let brute = |u1: f64, u2: f64, v1: f64, v2: f64, k: usize| {
            let (du, dv) = ((u2 - u1) / k as f64, (v2 - v1) / k as f64);
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..k {
                for b in 0..k {
                    s += z(u1 + (a as f64 + 0.5) * du, v1 + (b as f64 + 0.5) * dv).inv();
                }
            }
            s * du * dv
        };
        let e = rect_integral(0.3, 0.5, -0.1, 0.2);
        assert!((e - brute(0.3, 0.5, -0.1, 0.2, 400)).norm() < 1e-7);
        // symmetric cell about the pole: integral vanishes
        assert!(rect_integral(-1.0, 1.0, -1.0, 1.0).norm() < 1e-14);
        // off-centre cell holding the pole, split into four pole-corner pieces
        let whole = rect_integral(-0.2, 0.7, -0.4, 0.1);
        let parts = rect_integral(-0.2, 0.0, -0.4, 0.0)
            + rect_integral(0.0, 0.7, -0.4, 0.0)
            + rect_integral(-0.2, 0.0, 0.0, 0.1)
            + rect_integral(0.0, 0.7, 0.0, 0.1);
        assert!((whole - parts).norm() < 1e-14);
        let fine = brute(-0.2, 0.7, -0.4, 0.1, 2001);
        assert!((whole - fine).norm() < 2e-3, "{whole} {fine}");
    }

    fn small_cfg() -> DbarConfig {
        DbarConfig {
            epsilon: 0.1,
            n_trunc: 12,
            quad_nx: 60,
            quad_ny: 16,
            ..DbarConfig::default()
        }
    }

    #[test]
    fn phi_constant_and_identity() {
        let cfg = small_cfg();
        let k = blend_and_phi(&|_z| z(0.3, -0.2), &cfg).unwrap();
        assert!(k.is_zero());
        assert_eq!(k.g1(&|_z| z(0.3, -0.2), z(0.07, 0.001)), z(0.3, -0.2));
        let f = solve_dbar(&k, &cfg.kernel().unwrap(), &[z(0.1, 0.0), z(0.0, 0.3)]).unwrap();
        assert!(f.iter().all(|v| v.norm() == 0.0));

        let id = blend_and_phi(&|w: Complex64| w, &cfg).unwrap();
        let sup_g = (0.15f64).hypot(0.5);
        assert!(id.max_phi <= 1.5 * sup_g / cfg.delta);
        for i in 0..id.nx() {
            if id.center(i, 0).re.abs() < 0.5 * cfg.delta {
                assert!((0..id.ny()).all(|j| id.value(i, j).norm() == 0.0));
            }
        }
    }

    #[test]
    fn not_analytic_rejected() {
        let cfg = small_cfg();
        let r = blend_and_phi(&|w: Complex64| w.conj(), &cfg);
        assert!(matches!(r, Err(Error::NotAnalytic(_))));
        let coarse = DbarConfig {
            quad_nx: 10,
            ..small_cfg()
        };
        assert!(matches!(
            blend_and_phi(&|w: Complex64| w, &coarse),
            Err(Error::Unresolved(_))
        ));
    }

    #[test]
    fn coarse_dbar_and_periodicity() {
        let cfg = small_cfg();
        let g = demo_map(1.0, 0.5, 1, 2);
        let phi = blend_and_phi(&g, &cfg).unwrap();
        let s = DbarSolver::new(&phi, cfg.kernel().unwrap()).unwrap();
        let (_, hy) = phi.cell_size();
        for (i, j) in [(5, 8), (12, 3), (50, 10)] {
            let r = (s.dbar_fd(phi.center(i, j), hy / 8.0).unwrap() - phi.value(i, j)).norm();
            assert!(r < 1e-3, "{i} {j} {r}");
        }
        // holomorphic off the support
        for w in off_support_points(1.0, cfg.sigma(), cfg.delta) {
            assert!(s.dbar_fd(w, 1e-6).unwrap().norm() < 1e-6);
        }
        let a = s.eval(z(-0.5, 0.001)).unwrap();
        let b = s.eval(z(0.5, 0.001)).unwrap();
        let bound = phi.l1_norm() / PI * wp_nu_tail_bound(&s.params, z(0.66, 0.0), Period::Real);
        assert!((a - b).norm() <= bound, "{} {bound}", (a - b).norm());
    }

    #[test]
    fn demo_rejects_identity() {
        let dc = DemoConfig::default();
        assert!(demo_construct(1.0, 0.01, &FreeWord::identity(), &dc).is_err());
    }

    #[test]
    fn budget_shape() {
        let b = budget(1.0, 1.0, 0.01, 0.1);
        let expect = (6.0 * 0.001 + 3.0 * (2.0 * 2f64.sqrt() * PI * 0.001 + 0.004 * 300f64.ln()) / 0.1) / PI;
        assert!((b - expect).abs() < 1e-15);
    }
}
