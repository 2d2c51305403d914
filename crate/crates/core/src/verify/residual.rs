//! Residuals of the boundary value problem.

use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::geometry::{first_positive_zero, trace_u_nodal_lines, SloshingDomain};
use crate::kernel::{Evaluator, Family, Point2};
use crate::math::{hypot, PI};
use crate::quad::{integrate, Tolerance};
use crate::{Error, Result};

/// Anything that can produce `(u, v)` at points of the closed lower half-plane.
/// The checks below only see the field through this trait, so test fixtures
/// can wrap an evaluator and perturb it.
pub trait FieldSampler {
    fn nu(&self) -> f64;
    fn uv(&self, p: Point2) -> Result<(f64, f64)>;
}

impl FieldSampler for Evaluator {
    fn nu(&self) -> f64 {
        Evaluator::nu(self)
    }

    fn uv(&self, p: Point2) -> Result<(f64, f64)> {
        let f = self.value(p)?;
        Ok((f.re, f.im))
    }
}

impl<S: FieldSampler + ?Sized> FieldSampler for &S {
    fn nu(&self) -> f64 {
        (**self).nu()
    }

    fn uv(&self, p: Point2) -> Result<(f64, f64)> {
        (**self).uv(p)
    }
}

/// A sampler plus an additive perturbation `delta(p) = (du, dv)`. Used as a
/// negative control: a perturbed harmonic pair should fail the checks.
pub struct Perturbed<S, F> {
    pub inner: S,
    pub delta: F,
}

impl<S: FieldSampler, F: Fn(Point2) -> (f64, f64)> FieldSampler for Perturbed<S, F> {
    fn nu(&self) -> f64 {
        self.inner.nu()
    }

    fn uv(&self, p: Point2) -> Result<(f64, f64)> {
        let (u, v) = self.inner.uv(p)?;
        let (du, dv) = (self.delta)(p);
        Ok((u + du, v + dv))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub check_name: String,
    pub max_residual: f64,
    pub sample_count: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(check_name: impl Into<String>, max_residual: f64, sample_count: usize, tolerance: f64) -> Self {
        ResidualReport {
            check_name: check_name.into(),
            max_residual,
            sample_count,
            tolerance,
            // NaN never passes
            pass: max_residual <= tolerance,
        }
    }
}

/// Uniform `nx x ny` grid over `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        let step = |a: f64, b: f64, n: usize, i: usize| {
            if n <= 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        for i in 0..self.nx {
            for j in 0..self.ny {
                out.push(Point2::new(
                    step(self.x0, self.x1, self.nx, i),
                    step(self.y0, self.y1, self.ny, j),
                ));
            }
        }
        out
    }
}

pub const LAPLACE_STEP: f64 = 1e-3;
pub const LAPLACE_REL_TOL: f64 = 1e-4;

/// Five-point Laplacians of `u` and `v` with step `1e-3` at `points`;
/// tolerance `1e-4 * max |field|` over the points. Returns `[u, v]` reports.
pub fn residual_laplace_at<S: FieldSampler>(s: &S, points: &[Point2]) -> [ResidualReport; 2] {
    let h = LAPLACE_STEP;
    let mut res = [0.0f64; 2];
    let mut maxf = [0.0f64; 2];
    let mut failed = false;
    for &p in points {
        let eval = |dx: f64, dy: f64| s.uv(Point2::new(p.x + dx, p.y + dy));
        let r = (|| -> Result<()> {
            let c = eval(0.0, 0.0)?;
            let e = eval(h, 0.0)?;
            let w = eval(-h, 0.0)?;
            let n = eval(0.0, h)?;
            let so = eval(0.0, -h)?;
            let lu = (e.0 + w.0 + n.0 + so.0 - 4.0 * c.0) / (h * h);
            let lv = (e.1 + w.1 + n.1 + so.1 - 4.0 * c.1) / (h * h);
            res[0] = res[0].max(lu.abs());
            res[1] = res[1].max(lv.abs());
            maxf[0] = maxf[0].max(c.0.abs());
            maxf[1] = maxf[1].max(c.1.abs());
            Ok(())
        })();
        failed |= r.is_err();
    }
    let fail_value = if failed { f64::NAN } else { 0.0 };
    [
        ResidualReport::new(
            "laplace_u",
            res[0] + fail_value,
            points.len(),
            LAPLACE_REL_TOL * maxf[0],
        ),
        ResidualReport::new(
            "laplace_v",
            res[1] + fail_value,
            points.len(),
            LAPLACE_REL_TOL * maxf[1],
        ),
    ]
}

pub fn residual_laplace<S: FieldSampler>(s: &S, grid: &GridSpec) -> [ResidualReport; 2] {
    residual_laplace_at(s, &grid.points())
}

fn dist_to_boundary(boundary: &[Point2], p: Point2) -> f64 {
    let mut best = f64::INFINITY;
    for w in boundary.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let l2 = dx * dx + dy * dy;
        let t = if l2 > 0.0 {
            (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        best = best.min(hypot(p.x - a.x - t * dx, p.y - a.y - t * dy));
    }
    best
}

/// Points of an `n x n` grid over the domain's bounding box that lie inside
/// the domain at least `margin` away from its boundary.
pub fn domain_laplace_points(d: &SloshingDomain, n: usize, margin: f64) -> Vec<Point2> {
    let (x0, x1, y0, _) = d.bounds();
    let boundary = d.boundary();
    GridSpec {
        x0,
        x1,
        y0,
        y1: 0.0,
        nx: n,
        ny: n,
    }
    .points()
    .into_iter()
    .filter(|&p| d.contains(p) && dist_to_boundary(&boundary, p) > margin)
    .collect()
}

/// `(lim_{h -> 0} (u(x, 0) - u(x, -h)) / h)` from four one-sided quotients,
/// Richardson-extrapolated.
fn one_sided_uy<S: FieldSampler>(s: &S, x: f64) -> Result<(f64, f64)> {
    const STEPS: [f64; 4] = [1e-3, 5e-4, 2.5e-4, 1.25e-4];
    let u0 = s.uv(Point2::new(x, 0.0))?.0;
    let mut q = [0.0; 4];
    for (i, &h) in STEPS.iter().enumerate() {
        q[i] = (u0 - s.uv(Point2::new(x, -h))?.0) / h;
    }
    for m in 1..4 {
        for j in 0..4 - m {
            q[j] = (q[j + 1] * STEPS[j] - q[j] * STEPS[j + m]) / (STEPS[j] - STEPS[j + m]);
        }
    }
    Ok((q[0], u0))
}

/// `max |u_y - nu u| / (1 + |u|)` on `y = 0` at `xs`; tolerance `1e-4`.
pub fn residual_free_surface<S: FieldSampler>(s: &S, xs: &[f64]) -> ResidualReport {
    let nu = s.nu();
    let mut worst: f64 = 0.0;
    for &x in xs {
        match one_sided_uy(s, x) {
            Ok((uy, u)) => worst = worst.max((uy - nu * u).abs() / (1.0 + u.abs())),
            Err(_) => worst = f64::NAN,
        }
        if worst.is_nan() {
            break;
        }
    }
    ResidualReport::new("free_surface", worst, xs.len(), 1e-4)
}

/// `n` equispaced points strictly inside `F`, at least `0.05` from `+-pi`.
pub fn free_surface_points(d: &SloshingDomain, n: usize) -> Vec<f64> {
    let (a, b) = d.free_surface;
    (1..=n)
        .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
        .filter(|x| PI - x.abs() > 0.05)
        .collect()
}

/// `max |v - level|` over the bottom vertices; tolerance `1e-8`.
pub fn residual_bottom<S: FieldSampler>(s: &S, d: &SloshingDomain) -> ResidualReport {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for p in d.bottom_vertices() {
        n += 1;
        match s.uv(*p) {
            Ok((_, v)) => worst = worst.max((v - d.level).abs()),
            Err(_) => worst = f64::NAN,
        }
        if worst.is_nan() {
            break;
        }
    }
    ResidualReport::new("bottom", worst, n, 1e-8)
}

/// `|int_F u(x, 0) dx|`; tolerance `1e-6 |F| max_F |u|`.
pub fn check_orthogonality<S: FieldSampler>(s: &S, d: &SloshingDomain) -> ResidualReport {
    let (a, b) = d.free_surface;
    let failed = Cell::new(false);
    let u = |x: f64| match s.uv(Point2::new(x, 0.0)) {
        Ok((u, _)) => u,
        Err(_) => {
            failed.set(true);
            0.0
        }
    };
    let breaks: Vec<f64> = (0..=16).map(|i| a + (b - a) * i as f64 / 16.0).collect();
    let r = integrate(u, &breaks, Tolerance::new(1e-13, 1e-12));
    let mut umax: f64 = 0.0;
    for i in 0..=200 {
        umax = umax.max(u(a + (b - a) * i as f64 / 200.0).abs());
    }
    let residual = if failed.get() { f64::NAN } else { r.value.abs() };
    ResidualReport::new("orthogonality", residual, r.evaluations, 1e-6 * (b - a) * umax)
}

const HALTON_BASES: (u32, u32) = (2, 3);

fn halton(mut i: u32, base: u32) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `|u_x - v_y| + |u_y + v_x|` by central differences (step `1e-5`) at `count`
/// quasi-random points inside the domain; tolerance `1e-6`.
pub fn cauchy_riemann_in_domain<S: FieldSampler>(s: &S, d: &SloshingDomain, count: usize) -> ResidualReport {
    let (x0, x1, y0, _) = d.bounds();
    let boundary = d.boundary();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let mut i = 1u32;
    while n < count && i < 100_000 {
        let p = Point2::new(
            x0 + (x1 - x0) * halton(i, HALTON_BASES.0),
            y0 + (0.0 - y0) * halton(i, HALTON_BASES.1),
        );
        i += 1;
        if !d.contains(p) || dist_to_boundary(&boundary, p) < 1e-2 {
            continue;
        }
        n += 1;
        let r = (|| -> Result<f64> {
            let e = s.uv(Point2::new(p.x + h, p.y))?;
            let w = s.uv(Point2::new(p.x - h, p.y))?;
            let nn = s.uv(Point2::new(p.x, p.y + h))?;
            let so = s.uv(Point2::new(p.x, p.y - h))?;
            let (ux, vx) = ((e.0 - w.0) / (2.0 * h), (e.1 - w.1) / (2.0 * h));
            let (uy, vy) = ((nn.0 - so.0) / (2.0 * h), (nn.1 - so.1) / (2.0 * h));
            Ok((ux - vy).abs() + (uy + vx).abs())
        })();
        worst = match r {
            Ok(r) => worst.max(r),
            Err(_) => f64::NAN,
        };
        if worst.is_nan() {
            break;
        }
    }
    ResidualReport::new("cauchy_riemann", worst, n, 1e-6)
}

/// Outcome of the nodal-structure check of one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalStructure {
    /// Nodal lines of `u` starting on `F`.
    pub u_nodal_lines: usize,
    /// Sample points inside the domain where `v - level` has the minority sign.
    pub sign_violations: usize,
    pub interior_samples: usize,
    /// Sign changes of `v - level` along `F`.
    pub trace_sign_changes: usize,
    /// Interior extrema of `v(x, 0)` on `F`.
    pub trace_extrema: usize,
    pub detail: String,
}

impl NodalStructure {
    pub fn violations(&self) -> usize {
        self.u_nodal_lines.abs_diff(1) + self.sign_violations + self.trace_sign_changes + self.trace_extrema.abs_diff(1)
    }

    pub fn report(&self) -> ResidualReport {
        ResidualReport::new("nodal_structure", self.violations() as f64, self.interior_samples, 0.0)
    }
}

/// One nodal line of `u`; `v - level` of one sign inside; exactly one interior
/// extremum and no sign change of `v(x, 0) - level` on `F`.
pub fn nodal_structure_check(ev: &Evaluator, d: &SloshingDomain) -> Result<NodalStructure> {
    let lines = trace_u_nodal_lines(ev, d)?;
    let mut detail = String::new();
    for l in &lines {
        detail.push_str(&alloc::format!(
            "u-line ({:.6}, 0) -> ({:.6}, {:.6}) {:?}; ",
            l.first().x,
            l.last().x,
            l.last().y,
            l.ends[1]
        ));
    }

    let pts = domain_laplace_points(d, 40, 1e-2);
    let (mut pos, mut neg) = (0usize, 0usize);
    for &p in &pts {
        let w = ev.v(p)? - d.level;
        if w > 1e-10 {
            pos += 1;
        } else if w < -1e-10 {
            neg += 1;
        }
    }

    let (a, b) = d.free_surface;
    let n = 400;
    let mut changes = 0;
    let mut prev_sign: f64 = 0.0;
    let mut prev_slope: f64 = 0.0;
    let mut extrema = 0;
    for i in 1..n {
        let x = a + (b - a) * i as f64 / n as f64;
        let j = ev.trace_jet(x, 1)?;
        let w = j.v() - d.level;
        let s = if w > 0.0 { 1.0 } else { -1.0 };
        if prev_sign != 0.0 && s != prev_sign {
            changes += 1;
        }
        prev_sign = s;
        let slope = j.grad_v().dx;
        if prev_slope != 0.0 && slope != 0.0 && slope.signum() != prev_slope.signum() {
            extrema += 1;
        }
        if slope != 0.0 {
            prev_slope = slope;
        }
    }
    Ok(NodalStructure {
        u_nodal_lines: lines.len(),
        sign_violations: pos.min(neg),
        interior_samples: pos + neg,
        trace_sign_changes: changes,
        trace_extrema: extrema,
        detail,
    })
}

/// A computed quantity and its closed-form counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Identity {
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl Identity {
    pub fn diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// `v_y(x_0, 0)` against `2 x_0 / (pi^2 - x_0^2)` (sum family).
pub fn vy_identity(ev: &Evaluator) -> Result<Identity> {
    if ev.family() != Family::Sum {
        return Err(Error::WrongFamily { expected: "sum" });
    }
    let x0 = first_positive_zero(ev)?;
    let vy = ev.trace_jet(x0, 1)?.grad_v().dy;
    Ok(Identity {
        at: x0,
        lhs: vy,
        rhs: 2.0 * x0 / (PI * PI - x0 * x0),
    })
}

/// Bottom slope at `x_0`: `-v_x / v_y` against `nu (pi^2 - x_0^2) / (2 x_0) u(x_0, 0)`,
/// which for `nu = 3/2` reads `3 (pi^2 - x_0^2) / (4 x_0) u(x_0, 0)`.
pub fn slope_identity(ev: &Evaluator) -> Result<Identity> {
    if ev.family() != Family::Sum {
        return Err(Error::WrongFamily { expected: "sum" });
    }
    let x0 = first_positive_zero(ev)?;
    let j = ev.trace_jet(x0, 1)?;
    let g = j.grad_v();
    Ok(Identity {
        at: x0,
        lhs: -g.dx / g.dy,
        rhs: ev.nu() * (PI * PI - x0 * x0) / (2.0 * x0) * j.u(),
    })
}

impl core::fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{:<16} {:>12.3e} {:>12.3e} {:>6} {}",
            self.check_name,
            self.max_residual,
            self.tolerance,
            self.sample_count,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}
