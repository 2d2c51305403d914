//! Predictor-corrector continuation of level lines of `u` or `v`.

use alloc::vec::Vec;

use crate::kernel::{Evaluator, Gradient2, Jet, Point2, SINGULAR_GUARD};
use crate::math::{atan2, hypot, C64, PI};
use crate::roots::{brent_with_values, scan_sign_changes};
use crate::{Error, Result};

/// Residual accepted for a start point and guaranteed for every vertex.
pub const LEVEL_TOL: f64 = 1e-8;
const CORRECTOR_TOL: f64 = 1e-12;
const MAX_CORRECTOR_ITERS: usize = 12;
const MAX_TURN: f64 = 0.3;
/// Stop this close to a stagnation target and snap onto it.
const TARGET_RADIUS: f64 = 0.045;
/// Stop this close to `(+-pi, 0)`.
const SINGULAR_RADIUS: f64 = 1e-3;
const SURFACE_EPS: f64 = 1e-6;
const MIN_SPACING: f64 = 1e-4;
const MAX_VERTICES: usize = 200_000;

/// Which harmonic function a curve is a level line of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelField {
    /// Stream function; its level lines are streamlines and candidate bottoms.
    V,
    /// Velocity potential; its zero set is the nodal line.
    U,
}

impl LevelField {
    pub fn value(self, jet: &Jet) -> f64 {
        match self {
            LevelField::V => jet.v(),
            LevelField::U => jet.u(),
        }
    }

    pub fn gradient(self, jet: &Jet) -> Gradient2 {
        match self {
            LevelField::V => jet.grad_v(),
            LevelField::U => jet.grad_u(),
        }
    }
}

/// How a curve ends (or starts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndKind {
    OnFreeSurface,
    OnYAxis,
    AtStagnation,
    /// On a level line of `v` other than the y-axis (nodal lines of `u`).
    OnBottom,
    AtSingularity,
    /// Arc-length budget exhausted under [`BudgetPolicy::Truncate`].
    Truncated,
    /// A start point given by the caller that is none of the above.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveSource {
    Traced,
    /// A straight piece of the y-axis, where `v = 0` identically (sum family).
    Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelCurve {
    pub field: LevelField,
    pub level: f64,
    pub vertices: Vec<Point2>,
    /// Largest `|field - level|` over the vertices.
    pub max_residual: f64,
    pub ends: [EndKind; 2],
    pub source: CurveSource,
}

impl LevelCurve {
    pub fn first(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn last(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    pub fn reversed(&self) -> LevelCurve {
        let mut c = self.clone();
        c.vertices.reverse();
        c.ends.swap(0, 1);
        c
    }

    pub fn mirrored(&self, level: f64) -> LevelCurve {
        let mut c = self.clone();
        for p in c.vertices.iter_mut() {
            p.x = -p.x;
        }
        c.level = level;
        c
    }

    /// Straight y-axis piece from `(0, y_from)` to `(0, y_to)` sampled at
    /// spacing at most `h`.
    pub fn axis_segment(y_from: f64, y_to: f64, h: f64, ends: [EndKind; 2]) -> LevelCurve {
        let n = libm::ceil((y_to - y_from).abs() / h).max(1.0) as usize;
        let vertices = (0..=n)
            .map(|i| {
                let y = if i == n {
                    y_to
                } else {
                    y_from + (y_to - y_from) * i as f64 / n as f64
                };
                Point2::new(0.0, y)
            })
            .collect();
        LevelCurve {
            field: LevelField::V,
            level: 0.0,
            vertices,
            max_residual: 0.0,
            ends,
            source: CurveSource::Axis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetPolicy {
    Error,
    Truncate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions {
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_length: f64,
    pub budget: BudgetPolicy,
    /// Stop on a strict crossing of `x = 0`.
    pub stop_at_y_axis: bool,
    /// Stagnation points of matching level that end the curve.
    pub targets: Vec<Point2>,
    /// Stop where `v` crosses this level (used when tracing `u`).
    pub wall: Option<f64>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            h_init: 1e-2,
            h_min: 1e-4,
            h_max: 4.9e-2,
            max_length: 40.0,
            budget: BudgetPolicy::Error,
            stop_at_y_axis: false,
            targets: Vec::new(),
            wall: None,
        }
    }
}

enum Corrected {
    Point(Point2, Jet, usize),
    Above,
    Failed,
}

struct Tracer<'a> {
    ev: &'a Evaluator,
    field: LevelField,
    level: f64,
    opts: &'a TraceOptions,
}

impl Tracer<'_> {
    fn jet(&self, p: Point2) -> Result<Jet> {
        self.ev.jet(p, 1)
    }

    fn residual(&self, jet: &Jet) -> f64 {
        (self.field.value(jet) - self.level).abs()
    }

    fn tangent(&self, jet: &Jet, dir: (f64, f64)) -> Option<(f64, f64)> {
        let g = self.field.gradient(jet);
        let n = g.norm();
        if !(n > 0.0) {
            return None;
        }
        let (tx, ty) = (-g.dy / n, g.dx / n);
        Some(if tx * dir.0 + ty * dir.1 < 0.0 {
            (-tx, -ty)
        } else {
            (tx, ty)
        })
    }

    fn correct(&self, mut q: Point2) -> Result<Corrected> {
        for it in 0..MAX_CORRECTOR_ITERS {
            if q.y > 0.0 {
                return Ok(Corrected::Above);
            }
            let jet = match self.jet(q) {
                Ok(j) => j,
                Err(Error::SingularPoint { .. }) | Err(Error::OutOfRange { .. }) => return Ok(Corrected::Failed),
                Err(e) => return Err(e),
            };
            let r = self.field.value(&jet) - self.level;
            let g = self.field.gradient(&jet);
            let g2 = g.dx * g.dx + g.dy * g.dy;
            if r.abs() <= CORRECTOR_TOL * (1.0 + self.level.abs()) {
                return Ok(Corrected::Point(q, jet, it));
            }
            if !(g2 > 0.0) {
                return Ok(Corrected::Failed);
            }
            q = Point2::new(q.x - r * g.dx / g2, q.y - r * g.dy / g2);
        }
        Ok(Corrected::Failed)
    }

    fn trace_on_surface(&self, x: f64) -> Result<f64> {
        let j = self.ev.trace_jet(x, 0)?;
        Ok(self.field.value(&j) - self.level)
    }

    /// Root of the surface trace near where the curve leaves through `y = 0`.
    fn surface_hit(&self, p: Point2, t: (f64, f64), h: f64) -> Result<Point2> {
        let guess = if t.1 > 1e-3 {
            p.x + t.0 * (-p.y / t.1)
        } else {
            p.x + t.0 * h
        };
        let limit = PI - 10.0 * SINGULAR_GUARD;
        let mut delta = (2.0 * h).max(1e-3);
        for _ in 0..10 {
            let a = (guess - delta).max(-limit);
            let b = (guess + delta).min(limit);
            let cells = scan_sign_changes(|x| self.trace_on_surface(x), a, b, 16)?;
            let best = cells.into_iter().min_by(|c1, c2| {
                let d1 = (0.5 * (c1.0 + c1.1) - guess).abs();
                let d2 = (0.5 * (c2.0 + c2.1) - guess).abs();
                d1.total_cmp(&d2)
            });
            if let Some((lo, hi, flo, fhi)) = best {
                let r = brent_with_values(|x| self.trace_on_surface(x), lo, hi, Some((flo, fhi)), 1e-13)?;
                return Ok(Point2::new(r.root, 0.0));
            }
            delta *= 2.0;
        }
        Err(Error::NoSurfaceZero)
    }

    /// Solve `F(z) = level + i wall` (the `u`-line meets `v = wall`) by Newton's method.
    fn wall_hit(&self, wall: f64, p: Point2, q: Point2, wp: f64, wq: f64) -> Result<Point2> {
        let s = wp / (wp - wq);
        let mut z = C64::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y));
        let target = match self.field {
            LevelField::U => C64::new(self.level, wall),
            LevelField::V => C64::new(0.0, wall),
        };
        for _ in 0..40 {
            let jet = self.ev.jet(Point2::new(z.re, z.im.min(0.0)), 1)?;
            let r = jet.f - target;
            let dz = r / jet.df;
            z -= dz;
            if hypot(dz.re, dz.im) < 1e-15 * (1.0 + hypot(z.re, z.im)) {
                break;
            }
        }
        Ok(Point2::new(z.re, z.im.min(0.0)))
    }

    fn hits_target(&self, p: Point2, q: Point2) -> Option<Point2> {
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let len2 = dx * dx + dy * dy;
        for &s in &self.opts.targets {
            let ahead = (s.x - p.x) * dx + (s.y - p.y) * dy;
            if ahead <= 0.0 {
                continue;
            }
            let tpar = (ahead / len2).min(1.0);
            let c = Point2::new(p.x + tpar * dx, p.y + tpar * dy);
            if c.dist(s) < TARGET_RADIUS {
                return Some(s);
            }
        }
        None
    }

    fn near_singularity(q: Point2) -> bool {
        hypot(q.x.abs() - PI, q.y) < SINGULAR_RADIUS
    }

    fn run(&self, mut vertices: Vec<Point2>, start_kind: EndKind, dir: (f64, f64)) -> Result<LevelCurve> {
        let opts = self.opts;
        let mut p = *vertices.last().expect("start vertex");
        let mut jet = self.jet(p)?;
        let res0 = self.residual(&jet);
        if res0 > LEVEL_TOL {
            return Err(Error::InvalidStart { residual: res0 });
        }
        let mut t = self
            .tangent(&jet, dir)
            .ok_or(Error::StallAtStagnation { x: p.x, y: p.y })?;
        let mut h = opts.h_init.clamp(opts.h_min, opts.h_max);
        let mut length = 0.0;
        let end_kind;
        let mut end_point: Option<Point2> = None;

        loop {
            if vertices.len() > MAX_VERTICES {
                return Err(Error::BudgetExceeded { length });
            }
            if length > opts.max_length {
                match opts.budget {
                    BudgetPolicy::Error => return Err(Error::BudgetExceeded { length }),
                    BudgetPolicy::Truncate => {
                        end_kind = EndKind::Truncated;
                        break;
                    }
                }
            }
            let pred = Point2::new(p.x + h * t.0, p.y + h * t.1);
            if let Some(s) = self.hits_target(p, pred) {
                let d = p.dist(s);
                if d <= opts.h_max {
                    end_kind = EndKind::AtStagnation;
                    end_point = Some(s);
                    break;
                }
                // approach in steps short enough to keep the spacing bound
                h = (d - 0.5 * opts.h_max).clamp(opts.h_min, opts.h_max);
            }
            let pred = Point2::new(p.x + h * t.0, p.y + h * t.1);
            if pred.y > 0.0 {
                end_point = Some(self.surface_hit(p, t, h)?);
                end_kind = EndKind::OnFreeSurface;
                break;
            }
            if Self::near_singularity(pred) {
                end_kind = EndKind::AtSingularity;
                break;
            }
            let (q, qjet, iters) = match self.correct(pred)? {
                Corrected::Point(q, j, it) => (q, j, it),
                Corrected::Above => {
                    end_point = Some(self.surface_hit(p, t, h)?);
                    end_kind = EndKind::OnFreeSurface;
                    break;
                }
                Corrected::Failed => {
                    if h <= opts.h_min {
                        return Err(self.stall_error(p, &jet));
                    }
                    h = (0.5 * h).max(opts.h_min);
                    continue;
                }
            };
            let Some(tq) = self.tangent(&qjet, t) else {
                return Err(Error::StallAtStagnation { x: q.x, y: q.y });
            };
            let turn = atan2(t.0 * tq.1 - t.1 * tq.0, t.0 * tq.0 + t.1 * tq.1).abs();
            let step = p.dist(q);
            if (turn > MAX_TURN || step > 2.0 * h) && h > opts.h_min {
                h = (0.5 * h).max(opts.h_min);
                continue;
            }
            if q.y > -SURFACE_EPS {
                end_point = Some(self.surface_hit(p, t, h)?);
                end_kind = EndKind::OnFreeSurface;
                break;
            }
            if opts.stop_at_y_axis && p.x != 0.0 && q.x != 0.0 && p.x.signum() != q.x.signum() {
                let s = p.x / (p.x - q.x);
                end_point = Some(Point2::new(0.0, p.y + s * (q.y - p.y)));
                end_kind = EndKind::OnYAxis;
                break;
            }
            if let Some(wall) = opts.wall {
                let wp = jet.v() - wall;
                let wq = qjet.v() - wall;
                if wp != 0.0 && wq != 0.0 && wp.signum() != wq.signum() {
                    let mut e = self.wall_hit(wall, p, q, wp, wq)?;
                    end_kind = if e.x.abs() < 1e-9 {
                        e.x = 0.0;
                        EndKind::OnYAxis
                    } else {
                        EndKind::OnBottom
                    };
                    end_point = Some(e);
                    break;
                }
            }

            vertices.push(q);
            length += step;
            p = q;
            jet = qjet;
            t = tq;
            if iters > 4 {
                h = (0.5 * h).max(opts.h_min);
            } else if iters <= 2 {
                h = (2.0 * h).min(opts.h_max);
            }
        }

        if let Some(e) = end_point {
            if vertices.len() > 1 && vertices[vertices.len() - 1].dist(e) < MIN_SPACING {
                vertices.pop();
            }
            vertices.push(e);
        }
        let mut max_residual: f64 = 0.0;
        for &v in &vertices {
            let r = match self.ev.jet(v, 0) {
                Ok(j) => self.residual(&j),
                Err(_) => f64::INFINITY,
            };
            max_residual = max_residual.max(r);
        }
        Ok(LevelCurve {
            field: self.field,
            level: self.level,
            vertices,
            max_residual,
            ends: [start_kind, end_kind],
            source: CurveSource::Traced,
        })
    }

    fn stall_error(&self, p: Point2, jet: &Jet) -> Error {
        if self.field.gradient(jet).norm() < 1e-6 {
            Error::StallAtStagnation { x: p.x, y: p.y }
        } else {
            Error::NoConvergence {
                iterations: MAX_CORRECTOR_ITERS,
            }
        }
    }
}

fn classify_start(p: Point2, opts: &TraceOptions) -> EndKind {
    if p.y == 0.0 {
        EndKind::OnFreeSurface
    } else if p.x == 0.0 {
        EndKind::OnYAxis
    } else if opts.targets.iter().any(|s| s.dist(p) < 1e-9) {
        EndKind::AtStagnation
    } else {
        EndKind::Interior
    }
}

/// Follow the level line `field = level` from `start` in the direction closest
/// to `direction` until one of the stop conditions in `opts` fires.
pub fn trace_level_curve(
    ev: &Evaluator,
    field: LevelField,
    start: Point2,
    level: f64,
    direction: (f64, f64),
    opts: &TraceOptions,
) -> Result<LevelCurve> {
    let tracer = Tracer { ev, field, level, opts };
    let mut v = Vec::with_capacity(256);
    v.push(start);
    tracer.run(v, classify_start(start, opts), direction)
}

/// Trace one branch of `field = level` leaving the saddle `saddle` along
/// `direction`. The first vertex is the saddle itself; the second is the
/// seed `offset` away, corrected back onto the level.
pub fn trace_from_saddle(
    ev: &Evaluator,
    field: LevelField,
    saddle: Point2,
    level: f64,
    direction: (f64, f64),
    offset: f64,
    opts: &TraceOptions,
) -> Result<LevelCurve> {
    let tracer = Tracer { ev, field, level, opts };
    let seed = Point2::new(saddle.x + offset * direction.0, saddle.y + offset * direction.1);
    let seed = match tracer.correct(seed)? {
        Corrected::Point(q, _, _) => q,
        _ => {
            return Err(Error::NoConvergence {
                iterations: MAX_CORRECTOR_ITERS,
            })
        }
    };
    let mut v = Vec::with_capacity(256);
    v.push(saddle);
    v.push(seed);
    tracer.run(v, EndKind::AtStagnation, direction)
}
