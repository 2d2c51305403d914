//! Stagnation points: zeros of `grad v`, which for a harmonic `v` are saddles.

use alloc::vec::Vec;

use crate::kernel::{Evaluator, Family, Hessian2, Point2};
use crate::math::{atan2, cis, hypot, C64, PI};
use crate::{Error, Result};

pub const GRADIENT_TOL: f64 = 1e-9;
const MAX_NEWTON: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StagnationPoint {
    pub location: Point2,
    /// `v` at the location: the level of the two crossing branches.
    pub level: f64,
    pub hessian: Hessian2,
    pub hessian_det: f64,
}

impl StagnationPoint {
    /// The four directions in which the level line `v = level` leaves the
    /// saddle, counter-clockwise from the first. They bisect the Hessian
    /// eigenvectors.
    pub fn branch_directions(&self) -> [(f64, f64); 4] {
        let h = self.hessian;
        let phi = atan2(h.xy, h.xx);
        let theta0 = 0.5 * phi + 0.25 * PI;
        core::array::from_fn(|m| {
            let z: C64 = cis(theta0 + 0.5 * PI * m as f64);
            (z.re, z.im)
        })
    }

    /// The stagnation point at `(-x, y)`, which exists by the parity of `v`.
    pub fn mirrored(&self, family: Family) -> Self {
        let h = self.hessian;
        let (hessian, level) = match family {
            // v odd in x
            Family::Sum => (
                Hessian2 {
                    xx: -h.xx,
                    xy: h.xy,
                    yy: -h.yy,
                },
                -self.level,
            ),
            Family::Diff => (
                Hessian2 {
                    xx: h.xx,
                    xy: -h.xy,
                    yy: h.yy,
                },
                self.level,
            ),
        };
        StagnationPoint {
            location: self.location.mirrored(),
            level,
            hessian,
            hessian_det: self.hessian_det,
        }
    }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Window { x0, x1, y0, y1 }
    }
}

/// Interior nodes of an `n x n` grid over `window` where `|grad v|` is a
/// local minimum over the 8 neighbours. By the minimum modulus principle for
/// `F'` these sit next to zeros of `grad v`. Nodes where the field cannot be
/// evaluated are skipped. Sorted lexicographically by `(x, y)`.
pub fn seed_scan(ev: &Evaluator, window: Window, n: usize) -> Vec<Point2> {
    let n = n.max(3);
    let node = |i: usize, j: usize| {
        Point2::new(
            window.x0 + (window.x1 - window.x0) * i as f64 / (n - 1) as f64,
            window.y0 + (window.y1 - window.y0) * j as f64 / (n - 1) as f64,
        )
    };
    let mut g = alloc::vec![f64::NAN; n * n];
    for i in 0..n {
        for j in 0..n {
            if let Ok(d) = ev.grad_v(node(i, j)) {
                g[i * n + j] = d.norm();
            }
        }
    }
    let mut out = Vec::new();
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let c = g[i * n + j];
            if !c.is_finite() {
                continue;
            }
            let mut is_min = true;
            'nb: for di in [-1isize, 0, 1] {
                for dj in [-1isize, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let k = (i as isize + di) as usize * n + (j as isize + dj) as usize;
                    let nb = g[k];
                    if !nb.is_finite() {
                        is_min = false;
                        break 'nb;
                    }
                    // ties go to the lexicographically first node
                    let earlier = (di, dj) < (0, 0);
                    if nb < c || (nb == c && earlier) {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                out.push(node(i, j));
            }
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    out
}

/// Newton's method on `grad v = 0` from `guess`.
pub fn find_stagnation_point(ev: &Evaluator, guess: Point2) -> Result<StagnationPoint> {
    if !(guess.y < 0.0) {
        return Err(Error::OutOfRange { x: guess.x, y: guess.y });
    }
    let mut p = guess;
    for _ in 0..MAX_NEWTON {
        let jet = ev.jet(p, 2)?;
        let g = jet.grad_v();
        let h = jet.hessian_v();
        if g.norm() < GRADIENT_TOL {
            let det = h.det();
            if !(det < 0.0) {
                return Err(Error::NotASaddle { det });
            }
            return Ok(StagnationPoint {
                location: p,
                level: jet.v(),
                hessian: h,
                hessian_det: det,
            });
        }
        let det = h.det();
        if det == 0.0 {
            return Err(Error::NotASaddle { det });
        }
        let mut dx = -(h.yy * g.dx - h.xy * g.dy) / det;
        let mut dy = -(-h.xy * g.dx + h.xx * g.dy) / det;
        let len = hypot(dx, dy);
        if len > 0.5 {
            dx *= 0.5 / len;
            dy *= 0.5 / len;
        }
        let mut y = p.y + dy;
        if y >= 0.0 {
            y = 0.5 * p.y;
        }
        p = Point2::new(p.x + dx, y);
    }
    Err(Error::NoConvergence { iterations: MAX_NEWTON })
}

/// Seeds from a scan of `window`, refined by Newton and deduplicated;
/// sorted by distance to `hint`.
pub fn stagnation_points_near(ev: &Evaluator, window: Window, n: usize, hint: Point2) -> Vec<StagnationPoint> {
    let mut found: Vec<StagnationPoint> = Vec::new();
    for seed in seed_scan(ev, window, n) {
        if let Ok(s) = find_stagnation_point(ev, seed) {
            if !found.iter().any(|f| f.location.dist(s.location) < 1e-6) {
                found.push(s);
            }
        }
    }
    found.sort_by(|a, b| a.location.dist(hint).total_cmp(&b.location.dist(hint)));
    found
}
