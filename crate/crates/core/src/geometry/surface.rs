//! Roots and critical points of the free-surface traces `u(x, 0)`, `v(x, 0)`.

use alloc::vec::Vec;

use super::domain::SloshingDomain;
use crate::kernel::{Evaluator, Family};
use crate::math::PI;
use crate::roots::{all_roots, brent, Bracketed};
use crate::{Error, Result};

/// Bracket width requested from every root refinement.
pub const ROOT_XTOL: f64 = 1e-12;
/// Critical points of the trace closer than this are merged.
pub const MERGE_TOL: f64 = 1e-7;
/// `|u_xx|` below this is reported as degenerate.
pub const DEGENERATE_CURVATURE: f64 = 1e-9;
/// Scan spacing for sign changes of trace derivatives.
pub const SCAN_STEP: f64 = 1e-3;

/// Root of `v(x, 0) = level` in `bracket`.
pub fn find_surface_zero(ev: &Evaluator, level: f64, bracket: (f64, f64)) -> Result<f64> {
    Ok(brent(|x| Ok(ev.trace_v(x)? - level), bracket.0, bracket.1, ROOT_XTOL)?.root)
}

/// All roots of `v(x, 0) = level` in `[a, b]`, scanned on `n` cells.
pub fn surface_zeros(ev: &Evaluator, level: f64, a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    Ok(all_roots(|x| Ok(ev.trace_v(x)? - level), a, b, n, ROOT_XTOL)?
        .into_iter()
        .map(|r| r.root)
        .collect())
}

/// All roots of `u(x, 0)` in `[a, b]`.
pub fn trace_u_zeros(ev: &Evaluator, a: f64, b: f64) -> Result<Vec<f64>> {
    let n = cells(a, b);
    Ok(all_roots(|x| ev.trace_u(x), a, b, n, ROOT_XTOL)?
        .into_iter()
        .map(|r| r.root)
        .collect())
}

fn cells(a: f64, b: f64) -> usize {
    libm::ceil((b - a).abs() / SCAN_STEP).max(8.0) as usize
}

/// The first positive zero of the stream trace, `x_0` (sum family).
pub fn first_positive_zero(ev: &Evaluator) -> Result<f64> {
    let lim = PI - 1e-3;
    let zs = surface_zeros(ev, 0.0, 1e-3, lim, cells(0.0, lim))?;
    zs.first().copied().ok_or(Error::NoSurfaceZero)
}

/// `x_n = argmin_{x > 0} v(x, 0)` on `(0, x_0)`, i.e. the zero of `v_x(x, 0)`
/// (equivalently of `u(x, 0)`, since `u = -v_x / nu` on the surface).
pub fn find_trace_min(ev: &Evaluator) -> Result<f64> {
    if ev.family() != Family::Sum {
        return Err(Error::WrongFamily { expected: "sum" });
    }
    let x0 = first_positive_zero(ev)?;
    let vx = |x: f64| Ok(ev.trace_jet(x, 1)?.df.im);
    let crit = all_roots(vx, 1e-6, x0, cells(0.0, x0), ROOT_XTOL)?;
    let mut best: Option<(f64, f64)> = None;
    for r in crit {
        let j = ev.trace_jet(r.root, 2)?;
        // a minimum of v: v_xx = Im F'' > 0
        if j.d2f.im > 0.0 && best.is_none_or(|(_, v)| j.v() < v) {
            best = Some((r.root, j.v()));
        }
    }
    match best {
        Some((x, _)) if x > 0.0 && x < x0 => Ok(x),
        _ => Err(Error::NoInteriorMinimum),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpotKind {
    Max,
    Min,
    /// Vanishing second derivative: not classified.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSpot {
    pub x: f64,
    pub kind: SpotKind,
    pub interior: bool,
    /// `u(x, 0)`.
    pub trace_value: f64,
    /// Certified bracket of the root of `u_x(x, 0)`; `(x, x)` for endpoints.
    pub bracket: (f64, f64),
}

impl HighSpot {
    pub fn mirrored(&self, family: Family) -> HighSpot {
        let (kind, value) = match family {
            Family::Sum => (self.kind, self.trace_value),
            Family::Diff => (
                match self.kind {
                    SpotKind::Max => SpotKind::Min,
                    SpotKind::Min => SpotKind::Max,
                    SpotKind::Degenerate => SpotKind::Degenerate,
                },
                -self.trace_value,
            ),
        };
        HighSpot {
            x: -self.x,
            kind,
            interior: self.interior,
            trace_value: value,
            bracket: (-self.bracket.1, -self.bracket.0),
        }
    }
}

/// Critical points of `u(x, 0)` on `[xl, xr]`, and the endpoints that are
/// global extrema over the closed interval. Intervals in `x < 0` are handled
/// by reflection so that mirrored domains give exactly mirrored spots.
pub fn high_spots_on(ev: &Evaluator, xl: f64, xr: f64) -> Result<Vec<HighSpot>> {
    if xl + xr < 0.0 {
        let fam = ev.family();
        let mut spots: Vec<HighSpot> = high_spots_on(ev, -xr, -xl)?
            .into_iter()
            .map(|s| s.mirrored(fam))
            .collect();
        spots.reverse();
        return Ok(spots);
    }
    let ux = |x: f64| Ok(ev.trace_jet(x, 1)?.df.re);
    let roots: Vec<Bracketed> = all_roots(ux, xl, xr, cells(xl, xr), ROOT_XTOL)?;
    let mut spots: Vec<HighSpot> = Vec::new();
    for r in roots {
        if r.root - xl <= 1e-9 || xr - r.root <= 1e-9 {
            continue;
        }
        if spots.last().is_some_and(|s| (r.root - s.x).abs() < MERGE_TOL) {
            continue;
        }
        let j = ev.trace_jet(r.root, 2)?;
        let uxx = j.d2f.re;
        let kind = if uxx.abs() < DEGENERATE_CURVATURE {
            SpotKind::Degenerate
        } else if uxx < 0.0 {
            SpotKind::Max
        } else {
            SpotKind::Min
        };
        spots.push(HighSpot {
            x: r.root,
            kind,
            interior: true,
            trace_value: j.u(),
            bracket: (r.lo, r.hi),
        });
    }
    let ul = ev.trace_u(xl)?;
    let ur = ev.trace_u(xr)?;
    let interior_max = spots.iter().map(|s| s.trace_value).fold(f64::NEG_INFINITY, f64::max);
    let interior_min = spots.iter().map(|s| s.trace_value).fold(f64::INFINITY, f64::min);
    let mut ends = Vec::new();
    for (x, u, other) in [(xl, ul, ur), (xr, ur, ul)] {
        let kind = if u >= other && u >= interior_max {
            Some(SpotKind::Max)
        } else if u <= other && u <= interior_min {
            Some(SpotKind::Min)
        } else {
            None
        };
        if let Some(kind) = kind {
            ends.push(HighSpot {
                x,
                kind,
                interior: false,
                trace_value: u,
                bracket: (x, x),
            });
        }
    }
    spots.extend(ends);
    spots.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(spots)
}

/// High spots of a domain's free surface.
pub fn find_high_spots(ev: &Evaluator, domain: &SloshingDomain) -> Result<Vec<HighSpot>> {
    high_spots_on(ev, domain.free_surface.0, domain.free_surface.1)
}
