//! Assembly of sloshing domains from traced level lines.

use alloc::format;
use alloc::vec::Vec;

use super::stagnation::{stagnation_points_near, StagnationPoint, Window};
use super::surface::{find_trace_min, first_positive_zero, surface_zeros, trace_u_zeros};
use super::trace::{
    trace_from_saddle, trace_level_curve, BudgetPolicy, CurveSource, EndKind, LevelCurve, LevelField, TraceOptions,
};
use crate::kernel::{Evaluator, Family, Mode, Point2};
use crate::math::PI;
use crate::{Error, Result};

/// Largest gap tolerated where boundary pieces meet.
pub const CLOSURE_TOL: f64 = 1e-6;
const AXIS_STEP: f64 = 0.04;
const SADDLE_OFFSET: f64 = 2e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `nu = 3/2`: between the curved nodal line of `v` and the y-axis, `x > 0`.
    W32,
    /// Reflection of `W32`.
    W32Prime,
    /// `nu = 5/2`: between the two curved nodal arcs, right of the y-axis.
    W52,
    /// `nu = 5/2`: between the y-axis and the left arc; satisfies John's condition.
    W52Companion,
    /// `nu = 7/2`: enclosed by the saddle-level branches.
    W72,
    /// `nu = 3`, difference family.
    W3,
    /// `nu = 2`, difference family.
    W2,
    /// `nu = 3/2`: bounded by a level line `v = -c`; smooth bottom.
    SmoothVariant,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::W32,
        CaseTag::W32Prime,
        CaseTag::W52,
        CaseTag::W52Companion,
        CaseTag::W72,
        CaseTag::W3,
        CaseTag::W2,
        CaseTag::SmoothVariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::W32 => "w32",
            CaseTag::W32Prime => "w32prime",
            CaseTag::W52 => "w52",
            CaseTag::W52Companion => "w52companion",
            CaseTag::W72 => "w72",
            CaseTag::W3 => "w3",
            CaseTag::W2 => "w2",
            CaseTag::SmoothVariant => "smooth",
        }
    }

    pub fn from_name(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// The `(nu, family)` the case is built from.
    pub fn mode_params(self) -> (f64, Family) {
        match self {
            CaseTag::W32 | CaseTag::W32Prime | CaseTag::SmoothVariant => (1.5, Family::Sum),
            CaseTag::W52 | CaseTag::W52Companion => (2.5, Family::Sum),
            CaseTag::W72 => (3.5, Family::Sum),
            CaseTag::W3 => (3.0, Family::Diff),
            CaseTag::W2 => (2.0, Family::Diff),
        }
    }

    pub fn mode(self) -> Mode {
        let (nu, fam) = self.mode_params();
        Mode::new(nu, fam).expect("case modes are admissible")
    }

    fn saddle_hint(self) -> Option<(Point2, f64)> {
        // (approximate saddle, x inside the free surface)
        match self {
            CaseTag::W72 => Some((Point2::new(1.2, -1.8), 2.25)),
            CaseTag::W3 => Some((Point2::new(1.0, -1.9), 2.1)),
            CaseTag::W2 => Some((Point2::new(0.0, -2.7), 1.55)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SloshingDomain {
    pub mode: Mode,
    pub case: CaseTag,
    /// Whether this is the reflection `x -> -x` of the constructed domain.
    pub mirrored: bool,
    /// The value of `v` on the bottom.
    pub level: f64,
    /// `(x_left, x_right)` on `y = 0`.
    pub free_surface: (f64, f64),
    /// Bottom pieces, ordered and oriented from `(x_right, 0)` to `(x_left, 0)`.
    pub bottom: Vec<LevelCurve>,
    /// Stagnation points and junctions with the y-axis.
    pub corners: Vec<Point2>,
    pub stagnation: Vec<StagnationPoint>,
    /// Other branches of the same level set, not part of the boundary.
    pub auxiliary: Vec<LevelCurve>,
}

fn neg(x: f64) -> f64 {
    // keeps +0.0 as is so that reflection is an exact involution without signed zeros
    if x == 0.0 {
        x
    } else {
        -x
    }
}

fn mirror_point(p: Point2) -> Point2 {
    Point2::new(neg(p.x), p.y)
}

fn mirror_curve(c: &LevelCurve, family: Family) -> LevelCurve {
    let mut m = c.clone();
    for p in m.vertices.iter_mut() {
        *p = mirror_point(*p);
    }
    if family == Family::Sum && c.field == LevelField::V {
        m.level = neg(c.level);
    }
    if family == Family::Diff && c.field == LevelField::U {
        m.level = neg(c.level);
    }
    m
}

impl SloshingDomain {
    pub fn nu(&self) -> f64 {
        self.mode.nu()
    }

    pub fn width(&self) -> f64 {
        self.free_surface.1 - self.free_surface.0
    }

    /// Closed boundary polygon: along `F` from left to right, then the bottom.
    /// The first point is repeated at the end.
    pub fn boundary(&self) -> Vec<Point2> {
        let mut pts = Vec::new();
        pts.push(Point2::new(self.free_surface.0, 0.0));
        for c in &self.bottom {
            for (i, &p) in c.vertices.iter().enumerate() {
                if i == 0 && pts.last().is_some_and(|q: &Point2| q.dist(p) <= CLOSURE_TOL) {
                    continue;
                }
                pts.push(p);
            }
        }
        if pts.last().is_some_and(|q| q.dist(pts[0]) > 0.0) {
            pts.push(pts[0]);
        }
        pts
    }

    pub fn bottom_vertices(&self) -> impl Iterator<Item = &Point2> {
        self.bottom.iter().flat_map(|c| c.vertices.iter())
    }

    /// Largest gap between consecutive boundary pieces.
    pub fn closure_gap(&self) -> f64 {
        let (xl, xr) = self.free_surface;
        let mut gap: f64 = 0.0;
        let mut prev = Point2::new(xr, 0.0);
        for c in &self.bottom {
            gap = gap.max(prev.dist(c.first()));
            prev = c.last();
        }
        gap.max(prev.dist(Point2::new(xl, 0.0)))
    }

    /// No two non-adjacent edges of the boundary polygon intersect.
    pub fn is_simple(&self) -> bool {
        let pts = self.boundary();
        let n = pts.len() - 1;
        for i in 0..n {
            let (a, b) = (pts[i], pts[i + 1]);
            let (bx0, bx1) = (a.x.min(b.x), a.x.max(b.x));
            let (by0, by1) = (a.y.min(b.y), a.y.max(b.y));
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (pts[j], pts[j + 1]);
                if c.x.max(d.x) < bx0 || c.x.min(d.x) > bx1 || c.y.max(d.y) < by0 || c.y.min(d.y) > by1 {
                    continue;
                }
                if segments_cross(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Point-in-polygon test (even-odd rule) against the boundary.
    pub fn contains(&self, p: Point2) -> bool {
        let pts = self.boundary();
        let mut inside = false;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Bounding box `(xmin, xmax, ymin, ymax)` of the boundary.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (self.free_surface.0, self.free_surface.1, 0.0f64, 0.0f64);
        for p in self.bottom_vertices() {
            b.0 = b.0.min(p.x);
            b.1 = b.1.max(p.x);
            b.2 = b.2.min(p.y);
            b.3 = b.3.max(p.y);
        }
        b
    }

    fn validate(self) -> Result<Self> {
        let gap = self.closure_gap();
        if !(gap < CLOSURE_TOL) {
            return Err(Error::AssemblyFailure(format!(
                "{}: boundary does not close (gap {gap:e})",
                self.case.name()
            )));
        }
        if !self.is_simple() {
            return Err(Error::AssemblyFailure(format!(
                "{}: boundary intersects itself",
                self.case.name()
            )));
        }
        Ok(self)
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Reflection `x -> -x`. For the sum family `v` is odd, so the bottom level
/// changes sign; for the difference family `u` is odd, so the kinds of its
/// extrema swap.
pub fn mirror_domain(d: &SloshingDomain) -> SloshingDomain {
    let fam = d.mode.family();
    let mut bottom: Vec<LevelCurve> = d.bottom.iter().map(|c| mirror_curve(c, fam).reversed()).collect();
    bottom.reverse();
    let case = match d.case {
        CaseTag::W32 => CaseTag::W32Prime,
        CaseTag::W32Prime => CaseTag::W32,
        c => c,
    };
    SloshingDomain {
        mode: d.mode,
        case,
        mirrored: !d.mirrored,
        level: if fam == Family::Sum { neg(d.level) } else { d.level },
        free_surface: (neg(d.free_surface.1), neg(d.free_surface.0)),
        bottom,
        corners: d.corners.iter().map(|&p| mirror_point(p)).collect(),
        stagnation: d
            .stagnation
            .iter()
            .map(|s| {
                let mut m = s.mirrored(fam);
                m.location = mirror_point(s.location);
                m
            })
            .collect(),
        auxiliary: d.auxiliary.iter().map(|c| mirror_curve(c, fam)).collect(),
    }
}

fn check_case(ev: &Evaluator, case: CaseTag) -> Result<()> {
    let (nu, fam) = case.mode_params();
    if ev.family() != fam || (ev.nu() - nu).abs() > 1e-12 {
        return Err(Error::CaseMismatch {
            case: case.name(),
            nu: ev.nu(),
        });
    }
    Ok(())
}

/// Saddles of `v` on the negative y-axis (sum family), nearest the surface first.
pub fn axis_saddles(ev: &Evaluator) -> Vec<StagnationPoint> {
    let window = Window::new(-0.6, 0.6, -7.0, -0.2);
    let mut s: Vec<StagnationPoint> = stagnation_points_near(ev, window, 41, Point2::new(0.0, 0.0))
        .into_iter()
        .filter(|s| s.location.x.abs() < 1e-7)
        .map(|mut s| {
            s.location.x = 0.0;
            s
        })
        .collect();
    s.sort_by(|a, b| b.location.y.total_cmp(&a.location.y));
    s.dedup_by(|a, b| a.location.dist(b.location) < 1e-6);
    s
}

fn nodal_arc(ev: &Evaluator, x: f64, targets: &[StagnationPoint]) -> Result<LevelCurve> {
    let opts = TraceOptions {
        stop_at_y_axis: true,
        targets: targets.iter().map(|s| s.location).collect(),
        ..TraceOptions::default()
    };
    let c = trace_level_curve(ev, LevelField::V, Point2::new(x, 0.0), 0.0, (0.0, -1.0), &opts)?;
    match c.ends[1] {
        EndKind::AtStagnation | EndKind::OnYAxis => Ok(c),
        other => Err(Error::AssemblyFailure(format!(
            "nodal arc from x = {x} ended {other:?} instead of on the y-axis"
        ))),
    }
}

fn axis_piece(from: Point2, to: Point2) -> LevelCurve {
    LevelCurve::axis_segment(from.y, to.y, AXIS_STEP, [EndKind::OnYAxis, EndKind::OnYAxis])
}

fn nearest_saddle(sads: &[StagnationPoint], p: Point2) -> Vec<StagnationPoint> {
    sads.iter().filter(|s| s.location.dist(p) < 1e-6).copied().collect()
}

fn build_w32(ev: &Evaluator) -> Result<SloshingDomain> {
    let x0 = first_positive_zero(ev)?;
    let sads = axis_saddles(ev);
    if sads.is_empty() {
        return Err(Error::AssemblyFailure("no stagnation point on the y-axis".into()));
    }
    let arc = nodal_arc(ev, x0, &sads)?;
    let s = arc.last();
    let origin = Point2::new(0.0, 0.0);
    SloshingDomain {
        mode: ev.mode(),
        case: CaseTag::W32,
        mirrored: false,
        level: 0.0,
        free_surface: (0.0, x0),
        stagnation: nearest_saddle(&sads, s),
        bottom: alloc::vec![arc, axis_piece(s, origin)],
        corners: alloc::vec![s, origin],
        auxiliary: Vec::new(),
    }
    .validate()
}

fn build_w52(ev: &Evaluator, companion: bool) -> Result<SloshingDomain> {
    let lim = PI - 1e-3;
    let zs = surface_zeros(ev, 0.0, 1e-3, lim, 4000)?;
    if zs.len() < 2 {
        return Err(Error::AssemblyFailure(format!(
            "expected two surface zeros, found {}",
            zs.len()
        )));
    }
    let (xl, xr) = (zs[0], zs[1]);
    let sads = axis_saddles(ev);
    if sads.is_empty() {
        return Err(Error::AssemblyFailure("no stagnation point on the y-axis".into()));
    }
    let left = nodal_arc(ev, xl, &sads)?;
    let origin = Point2::new(0.0, 0.0);
    if companion {
        let s = left.last();
        return SloshingDomain {
            mode: ev.mode(),
            case: CaseTag::W52Companion,
            mirrored: false,
            level: 0.0,
            free_surface: (0.0, xl),
            stagnation: nearest_saddle(&sads, s),
            bottom: alloc::vec![left, axis_piece(s, origin)],
            corners: alloc::vec![s, origin],
            auxiliary: Vec::new(),
        }
        .validate();
    }
    let right = nodal_arc(ev, xr, &sads)?;
    let (sr, sl) = (right.last(), left.last());
    let mut bottom = alloc::vec![right];
    let mut corners = alloc::vec![sr];
    if sr.dist(sl) > CLOSURE_TOL {
        bottom.push(axis_piece(sr, sl));
        corners.push(sl);
    }
    bottom.push(left.reversed());
    let mut stagnation = nearest_saddle(&sads, sr);
    stagnation.extend(
        nearest_saddle(&sads, sl)
            .into_iter()
            .filter(|s| s.location.dist(sr) > 1e-6),
    );
    SloshingDomain {
        mode: ev.mode(),
        case: CaseTag::W52,
        mirrored: false,
        level: 0.0,
        free_surface: (xl, xr),
        stagnation,
        bottom,
        corners,
        auxiliary: Vec::new(),
    }
    .validate()
}

/// The four branches of the saddle's level set. Each is traced until it
/// reaches `y = 0` or returns to the saddle; long branches are truncated.
pub fn saddle_branches(ev: &Evaluator, s: &StagnationPoint, max_length: f64) -> Result<Vec<LevelCurve>> {
    let opts = TraceOptions {
        targets: alloc::vec![s.location],
        budget: BudgetPolicy::Truncate,
        max_length,
        ..TraceOptions::default()
    };
    s.branch_directions()
        .iter()
        .map(|&d| trace_from_saddle(ev, LevelField::V, s.location, s.level, d, SADDLE_OFFSET, &opts))
        .collect()
}

fn build_saddle_case(ev: &Evaluator, case: CaseTag) -> Result<SloshingDomain> {
    let (hint, x_inside) = case.saddle_hint().expect("saddle case");
    let window = Window::new(hint.x - 0.4, hint.x + 0.4, hint.y - 0.4, hint.y + 0.4);
    let s = *stagnation_points_near(ev, window, 17, hint)
        .first()
        .ok_or_else(|| Error::AssemblyFailure(format!("{}: no saddle near the hint", case.name())))?;
    let branches = saddle_branches(ev, &s, 30.0)?;
    let mut left: Option<usize> = None;
    let mut right: Option<usize> = None;
    for (i, b) in branches.iter().enumerate() {
        if b.ends[1] != EndKind::OnFreeSurface {
            continue;
        }
        let x = b.last().x;
        if x < x_inside && left.is_none_or(|j| branches[j].last().x < x) {
            left = Some(i);
        }
        if x > x_inside && right.is_none_or(|j| branches[j].last().x > x) {
            right = Some(i);
        }
    }
    let (Some(li), Some(ri)) = (left, right) else {
        return Err(Error::AssemblyFailure(format!(
            "{}: saddle branches do not bracket the free surface",
            case.name()
        )));
    };
    let xl = branches[li].last().x;
    let xr = branches[ri].last().x;
    let bottom = alloc::vec![branches[ri].reversed(), branches[li].clone()];
    let auxiliary = branches
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != li && *i != ri)
        .map(|(_, b)| b.clone())
        .collect();
    SloshingDomain {
        mode: ev.mode(),
        case,
        mirrored: false,
        level: s.level,
        free_surface: (xl, xr),
        stagnation: alloc::vec![s],
        bottom,
        corners: alloc::vec![s.location],
        auxiliary,
    }
    .validate()
}

/// Build one of the constructed domains. `SmoothVariant` needs a level; use
/// [`smooth_variant`].
pub fn build_domain(ev: &Evaluator, case: CaseTag) -> Result<SloshingDomain> {
    check_case(ev, case)?;
    match case {
        CaseTag::W32 => build_w32(ev),
        CaseTag::W32Prime => Ok(mirror_domain(&build_w32(ev)?)),
        CaseTag::W52 => build_w52(ev, false),
        CaseTag::W52Companion => build_w52(ev, true),
        CaseTag::W72 | CaseTag::W3 | CaseTag::W2 => build_saddle_case(ev, case),
        CaseTag::SmoothVariant => Err(Error::InvalidParameter(
            "the smooth variant needs a level; use smooth_variant",
        )),
    }
}

/// `-min_{x >= 0} v(x, 0)`: the largest admissible `c` for [`smooth_variant`].
pub fn smooth_level_bound(ev: &Evaluator) -> Result<f64> {
    let xn = find_trace_min(ev)?;
    Ok(-ev.trace_v(xn)?)
}

/// Domain bounded by `F^c` and the level line `v = -c`, `0 < c < -min v(x, 0)`.
pub fn smooth_variant(ev: &Evaluator, c: f64) -> Result<SloshingDomain> {
    check_case(ev, CaseTag::SmoothVariant)?;
    let max = smooth_level_bound(ev)?;
    if !(c > 0.0 && c < max) {
        return Err(Error::LevelOutOfRange { c, max });
    }
    let x0 = first_positive_zero(ev)?;
    let zs = surface_zeros(ev, -c, 1e-9, x0, 4000)?;
    if zs.len() != 2 {
        return Err(Error::AssemblyFailure(format!(
            "smooth variant: expected two surface points of v = -c, found {}",
            zs.len()
        )));
    }
    let (a, b) = (zs[0], zs[1]);
    let opts = TraceOptions {
        stop_at_y_axis: true,
        max_length: 60.0,
        ..TraceOptions::default()
    };
    let curve = trace_level_curve(ev, LevelField::V, Point2::new(b, 0.0), -c, (0.0, -1.0), &opts)?;
    if curve.ends[1] != EndKind::OnFreeSurface || (curve.last().x - a).abs() > CLOSURE_TOL {
        return Err(Error::AssemblyFailure(format!(
            "smooth variant: level line ended {:?} at x = {}",
            curve.ends[1],
            curve.last().x
        )));
    }
    let mut curve = curve;
    // use the certified surface root as the exact end
    let n = curve.vertices.len();
    curve.vertices[n - 1] = Point2::new(a, 0.0);
    SloshingDomain {
        mode: ev.mode(),
        case: CaseTag::SmoothVariant,
        mirrored: false,
        level: -c,
        free_surface: (a, b),
        stagnation: Vec::new(),
        bottom: alloc::vec![curve],
        corners: Vec::new(),
        auxiliary: Vec::new(),
    }
    .validate()
}

/// Level lines `u = 0` inside the domain, one per zero of `u(x, 0)` on `F`,
/// traced until they meet the bottom or a stagnation point on it.
pub fn trace_u_nodal_lines(ev: &Evaluator, d: &SloshingDomain) -> Result<Vec<LevelCurve>> {
    let (xl, xr) = d.free_surface;
    let zeros: Vec<f64> = trace_u_zeros(ev, xl, xr)?
        .into_iter()
        .filter(|&x| x - xl > 1e-9 && xr - x > 1e-9)
        .collect();
    let opts = TraceOptions {
        wall: Some(d.level),
        targets: d.stagnation.iter().map(|s| s.location).collect(),
        ..TraceOptions::default()
    };
    zeros
        .into_iter()
        .map(|x| trace_level_curve(ev, LevelField::U, Point2::new(x, 0.0), 0.0, (0.0, -1.0), &opts))
        .collect()
}

/// The nodal line of `u` in the domain (the first, if several).
pub fn trace_u_nodal_line(ev: &Evaluator, d: &SloshingDomain) -> Result<LevelCurve> {
    trace_u_nodal_lines(ev, d)?
        .into_iter()
        .next()
        .ok_or(Error::NoSurfaceZero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Bulbous,
    JohnCompliant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideReport {
    pub verdict: Verdict,
    /// `dy/dx` of the bottom where it meets `F`; `None` for a vertical wall.
    pub slope: Option<f64>,
    /// Whether some bottom vertex lies outside the strip over `F` on this side.
    pub exits_strip: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulbousReport {
    pub left: SideReport,
    pub right: SideReport,
}

/// Per side of `F`: the bottom leaves the strip over `F` iff its slope
/// `y' = -v_x / v_y` at the endpoint points outward (`y' < 0` on the right,
/// `y' > 0` on the left).
pub fn check_bulbous(ev: &Evaluator, d: &SloshingDomain) -> Result<BulbousReport> {
    let (xl, xr) = d.free_surface;
    let (xmin, xmax, _, _) = d.bounds();
    let side = |x: f64, piece: &LevelCurve, right: bool| -> Result<SideReport> {
        let exits = if right { xmax > xr + 1e-9 } else { xmin < xl - 1e-9 };
        if piece.source == CurveSource::Axis {
            return Ok(SideReport {
                verdict: Verdict::JohnCompliant,
                slope: None,
                exits_strip: exits,
            });
        }
        let slope = endpoint_slope(ev, x)?;
        let outward = if right { slope < 0.0 } else { slope > 0.0 };
        Ok(SideReport {
            verdict: if outward {
                Verdict::Bulbous
            } else {
                Verdict::JohnCompliant
            },
            slope: Some(slope),
            exits_strip: exits,
        })
    };
    let first = d.bottom.first().ok_or(Error::AssemblyFailure("empty bottom".into()))?;
    let last = d.bottom.last().ok_or(Error::AssemblyFailure("empty bottom".into()))?;
    Ok(BulbousReport {
        right: side(xr, first, true)?,
        left: side(xl, last, false)?,
    })
}

/// Slope `y' = -v_x / v_y` of the level line of `v` through `(x, 0)`.
pub fn endpoint_slope(ev: &Evaluator, x: f64) -> Result<f64> {
    let g = ev.trace_jet(x, 1)?.grad_v();
    if g.dy.abs() < 1e-12 {
        return Err(Error::DegenerateGradient { x });
    }
    Ok(-g.dx / g.dy)
}
