//! Two-panel figures: free-surface traces (a) and level lines with high spots (b).

use sloshspot_core::geometry::{
    build_domain, find_high_spots, mirror_domain, trace_u_nodal_lines, CaseTag, HighSpot, LevelCurve, SloshingDomain,
};
use sloshspot_core::kernel::{Evaluator, QuadratureConfig};

use crate::output::xy_csv;
use crate::svg::{Frame, Range, Stroke, Svg};
use crate::CliError;

/// Trace grid step in panel (a).
pub const TRACE_STEP: f64 = 1e-3;
/// Distance kept from the singular points `(+-pi, 0)` in panel (a).
pub const TRACE_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }

    pub fn from_name(s: &str) -> Option<FigureId> {
        FigureId::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    /// Domains drawn in panel (b); all share one mode.
    pub fn cases(self) -> &'static [CaseTag] {
        match self {
            FigureId::Fig1 => &[CaseTag::W32, CaseTag::W32Prime],
            FigureId::Fig2 => &[CaseTag::W52, CaseTag::W52Companion],
            FigureId::Fig3 => &[CaseTag::W72],
            FigureId::Fig4 => &[CaseTag::W3],
            FigureId::Fig5 => &[CaseTag::W2],
        }
    }

    pub fn title(self) -> String {
        let (nu, fam) = self.cases()[0].mode_params();
        format!("nu = {nu}, {} family", fam.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    /// Bottom of a domain: a level line of `v`.
    Bottom,
    /// Nodal line of `u`.
    UNodal,
    /// Other branches of the bottom's level set.
    Auxiliary,
}

impl CurveRole {
    pub fn name(self) -> &'static str {
        match self {
            CurveRole::Bottom => "bottom",
            CurveRole::UNodal => "unodal",
            CurveRole::Auxiliary => "aux",
        }
    }

    fn stroke(self) -> Stroke {
        match self {
            CurveRole::Bottom => Stroke::Solid,
            CurveRole::UNodal => Stroke::Dashed,
            CurveRole::Auxiliary => Stroke::Dotted,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    /// `(x, u(x, 0), v(x, 0))` on a uniform grid.
    pub traces: Vec<(f64, f64, f64)>,
    pub curves: Vec<(CurveRole, Vec<(f64, f64)>)>,
    /// Free surfaces of the drawn domains.
    pub surfaces: Vec<(f64, f64)>,
    pub spots: Vec<HighSpot>,
}

fn points(c: &LevelCurve) -> Vec<(f64, f64)> {
    c.vertices.iter().map(|p| (p.x, p.y)).collect()
}

fn domain_for(ev: &Evaluator, case: CaseTag) -> Result<(SloshingDomain, Vec<LevelCurve>), CliError> {
    if case == CaseTag::W32Prime {
        // the nodal lines of the reflected domain are the reflected lines
        let d = build_domain(ev, CaseTag::W32)?;
        let lines = trace_u_nodal_lines(ev, &d)?.iter().map(|l| l.mirrored(0.0)).collect();
        return Ok((mirror_domain(&d), lines));
    }
    let d = build_domain(ev, case)?;
    let lines = trace_u_nodal_lines(ev, &d)?;
    Ok((d, lines))
}

pub fn figure_data(id: FigureId, cfg: QuadratureConfig) -> Result<FigureData, CliError> {
    let ev = Evaluator::new(id.cases()[0].mode(), cfg)?;
    let x0 = -std::f64::consts::PI + TRACE_MARGIN;
    let n = ((-2.0 * x0) / TRACE_STEP).floor() as usize;
    let mut traces = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = x0 + i as f64 * TRACE_STEP;
        let f = ev.trace_jet(x, 0)?.f;
        traces.push((x, f.re, f.im));
    }
    let mut curves = Vec::new();
    let mut surfaces = Vec::new();
    let mut spots = Vec::new();
    for &case in id.cases() {
        let (d, lines) = domain_for(&ev, case)?;
        curves.extend(d.bottom.iter().map(|c| (CurveRole::Bottom, points(c))));
        curves.extend(d.auxiliary.iter().map(|c| (CurveRole::Auxiliary, points(c))));
        curves.extend(lines.iter().map(|c| (CurveRole::UNodal, points(c))));
        surfaces.push(d.free_surface);
        spots.extend(find_high_spots(&ev, &d)?);
    }
    Ok(FigureData {
        id,
        traces,
        curves,
        surfaces,
        spots,
    })
}

const WIDTH: u32 = 720;
const HEIGHT: u32 = 760;
const LEFT: f64 = 70.0;
const PANEL_W: f64 = 620.0;

impl FigureData {
    pub fn svg(&self) -> String {
        let mut svg = Svg::new(WIDTH, HEIGHT);
        svg.text(LEFT, 18.0, "start", &self.id.title());
        let a = Frame {
            left: LEFT,
            top: 30.0,
            width: PANEL_W,
            height: 280.0,
            x: Range::covering(self.traces.iter().map(|t| t.0)),
            y: Range::covering(self.traces.iter().flat_map(|t| [t.1, t.2])),
        };
        let b = Frame {
            left: LEFT,
            top: 360.0,
            width: PANEL_W,
            height: 370.0,
            x: Range::covering(self.curves.iter().flat_map(|c| c.1.iter().map(|p| p.0))),
            y: Range::covering(self.curves.iter().flat_map(|c| c.1.iter().map(|p| p.1)).chain([0.0])),
        };
        svg.frame(&a, "(a)");
        let u: Vec<(f64, f64)> = self.traces.iter().map(|t| (t.0, t.1)).collect();
        let v: Vec<(f64, f64)> = self.traces.iter().map(|t| (t.0, t.2)).collect();
        svg.polyline(&a, &u, "black", Stroke::Dashed);
        svg.polyline(&a, &v, "black", Stroke::Solid);

        svg.frame(&b, "(b)");
        for &(xl, xr) in &self.surfaces {
            svg.segment(b.map(xl, 0.0), b.map(xr, 0.0), "#06c", 2.0, Stroke::Solid);
        }
        for (role, pts) in &self.curves {
            svg.polyline(&b, pts, "black", role.stroke());
        }
        for s in &self.spots {
            svg.arrow(b.map(s.x, 0.0), a.map(s.x, s.trace_value), "#c00");
        }
        svg.finish()
    }

    /// `(file name, contents)` for the traces and every curve.
    pub fn csv_files(&self) -> Vec<(String, String)> {
        let name = self.id.name();
        let mut out = vec![
            (
                format!("{name}_trace_u.csv"),
                xy_csv(self.traces.iter().map(|t| (t.0, t.1))),
            ),
            (
                format!("{name}_trace_v.csv"),
                xy_csv(self.traces.iter().map(|t| (t.0, t.2))),
            ),
        ];
        for (i, (role, pts)) in self.curves.iter().enumerate() {
            out.push((
                format!("{name}_{:02}_{}.csv", i, role.name()),
                xy_csv(pts.iter().copied()),
            ));
        }
        out.push((
            format!("{name}_spots.csv"),
            xy_csv(self.spots.iter().map(|s| (s.x, s.trace_value))),
        ));
        out
    }
}
