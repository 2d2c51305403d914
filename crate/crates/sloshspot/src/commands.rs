//! The four subcommands, independent of argument parsing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sloshspot_core::geometry::{build_domain, find_high_spots, smooth_variant, CaseTag, SloshingDomain};
use sloshspot_core::kernel::{Evaluator, Family, Mode, Point2, QuadratureConfig};

use crate::figure::{figure_data, FigureId};
use crate::numfmt::fmt_g;
use crate::output::{create_dir, domain_doc, spots_doc, to_json, write_file, xy_csv};
use crate::report::{build_report, Report};
use crate::runner::parallel_map;
use crate::svg::{Frame, Range, Stroke, Svg};
use crate::CliError;

pub const DEFAULT_OUT: &str = "sloshspot-out";
pub const OUT_ENV: &str = "SLOSHSPOT_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cases: Vec<CaseTag>,
    pub out: PathBuf,
    pub quadrature: QuadratureConfig,
    pub figures: Vec<FigureId>,
    pub formats: Vec<Format>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// `--out`, else `$SLOSHSPOT_OUT`, else the default directory.
pub fn resolve_out(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn quadrature(abs_tol: Option<f64>, rel_tol: Option<f64>) -> Result<QuadratureConfig, CliError> {
    let d = QuadratureConfig::default();
    let cfg = d.with_tolerances(abs_tol.unwrap_or(d.abs_tol), rel_tol.unwrap_or(d.rel_tol));
    cfg.validate().map_err(CliError::Input)?;
    Ok(cfg)
}

pub fn parse_family(s: &str) -> Result<Family, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "sum" => Ok(Family::Sum),
        "diff" => Ok(Family::Diff),
        _ => Err(CliError::Usage(format!("unknown family {s:?}; expected sum or diff"))),
    }
}

pub fn parse_case(s: &str) -> Result<CaseTag, CliError> {
    CaseTag::from_name(s).ok_or_else(|| {
        let known: Vec<&str> = CaseTag::ALL.iter().map(|c| c.name()).collect();
        CliError::Usage(format!("unknown case {s:?}; expected one of {}", known.join(", ")))
    })
}

/// `u`, `v` and the gradient of `v` at one point, 12 significant digits.
pub fn cmd_eval(nu: f64, family: Family, x: f64, y: f64, cfg: QuadratureConfig) -> Result<String, CliError> {
    let mode = Mode::new(nu, family).map_err(CliError::Input)?;
    let ev = Evaluator::new(mode, cfg).map_err(CliError::Input)?;
    let j = ev.jet(Point2::new(x, y), 1).map_err(|e| match e {
        sloshspot_core::Error::SingularPoint { .. } | sloshspot_core::Error::OutOfRange { .. } => CliError::Input(e),
        e => CliError::Compute(e),
    })?;
    let g = j.grad_v();
    let mut s = String::new();
    let _ = writeln!(s, "u = {}", fmt_g(j.u()));
    let _ = writeln!(s, "v = {}", fmt_g(j.v()));
    let _ = writeln!(s, "v_x = {}", fmt_g(g.dx));
    let _ = writeln!(s, "v_y = {}", fmt_g(g.dy));
    Ok(s)
}

/// Domain for `case`, or the smooth-bottom variant `v = -c` when `smooth_c` is set.
pub fn case_domain(ev: &Evaluator, case: CaseTag, smooth_c: Option<f64>) -> Result<SloshingDomain, CliError> {
    match (case, smooth_c) {
        (CaseTag::W32 | CaseTag::SmoothVariant, Some(c)) => smooth_variant(ev, c).map_err(|e| match e {
            sloshspot_core::Error::LevelOutOfRange { .. } => CliError::Input(e),
            e => CliError::Compute(e),
        }),
        (CaseTag::SmoothVariant, None) => Err(CliError::Usage("the smooth case needs --smooth-c".into())),
        (_, Some(_)) => Err(CliError::Usage("--smooth-c applies to w32 only".into())),
        (_, None) => Ok(build_domain(ev, case)?),
    }
}

/// Directory name for a case run.
pub fn case_dir_name(case: CaseTag, smooth_c: Option<f64>) -> String {
    match smooth_c {
        Some(c) => format!("smooth_c{}", fmt_g(c)),
        None => case.name().to_string(),
    }
}

fn domain_svg(d: &SloshingDomain) -> String {
    let pts: Vec<Point2> = d.boundary();
    let frame = Frame {
        left: 60.0,
        top: 20.0,
        width: 560.0,
        height: 400.0,
        x: Range::covering(pts.iter().map(|p| p.x)),
        y: Range::covering(pts.iter().map(|p| p.y)),
    };
    let mut svg = Svg::new(640, 450);
    svg.frame(&frame, d.case.name());
    for c in &d.bottom {
        let v: Vec<(f64, f64)> = c.vertices.iter().map(|p| (p.x, p.y)).collect();
        svg.polyline(&frame, &v, "black", Stroke::Solid);
    }
    let (xl, xr) = d.free_surface;
    svg.segment(frame.map(xl, 0.0), frame.map(xr, 0.0), "#06c", 2.0, Stroke::Solid);
    svg.finish()
}

/// Writes `domain.json`, `bottom.csv`, `trace.csv` and `highspots.json`
/// (and `domain.svg` when requested) under `out/<case>/`. Returns the
/// directory.
pub fn cmd_case(
    case: CaseTag,
    smooth_c: Option<f64>,
    out: &Path,
    cfg: QuadratureConfig,
    formats: &[Format],
) -> Result<PathBuf, CliError> {
    let ev = Evaluator::new(case.mode(), cfg).map_err(CliError::Input)?;
    let d = case_domain(&ev, case, smooth_c)?;
    let spots = find_high_spots(&ev, &d)?;
    let dir = out.join(case_dir_name(case, smooth_c));
    create_dir(&dir)?;
    if formats.contains(&Format::Json) {
        write_file(&dir.join("domain.json"), &to_json(&domain_doc(&d, &spots)))?;
        write_file(&dir.join("highspots.json"), &to_json(&spots_doc(&d, &spots)))?;
    }
    if formats.contains(&Format::Csv) {
        let bottom: Vec<(f64, f64)> = d.bottom_vertices().map(|p| (p.x, p.y)).collect();
        write_file(&dir.join("bottom.csv"), &xy_csv(bottom))?;
        // elevation trace u(x, 0) over the free surface
        let (a, b) = d.free_surface;
        let n = 400;
        let mut rows = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            rows.push((x, ev.trace_u(x)?));
        }
        write_file(&dir.join("trace.csv"), &xy_csv(rows))?;
    }
    if formats.contains(&Format::Svg) {
        write_file(&dir.join("domain.svg"), &domain_svg(&d))?;
    }
    Ok(dir)
}

/// Runs `cmd_case` for every configured case, concurrently.
pub fn cmd_cases(cfg: &RunConfig, smooth_c: Option<f64>) -> Result<Vec<PathBuf>, CliError> {
    create_dir(&cfg.out)?;
    parallel_map(&cfg.cases, cfg.jobs, |&c| {
        cmd_case(c, smooth_c, &cfg.out, cfg.quadrature, &cfg.formats)
    })
    .into_iter()
    .collect()
}

/// Writes `<fig>.svg` and the figure's CSV files into `out`. Returns the
/// written paths in order.
pub fn cmd_figure(
    id: FigureId,
    out: &Path,
    cfg: QuadratureConfig,
    formats: &[Format],
) -> Result<Vec<PathBuf>, CliError> {
    let data = figure_data(id, cfg)?;
    create_dir(out)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Svg) {
        let p = out.join(format!("{}.svg", id.name()));
        write_file(&p, &data.svg())?;
        written.push(p);
    }
    if formats.contains(&Format::Csv) {
        for (name, body) in data.csv_files() {
            let p = out.join(name);
            write_file(&p, &body)?;
            written.push(p);
        }
    }
    Ok(written)
}

pub fn cmd_figures(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let parts = parallel_map(&cfg.figures, cfg.jobs, |&f| {
        cmd_figure(f, &cfg.out, cfg.quadrature, &cfg.formats)
    });
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

/// Builds the report; the caller decides the exit status from it.
pub fn cmd_report(cfg: &RunConfig, tol: f64) -> Result<Report, CliError> {
    build_report(&cfg.cases, tol, cfg.quadrature, cfg.jobs)
}
