//! The reference report: comparison rows, per-case features and residuals.

use std::fmt::Write as _;

use serde::Serialize;
use sloshspot_core::geometry::{build_domain, CaseTag, EndKind, Verdict};
use sloshspot_core::kernel::{Evaluator, QuadratureConfig};
use sloshspot_core::verify::{
    case_features, cauchy_riemann_in_domain, check_orthogonality, domain_laplace_points, free_surface_points,
    nodal_structure_check, reference_rows, residual_bottom, residual_free_surface, residual_laplace_at, CaseFeatures,
    Comparison, Criterion, ResidualReport,
};

use crate::numfmt::fmt_sig;
use crate::output::SCHEMA_VERSION;
use crate::runner::parallel_map;
use crate::CliError;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RowDoc {
    pub case: &'static str,
    pub quantity: String,
    pub reference: f64,
    pub computed: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub criterion: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FeatureDoc {
    pub case: &'static str,
    pub interior_spots: usize,
    pub left: &'static str,
    pub right: &'static str,
    pub spot_to_end: f64,
    pub spot_to_end_relative: f64,
    pub corners: usize,
    pub u_nodal_lines: usize,
    pub nodal_end: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckDoc {
    pub case: &'static str,
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub tolerance: f64,
    pub rows: Vec<RowDoc>,
    pub features: Vec<FeatureDoc>,
    pub checks: Vec<CheckDoc>,
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Bulbous => "bulbous",
        Verdict::JohnCompliant => "john",
    }
}

fn end_name(e: Option<EndKind>) -> &'static str {
    match e {
        Some(EndKind::OnFreeSurface) => "free-surface",
        Some(EndKind::OnYAxis) => "y-axis",
        Some(EndKind::AtStagnation) => "stagnation",
        Some(EndKind::OnBottom) => "bottom",
        Some(EndKind::AtSingularity) => "singularity",
        Some(EndKind::Truncated) => "truncated",
        Some(EndKind::Interior) => "interior",
        None => "none",
    }
}

fn row_doc(c: &Comparison) -> RowDoc {
    RowDoc {
        case: c.case.name(),
        quantity: c.quantity.clone(),
        reference: c.reference,
        computed: c.computed,
        abs_diff: c.abs_diff,
        tolerance: c.tolerance,
        criterion: match c.criterion {
            Criterion::Near => "near",
            Criterion::Below => "below",
        },
        pass: c.pass(),
    }
}

fn feature_doc(f: &CaseFeatures) -> FeatureDoc {
    FeatureDoc {
        case: f.case.name(),
        interior_spots: f.interior_spots,
        left: verdict(f.left),
        right: verdict(f.right),
        spot_to_end: f.spot_to_end.0,
        spot_to_end_relative: f.spot_to_end.1,
        corners: f.corners,
        u_nodal_lines: f.u_nodal_lines,
        nodal_end: end_name(f.nodal_end),
        pass: f.pass,
    }
}

/// Residual suite of one domain, sorted by check name.
pub fn residual_suite(ev: &Evaluator, case: CaseTag) -> Result<Vec<ResidualReport>, CliError> {
    let d = build_domain(ev, case)?;
    let [lu, lv] = residual_laplace_at(ev, &domain_laplace_points(&d, 30, 1e-2));
    let mut out = vec![
        lu,
        lv,
        residual_free_surface(ev, &free_surface_points(&d, 50)),
        residual_bottom(ev, &d),
        check_orthogonality(ev, &d),
        cauchy_riemann_in_domain(ev, &d, 100),
        nodal_structure_check(ev, &d)?.report(),
    ];
    out.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    Ok(out)
}

type CaseOutcome = (Vec<Comparison>, CaseFeatures, Vec<ResidualReport>);

fn run_case(case: CaseTag, tol: f64, cfg: QuadratureConfig) -> Result<CaseOutcome, CliError> {
    let ev = Evaluator::new(case.mode(), cfg)?;
    let d = build_domain(&ev, case)?;
    let rows = reference_rows(&ev, &d, tol)?;
    let features = case_features(&ev, &d)?;
    let checks = residual_suite(&ev, case)?;
    Ok((rows, features, checks))
}

/// Run every case (concurrently, up to `jobs`) and assemble the report in
/// the order of `cases`.
pub fn build_report(cases: &[CaseTag], tol: f64, cfg: QuadratureConfig, jobs: usize) -> Result<Report, CliError> {
    let outcomes = parallel_map(cases, jobs, |&c| run_case(c, tol, cfg));
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        tolerance: tol,
        rows: Vec::new(),
        features: Vec::new(),
        checks: Vec::new(),
    };
    for (case, outcome) in cases.iter().zip(outcomes) {
        let (rows, features, checks) = outcome?;
        report.rows.extend(rows.iter().map(row_doc));
        report.features.push(feature_doc(&features));
        report.checks.extend(checks.iter().map(|r| CheckDoc {
            case: case.name(),
            check: r.check_name.clone(),
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            samples: r.sample_count,
            pass: r.pass,
        }));
    }
    Ok(report)
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.features.iter().all(|f| f.pass) && self.checks.iter().all(|c| c.pass)
    }

    /// One line per failing row, feature or check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in self.rows.iter().filter(|r| !r.pass) {
            out.push(format!(
                "{} {}: computed {} reference {} diff {:.3e} tol {:.3e}",
                r.case,
                r.quantity,
                fmt_sig(r.computed, 10),
                fmt_sig(r.reference, 10),
                r.abs_diff,
                r.tolerance
            ));
        }
        for f in self.features.iter().filter(|f| !f.pass) {
            out.push(format!("{} features: {:?}", f.case, f));
        }
        for c in self.checks.iter().filter(|c| !c.pass) {
            out.push(format!(
                "{} {}: residual {:.3e} tol {:.3e}",
                c.case, c.check, c.max_residual, c.tolerance
            ));
        }
        out
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:<34} {:>14} {:>16} {:>10} {:>10} {:>6}",
            "case", "quantity", "reference", "computed", "|diff|", "tol", "status"
        );
        for r in &self.rows {
            let tol = if r.criterion == "below" {
                "< ref".to_string()
            } else {
                format!("{:.1e}", r.tolerance)
            };
            let _ = writeln!(
                s,
                "{:<14} {:<34} {:>14} {:>16} {:>10.2e} {:>10} {:>6}",
                r.case,
                r.quantity,
                fmt_sig(r.reference, 8),
                fmt_sig(r.computed, 12),
                r.abs_diff,
                tol,
                status(r.pass)
            );
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "{:<14} {:>6} {:<8} {:<8} {:>10} {:>9} {:>7} {:>7} {:<12} {:>6}",
            "case", "spots", "left", "right", "spot-end", "relative", "corners", "u-lines", "u-line end", "status"
        );
        for f in &self.features {
            let _ = writeln!(
                s,
                "{:<14} {:>6} {:<8} {:<8} {:>10.6} {:>9.5} {:>7} {:>7} {:<12} {:>6}",
                f.case,
                f.interior_spots,
                f.left,
                f.right,
                f.spot_to_end,
                f.spot_to_end_relative,
                f.corners,
                f.u_nodal_lines,
                f.nodal_end,
                status(f.pass)
            );
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "{:<14} {:<16} {:>12} {:>12} {:>7} {:>6}",
            "case", "check", "residual", "tol", "samples", "status"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<14} {:<16} {:>12.3e} {:>12.3e} {:>7} {:>6}",
                c.case,
                c.check,
                c.max_residual,
                c.tolerance,
                c.samples,
                status(c.pass)
            );
        }
        let n_rows = self.rows.len();
        let n_fail = self.failures().len();
        let _ = writeln!(s, "\n{n_rows} comparison rows; {n_fail} failures");
        s
    }
}
