use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};
use sloshspot::commands::{
    cmd_cases, cmd_eval, cmd_figures, cmd_report, parse_case, parse_family, quadrature, resolve_out, Format, RunConfig,
};
use sloshspot::figure::FigureId;
use sloshspot::runner::default_jobs;
use sloshspot::{CliError, ExitCode};
use sloshspot_core::geometry::CaseTag;
use sloshspot_core::verify::REFERENCE_TOL;

#[derive(Parser)]
#[command(name = "sloshspot", version, about = "Sloshing domains with interior high spots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output directory (default: $SLOSHSPOT_OUT, else ./sloshspot-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute quadrature tolerance.
    #[arg(long = "abs-tol", global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long = "rel-tol", global = true)]
    rel_tol: Option<f64>,
    /// Worker threads for independent cases.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output formats, comma separated: json, csv, svg (report: json or table).
    #[arg(long, global = true, value_delimiter = ',')]
    format: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print u, v and grad v at one point.
    Eval {
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value = "sum")]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Build domains and write domain.json, bottom.csv, trace.csv, highspots.json.
    Case {
        /// Case tags (w32, w32prime, w52, w52companion, w72, w3, w2); "all" for every one.
        #[arg(value_delimiter = ',')]
        cases: Vec<String>,
        /// Same as the positional list.
        #[arg(long = "case", value_delimiter = ',')]
        case_flag: Vec<String>,
        /// Build the smooth-bottom variant bounded by v = -c (w32 only).
        #[arg(long = "smooth-c", allow_hyphen_values = true)]
        smooth_c: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Write figure SVG and CSV files (fig1 ... fig5, or all).
    Figure {
        #[arg(value_delimiter = ',')]
        figures: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare with the reference values and print the feature summary.
    Report {
        /// Reference cases to run (default: w32, w52, w72, w3, w2).
        #[arg(long = "cases", alias = "case", value_delimiter = ',')]
        cases: Vec<String>,
        /// Absolute tolerance of the comparison rows.
        #[arg(long, default_value_t = REFERENCE_TOL)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
}

const REPORT_CASES: [CaseTag; 5] = [CaseTag::W32, CaseTag::W52, CaseTag::W72, CaseTag::W3, CaseTag::W2];
const BUILT_CASES: [CaseTag; 7] = [
    CaseTag::W32,
    CaseTag::W32Prime,
    CaseTag::W52,
    CaseTag::W52Companion,
    CaseTag::W72,
    CaseTag::W3,
    CaseTag::W2,
];

fn cases_from(names: &[String], default: &[CaseTag]) -> Result<Vec<CaseTag>, CliError> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        if n.eq_ignore_ascii_case("all") {
            out.extend_from_slice(default);
        } else {
            out.push(parse_case(n)?);
        }
    }
    Ok(out)
}

fn formats(names: &[String], default: &[Format]) -> Result<Vec<Format>, CliError> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    names
        .iter()
        .map(|n| Format::parse(n).ok_or_else(|| CliError::Usage(format!("unknown format {n:?}"))))
        .collect()
}

fn config(
    common: &Common,
    cases: Vec<CaseTag>,
    figures: Vec<FigureId>,
    fmt: Vec<Format>,
) -> Result<RunConfig, CliError> {
    let jobs = match common.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => j,
        None => default_jobs(),
    };
    Ok(RunConfig {
        cases,
        out: resolve_out(common.out.clone()),
        quadrature: quadrature(common.abs_tol, common.rel_tol)?,
        figures,
        formats: fmt,
        jobs,
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Eval {
            nu,
            family,
            x,
            y,
            common,
        } => {
            let cfg = quadrature(common.abs_tol, common.rel_tol)?;
            print!("{}", cmd_eval(nu, parse_family(&family)?, x, y, cfg)?);
            Ok(ExitCode::Success)
        }
        Command::Case {
            cases,
            case_flag,
            smooth_c,
            common,
        } => {
            let names: Vec<String> = cases.into_iter().chain(case_flag).collect();
            if names.is_empty() {
                return Err(CliError::Usage("no case given".into()));
            }
            let cfg = config(
                &common,
                cases_from(&names, &BUILT_CASES)?,
                Vec::new(),
                formats(&common.format, &[Format::Json, Format::Csv])?,
            )?;
            for dir in cmd_cases(&cfg, smooth_c)? {
                println!("{}", dir.display());
            }
            Ok(ExitCode::Success)
        }
        Command::Figure { figures, common } => {
            let mut ids = Vec::new();
            for f in &figures {
                if f.eq_ignore_ascii_case("all") {
                    ids.extend(FigureId::ALL);
                } else {
                    ids.push(FigureId::from_name(f).ok_or_else(|| CliError::Usage(format!("unknown figure {f:?}")))?);
                }
            }
            if ids.is_empty() {
                ids.extend(FigureId::ALL);
            }
            let cfg = config(
                &common,
                Vec::new(),
                ids,
                formats(&common.format, &[Format::Svg, Format::Csv])?,
            )?;
            for p in cmd_figures(&cfg)? {
                println!("{}", p.display());
            }
            Ok(ExitCode::Success)
        }
        Command::Report {
            cases,
            tolerance,
            common,
        } => {
            if tolerance.is_nan() || tolerance < 0.0 {
                return Err(CliError::Usage("--tolerance must be non-negative".into()));
            }
            let json = match common.format.as_slice() {
                [] => false,
                [f] if f.eq_ignore_ascii_case("table") => false,
                [f] if f.eq_ignore_ascii_case("json") => true,
                _ => return Err(CliError::Usage("report format is json or table".into())),
            };
            let cfg = config(&common, cases_from(&cases, &REPORT_CASES)?, Vec::new(), Vec::new())?;
            let report = cmd_report(&cfg, tolerance)?;
            if json {
                print!("{}", sloshspot::output::to_json(&report));
            } else {
                print!("{}", report.table());
            }
            if report.all_pass() {
                Ok(ExitCode::Success)
            } else {
                for f in report.failures() {
                    eprintln!("FAIL {f}");
                }
                Ok(ExitCode::VerificationFailure)
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    process::exit(code as i32);
}
