//! Computed quantities against the published reference values.

use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{
    build_domain, check_bulbous, find_high_spots, trace_u_nodal_lines, CaseTag, EndKind, HighSpot, SloshingDomain,
    SpotKind, Verdict,
};
use crate::kernel::{Evaluator, QuadratureConfig};
use crate::{Error, Result};

/// Default absolute tolerance: the reference values carry six decimals.
pub const REFERENCE_TOL: f64 = 2e-5;
/// Relative spot-to-endpoint distance below which a spot counts as close to the end.
const CLOSE_FRACTION: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceCase {
    Nu32,
    Nu52,
    Nu72,
    Nu3,
    Nu2,
}

impl ReferenceCase {
    pub const ALL: [ReferenceCase; 5] = [
        ReferenceCase::Nu32,
        ReferenceCase::Nu52,
        ReferenceCase::Nu72,
        ReferenceCase::Nu3,
        ReferenceCase::Nu2,
    ];

    pub fn case(self) -> CaseTag {
        match self {
            ReferenceCase::Nu32 => CaseTag::W32,
            ReferenceCase::Nu52 => CaseTag::W52,
            ReferenceCase::Nu72 => CaseTag::W72,
            ReferenceCase::Nu3 => CaseTag::W3,
            ReferenceCase::Nu2 => CaseTag::W2,
        }
    }

    pub fn from_case(c: CaseTag) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.case() == c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `|computed - reference| <= tolerance`.
    Near,
    /// `computed < reference`.
    Below,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub case: CaseTag,
    pub quantity: String,
    pub reference: f64,
    pub computed: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub criterion: Criterion,
}

impl Comparison {
    fn near(case: CaseTag, quantity: &str, reference: f64, computed: f64, tolerance: f64) -> Self {
        Comparison {
            case,
            quantity: quantity.into(),
            reference,
            computed,
            abs_diff: (computed - reference).abs(),
            tolerance,
            criterion: Criterion::Near,
        }
    }

    fn below(case: CaseTag, quantity: &str, bound: f64, computed: f64) -> Self {
        Comparison {
            case,
            quantity: quantity.into(),
            reference: bound,
            computed,
            abs_diff: (computed - bound).abs(),
            tolerance: 0.0,
            criterion: Criterion::Below,
        }
    }

    pub fn pass(&self) -> bool {
        match self.criterion {
            Criterion::Near => self.abs_diff <= self.tolerance,
            Criterion::Below => self.computed < self.reference,
        }
    }
}

fn spot(spots: &[HighSpot], kind: SpotKind, near: f64) -> Result<f64> {
    spots
        .iter()
        .filter(|s| s.interior && s.kind == kind)
        .min_by(|a, b| (a.x - near).abs().total_cmp(&(b.x - near).abs()))
        .map(|s| s.x)
        .ok_or(Error::AssemblyFailure(alloc::format!(
            "no interior {kind:?} near {near}"
        )))
}

/// Rows comparing one constructed domain with the reference values.
pub fn reference_rows(ev: &Evaluator, d: &SloshingDomain, tol: f64) -> Result<Vec<Comparison>> {
    let Some(which) = ReferenceCase::from_case(d.case) else {
        return Ok(Vec::new());
    };
    let spots = find_high_spots(ev, d)?;
    let (xl, xr) = d.free_surface;
    let c = d.case;
    let rows = match which {
        ReferenceCase::Nu32 => {
            let xh = spot(&spots, SpotKind::Min, 2.08)?;
            let gap = xr - xh;
            alloc::vec![
                Comparison::near(c, "x0 (zero of v(x,0))", 2.132704, xr, tol),
                Comparison::near(c, "xh (interior minimum of u(x,0))", 2.077836, xh, tol),
                Comparison::near(c, "x0 - xh", 0.054868, gap, tol),
                Comparison::below(c, "(x0 - xh) / x0", 0.03, gap / xr),
            ]
        }
        ReferenceCase::Nu52 => alloc::vec![
            Comparison::near(
                c,
                "interior maximum of u(x,0)",
                1.257429,
                spot(&spots, SpotKind::Max, 1.26)?,
                tol
            ),
            Comparison::near(c, "left end of F (bottom emanation)", 1.249757, xl, tol),
            Comparison::near(
                c,
                "interior minimum of u(x,0)",
                2.503159,
                spot(&spots, SpotKind::Min, 2.5)?,
                tol
            ),
            Comparison::near(c, "right end of F", 2.539769, xr, tol),
        ],
        ReferenceCase::Nu72 => {
            let s2 = spot(&spots, SpotKind::Min, 2.69)?;
            alloc::vec![
                Comparison::near(c, "saddle level", -0.023145, d.level, tol),
                Comparison::near(
                    c,
                    "high spot near left end",
                    1.795807,
                    spot(&spots, SpotKind::Max, 1.8)?,
                    tol
                ),
                Comparison::near(c, "high spot near right end", 2.685549, s2, tol),
                Comparison::near(c, "right end - spot", 0.026076, xr - s2, tol),
            ]
        }
        ReferenceCase::Nu3 => {
            let s2 = spot(&spots, SpotKind::Min, 2.61)?;
            alloc::vec![
                Comparison::near(c, "saddle level", -0.150899, d.level, tol),
                Comparison::near(
                    c,
                    "high spot near left end",
                    1.5715649,
                    spot(&spots, SpotKind::Max, 1.57)?,
                    tol
                ),
                Comparison::near(c, "high spot near right end", 2.6095109, s2, tol),
                Comparison::near(c, "right end - spot", 0.029250, xr - s2, tol),
            ]
        }
        ReferenceCase::Nu2 => alloc::vec![
            Comparison::near(c, "saddle level", -0.185125, d.level, tol),
            Comparison::near(
                c,
                "high spot near left end",
                0.786780,
                spot(&spots, SpotKind::Max, 0.79)?,
                tol
            ),
            Comparison::near(
                c,
                "high spot near right end",
                2.343392,
                spot(&spots, SpotKind::Min, 2.34)?,
                tol
            ),
            Comparison::near(c, "left end of F", 0.774530, xl, tol),
            Comparison::near(c, "right end of F", 2.387143, xr, tol),
        ],
    };
    Ok(rows)
}

/// Build each case with the default configuration and compare.
pub fn reference_report(cases: &[CaseTag], tol: f64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for &c in cases {
        let ev = Evaluator::new(c.mode(), QuadratureConfig::default())?;
        let d = build_domain(&ev, c)?;
        out.extend(reference_rows(&ev, &d, tol)?);
    }
    Ok(out)
}

/// Qualitative features of a constructed domain, with the expected values
/// for the five reference cases.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseFeatures {
    pub case: CaseTag,
    pub interior_spots: usize,
    pub left: Verdict,
    pub right: Verdict,
    /// Smallest distance from an interior spot to an end of `F`, and that
    /// distance as a fraction of `|F|`.
    pub spot_to_end: (f64, f64),
    pub corners: usize,
    pub u_nodal_lines: usize,
    /// Where the nodal line of `u` ends.
    pub nodal_end: Option<EndKind>,
    pub pass: bool,
}

pub fn case_features(ev: &Evaluator, d: &SloshingDomain) -> Result<CaseFeatures> {
    let spots = find_high_spots(ev, d)?;
    let interior: Vec<&HighSpot> = spots.iter().filter(|s| s.interior).collect();
    let (xl, xr) = d.free_surface;
    let dist = interior
        .iter()
        .map(|s| (s.x - xl).min(xr - s.x))
        .fold(f64::INFINITY, f64::min);
    let bulb = check_bulbous(ev, d)?;
    let lines = trace_u_nodal_lines(ev, d)?;
    let nodal_end = lines.first().map(|l| l.ends[1]);
    let mut f = CaseFeatures {
        case: d.case,
        interior_spots: interior.len(),
        left: bulb.left.verdict,
        right: bulb.right.verdict,
        spot_to_end: (dist, dist / d.width()),
        corners: d.corners.len(),
        u_nodal_lines: lines.len(),
        nodal_end,
        pass: true,
    };
    use Verdict::{Bulbous, JohnCompliant};
    let expected = match d.case {
        CaseTag::W32 => Some((1, JohnCompliant, Bulbous, 2, EndKind::OnYAxis)),
        CaseTag::W52 => Some((2, Bulbous, Bulbous, 2, EndKind::OnBottom)),
        CaseTag::W72 | CaseTag::W3 => Some((2, Bulbous, Bulbous, 1, EndKind::OnBottom)),
        CaseTag::W2 => Some((2, Bulbous, Bulbous, 1, EndKind::AtStagnation)),
        _ => None,
    };
    if let Some((n, l, r, corners, end)) = expected {
        f.pass = f.interior_spots == n
            && f.left == l
            && f.right == r
            && f.corners == corners
            && f.u_nodal_lines == 1
            && f.nodal_end == Some(end)
            && f.spot_to_end.1 < CLOSE_FRACTION;
    }
    Ok(f)
}
