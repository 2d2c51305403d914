//! JSON documents and two-column CSV files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sloshspot_core::geometry::{HighSpot, SloshingDomain, SpotKind};
use sloshspot_core::kernel::Point2;

use crate::numfmt::fmt_g;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ModeDoc {
    pub nu: f64,
    pub family: &'static str,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BottomDoc {
    pub level: f64,
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpotDoc {
    pub x: f64,
    pub kind: &'static str,
    pub interior: bool,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DomainDoc {
    pub schema_version: u32,
    pub case: &'static str,
    pub mode: ModeDoc,
    pub level: f64,
    pub free_surface: [f64; 2],
    pub bottom: Vec<BottomDoc>,
    pub corners: Vec<[f64; 2]>,
    pub high_spots: Vec<SpotDoc>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpotsDoc {
    pub schema_version: u32,
    pub case: &'static str,
    pub mode: ModeDoc,
    pub free_surface: [f64; 2],
    pub high_spots: Vec<SpotDoc>,
}

pub fn kind_name(k: SpotKind) -> &'static str {
    match k {
        SpotKind::Max => "max",
        SpotKind::Min => "min",
        SpotKind::Degenerate => "degenerate",
    }
}

fn xy(p: &Point2) -> [f64; 2] {
    [p.x, p.y]
}

pub fn spot_docs(spots: &[HighSpot]) -> Vec<SpotDoc> {
    spots
        .iter()
        .map(|s| SpotDoc {
            x: s.x,
            kind: kind_name(s.kind),
            interior: s.interior,
            value: s.trace_value,
        })
        .collect()
}

fn mode_doc(d: &SloshingDomain) -> ModeDoc {
    ModeDoc {
        nu: d.nu(),
        family: d.mode.family().name(),
    }
}

pub fn domain_doc(d: &SloshingDomain, spots: &[HighSpot]) -> DomainDoc {
    DomainDoc {
        schema_version: SCHEMA_VERSION,
        case: d.case.name(),
        mode: mode_doc(d),
        level: d.level,
        free_surface: [d.free_surface.0, d.free_surface.1],
        bottom: d
            .bottom
            .iter()
            .map(|c| BottomDoc {
                level: c.level,
                vertices: c.vertices.iter().map(xy).collect(),
            })
            .collect(),
        corners: d.corners.iter().map(xy).collect(),
        high_spots: spot_docs(spots),
    }
}

pub fn spots_doc(d: &SloshingDomain, spots: &[HighSpot]) -> SpotsDoc {
    SpotsDoc {
        schema_version: SCHEMA_VERSION,
        case: d.case.name(),
        mode: mode_doc(d),
        free_surface: [d.free_surface.0, d.free_surface.1],
        high_spots: spot_docs(spots),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// `x,y` header, one row per point, 12 significant digits, LF endings.
pub fn xy_csv<I: IntoIterator<Item = (f64, f64)>>(rows: I) -> String {
    let mut s = String::from("x,y\n");
    for (x, y) in rows {
        let _ = writeln!(s, "{},{}", fmt_g(x), fmt_g(y));
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = xy_csv([(0.1, -2.0), (1.0 / 3.0, 1e-9)]);
        assert_eq!(s, "x,y\n0.1,-2\n0.333333333333,1e-09\n");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn json_is_stable() {
        let d = SpotDoc {
            x: 2.0,
            kind: "min",
            interior: true,
            value: -0.5,
        };
        let a = to_json(&d);
        assert_eq!(a, to_json(&d));
        assert_eq!(
            a,
            "{\n  \"x\": 2.0,\n  \"kind\": \"min\",\n  \"interior\": true,\n  \"value\": -0.5\n}\n"
        );
    }
}
