use sloshspot::commands::cmd_case;
use sloshspot::commands::Format;
use sloshspot::figure::{figure_data, FigureId};
use sloshspot::output::{domain_doc, to_json};
use sloshspot::report::build_report;
use sloshspot_core::geometry::{build_domain, find_high_spots, CaseTag};
use sloshspot_core::kernel::{Evaluator, QuadratureConfig};

#[test]
fn csv_rows_round_trip_to_twelve_digits() {
    let dir = tempfile::tempdir().unwrap();
    let case = cmd_case(
        CaseTag::W52,
        None,
        dir.path(),
        QuadratureConfig::default(),
        &[Format::Csv],
    )
    .unwrap();
    let text = std::fs::read_to_string(case.join("bottom.csv")).unwrap();
    assert!(text.starts_with("x,y\n") && text.ends_with('\n') && !text.contains('\r'));
    let ev = Evaluator::new(CaseTag::W52.mode(), QuadratureConfig::default()).unwrap();
    let d = build_domain(&ev, CaseTag::W52).unwrap();
    let verts: Vec<_> = d.bottom_vertices().collect();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), verts.len());
    for (r, p) in rows.iter().zip(verts) {
        assert!((r.0 - p.x).abs() <= 1e-11 * p.x.abs().max(1e-300));
        assert!((r.1 - p.y).abs() <= 1e-11 * p.y.abs().max(1e-300));
    }
    assert!(!case.join("domain.json").exists());
}

#[test]
fn figure_output_is_reproducible() {
    let a = figure_data(FigureId::Fig3, QuadratureConfig::default()).unwrap();
    let b = figure_data(FigureId::Fig3, QuadratureConfig::default()).unwrap();
    assert_eq!(a.svg(), b.svg());
    assert_eq!(a.csv_files(), b.csv_files());
    assert!(!a.svg().contains("-0.00"));
}

#[test]
fn domain_json_is_reproducible() {
    let ev = Evaluator::new(CaseTag::W2.mode(), QuadratureConfig::default()).unwrap();
    let d1 = build_domain(&ev, CaseTag::W2).unwrap();
    let d2 = build_domain(&ev, CaseTag::W2).unwrap();
    let s1 = to_json(&domain_doc(&d1, &find_high_spots(&ev, &d1).unwrap()));
    let s2 = to_json(&domain_doc(&d2, &find_high_spots(&ev, &d2).unwrap()));
    assert_eq!(s1, s2);
}

#[test]
fn report_is_ordered_and_independent_of_jobs() {
    let cases = [CaseTag::W2, CaseTag::W32, CaseTag::W72];
    let a = build_report(&cases, 2e-5, QuadratureConfig::default(), 1).unwrap();
    let b = build_report(&cases, 2e-5, QuadratureConfig::default(), 3).unwrap();
    assert_eq!(to_json(&a), to_json(&b));
    let order: Vec<&str> = a.features.iter().map(|f| f.case).collect();
    assert_eq!(order, ["w2", "w32", "w72"]);
    let w2: Vec<&str> = a
        .checks
        .iter()
        .filter(|c| c.case == "w2")
        .map(|c| c.check.as_str())
        .collect();
    let mut sorted = w2.clone();
    sorted.sort();
    assert_eq!(w2, sorted);
    assert!(a.all_pass());
    assert_eq!(a.rows.len(), 13);
}
