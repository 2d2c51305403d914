use sloshspot_core::geometry::{build_domain, CaseTag, SloshingDomain};
use sloshspot_core::kernel::{Evaluator, Point2, QuadratureConfig};
use sloshspot_core::verify::*;
use sloshspot_core::Result;

const REFERENCE: [CaseTag; 5] = [CaseTag::W32, CaseTag::W52, CaseTag::W72, CaseTag::W3, CaseTag::W2];

fn build(case: CaseTag) -> (Evaluator, SloshingDomain) {
    let ev = Evaluator::new(case.mode(), QuadratureConfig::default()).unwrap();
    let d = build_domain(&ev, case).unwrap();
    (ev, d)
}

fn all_checks<S: FieldSampler>(s: &S, d: &SloshingDomain) -> Vec<ResidualReport> {
    let [lu, lv] = residual_laplace_at(s, &domain_laplace_points(d, 30, 1e-2));
    vec![
        lu,
        lv,
        residual_free_surface(s, &free_surface_points(d, 40)),
        residual_bottom(s, d),
        check_orthogonality(s, d),
        cauchy_riemann_in_domain(s, d, 80),
    ]
}

#[test]
fn residuals_pass_on_reference_domains() {
    for case in REFERENCE.into_iter().chain([CaseTag::W52Companion]) {
        let (ev, d) = build(case);
        for r in all_checks(&ev, &d) {
            assert!(r.pass, "{case:?}: {r}");
            assert!(r.sample_count > 0);
        }
    }
}

#[test]
fn perturbed_fields_fail() {
    let (ev, d) = build(CaseTag::W32);
    // a non-harmonic bump in u breaks Laplace, the surface condition and Cauchy-Riemann
    let bump_u = Perturbed {
        inner: &ev,
        delta: |p: Point2| (1e-3 * p.x * p.x, 0.0),
    };
    let r = all_checks(&bump_u, &d);
    for name in ["laplace_u", "free_surface", "cauchy_riemann", "orthogonality"] {
        let rep = r.iter().find(|r| r.check_name == name).unwrap();
        assert!(!rep.pass, "{rep}");
    }
    // shifting v off the level fails the bottom check
    let shift_v = Perturbed {
        inner: &ev,
        delta: |p: Point2| (0.0, 1e-6 * (1.0 + p.y * p.y)),
    };
    assert!(!residual_bottom(&shift_v, &d).pass);
    let bump_v = Perturbed {
        inner: &ev,
        delta: |p: Point2| (0.0, 1e-3 * p.y * p.y),
    };
    let [_, lv] = residual_laplace_at(&bump_v, &domain_laplace_points(&d, 20, 1e-2));
    assert!(!lv.pass);
}

#[test]
fn sampler_errors_never_pass() {
    struct Failing<'a>(&'a Evaluator);
    impl FieldSampler for Failing<'_> {
        fn nu(&self) -> f64 {
            self.0.nu()
        }
        fn uv(&self, p: Point2) -> Result<(f64, f64)> {
            if p.x > 1.0 {
                Err(sloshspot_core::Error::OutOfRange { x: p.x, y: p.y })
            } else {
                self.0.uv(p)
            }
        }
    }
    let (ev, d) = build(CaseTag::W32);
    for r in all_checks(&Failing(&ev), &d) {
        assert!(!r.pass, "{r}");
    }
}

#[test]
fn nodal_structure_holds() {
    for case in REFERENCE {
        let (ev, d) = build(case);
        let n = nodal_structure_check(&ev, &d).unwrap();
        assert_eq!(n.u_nodal_lines, 1, "{case:?}");
        assert_eq!(n.sign_violations, 0, "{case:?}");
        assert_eq!(n.trace_extrema, 1, "{case:?}");
        assert!(n.report().pass);
    }
}

#[test]
fn surface_identities() {
    let ev = Evaluator::new(CaseTag::W32.mode(), QuadratureConfig::default()).unwrap();
    let a = vy_identity(&ev).unwrap();
    assert!(a.diff() < 1e-7, "{a:?}");
    let b = slope_identity(&ev).unwrap();
    assert!(b.diff() < 1e-7, "{b:?}");
    assert!(b.lhs < 0.0);
    let ev = Evaluator::new(CaseTag::W2.mode(), QuadratureConfig::default()).unwrap();
    assert!(vy_identity(&ev).is_err());
}

#[test]
fn reference_report_rows() {
    let rows = reference_report(&REFERENCE, REFERENCE_TOL).unwrap();
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert!(r.pass(), "{r:?}");
    }
    let w72 = reference_report(&[CaseTag::W72], REFERENCE_TOL).unwrap();
    assert_eq!(w72.len(), 4);
    // the printed values are rounded, so a tiny tolerance must fail somewhere
    let tight = reference_report(&REFERENCE, 1e-9).unwrap();
    assert!(tight.iter().any(|r| !r.pass()));
}

#[test]
fn features_of_reference_cases() {
    for case in REFERENCE {
        let (ev, d) = build(case);
        let f = case_features(&ev, &d).unwrap();
        assert!(f.pass, "{f:?}");
    }
    let (ev, d) = build(CaseTag::W52);
    let f = case_features(&ev, &d).unwrap();
    assert_eq!(f.interior_spots, 2);
    assert!(f.spot_to_end.1 < 0.03);
}

#[test]
fn laplace_grid_on_half_plane() {
    let ev = Evaluator::new(CaseTag::W72.mode(), QuadratureConfig::default()).unwrap();
    let g = GridSpec {
        x0: -2.5,
        x1: 2.5,
        y0: -3.0,
        y1: -0.2,
        nx: 9,
        ny: 7,
    };
    assert_eq!(g.points().len(), 63);
    let [lu, lv] = residual_laplace(&ev, &g);
    assert!(lu.pass && lv.pass, "{lu}\n{lv}");
}
