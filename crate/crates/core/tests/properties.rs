use proptest::prelude::*;
use sloshspot_core::geometry::{high_spots_on, surface_zeros, trace_level_curve, LevelField, TraceOptions, LEVEL_TOL};
use sloshspot_core::kernel::{Evaluator, Family, Mode, Point2, QuadratureConfig};

const PI: f64 = std::f64::consts::PI;

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![
        (0u32..4).prop_map(|k| Mode::new(k as f64 + 0.5, Family::Sum).unwrap()),
        (1u32..5).prop_map(|k| Mode::new(k as f64, Family::Diff).unwrap()),
    ]
}

fn ev(m: Mode) -> Evaluator {
    Evaluator::new(m, QuadratureConfig::default()).unwrap()
}

fn interior() -> impl Strategy<Value = Point2> {
    (-6.0..6.0f64, -5.0..-0.02f64).prop_map(|(x, y)| Point2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parity(m in mode(), p in interior()) {
        let e = ev(m);
        let q = Point2::new(-p.x, p.y);
        let (a, b) = (e.value(p).unwrap(), e.value(q).unwrap());
        match m.family() {
            Family::Sum => {
                prop_assert!((a.re - b.re).abs() <= 1e-11 * (1.0 + a.re.abs()));
                prop_assert!((a.im + b.im).abs() <= 1e-11 * (1.0 + a.im.abs()));
            }
            Family::Diff => {
                prop_assert!((a.re + b.re).abs() <= 1e-11 * (1.0 + a.re.abs()));
                prop_assert!((a.im - b.im).abs() <= 1e-11 * (1.0 + a.im.abs()));
            }
        }
    }

    #[test]
    fn cauchy_riemann(m in mode(), p in interior()) {
        let e = ev(m);
        let h = 1e-5;
        let at = |dx: f64, dy: f64| e.value(Point2::new(p.x + dx, p.y + dy)).unwrap();
        let (ux, vx) = { let d = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h); (d.re, d.im) };
        let (uy, vy) = { let d = (at(0.0, h) - at(0.0, -h)) / (2.0 * h); (d.re, d.im) };
        let scale = 1.0 + e.grad_v(p).unwrap().norm();
        prop_assert!((ux - vy).abs() + (uy + vx).abs() < 1e-6 * scale);
        let (gu, gv) = (e.grad_u(p).unwrap(), e.grad_v(p).unwrap());
        prop_assert!((gu.dx - gv.dy).abs() + (gu.dy + gv.dx).abs() < 1e-12 * scale);
    }

    #[test]
    fn harmonic(m in mode(), p in interior()) {
        let e = ev(m);
        let h = 1e-3;
        let at = |dx: f64, dy: f64| e.value(Point2::new(p.x + dx, p.y + dy)).unwrap();
        let lap = (at(h, 0.0) + at(-h, 0.0) + at(0.0, h) + at(0.0, -h) - at(0.0, 0.0) * 4.0) / (h * h);
        let f = at(0.0, 0.0);
        let d2 = e.hessian_v(p).unwrap();
        // the five-point stencil error is h^2/12 times fourth derivatives
        let bound = 1e-4 * (f.re.abs().max(f.im.abs()) + d2.xx.abs() + d2.xy.abs());
        prop_assert!(lap.re.abs() < bound && lap.im.abs() < bound, "{lap} vs {bound}");
        prop_assert!(d2.trace().abs() < 1e-10 * (1.0 + d2.xx.abs()));
    }

    #[test]
    fn pure(m in mode(), p in interior()) {
        let a = ev(m).jet(p, 2).unwrap();
        let b = ev(m).jet(p, 2).unwrap();
        prop_assert_eq!(a.f.re.to_bits(), b.f.re.to_bits());
        prop_assert_eq!(a.f.im.to_bits(), b.f.im.to_bits());
        prop_assert_eq!(a.d2f.re.to_bits(), b.d2f.re.to_bits());
        prop_assert_eq!(a.d2f.im.to_bits(), b.d2f.im.to_bits());
    }

    #[test]
    fn surface_condition(m in mode(), x in -3.09..3.09f64) {
        let e = ev(m);
        let j = e.trace_jet(x, 1).unwrap();
        prop_assert!((j.grad_u().dy - m.nu() * j.u()).abs() < 1e-8 * (1.0 + j.u().abs()));
    }

    #[test]
    fn split_form(k in 0u32..4, x in -3.0..3.0f64, y in -3.0..-0.01f64) {
        let e = ev(Mode::new(k as f64 + 0.5, Family::Sum).unwrap());
        let a = e.v(Point2::new(x, y)).unwrap();
        let b = e.v_split(x, y).unwrap();
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn level_curves_stay_on_level(c in -6.0..-0.3f64) {
        let e = ev(Mode::new(1.5, Family::Sum).unwrap());
        let zs = surface_zeros(&e, c, 0.001, 2.13, 500).unwrap();
        prop_assert_eq!(zs.len(), 2);
        let curve = trace_level_curve(&e, LevelField::V, Point2::new(zs[1], 0.0), c, (0.0, -1.0), &TraceOptions::default()).unwrap();
        prop_assert!(curve.max_residual <= LEVEL_TOL);
        for p in curve.vertices.iter().step_by(5) {
            prop_assert!((e.v(*p).unwrap() - c).abs() <= LEVEL_TOL);
        }
        for w in curve.vertices.windows(2) {
            let h = w[0].dist(w[1]);
            prop_assert!((1e-4..=5e-2).contains(&h), "{}", h);
        }
    }

    #[test]
    fn spots_are_certified(m in mode(), a in 0.05..1.0f64, b in 1.5..3.0f64) {
        let e = ev(m);
        for s in high_spots_on(&e, a, b).unwrap().iter().filter(|s| s.interior) {
            prop_assert!(s.bracket.1 - s.bracket.0 <= 1e-8);
            prop_assert!(s.bracket.0 <= s.x && s.x <= s.bracket.1);
            let ux = |x: f64| e.trace_jet(x, 1).unwrap().df.re;
            prop_assert!(ux(s.bracket.0) * ux(s.bracket.1) <= 0.0);
        }
    }
}

#[test]
fn split_form_on_reference_grid() {
    for k in 0..3 {
        let e = ev(Mode::new(k as f64 + 0.5, Family::Sum).unwrap());
        for i in 0..20 {
            for j in 0..20 {
                let x = PI * (i as f64 + 0.5) / 20.0;
                let y = -2.0 * (j as f64 + 0.5) / 20.0;
                let a = e.v(Point2::new(x, y)).unwrap();
                assert!((a - e.v_split(x, y).unwrap()).abs() < 1e-8, "({x}, {y})");
            }
        }
    }
}
