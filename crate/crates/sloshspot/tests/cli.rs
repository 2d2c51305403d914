use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sloshspot"));
    c.args(args).env_remove("SLOSHSPOT_OUT");
    if let Some(o) = out {
        c.arg("--out").arg(o);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn field(out: &str, name: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{name} = ")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn eval_prints_values() {
    let o = run(
        &["eval", "--nu", "1.5", "--family", "sum", "--x", "1", "--y", "-0.5"],
        None,
    );
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((field(&s, "u") - 0.227766947637).abs() < 1e-12);
    assert!((field(&s, "v") + 3.0944159904).abs() < 1e-10);
    for name in ["v_x", "v_y"] {
        assert!(field(&s, name).is_finite());
    }
}

#[test]
fn eval_on_axis_gives_zero_stream_function() {
    let o = run(
        &["eval", "--nu", "1.5", "--family", "sum", "--x", "0", "--y", "-2"],
        None,
    );
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "v"), 0.0);
}

#[test]
fn eval_rejects_singular_mode() {
    let o = run(
        &["eval", "--nu", "1.7", "--family", "sum", "--x", "1", "--y", "-1"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-removable singularity"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(
            &["eval", "--nu", "1.5", "--family", "odd", "--x", "1", "--y", "-1"],
            None
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["case", "w9"], None).status.code(), Some(2));
    assert_eq!(run(&["figure", "fig9"], None).status.code(), Some(2));
    assert_eq!(run(&["report", "--abs-tol", "-1"], None).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn case_w32_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["case", "w32"], Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let case = dir.path().join("w32");
    for f in ["domain.json", "bottom.csv", "trace.csv", "highspots.json"] {
        assert!(case.join(f).is_file(), "{f}");
    }
    let spots = json(&case.join("highspots.json"));
    let interior: Vec<_> = spots["high_spots"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["interior"] == true)
        .collect();
    assert_eq!(interior.len(), 1);
    assert_eq!(interior[0]["kind"], "min");
    assert!((interior[0]["x"].as_f64().unwrap() - 2.077836).abs() < 2e-5);

    let d = json(&case.join("domain.json"));
    for key in [
        "schema_version",
        "mode",
        "free_surface",
        "bottom",
        "corners",
        "high_spots",
    ] {
        assert!(d.get(key).is_some(), "{key}");
    }
    assert_eq!(d["mode"]["family"], "sum");
    assert_eq!(d["mode"]["nu"], 1.5);
    let fs_ = d["free_surface"].as_array().unwrap();
    assert_eq!(fs_[0].as_f64(), Some(0.0));
    assert!((fs_[1].as_f64().unwrap() - 2.132704).abs() < 2e-5);
    let v = &d["bottom"][0]["vertices"][0];
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn case_w2_has_two_interior_spots() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["case", "--case", "w2"], Some(dir.path())).status.success());
    let spots = json(&dir.path().join("w2/highspots.json"));
    let xs: Vec<f64> = spots["high_spots"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["interior"] == true)
        .map(|s| s["x"].as_f64().unwrap())
        .collect();
    assert_eq!(xs.len(), 2);
    assert!((xs[0] - 0.786780).abs() < 2e-5);
    assert!((xs[1] - 2.343392).abs() < 2e-5);
}

#[test]
fn case_overwrite_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["case", "w72"], Some(dir.path())).status.success());
    let first = fs::read(dir.path().join("w72/bottom.csv")).unwrap();
    assert!(run(&["case", "w72"], Some(dir.path())).status.success());
    assert_eq!(first, fs::read(dir.path().join("w72/bottom.csv")).unwrap());
}

#[test]
fn smooth_variant_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["case", "w32", "--smooth-c", "0.1"], Some(dir.path()));
    assert!(o.status.success());
    let d = json(&dir.path().join("smooth_c0.1/domain.json"));
    assert_eq!(d["case"], "smooth");
    assert!((d["level"].as_f64().unwrap() + 0.1).abs() < 1e-15);
    assert_eq!(d["corners"].as_array().unwrap().len(), 0);
    assert_eq!(
        run(&["case", "w32", "--smooth-c", "50"], Some(dir.path()))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sloshspot"))
        .args(["case", "w3"])
        .env("SLOSHSPOT_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("w3/domain.json").is_file());
}

#[test]
fn figures_have_expected_strokes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "fig1,fig2,fig4"], Some(dir.path()));
    assert!(o.status.success());
    let fig1 = fs::read_to_string(dir.path().join("fig1.svg")).unwrap();
    assert!(fig1.contains("stroke-dasharray=\"6 4\""));
    assert!(fig1.contains("<polyline") && fig1.contains("viewBox=\"0 0 720 760\""));
    let fig4 = fs::read_to_string(dir.path().join("fig4.svg")).unwrap();
    assert!(fig4.contains("stroke-dasharray=\"1.5 3\""));
    let fig2 = fs::read_to_string(dir.path().join("fig2.svg")).unwrap();
    assert!(fig2.matches("marker-end=\"url(#arrowhead)\"").count() >= 2);
    let trace = fs::read_to_string(dir.path().join("fig1_trace_u.csv")).unwrap();
    let xs: Vec<f64> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| ((w[1] - w[0]) - 1e-3).abs() < 1e-9));
}

#[test]
fn report_subset_and_tolerance() {
    let o = run(&["report", "--cases", "w72"], None);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("4 comparison rows; 0 failures"));

    let o = run(&["report", "--cases", "w32", "--tolerance", "1e-9"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL w32"));

    let o = run(&["report", "--cases", "w52", "--format", "json"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn full_report_passes() {
    let o = run(&["report", "--jobs", "2"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("21 comparison rows; 0 failures"));
}
