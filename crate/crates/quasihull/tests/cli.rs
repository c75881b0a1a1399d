use quasihull::cli::{degeneration_study, run, Command, RunOptions};
use quasihull::ads3::{AcausalPolygon, EinPoint};
use quasihull::mobius::CirclePoint;
use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::Command as Process;

fn config(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_quasihull"))
}

fn column(csv: &str, i: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn rhombus_width_is_a_right_angle() {
    let out = run(Command::Width, &config("width_rhombus.json"), &RunOptions::default()).unwrap();
    let lower = out.report["result"]["lower"].as_f64().unwrap();
    assert!((lower - FRAC_PI_2).abs() < 1e-9, "{lower}");
    assert!(out.report["result"]["upper"].as_f64().unwrap() >= lower);
}

#[test]
fn moebius_graph_glues_by_the_identity() {
    let out = run(Command::Gluing, &config("gluing_mobius_graph.json"), &RunOptions::default()).unwrap();
    let mut lines = out.csv.lines();
    assert_eq!(lines.next(), Some("vertex_index,x_plus,x_minus"));
    let mut count = 0;
    for l in lines {
        let cells: Vec<&str> = l.split(',').collect();
        let (a, b) = (cells[1].parse::<f64>().unwrap(), cells[2].parse::<f64>().unwrap());
        assert!(a == b || (a - b).abs() < 1e-12, "{l}");
        count += 1;
    }
    assert_eq!(count, 6);
}

#[test]
fn mess_check_over_seeded_hexagons() {
    let input = json!({ "random": { "count": 100, "min_vertices": 6, "max_vertices": 6 }, "seed": 11 });
    let out = run(Command::MessCheck, &input, &RunOptions::default()).unwrap();
    let r = &out.report["result"];
    assert_eq!(r["count"], 100);
    assert!(r["max_deviation"].as_f64().unwrap() < 1e-8, "{}", r["max_deviation"]);
    assert_eq!(r["pass"], true);
}

#[test]
fn linear_family_widens_toward_a_right_angle() {
    let out = run(Command::DegenerationStudy, &config("degeneration_linear.json"), &RunOptions::default()).unwrap();
    assert_eq!(out.csv.lines().next(), Some("parameter,width,qs_norm_estimate"));
    let w = column(&out.csv, 1);
    assert_eq!(w.len(), 20);
    assert!(w.windows(2).all(|p| p[1] >= p[0]), "{w:?}");
    assert!(*w.last().unwrap() > FRAC_PI_2 - 0.05);
    assert_eq!(out.report["result"]["truncated"], false);
}

#[test]
fn family_reaching_the_rhombus_is_truncated() {
    let input = json!({
        "start": { "points": [[0, 0], [1, 1], ["inf", "inf"], [-1, -1]] },
        "end": { "points": [[0, 0], ["inf", 0], ["inf", "inf"], [0, "inf"]], "achronal": true },
        "steps": 20, "seed": 5
    });
    let out = run(Command::DegenerationStudy, &input, &RunOptions::default()).unwrap();
    assert_eq!(out.report["result"]["truncated"], true);
    assert_eq!(out.report["result"]["rows"].as_array().unwrap().len(), 19);
}

fn polygon(pts: &[(f64, f64)]) -> Vec<EinPoint> {
    pts.iter().map(|&(x, y)| EinPoint::new(CirclePoint::from_real(x), CirclePoint::from_real(y))).collect()
}

#[test]
fn constant_moebius_family_has_zero_width() {
    // y = (2x + 1) / (x + 1)
    let xs = [0.0, 1.0, 2.0, -2.0, -0.5, 5.0];
    let mut pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, (2.0 * x + 1.0) / (x + 1.0))).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let p = polygon(&pts);
    let start = AcausalPolygon::new(p.clone(), [0, 2, 4]).unwrap();
    let study = degeneration_study(&start, &p, 7, None, 3, 500).unwrap();
    assert_eq!(study.rows.len(), 7);
    assert!(study.rows.iter().all(|r| r.width.abs() < 1e-12), "{:?}", study.rows);
    assert!(study.rows.iter().all(|r| (r.qs_norm_estimate - 1.0).abs() < 1e-9));
}

#[test]
fn reversed_family_reverses_the_columns() {
    let a = polygon(&[(0.0, 0.0), (1.0, 0.5), (1.5, 1.0), (-0.5, 1.5)]);
    let b = polygon(&[(0.0, 0.0), (1.0, 0.05), (1.05, 1.0), (-0.05, 1.05)]);
    let fwd = degeneration_study(&AcausalPolygon::new(a.clone(), [0, 1, 2]).unwrap(), &b, 9, None, 4, 500).unwrap();
    let bwd = degeneration_study(&AcausalPolygon::new(b, [0, 1, 2]).unwrap(), &a, 9, None, 4, 500).unwrap();
    for (r, s) in fwd.rows.iter().zip(bwd.rows.iter().rev()) {
        assert!((r.parameter - (1.0 - s.parameter)).abs() < 1e-15);
        assert!((r.width - s.width).abs() < 1e-9, "{} vs {}", r.width, s.width);
        assert!((r.qs_norm_estimate / s.qs_norm_estimate - 1.0).abs() < 1e-9);
    }
}

#[test]
fn reports_are_reproducible_and_carry_a_hash() {
    let input = config("qsnorm_earthquake.json");
    let opts = RunOptions { seed: Some(9), tol: None };
    let a = run(Command::Qsnorm, &input, &opts).unwrap();
    let b = run(Command::Qsnorm, &input, &opts).unwrap();
    assert_eq!(serde_json::to_string(&a.report).unwrap(), serde_json::to_string(&b.report).unwrap());
    assert_eq!(a.csv, b.csv);
    let hash = a.report["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(a.report["version"], env!("CARGO_PKG_VERSION"));
    let c = run(Command::Qsnorm, &input, &RunOptions { seed: Some(10), tol: None }).unwrap();
    assert_ne!(c.report["config_hash"].as_str().unwrap(), hash);
}

#[test]
fn randomized_commands_need_a_seed() {
    let input = json!({ "random": { "count": 2, "min_vertices": 4, "max_vertices": 4 } });
    let err = run(Command::MessCheck, &input, &RunOptions::default()).unwrap_err();
    assert_eq!(err.code(), "SchemaError");
}

#[test]
fn binary_exit_codes() {
    let dir = std::env::temp_dir().join(format!("quasihull-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");

    let ok = bin().args(["width", "--config"]).arg(cfg.join("width_rhombus.json")).arg("--out").arg(&dir).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("width.json")).unwrap()).unwrap();
    assert_eq!(written["command"], "width");
    assert!(std::fs::read_to_string(dir.join("width.csv")).unwrap().starts_with("lower,upper"));

    let bad_json = dir.join("bad.json");
    std::fs::write(&bad_json, "{ \"points\": 3 }").unwrap();
    let schema = bin().args(["width", "--config"]).arg(&bad_json).output().unwrap();
    assert_eq!(schema.status.code(), Some(3));
    let body: Value = serde_json::from_slice(&schema.stdout).unwrap();
    assert_eq!(body["error"], "SchemaError");

    let unknown = bin().args(["frobnicate", "--config"]).arg(&bad_json).output().unwrap();
    assert_eq!(unknown.status.code(), Some(3));

    let causal = dir.join("causal.json");
    std::fs::write(&causal, r#"{ "points": [[0, 0], [1, 2], [2, 1], [3, 3]] }"#).unwrap();
    let domain = bin().args(["width", "--config"]).arg(&causal).output().unwrap();
    assert_eq!(domain.status.code(), Some(2));
    let body: Value = serde_json::from_slice(&domain.stdout).unwrap();
    assert_eq!(body["error"], "NotAcausal");

    let csv = bin().args(["degeneration-study", "--format", "csv", "--jobs", "2", "--config"])
        .arg(cfg.join("degeneration_linear.json"))
        .output()
        .unwrap();
    assert_eq!(csv.status.code(), Some(0));
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("parameter,width,qs_norm_estimate\n"));
    std::fs::remove_dir_all(&dir).ok();
}
