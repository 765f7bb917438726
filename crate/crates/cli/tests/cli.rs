use std::path::PathBuf;
use std::process::{Command, Output};

use kplanar_core::generators::convex_kn;
use kplanar_core::svg::parse_rendered;
use kplanar_core::Drawing;
use serde_json::Value;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("kplanar-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }

    fn drawing(&self, name: &str, d: &Drawing) -> String {
        let p = self.path(name);
        std::fs::write(&p, d.to_json()).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kplanar")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn gen_convex_k5_has_five_crossings() {
    let out = run(&["gen", "--family", "convex-kn", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["version"], "kplanar/1");
    assert_eq!(v["command"], "gen");
    assert_eq!(v["outputs"]["crossings"], 5);
    assert_eq!(v["outputs"]["m"], 10);
}

#[test]
fn bounds_worked_example() {
    let out = run(&["bounds", "--n", "10", "--m", "100", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("344.828"), "{table}");
    assert!(table.contains("2302.59"), "{table}");

    let v = json(&run(&["bounds", "--n", "10", "--m", "100", "--eps", "0.1", "--json"]));
    let text = v["outputs"].to_string();
    assert!(text.contains("344.827"), "{text}");
}

#[test]
fn oracle_finds_crossing_free_labeling_of_k4() {
    let s = Scratch::new("oracle");
    let k4 = s.drawing("k4.json", &convex_kn(4).unwrap());
    let v = json(&run(&["oracle", &k4, "--mode", "labeling"]));
    assert_eq!(v["outputs"]["objective"], 0);
    let v = json(&run(&["oracle", &k4, "--mode", "expectation", "--weights", "2/3,1/3"]));
    assert_eq!(v["outputs"]["expectation"]["num"], 11);
    assert_eq!(v["outputs"]["expectation"]["den"], 27);
}

#[test]
fn k20_construction_certifies() {
    let s = Scratch::new("k20");
    let k20 = s.drawing("k20.json", &convex_kn(20).unwrap());
    let out = run(&["decompose", &k20, "--eps", "0.1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let dec = &v["outputs"]["decomposition"];
    assert_eq!(dec["certified"], true);
    assert!(dec["max_load"].as_f64().unwrap() <= dec["thresholds"]["max_load"].as_f64().unwrap());
    assert_eq!(v["seed"], 1);
}

#[test]
fn uncertified_run_exits_two_and_still_reports() {
    let s = Scratch::new("uncert");
    let k8 = s.drawing("k8.json", &convex_kn(8).unwrap());
    let found = (0..500).find_map(|seed| {
        let seed = seed.to_string();
        let out = run(&["decompose", &k8, "--eps", "0.01", "--budget", "1", "--seed", &seed]);
        (out.status.code() == Some(2)).then_some(out)
    });
    let out = found.expect("some single-round run misses the threshold");
    assert_eq!(json(&out)["outputs"]["decomposition"]["certified"], false);
}

#[test]
fn errors_exit_one_and_name_the_problem() {
    let s = Scratch::new("errors");
    let bad = s.path("bad.json");
    std::fs::write(&bad, r#"{"format": "geometric", "n": 3, "edges": [[0, 1]]}"#).unwrap();
    let out = run(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown field `n`"), "{err}");
    assert_eq!(err.matches("unknown field").count(), 1, "{err}");

    let out = run(&["analyze", &s.path("missing.json")]);
    assert_eq!(out.status.code(), Some(1));

    let k4 = s.drawing("k4.json", &convex_kn(4).unwrap());
    let out = run(&["decompose", &k4, "--eps=-1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["decompose", &k4, "--mode", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn coloring_svg_has_crossing_free_panels() {
    let s = Scratch::new("coloring");
    let k6 = s.drawing("k6.json", &convex_kn(6).unwrap());
    let svg_path = s.path("k6.svg");
    let out = run(&["decompose", &k6, "--mode", "coloring", "--svg", &svg_path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["decomposition"]["k"], 3);
    assert_eq!(v["outputs"]["svg"]["recount"]["recounted"], serde_json::json!([0, 0, 0]));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<g data-plane=").count(), 3);
    assert_eq!(parse_rendered(&svg).unwrap().len(), 15);
}

#[test]
fn single_plane_svg_keeps_input_coordinates() {
    let s = Scratch::new("k1");
    let d = convex_kn(7).unwrap();
    let path = s.drawing("k7.json", &d);
    let svg_path = s.path("k7.svg");
    let out = run(&["decompose", &path, "--k", "1", "--weights", "uniform", "--svg", &svg_path]);
    assert!(matches!(out.status.code(), Some(0) | Some(2)));
    let edges = parse_rendered(&std::fs::read_to_string(&svg_path).unwrap()).unwrap();
    let coords = d.coords().unwrap();
    assert_eq!(edges.len(), d.graph().m());
    for e in edges {
        assert_eq!(e.plane, 0);
        assert_eq!((e.from, e.to), (coords[e.u], coords[e.v]));
    }
}

#[test]
fn montecarlo_matches_exact_mean() {
    let s = Scratch::new("mc");
    let k6 = s.drawing("k6.json", &convex_kn(6).unwrap());
    let v = json(&run(&["montecarlo", &k6, "--weights", "uniform", "--trials", "20000", "--seed", "3"]));
    let o = &v["outputs"];
    assert_eq!((&o["exact_mean"]["num"], &o["exact_mean"]["den"]), (&Value::from(45), &Value::from(8)));
    assert!(o["z_score"].as_f64().unwrap().abs() <= 4.0);
}

#[test]
fn analyze_table_and_json_agree() {
    let s = Scratch::new("analyze");
    let k6 = s.drawing("k6.json", &convex_kn(6).unwrap());
    let table = String::from_utf8(run(&["analyze", &k6]).stdout).unwrap();
    assert!(table.contains("15"), "{table}");
    let v = json(&run(&["analyze", &k6, "--json"]));
    assert_eq!(v["outputs"]["stats"]["crossings"], 15);
    assert_eq!(v["outputs"]["stats"]["lcr"], 4);
}
