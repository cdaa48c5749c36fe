use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn zhat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhat")).args(args).output().expect("zhat runs")
}

fn stdout(args: &[&str]) -> String {
    let out = zhat(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = zhat(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn compute_sigma237() {
    let g = data("sigma237.plumb.json");
    assert_eq!(
        stdout(&["compute", "--graph", &g, "--order", "12"]),
        "q^(1/2)*(1 - q - q^5 + q^10 - q^11 + O(q^(23/2)))\n"
    );
    assert_eq!(
        stdout(&["compute", "--graph", &g, "--order", "12", "--cross-check"]),
        "q^(1/2)*(1 - q - q^5 + q^10 - q^11 + O(q^(23/2)))\nengines agree to q^12\n"
    );
}

#[test]
fn compute_unknot() {
    let g = data("unknot_m1.plumb.json");
    assert_eq!(stdout(&["compute", "--graph", &g, "--order", "2"]), "q^(-1/2)*(-2 + 2*q + O(q^(5/2)))\n");
}

#[test]
fn reversed_against_surgery() {
    let g = data("sigma237.plumb.json");
    let out = stdout(&["reversed", "--graph", &g, "--order", "12", "--against-surgery"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("q^(-1/2)*(1 + q + q^3 + q^4 + q^5 + 2*q^7 + "), "{out}");
    assert_eq!(lines[1], "match through q^11 (sign -1)");
}

#[test]
fn surgery_reports_guaranteed_order() {
    let out = stdout(&["surgery", "--slope", "-1", "--order", "12"]);
    assert!(out.contains("guaranteed order: q^12\n"), "{out}");
    let knot = data("figure_eight.fk.json");
    assert_eq!(stdout(&["surgery", "--graph", &knot, "--order", "12"]), out);
}

#[test]
fn params_and_falsetheta() {
    let g = data("sigma237.plumb.json");
    let p = stdout(&["params", "--graph", &g]);
    assert!(p.starts_with("m = 42\n"));
    for pair in ["(1, 1)", "(-13, 5)", "(-29, 21)", "(41, 41)"] {
        assert!(p.contains(pair), "{p}");
    }
    assert!(p.contains("d = 41/168\nprefactor exponent = 83/168\n"));
    let f = stdout(&["falsetheta", "--graph", &g, "--order", "4"]);
    assert!(f.contains("alpha(0) = 0\nalpha(1) = (-4)*pi\n"), "{f}");
}

#[test]
fn radial_constant_series() {
    let dir = std::env::temp_dir().join(format!("zhat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("one.json");
    let one = zhat::QSeries::one(zhat::exp(1000, 1));
    std::fs::write(&path, one.to_json().to_string()).unwrap();
    let out = stdout(&["radial", "--series", path.to_str().unwrap(), "--x", "1"]);
    assert!(out.contains("extrapolant: 1.000000000000000000000000+0.000000000000000000000000i"), "{out}");
}

#[test]
fn formats() {
    let g = data("sigma237.plumb.json");
    let json = stdout(&["compute", "--graph", &g, "--order", "12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["series"].is_object());
    let csv = stdout(&["compute", "--graph", &g, "--order", "12", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 6, "{csv}");
    let r = stdout(&["radial", "--graph", &g, "--format", "csv"]);
    assert!(r.starts_with("t,Re,Im,extrapolant,error_estimate\n"));
    let rj: serde_json::Value = serde_json::from_str(&stdout(&["radial", "--graph", &g, "--format", "json"])).unwrap();
    assert!(rj["error_estimate"].is_string());
}

#[test]
fn exit_codes() {
    let g = data("sigma237.plumb.json");
    let unknot = data("unknot_m1.plumb.json");
    let (c, e) = code(&["reversed", "--graph", &unknot]);
    assert_eq!(c, 2);
    assert!(e.starts_with("error[precondition]: three-star four-node unimodular required"), "{e}");
    let (c, e) = code(&["radial", "--graph", &g, "--order", "10"]);
    assert_eq!(c, 2);
    assert!(e.contains("need order >= 621"), "{e}");
    assert_eq!(code(&["compute", "--graph", &g, "--order", "0"]).0, 2);
    assert_eq!(code(&["compute", "--graph", &g, "--precision", "32"]).0, 2);
    assert_eq!(code(&["compute", "--graph", &g, "--jobs", "0"]).0, 2);
    assert_eq!(code(&["reversed", "--graph", &g, "--cone", "1,0;1,3"]).0, 2);
    assert_eq!(code(&["compute", "--graph", "/nonexistent/graph.json"]).0, 4);
    let (c, e) = code(&["compute", "--graph", &unknot, "--cross-check"]);
    assert_eq!(c, 2, "{e}");
}

#[test]
fn mismatch_exits_three() {
    let g = data("sigma237.plumb.json");
    let (c, e) = code(&["reversed", "--graph", &g, "--order", "12", "--against-surgery", "--slope", "-2"]);
    assert_eq!(c, 3);
    assert_eq!(e, "error[mismatch]: surgery and reversed series differ at q^2 (relative)\n");
    let (c, e) = code(&["compute", "--graph", &data("unknot_m1.plumb.json"), "--cross-check"]);
    assert_eq!(c, 2, "{e}");
}
