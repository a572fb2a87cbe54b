use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TOY: &str = "\
id,time,status,arm,age
a1,2,1,1,50
a1,5,1,1,50
a1,10,2,1,50
a2,3,1,1,60
a2,8,0,1,60
a3,12,0,1,55
b1,3,1,2,52
b1,6,1,2,52
b1,10,2,2,52
b2,4,1,2,61
b2,8,0,2,61
b3,12,0,2,58
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aumcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, content).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_record(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr holds a JSON error record");
    v["error"].clone()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn estimate_toy() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let v = json(&run(&["estimate", "-i", p(&input), "--tau", "12"]));
    let arm1 = &v["result"][0];
    assert_eq!(arm1["arm"], 1);
    assert!((arm1["theta"].as_f64().unwrap() - 26.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["provenance"]["continuity"], "left-limit");
    assert_eq!(v["provenance"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn estimate_without_events_is_zero() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "none.csv", "id,time,status,arm\ns1,5,0,1\ns2,3,2,1\n");
    let v = json(&run(&["estimate", "-i", p(&input), "--tau", "4"]));
    assert_eq!(v["result"][0]["theta"], 0.0);
    assert_eq!(v["result"].as_array().unwrap().len(), 1);
}

#[test]
fn strict_tau_fails_without_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let out_path = dir.path().join("report.json");
    let out = run(&["estimate", "-i", p(&input), "--tau", "20", "--strict-tau", "--out", p(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["code"], "tau_beyond_follow_up");
    assert!(!out_path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);

    let v = json(&run(&["estimate", "-i", p(&input), "--tau", "20"]));
    assert_eq!(v["warnings"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_toy_and_mirrored() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let v = json(&run(&["compare", "-i", p(&input), "--tau", "12"]));
    assert!((v["result"]["contrast"]["point"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["result"]["ghosh_lin_q"].is_number());

    let arm1: Vec<&str> = TOY.lines().skip(1).filter(|l| l.starts_with('a')).collect();
    let mut mirrored = String::from("id,time,status,arm,age\n");
    for line in &arm1 {
        let f: Vec<&str> = line.split(',').collect();
        mirrored.push_str(&format!("{line}\nm{},{},{},2,{}\n", &f[0][1..], f[1], f[2], f[4]));
    }
    let input = write(&dir, "mirror.csv", &mirrored);
    let v = json(&run(&["compare", "-i", p(&input), "--tau", "12"]));
    assert_eq!(v["result"]["contrast"]["point"], 0.0);
    assert_eq!(v["result"]["contrast"]["p_value"], 1.0);
}

#[test]
fn compare_csv_and_ratio() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let out = run(&["compare", "-i", p(&input), "--tau", "12", "--contrast", "ratio", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tool: aumcf\n"));
    assert!(text.contains("# contrast: ratio\n"));
    let row = text.lines().last().unwrap();
    assert!(row.starts_with("unadjusted,ratio,12,"));
}

#[test]
fn covariates_adjust_and_constant_covariate_is_singular() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let v = json(&run(&["compare", "-i", p(&input), "--tau", "12", "--covariates", "age"]));
    assert!(v["result"]["relative_efficiency"].as_f64().unwrap() >= 1.0);
    assert!(v["result"]["adjusted"]["se"].as_f64().unwrap() <= v["result"]["unadjusted"]["se"].as_f64().unwrap());

    let constant = TOY.replace(",50\n", ",1\n").replace(",60\n", ",1\n").replace(",55\n", ",1\n")
        .replace(",52\n", ",1\n").replace(",61\n", ",1\n").replace(",58\n", ",1\n");
    let input = write(&dir, "const.csv", &constant);
    let out = run(&["compare", "-i", p(&input), "--tau", "12", "--covariates", "age"]);
    assert_eq!(out.status.code(), Some(3));
    let err = error_record(&out);
    assert_eq!(err["code"], "singular_covariance");
    assert!(err["message"].as_str().unwrap().contains("age"));

    let out = run(&["compare", "-i", p(&input), "--tau", "12", "--covariates", "weight"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["code"], "unknown_covariate");
}

#[test]
fn weighted_compare() {
    let dir = TempDir::new().unwrap();
    let typed = "id,time,status,arm,event_type\n\
        a1,2,1,1,1\na1,5,1,1,2\na1,10,2,1,\na2,3,1,1,1\na2,8,0,1,\n\
        b1,3,1,2,2\nb1,9,0,2,\nb2,4,1,2,1\nb2,6,2,2,\n";
    let input = write(&dir, "typed.csv", typed);
    let v = json(&run(&["compare", "-i", p(&input), "--tau", "8", "--weights", "1=1,2=0.5"]));
    assert_eq!(v["result"]["weighted"]["weights"]["2"], 0.5);
    assert_eq!(v["provenance"]["weights"], "1=1,2=0.5");

    let out = run(&["compare", "-i", p(&input), "--tau", "8", "--weights", "1=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["code"], "missing_weight");
    let out = run(&["compare", "-i", p(&input), "--tau", "8", "--weights", "1=-1,2=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["code"], "invalid_weights");
}

#[test]
fn ratio_without_events_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "none.csv", "id,time,status,arm\ns1,5,0,1\ns2,5,2,2\ns3,6,0,2\n");
    let out = run(&["compare", "-i", p(&input), "--tau", "4", "--contrast", "ratio"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["code"], "ratio_undefined");
}

#[test]
fn malformed_input_is_validation_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.csv", "id,time,status,arm\ns1,5,7,1\n");
    let out = run(&["estimate", "-i", p(&input), "--tau", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["estimate", "-i", p(&dir.path().join("missing.csv")), "--tau", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["code"], "io");
}

#[test]
fn curves_toy() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let out = run(&["curves", "-i", p(&input), "--tau", "12", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("1,mcf,")).collect();
    assert_eq!(rows, ["1,mcf,0,0", "1,mcf,2,0.3333333333333333", "1,mcf,3,0.6666666666666666", "1,mcf,5,1", "1,mcf,12,1"]);
    let km: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("2,km,"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(km.windows(2).all(|w| w[0] >= w[1]));
}

const SMOKE: &str = "\
kind = \"icr\"
n_per_arm = 20
tau = 1.0
replicates = 2
seed = 9

[arm1]
event_rate = 1.0
death_rate = 0.2

[arm2]
event_rate = 1.0
death_rate = 0.2
";

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "smoke.toml", SMOKE);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(run(&["simulate", p(&cfg), "--out", p(&a)]).status.success());
    assert!(run(&["simulate", p(&cfg), "--out", p(&b), "--serial"]).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["result"]["methods"][0]["replicates"], 2);
    assert_eq!(v["provenance"]["seed"], "9");

    let out = run(&["simulate", p(&cfg), "--format", "csv", "--seed", "10", "--reps", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# seed: 10\n"));
    assert!(text.contains("method,metric,value,mcse\n"));
    assert!(text.contains("unadjusted,replicates,3,0\n"));
}

#[test]
fn simulate_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.toml", &SMOKE.replace("\"icr\"", "\"weibull\""));
    let out = run(&["simulate", p(&cfg)]);
    assert_eq!(out.status.code(), Some(4));
    let err = error_record(&out);
    assert_eq!(err["code"], "config");
    assert!(err["message"].as_str().unwrap().contains("line 1"));

    let cfg = write(&dir, "tiny.toml", SMOKE);
    let out = run(&["simulate", p(&cfg), "--reps", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", TOY);
    let args = ["compare", "-i", p(&input), "--tau", "12", "--covariates", "age"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
