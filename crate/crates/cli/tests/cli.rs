use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cheeger-atlas"));
    c.env_remove("CHEEGER_ATLAS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cheeger-atlas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn shape_file_feeds_cheeger() {
    let path = scratch("s.json");
    let o = run(&["shape", "--family", "stadium", "--r", "1", "--l", "2", "--res", "4096", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v = json(&run(&["cheeger", "--in", path.to_str().unwrap()]));
    let h = v["h"].as_f64().unwrap();
    assert!((h - 1.439900).abs() < 5e-6, "{h}");
}

#[test]
fn spec_json_input() {
    let path = scratch("spec.json");
    std::fs::write(&path, r#"{"family": "ball", "params": {"radius": 2.0}}"#).unwrap();
    let v = json(&run(&["measure", "--in", path.to_str().unwrap(), "--res", "8192"]));
    assert!((v["inradius"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!(v.get("h").is_none());
}

#[test]
fn square_from_vertices() {
    let path = scratch("square.json");
    std::fs::write(&path, r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
    let v = json(&run(&["cheeger", "--in", path.to_str().unwrap()]));
    let exact = 2.0 + std::f64::consts::PI.sqrt();
    assert!((v["h"].as_f64().unwrap() - exact).abs() < 1e-12);
}

#[test]
fn malformed_input_exits_2() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"vertices\": [[0,0],[1,0]").unwrap();
    let o = run(&["cheeger", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("json"));
    let o = run(&["cheeger", "--in", "/nonexistent/poly.json"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&path, r#"{"vertices": [[0,0],[1,0],[2,0]]}"#).unwrap();
    assert_eq!(run(&["cheeger", "--in", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_prints_grammar() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn bounds_json_and_csv() {
    let v = json(&run(&["bounds", "--family", "two-cup", "--r", "1", "--k", "2", "--res", "8192"]));
    let rows = v["bounds"].as_array().unwrap();
    assert_eq!(rows.len(), 45);
    let hdr = rows.iter().find(|r| r["id"] == "HDR_UP").unwrap();
    assert!(hdr["slack"].as_f64().unwrap().abs() < 1e-6);
    let o = run(&["bounds", "--family", "two-cup", "--r", "1", "--k", "2", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("id,direction,condition,formula_id,value,slack\n"));
    assert_eq!(text.lines().count(), 46);
    assert_eq!(run(&["bounds", "--family", "ball", "--radius", "1", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn sample_csv_shape() {
    let o = run(&["sample", "--samples", "20", "--seed", "3", "--triplet", "rhr", "--normalize", "inradius"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,seed,n,A,P,r,R,d,w,h,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let r: f64 = cols[5].parse().unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["sample", "--samples", "50", "--seed", "11"];
    let one = bin().args(args).env("CHEEGER_ATLAS_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("CHEEGER_ATLAS_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = bin().args(args).env("CHEEGER_ATLAS_THREADS", "-2").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn diagram_svg_and_csv() {
    let o = run(&["diagram", "--triplet", "phr", "--grid", "32", "--samples", "10", "--format", "svg"]);
    assert!(o.status.success());
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.contains("<svg") && svg.contains("<polyline") && svg.contains("<circle"));
    let o = run(&["diagram", "--triplet", "hwd", "--grid", "16", "--format", "csv"]);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("x,y,provenance\n"));
    assert!(csv.contains("lower:") && csv.contains("upper:"));
    assert_eq!(run(&["diagram", "--triplet", "phr", "--x-min", "1"]).status.code(), Some(2));
}

#[test]
fn verify_small_run() {
    let v = json(&run(&["verify", "--samples", "1", "--seed", "5"]));
    assert_eq!(v["schema"], "cheeger-atlas/verify/1");
    assert_eq!(v["passed"], true);
    let evaluated = v["bounds"].as_array().unwrap().iter().filter(|b| b["evaluated"] == 1).count();
    assert!(evaluated >= 30, "{evaluated}");
    assert_eq!(run(&["verify", "--samples", "0"]).status.code(), Some(2));
}
