use std::path::Path;
use std::process::{Command, Output};

fn momix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("momix-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn graph_build_a1() {
    let out = momix(&["graph", "build", "--type", "A1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "graph");
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["type"], "A1");
}

#[test]
fn bmp_compute_top_of_a2() {
    let d = tmp("bmp");
    let p = d.join("sheaf.json");
    let out = momix(&[
        "bmp",
        "compute",
        "--type",
        "A2",
        "--top",
        "sts",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&p);
    let stalks = v["sheaf"]["stalks"].as_array().unwrap();
    assert_eq!(stalks.len(), 6);
    assert!(stalks
        .iter()
        .all(|s| s["shifts"].as_array().unwrap().len() == 1));
    assert!(d.join("sheaf.stalks.csv").exists());
}

#[test]
fn rouquier_build_has_four_terms() {
    let d = tmp("rouquier");
    let p = d.join("c.json");
    let out = momix(&[
        "rouquier",
        "build",
        "--type",
        "A2",
        "--word",
        "s,t,s",
        "--kind",
        "F",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&p)["complex"]["terms"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_braid_passes() {
    let out = momix(&["verify", "--type", "A2", "--suite", "braid"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout)
        .lines()
        .all(|l| l.starts_with("pass")));
}

#[test]
fn verify_vanishing_a1() {
    assert_eq!(
        momix(&["verify", "--type", "A1", "--suite", "vanishing"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        momix(&["graph", "build", "--type", "X9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        momix(&["bmp", "compute", "--type", "B2", "--field", "rational"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        momix(&["rouquier", "build", "--type", "A2", "--word", "s,s"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        momix(&["verify", "--type", "A1", "--suite", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        momix(&[
            "bmp",
            "compute",
            "--type",
            "B2",
            "--field",
            "quadratic",
            "--d",
            "2",
            "--top",
            "st"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn export_pictures_and_tables() {
    let d = tmp("export");
    let es = d.join("es.json");
    assert!(momix(&[
        "bmp",
        "compute",
        "--type",
        "A1",
        "--top",
        "s",
        "--out",
        es.to_str().unwrap()
    ])
    .status
    .success());
    let out = momix(&["export", es.to_str().unwrap(), "--format", "pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3, "{text}");
    assert!(text.lines().next().unwrap().starts_with("s:"));

    let hom = d.join("hom.json");
    assert!(momix(&[
        "hom",
        "compute",
        "--type",
        "A1",
        "--top",
        "s",
        "--max-degree",
        "6",
        "--out",
        hom.to_str().unwrap()
    ])
    .status
    .success());
    let csv = String::from_utf8(momix(&["export", hom.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(csv, "shift,degree,dim\n0,0,1\n0,2,1\n0,4,1\n0,6,1\n");

    let other = d.join("hom0.json");
    assert!(momix(&[
        "hom",
        "compute",
        "--type",
        "A1",
        "--source",
        "1",
        "--top",
        "s",
        "--out",
        other.to_str().unwrap()
    ])
    .status
    .success());
    let csv = String::from_utf8(momix(&["export", other.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(csv, "shift,degree,dim\n");

    let bad = d.join("bad.json");
    std::fs::write(&bad, "{\"kind\":\"nothing\"}").unwrap();
    assert_eq!(
        momix(&["export", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_deterministic_and_timed() {
    let d = tmp("verify");
    let run = || {
        let out = momix(&[
            "verify",
            "--type",
            "A1",
            "--seed",
            "3",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(d.join("braid.json")).unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let timing = json(&d.join("axioms.timing.json"));
    assert_eq!(timing["config"]["seed"], 3);
    assert!(timing["timing"][0]["millis"].is_u64());
}
