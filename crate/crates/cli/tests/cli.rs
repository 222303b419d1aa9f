use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use dualram::catalog::{bundled_dir, Catalog};
use dualram_core::ramsey::{check_arrow, ArrowCertificate, Category, Coloring, Direction, Object, SearchConfig, VerdictKind};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dualram"));
    cmd.env_remove("RAMSEY_WORKBENCH_CATALOG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), value)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// A copy of the bundled catalog that tests may extend.
fn catalog_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["signatures", "algebras", "varieties", "ordered"] {
        std::fs::create_dir(dir.path().join(sub)).unwrap();
        for entry in std::fs::read_dir(bundled_dir().join(sub)).unwrap() {
            let p = entry.unwrap().path();
            std::fs::copy(&p, dir.path().join(sub).join(p.file_name().unwrap())).unwrap();
        }
    }
    dir
}

#[test]
fn enumerate_counts() {
    let (code, v) = json(&["enumerate", "rigid-surjections", "--n", "3", "--k", "2"]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(3)));
    let (_, v) = json(&["enumerate", "terms", "--sig", "g2", "--vars", "2", "--max-shape-len", "6"]);
    assert_eq!(v["count"], 6);
    assert_eq!(v["entries"][2]["rendered"], "g(x1,x1)");
    let (_, v) = json(&["enumerate", "epis", "--from", "sl4", "--to", "sl2"]);
    assert!(v["count"].as_u64().unwrap() > 0);
    let (_, v) = json(&["enumerate", "rigid-epis", "--from", "sl3-up", "--to", "sl2-up"]);
    assert_eq!(v["entries"][0]["table"], serde_json::json!([0, 0, 1]));
    let (_, v) = json(&["enumerate", "homs", "--from", "z2", "--to", "klein4"]);
    assert_eq!(v["count"], 4);
}

#[test]
fn free_algebras() {
    let (_, v) = json(&["free", "--variety", "semilattices", "--n", "3"]);
    assert_eq!(v["size"], 7);
    let (_, v) = json(&["free", "--variety", "semilattices", "--n", "2", "--ordered"]);
    let rendered: Vec<&str> = v["min_terms"].as_array().unwrap().iter().map(|t| t["rendered"].as_str().unwrap()).collect();
    assert_eq!(rendered, ["x1", "x2", "meet(x1,x2)"]);
    let (_, v) = json(&["free", "--variety", "exp2-groups", "--n", "1", "--ordered"]);
    assert_eq!(v["size"], 2);
    assert_eq!(v["min_terms"][1]["rendered"], "e");
}

#[test]
fn free_output_file_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let out = run(&["free", "--variety", "semilattices", "--n", "2", "--ordered", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let file: dualram::io::AlgebraFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let a = file.to_ordered(&Default::default()).unwrap();
    assert_eq!(a.size(), 3);
    assert_eq!(a.order(), &[0, 1, 2]);
}

#[test]
fn trivial_variety_cannot_be_ordered() {
    let dir = catalog_copy();
    std::fs::write(dir.path().join("varieties/trivial.json"), r#"{"name": "trivial", "generators": ["sl1"]}"#).unwrap();
    let out = run(&["--catalog", dir.path().to_str().unwrap(), "free", "--variety", "trivial", "--n", "2", "--ordered"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trivial"));
    // unordered is fine
    let out = run(&["--catalog", dir.path().to_str().unwrap(), "free", "--variety", "trivial", "--n", "2"]);
    assert!(out.status.success());
}

#[test]
fn catalog_from_environment() {
    let dir = catalog_copy();
    std::fs::copy(dir.path().join("algebras/sl2.json"), dir.path().join("algebras/extra.json")).unwrap();
    let text = std::fs::read_to_string(dir.path().join("algebras/extra.json")).unwrap().replace("\"sl2\"", "\"extra\"");
    std::fs::write(dir.path().join("algebras/extra.json"), text).unwrap();
    let out = bin()
        .env("RAMSEY_WORKBENCH_CATALOG", dir.path())
        .args(["enumerate", "epis", "--from", "extra", "--to", "sl2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(run(&["enumerate", "epis", "--from", "extra", "--to", "sl2"]).status.code(), Some(3));
    assert_eq!(run(&["--catalog", "/nonexistent/catalog", "enumerate", "rigid-surjections", "--n", "2", "--k", "1"]).status.code(), Some(3));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["check-arrow", "--category", "chains-rs", "--c", "3"]).status.code(), Some(64));
    assert_eq!(run(&["check-arrow", "--category", "cats", "--c", "3", "--b", "2", "--a", "2", "--k", "2"]).status.code(), Some(64));
    assert_eq!(run(&["--budget", "lots", "gr-search", "--a", "2", "--b", "2"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

fn expected_exit(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::Holds => 0,
        VerdictKind::Fails => 1,
        VerdictKind::Unknown => 2,
    }
}

#[test]
fn exit_codes_match_verdicts() {
    let catalog = Catalog::load(&bundled_dir()).unwrap();
    let mut queries: Vec<(Category, [String; 3], usize, usize)> = Vec::new();
    for c in 1..=5 {
        for b in 1..=c.min(3) {
            for a in 1..=b {
                for k in 1..=2 {
                    queries.push((Category::ChainsRs, [c.to_string(), b.to_string(), a.to_string()], k, 1));
                }
            }
        }
    }
    // oversized without a budget
    queries.push((Category::ChainsRs, ["6".into(), "3".into(), "2".into()], 2, 1));
    queries.push((Category::ChainsRs, ["7".into(), "3".into(), "2".into()], 2, 2));
    let ordered = ["sl2-up", "sl3-up", "sl4-up", "free:semilattices:2", "sl1"];
    'fill: for c in ordered {
        for b in ordered {
            for a in ["sl1", "sl2-up", "sl2-down"] {
                for k in 1..=2 {
                    if queries.len() >= 100 {
                        break 'fill;
                    }
                    queries.push((Category::OrderedAlgebrasRe, [c.into(), b.into(), a.into()], k, 1));
                }
            }
        }
    }
    assert_eq!(queries.len(), 100);
    let mut seen = [false; 3];
    for (cat, [c, b, a], k, t) in &queries {
        let objects = [c, b, a].map(|r| catalog.object(*cat, r).unwrap());
        let cert = check_arrow(*cat, Direction::Dual, &objects[0], &objects[1], &objects[2], *k, *t, &SearchConfig::default()).unwrap();
        let (k, t) = (k.to_string(), t.to_string());
        let out = run(&["check-arrow", "--category", cat.tag(), "--c", c, "--b", b, "--a", a, "--k", &k, "--t", &t]);
        let want = expected_exit(cert.kind());
        assert_eq!(out.status.code(), Some(want), "{cat} {c} {b} {a} k={k}: {}", stdout(&out));
        seen[want as usize] = true;
    }
    assert_eq!(seen, [true; 3]);
}

#[test]
fn unknown_verdict_gives_guidance() {
    let out = run(&["check-arrow", "--category", "chains-rs", "--c", "6", "--b", "3", "--a", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("node budget"));
    let out = run(&["--budget", "100000000", "check-arrow", "--category", "chains-rs", "--c", "6", "--b", "3", "--a", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn certificate_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = run(&["check-arrow", "--category", "chains-rs", "--c", "3", "--b", "3", "--a", "2", "--k", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&path).unwrap();
    let cert: ArrowCertificate = serde_json::from_str(&text).unwrap();
    let (c, b, a) = (Object::Chain(3), Object::Chain(3), Object::Chain(2));
    assert_eq!(cert, check_arrow(Category::ChainsRs, Direction::Dual, &c, &b, &a, 2, 1, &SearchConfig::default()).unwrap());
    assert_eq!(serde_json::to_string_pretty(&cert).unwrap() + "\n", text);

    // the refuting coloring, checked on its own, fails again
    let coloring = match &cert.verdict {
        dualram_core::ramsey::Verdict::Fails { coloring } => coloring.clone(),
        other => panic!("{other:?}"),
    };
    let cpath = dir.path().join("coloring.json");
    std::fs::write(&cpath, serde_json::to_string(&coloring).unwrap()).unwrap();
    let args = ["check-arrow", "--category", "chains-rs", "--c", "3", "--b", "3", "--a", "2", "--k", "2", "--coloring"];
    let out = run(&[&args[..], &[cpath.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(1));
    // a constant coloring has a witness
    let constant = Coloring::constant(2, coloring.domain.clone(), 1).unwrap();
    std::fs::write(&cpath, serde_json::to_string(&constant).unwrap()).unwrap();
    let out = run(&[&args[..], &[cpath.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
}

fn report_bytes(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path: PathBuf = dir.join(name);
    let mut all = vec!["--seed", "7", "--report", path.to_str().unwrap()];
    all.extend_from_slice(args);
    run(&all);
    std::fs::read(path).unwrap()
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 3] = [
        &["transport", "--variety", "semilattices", "--a", "sl2-up", "--b", "sl2-up", "--colorings", "random", "--count", "4"],
        &["check-arrow", "--category", "chains-rs", "--c", "7", "--b", "3", "--a", "2", "--k", "3"],
        &["segment-induction", "--variety", "semilattices", "--a", "sl2-up", "--count", "3"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let first = report_bytes(dir.path(), &format!("{i}a.json"), args);
        let second = report_bytes(dir.path(), &format!("{i}b.json"), args);
        assert_eq!(first, second);
        let report: Value = serde_json::from_slice(&first).unwrap();
        assert_eq!(report["seed"], 7);
        assert_eq!(report["inputs_digest"].as_str().unwrap().len(), 64);
        assert!(report.get("timings").is_none());
    }
    let path = dir.path().join("timed.json");
    run(&["--timings", "--report", path.to_str().unwrap(), "enumerate", "rigid-surjections", "--n", "3", "--k", "2"]);
    let report: Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert!(report["timings"]["total_ms"].is_u64());
}

#[test]
fn transport_and_segment_induction() {
    let (code, v) = json(&["transport", "--variety", "semilattices", "--a", "sl2-up", "--b", "sl2-up"]);
    assert_eq!(code, 0);
    assert!(v["transport"]["traces"].as_array().unwrap().iter().all(|t| t["validated"] == true));

    let (code, v) = json(&["segment-induction", "--variety", "semilattices", "--a", "sl1", "--count", "2"]);
    assert_eq!(code, 0);
    for o in v["outcomes"].as_array().unwrap() {
        assert_eq!(o["result"]["outcome"], "CERTIFIED");
        assert_eq!(o["result"]["steps"].as_array().unwrap().len(), 1);
    }

    let out = run(&["--budget", "1", "segment-induction", "--variety", "semilattices", "--a", "sl2-up", "--sizes", "3,3,6", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("UNKNOWN at segment 2"));

    let out = run(&["transport", "--variety", "semilattices", "--a", "sl2-up", "--b", "sl3-up", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("step chain-arrow"));
}

#[test]
fn verify_suite_and_mutants() {
    let out = run(&["verify-suite", "--scope", "chains", "--max-chain", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS [Chains] initial-segment criterion"));
    let out = run(&["verify-suite", "--scope", "chains", "--max-chain", "5", "--inject-mutant", "rigid-is-surjective"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let out = run(&["verify-suite", "--scope", "terms", "--inject-mutant", "reversed-neat-order"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gr_search_and_degree() {
    let (code, v) = json(&["gr-search", "--a", "2", "--b", "2"]);
    assert_eq!((code, v["n"].as_u64()), (0, Some(2)));
    let (code, v) = json(&["degree", "--category", "chains-rs", "--a", "1", "--b", "1,2", "--c", "1,2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["upper"], 1);
    assert_eq!(v["catalog_relative"], true);
}
