use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ged_core::fixtures::CYCLE_STAR_DB;
use serde_json::Value;
use tempfile::TempDir;

fn ged(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ged")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_db(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("db.txt");
    let out = ged(&[
        "gen",
        "--graphs",
        "12",
        "--min-vertices",
        "3",
        "--max-vertices",
        "6",
        "--density",
        "0.5",
        "--vertex-labels",
        "2",
        "--edge-labels",
        "2",
        "--seed",
        "11",
        "-o",
        s(&p),
    ]);
    assert!(out.status.success());
    p
}

#[test]
fn dist_json_shape() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    for w in ["1", "2", "15", "50"] {
        let out = ged(&["dist", s(&db), "G", "Q", "--beam", w, "--json"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json_of(&out);
        assert_eq!(v["ged"], 4);
        for key in ["expanded", "backtracks", "passes"] {
            assert!(v[key].is_u64(), "{key}");
        }
        assert!(v["time_ms"].is_number());
    }
}

#[test]
fn dist_edit_path_has_ged_operations() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let v = json_of(&ged(&["dist", s(&db), "G", "Q", "--json", "--edit-path"]));
    assert_eq!(v["edit_path"].as_array().unwrap().len(), 4);
}

#[test]
fn dist_human_output() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let out = ged(&["dist", s(&db), "G", "Q", "--succ", "basic", "--order", "default"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ged(G, Q) = 4"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let bad = write(&dir, "bad.txt", "t # x\nv 0 A\ne 0 0 a\n");
    assert_eq!(ged(&["dist", s(&db), "G", "nope"]).status.code(), Some(2));
    assert_eq!(ged(&["dist", s(&db), "G", "Q", "--beam", "0"]).status.code(), Some(2));
    assert_eq!(ged(&["dist", s(&db), "G"]).status.code(), Some(2));
    assert_eq!(ged(&["dist", s(&bad), "x", "x"]).status.code(), Some(4));
    assert_eq!(ged(&["gen", "--density", "1.5"]).status.code(), Some(2));

    let big = small_db(&dir);
    let out = ged(&["dist", s(&big), "g0", "g1", "--budget", "3", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["exact"], false);
}

#[test]
fn oracle_json() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let v = json_of(&ged(&["oracle", s(&db), "G", "Q"]));
    assert_eq!(v["ged"], 4);
    assert_eq!(v["mappings_enumerated"], 209);
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = small_db(&dir);
    let first = std::fs::read(&a).unwrap();
    let b = dir.path().join("again.txt");
    let out = ged(&[
        "gen",
        "--graphs",
        "12",
        "--min-vertices",
        "3",
        "--max-vertices",
        "6",
        "--density",
        "0.5",
        "--vertex-labels",
        "2",
        "--edge-labels",
        "2",
        "--seed",
        "11",
        "-o",
        s(&b),
    ]);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&b).unwrap());
}

#[test]
fn gen_full_density_gives_complete_graphs() {
    let out = ged(&["gen", "--graphs", "3", "--min-vertices", "5", "--max-vertices", "5", "--density", "1.0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 30);
}

#[test]
fn search_json_shape_and_self_match() {
    let dir = TempDir::new().unwrap();
    let db = small_db(&dir);
    let text = std::fs::read_to_string(&db).unwrap();
    let query: String = text.split("t # ").nth(4).map(|g| format!("t # {g}")).unwrap();
    let q = write(&dir, "q.txt", &query);
    let mut previous = 0;
    for tau in ["0", "2", "4"] {
        for threads in ["1", "3"] {
            let out = ged(&["search", "--db", s(&db), "--query", s(&q), "--tau", tau, "--threads", threads, "--json"]);
            assert_eq!(out.status.code(), Some(0));
            let v = json_of(&out);
            let matches = v["matches"].as_array().unwrap();
            assert!(matches.iter().any(|m| m["id"] == "g3"));
            for m in matches {
                assert!(m["bound"].is_u64() && m["exact"].is_boolean());
            }
            assert_eq!(v["filtered"].as_u64().unwrap() + v["candidates"].as_u64().unwrap(), 12);
            assert!(matches.len() >= previous);
            previous = matches.len();
        }
    }
}

#[test]
fn inspect_reports_partition_and_counts() {
    let dir = TempDir::new().unwrap();
    let db = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let v = json_of(&ged(&["inspect", s(&db), "G", "Q", "--bounds"]));
    assert_eq!(v["partition"], serde_json::json!([[0, 1, 2], [3]]));
    assert_eq!(v["predicted_layer_counts"], serde_json::json!([1, 2, 3, 4, 4]));
    assert_eq!(v["bounds"]["lb"], 4);
    assert_eq!(v["order"].as_array().unwrap().len(), 4);
}

fn bench_rows(db: &Path, extra: &[&str]) -> Vec<Value> {
    let mut args = vec!["bench", s(db), "--limit", "20", "--json"];
    args.extend_from_slice(extra);
    let v = json_of(&ged(&args));
    v["rows"].as_array().unwrap().clone()
}

#[test]
fn bench_solves_everything_with_room() {
    let dir = TempDir::new().unwrap();
    let db = small_db(&dir);
    let v = json_of(&ged(&["bench", s(&db), "--limit", "10", "--json"]));
    assert_eq!(v["solve_ratio"], 1.0);
    assert_eq!(v["pairs"], 10);
    let human = ged(&["bench", s(&db), "--limit", "2"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("solve ratio 1.000 (2/2)"));
}

#[test]
fn bench_width_and_policy_sweeps_agree() {
    let dir = TempDir::new().unwrap();
    let db = small_db(&dir);
    let base = bench_rows(&db, &[]);
    for w in ["1", "5", "50"] {
        let rows = bench_rows(&db, &["--beam", w]);
        for (a, b) in base.iter().zip(&rows) {
            assert_eq!(a["ged"], b["ged"]);
        }
    }
    let basic = bench_rows(&db, &["--succ", "basic"]);
    for (r, b) in base.iter().zip(&basic) {
        assert_eq!(r["ged"], b["ged"]);
        assert!(r["expanded"].as_u64() <= b["expanded"].as_u64(), "{r} vs {b}");
    }
}

#[test]
fn bench_with_query_group_pairs_every_graph() {
    let dir = TempDir::new().unwrap();
    let db = small_db(&dir);
    let queries = write(&dir, "cs.txt", CYCLE_STAR_DB);
    let v = json_of(&ged(&["bench", s(&db), "--queries", s(&queries), "--json"]));
    assert_eq!(v["pairs"], 24);
    assert_eq!(v["solved"], 24);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!((rows[0]["g"].as_str(), rows[0]["q"].as_str()), (Some("g0"), Some("G")));
    assert_eq!((rows[1]["g"].as_str(), rows[1]["q"].as_str()), (Some("g0"), Some("Q")));
    let missing = ged(&["bench", s(&db), "--queries", s(&dir.path().join("nope.txt"))]);
    assert_eq!(missing.status.code(), Some(2));
}
