//! Runs the built `parity-lab` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("scc2.pg");
    let stats = dir.path().join("stats.json");
    assert!(
        bin(&["gen", "--family", "scc", "--k", "2", "--out", path(&game)])
            .status
            .success()
    );

    let o = bin(&[
        "solve",
        "--in",
        path(&game),
        "--memo",
        "--scc",
        "--stats",
        path(&stats),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("won_by_0 = true"), "{}", stdout(&o));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(doc["positions"], 31);
    assert_eq!(doc["won_by_0"], true);
    assert_eq!(doc["w1"].as_array().unwrap().len(), 0);
    assert!(doc["stats"]["distinct_subgames"].as_u64().unwrap() >= 21);
}

fn bench_rows(csv_path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(csv_path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "family",
            "k",
            "n",
            "m",
            "variant",
            "total_calls",
            "distinct_subgames",
            "memo_hits",
            "wall_time_ms",
            "won_by_0",
            "bound_3_2k1"
        ]
    );
    r.records().map(Result::unwrap).collect()
}

#[test]
fn bench_core_plain_and_memo() {
    let dir = tempfile::tempdir().unwrap();
    let out = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for file in &out {
        let args = [
            "bench",
            "--family",
            "core",
            "--k-min",
            "1",
            "--k-max",
            "8",
            "--variants",
            "plain,memo",
            "--csv",
            path(file),
        ];
        assert_eq!(bin(&args).status.code(), Some(0));
    }
    let (a, b) = (bench_rows(&out[0]), bench_rows(&out[1]));
    assert_eq!(a.len(), 16);
    for (x, y) in a.iter().zip(&b) {
        let distinct: u64 = x[6].parse().unwrap();
        let bound: u64 = x[10].parse().unwrap();
        assert!(distinct >= bound, "{x:?}");
        assert_eq!(&x[9], "true");
        // identical apart from the timing column
        let strip = |r: &csv::StringRecord| {
            r.iter()
                .enumerate()
                .filter(|(i, _)| *i != 8)
                .map(|(_, f)| f.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(x), strip(y));
    }
}

#[test]
fn exit_codes() {
    let code = |args: &str| bin(&args.split(' ').collect::<Vec<_>>()).status.code();
    assert_eq!(
        code("verify --family core --k 4 --check tree-size"),
        Some(0)
    );
    assert_eq!(
        code("verify --family scc --k 1 --check single-scc"),
        Some(1)
    );
    assert_eq!(code("verify --family scc --k 1"), Some(2));
    assert_eq!(code("solve --in /nonexistent.pg"), Some(1));
}

#[test]
fn verify_rejects_tampered_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("core2.pg");
    let text = String::from_utf8(bin(&["gen", "--family", "core", "--k", "2"]).stdout).unwrap();
    // gamma_1 (position 5) loses its self-loop
    let tampered = text.replace("5 1 0 5,4,6 \"gamma_1\";", "5 1 0 4,6 \"gamma_1\";");
    assert_ne!(tampered, text);
    std::fs::write(&file, tampered).unwrap();
    let args = [
        "verify",
        "--family",
        "core",
        "--k",
        "2",
        "--check",
        "core-extension",
        "--in",
        path(&file),
    ];
    assert_eq!(bin(&args).status.code(), Some(1));
    std::fs::write(&file, &text).unwrap();
    assert_eq!(bin(&args).status.code(), Some(0));
}
