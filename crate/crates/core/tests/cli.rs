use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pmdecomp::bench::BenchTable;
use pmdecomp::fixtures;
use pmdecomp::report::Report;
use pmdecomp::scc::write_scc2020;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pmdecomp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pmdecomp-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_writes_a_verifiable_run() {
    let dir = scratch("fixture");
    let input = dir.join("six.scc");
    std::fs::write(&input, write_scc2020(&fixtures::antidiagonal_six())).unwrap();
    let out = dir.join("run");
    for strategy in ["exhaustive", "aida", "interval-auto"] {
        let o = run(&["decompose", s(&input), "-o", s(&out), "--strategy", strategy, "--verify"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let report: Report = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(report.num_summands, 2);
        assert_eq!(report.verified, Some(true));
        assert_eq!(report.k_max, 4);
    }
    let o = run(&["verify", s(&input), "--certificate", s(&out.join("certificate.json"))]);
    assert_eq!(o.status.code(), Some(0));

    // a flipped entry in a summand
    let path = out.join("summand_0000.scc");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[3] = match lines[3].split_once(" ; ") {
        Some((deg, entries)) => {
            let kept: Vec<&str> = entries.split_whitespace().skip(1).collect();
            format!("{deg} ; {}", kept.join(" "))
        }
        None => unreachable!("summand has relations"),
    };
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let o = run(&["verify", s(&input), "--certificate", s(&out.join("certificate.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("entry ("));
}

#[test]
fn certificates_do_not_transfer_between_inputs() {
    let dir = scratch("cross");
    let a = dir.join("a.scc");
    let b = dir.join("b.scc");
    for (path, seed) in [(&a, "1"), (&b, "2")] {
        let o = run(&["generate", "--seed", seed, "-o", s(path), "intervals", "--n", "12"]);
        assert!(o.status.success());
    }
    let out = dir.join("run");
    assert!(run(&["decompose", s(&a), "-o", s(&out)]).status.success());
    let cert = out.join("certificate.json");
    assert_eq!(run(&["verify", s(&a), "--certificate", s(&cert)]).status.code(), Some(0));
    assert_eq!(run(&["verify", s(&b), "--certificate", s(&cert)]).status.code(), Some(1));
}

#[test]
fn generated_intervals_match_their_sidecar() {
    let dir = scratch("intervals");
    let input = dir.join("iv.scc");
    let o = run(&["generate", "--seed", "9", "-o", s(&input), "intervals", "--n", "100"]);
    assert!(o.status.success());
    let truth: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("iv.truth.json")).unwrap()).unwrap();
    let o = run(&["decompose", s(&input), "--strategy", "interval-auto"]);
    let report: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.num_summands, truth["summands"].as_array().unwrap().len());
    assert_eq!(report.interval_decomposable, Some(true));
}

#[test]
fn bad_and_empty_inputs() {
    let dir = scratch("inputs");
    let bad = dir.join("bad.scc");
    std::fs::write(&bad, "scc2020\n2\n1 1\n0 0 ; 5\n0 0 ;\n").unwrap();
    let o = run(&["decompose", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(run(&["decompose", s(&dir.join("missing.scc"))]).status.code(), Some(2));
    assert_eq!(run(&["decompose", s(&bad), "--field", "4"]).status.code(), Some(2));

    let empty = dir.join("empty.scc");
    std::fs::write(&empty, "scc2020\n2\n0 0 0\n").unwrap();
    let o = run(&["decompose", s(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.num_summands, 0);
}

#[test]
fn bench_hom_and_enum_dec() {
    let dir = scratch("bench");
    let json = dir.join("bench.json");
    let o = run(&["bench", "--sizes", "20,40", "--threads", "2", "--json", s(&json)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("+sweep"));
    let table: BenchTable = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows.iter().all(|r| r.consistent));

    let [b, _, d] = fixtures::linked_triple_blocks();
    let (pb, pd) = (dir.join("b.scc"), dir.join("d.scc"));
    std::fs::write(&pb, write_scc2020(&b)).unwrap();
    std::fs::write(&pd, write_scc2020(&d)).unwrap();
    let o = run(&["hom", s(&pb), s(&pd), "--alpha", "1,3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim_hom"], 2);
    assert_eq!(v["dim_hom_alpha"], 2);

    let o = run(&["enum-dec", "5"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumerated"], 186);
}
