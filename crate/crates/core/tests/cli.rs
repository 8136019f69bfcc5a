// SPDX-License-Identifier: Apache-2.0

mod common;

use std::path::Path;
use std::process::Command;

use common::*;
use scanpower::leakage::{static_power, LeakageTable};
use scanpower::netlist::tech_map;
use scanpower::report::{parse_csv, parse_vectors};
use scanpower::simulate::{simulate, Assignment};
use scanpower::Logic3;

fn scanpower(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_scanpower")).args(args).output().unwrap()
}

fn compare_csv(out: &Path) -> String {
    let bench = bench_path("s27");
    let vec = data_dir().join("vectors/s27_10.vec");
    let o = scanpower(&[
        "compare",
        "--bench",
        bench.to_str().unwrap(),
        "--vectors",
        vec.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn compare_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = compare_csv(&dir.path().join("a.csv"));
    let b = compare_csv(&dir.path().join("b.csv"));
    assert_eq!(a, b);
}

#[test]
fn s27_compare_matches_golden_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let csv = compare_csv(&dir.path().join("s27.csv"));
    let golden = data_dir().join("golden/s27_compare.csv");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &csv).unwrap();
    }
    assert_eq!(csv, std::fs::read_to_string(&golden).unwrap());

    // Traditional scan recomputed from first principles.
    let c = tech_map(&load("s27"));
    let v = parse_vectors(&std::fs::read_to_string(data_dir().join("vectors/s27_10.vec")).unwrap(), 3).unwrap();
    let (load_units, cycles) = replay(&c, &v, &|_| false);
    let dyn_uw_per_hz = 0.5 * 0.9 * 0.9 * 1e-15 * load_units / cycles as f64 * 1e6;
    let t = LeakageTable::bundled();
    let mut stat = 0.0;
    for chain in [false, true] {
        let mut a = Assignment::unknown(&c);
        for l in c.source_lines() {
            a.set(l, Logic3::from_bool(chain && c.scan_chain().contains(&l)));
        }
        stat += static_power(&c, &simulate(&c, &a), &t, 0.9).unwrap() / 2.0;
    }
    let r = &parse_csv(&csv).unwrap()[0];
    assert_eq!(r.circuit, "s27");
    assert_eq!(r.num_vectors, 10);
    assert!(rel_close(r.traditional.dynamic_per_hz, dyn_uw_per_hz, 1e-9));
    assert!(rel_close(r.traditional.static_uw, stat, 1e-9));
}

#[test]
fn analyze_writes_pattern_and_blocking_report() {
    let dir = tempfile::tempdir().unwrap();
    let pat = dir.path().join("p.txt");
    let blk = dir.path().join("b.csv");
    let bench = bench_path("s298");
    let o = scanpower(&[
        "analyze",
        "--mode",
        "proposed",
        "--bench",
        bench.to_str().unwrap(),
        "--num-vectors",
        "10",
        "--pattern-out",
        pat.to_str().unwrap(),
        "--blocking-out",
        blk.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let p = std::fs::read_to_string(pat).unwrap();
    assert!(!p.is_empty() && p.lines().all(|l| l.ends_with("=0") || l.ends_with("=1")));
    let b = std::fs::read_to_string(blk).unwrap();
    assert!(b.starts_with("gate_id,blocked,assigned_side_input"));
}

#[test]
fn bad_input_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bench");
    std::fs::write(&bad, "INPUT(a)\ny = FOO(a)\n").unwrap();
    let o = scanpower(&["compare", "--bench", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn characterize_reproduces_bundled_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = scanpower(&["characterize", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let ours = std::fs::read_to_string(out).unwrap();
    let bundled = std::fs::read_to_string(data_dir().join("leakage_45nm.csv")).unwrap();
    assert_eq!(ours, bundled);
}
