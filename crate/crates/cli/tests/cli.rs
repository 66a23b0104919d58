//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dygraphlet"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn count_lines(out: &str) -> Vec<&str> {
    // The eight census lines, without the trailing summary line.
    out.lines().filter(|l| !l.starts_with("batches=")).collect()
}

const K4: &str = "# complete graph\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn count_k4_reports_one_clique() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k4.txt", K4);
    let output = bin().arg("count").arg(&input).output().unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("clique4    1"), "{text}");
    assert!(text.contains("triangle   4"), "{text}");
    assert!(text.contains("vertices=4 edges=6"), "{text}");
}

#[test]
fn count_empty_file_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "empty.txt", "");
    let output = bin().arg("count").arg(&input).output().unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("triangle   0"), "{text}");
    assert!(text.contains("vertices=0 edges=0"), "{text}");
}

#[test]
fn malformed_edge_list_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.txt", "0 1\nnot an edge\n");
    let output = bin().arg("count").arg(&input).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("bad.txt:2"), "{err}");
}

#[test]
fn gen_is_seed_deterministic_and_defaults_to_p07() {
    let dir = tempfile::tempdir().unwrap();
    let mut base = String::new();
    for i in 0..300 {
        base.push_str(&format!("{} {}\n", i, i + 301));
    }
    let input = write(dir.path(), "base.txt", &base);

    let out_a = dir.path().join("a.stream");
    let out_b = dir.path().join("b.stream");
    for out in [&out_a, &out_b] {
        let output = bin()
            .args(["gen", "--input"])
            .arg(&input)
            .args(["--seed", "9", "--out"])
            .arg(out)
            .output()
            .unwrap();
        assert!(output.status.success());
        assert!(stdout(&output).contains("p=0.7"));
    }
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());
}

#[test]
fn gen_with_p_one_emits_only_adds() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "base.txt", "0 1\n1 2\n2 3\n3 4\n");
    let out = dir.path().join("adds.stream");
    let output = bin()
        .args(["gen", "--input"])
        .arg(&input)
        .args(["--p", "1.0", "--seed", "5", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("+ ")), "{text}");
}

#[test]
fn run_modes_agree_and_emit_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut base = String::new();
    for i in 0..40u32 {
        for j in (i + 1)..40 {
            if (i * 31 + j * 17) % 5 == 0 {
                base.push_str(&format!("{i} {j}\n"));
            }
        }
    }
    let input = write(dir.path(), "base.txt", &base);
    let stream = dir.path().join("mixed.stream");
    assert!(bin()
        .args(["gen", "--input"])
        .arg(&input)
        .args(["--seed", "3", "--out"])
        .arg(&stream)
        .output()
        .unwrap()
        .status
        .success());

    let mut finals = Vec::new();
    let mut csvs = Vec::new();
    for (mode, threads) in [("fdgc", "1"), ("pgdn", "2"), ("fdgc", "2")] {
        let csv = dir.path().join(format!("{mode}-{threads}.csv"));
        let output = bin()
            .arg("run")
            .arg(&stream)
            .args(["--mode", mode, "--batch-size", "7", "--threads", threads, "--out"])
            .arg(&csv)
            .output()
            .unwrap();
        assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
        finals.push(count_lines(&stdout(&output)).join("\n"));
        let text = fs::read_to_string(&csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "batch,adds,dels,time_ms,cum_time_ms,triangle,wedge,path3,star3,cycle4,tailed_tri,diamond,clique4"
        );
        // cumulative time is non-decreasing; count columns collected without
        // the timing columns for cross-mode comparison
        let mut last_cum = 0.0f64;
        let mut counts_only = Vec::new();
        for row in lines {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols.len(), 13, "{row}");
            let cum: f64 = cols[4].parse().unwrap();
            assert!(cum >= last_cum);
            last_cum = cum;
            counts_only.push(format!("{},{},{},{}", cols[0], cols[1], cols[2], cols[5..].join(",")));
        }
        csvs.push(counts_only.join("\n"));
    }
    // fdgc(1 thread) == pgdn(2 threads) == fdgc(2 threads), ignoring timing.
    assert_eq!(finals[0], finals[1]);
    assert_eq!(finals[0], finals[2]);
    assert_eq!(csvs[0], csvs[2], "fdgc per-batch counts must not depend on --threads");
    assert_eq!(csvs[0], csvs[1], "fdgc and pgdn per-batch counts must match");
}

#[test]
fn run_batch_size_changes_records_not_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut base = String::new();
    for i in 0..60u32 {
        base.push_str(&format!("{} {}\n", i, (i + 1) % 60));
        base.push_str(&format!("{} {}\n", i, (i + 7) % 60));
    }
    let input = write(dir.path(), "base.txt", &base);
    let mut finals = Vec::new();
    let mut batch_counts = Vec::new();
    for size in ["10", "100"] {
        let output = bin()
            .arg("run")
            .arg(&input)
            .args(["--mode", "fdgc", "--batch-size", size])
            .output()
            .unwrap();
        assert!(output.status.success());
        let text = stdout(&output);
        finals.push(count_lines(&text).join("\n"));
        let summary = text.lines().last().unwrap().to_string();
        batch_counts.push(summary.split(' ').next().unwrap().to_string());
    }
    assert_eq!(finals[0], finals[1]);
    assert_ne!(batch_counts[0], batch_counts[1]);
}

#[test]
fn igc_mode_rejects_deletes() {
    let dir = tempfile::tempdir().unwrap();
    let stream = write(dir.path(), "mixed.stream", "+ 0 1\n+ 1 2\n- 0 1\n");
    let output = bin()
        .arg("run")
        .arg(&stream)
        .args(["--mode", "igc"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("insert-only"), "{err}");
}

#[test]
fn igc_runs_insert_only_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "path.txt", "0 1\n1 2\n2 3\n");
    let output = bin()
        .arg("run")
        .arg(&input)
        .args(["--mode", "igc", "--batch-size", "2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("path3      1"), "{text}");
    assert!(text.contains("wedge      2"), "{text}");
}

#[test]
fn verify_defaults_pass_with_brute() {
    let output = bin().arg("verify").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("brute=yes"), "{text}");
    assert!(text.contains("closed-forms"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_detects_an_injected_fault() {
    let output = bin()
        .args(["verify", "--batches", "10", "--inject-fault"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("result=FAIL"), "{text}");
}

#[test]
fn verify_above_guard_skips_brute_with_notice() {
    let output = bin()
        .args(["verify", "--n", "80", "--batches", "10"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("notice:"), "{text}");
    assert!(text.contains("brute=no"), "{text}");
}

#[test]
fn update_stream_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let stream = write(
        dir.path(),
        "s.stream",
        "+ 10 20\n+ 20 30\n+ 10 30\n+ 30 40\n- 10 20\n",
    );
    let output = bin()
        .arg("run")
        .arg(&stream)
        .args(["--mode", "fdgc", "--batch-size", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    // Final graph: triangle edges 20-30, 10-30 remain plus 30-40: a star
    // around 30 -> one 3-star, three wedges.
    let text = stdout(&output);
    assert!(text.contains("star3      1"), "{text}");
    assert!(text.contains("wedge      3"), "{text}");
}
