//! Behavioral tests for the command-line interface, driving the built
//! binary through files and checking exit codes and output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mglfsr"))
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("mglfsr-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const TRIVIAL_INSTANCE: &str = "\
# all sequences vanish
p 17
ell 2
nu 1
w 0 0 0
S 1
S 2 0
G 1 0 0 0 1
G 2 1 1 1
";

const UNIT_INSTANCE: &str = "\
p 5
ell 1
nu 1
w 0 0
S 1 1
G 1 0 0 0 1
";

#[test]
fn solve_trivial_instance_prints_unit_lambda() {
    let path = write_temp("trivial", TRIVIAL_INSTANCE);
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("lambda 1\n"), "got: {stdout}");
    assert!(stdout.contains("omega 1 0"));
    assert!(stdout.contains("omega 2 0"));
}

#[test]
fn solve_reports_stats_when_asked() {
    let path = write_temp("unit", UNIT_INSTANCE);
    let out = bin()
        .args(["solve", "--alg", "ms", "--stats"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("lambda 0 0 0 1"), "got: {stdout}");
    assert!(stdout.contains("row_reductions "));
    assert!(stdout.contains("bound "));
}

#[test]
fn solve_malformed_file_exits_2_with_line_number() {
    let path = write_temp("bad", "p 17\nell 1\nnu 1\nw 0 0\nS 1 oops\nG 1 0 1\n");
    let out = bin().args(["solve"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("line 5"),
        "got: {}",
        stderr_of(&out)
    );
}

#[test]
fn solve_algorithms_agree_on_lambda_degree() {
    let path = write_temp("agree", UNIT_INSTANCE);
    let mut lambdas = Vec::new();
    for alg in ["ms", "ms_mod", "alekhnovich", "demand"] {
        let out = bin()
            .args(["solve", "--alg", alg])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "alg {alg}");
        let stdout = stdout_of(&out);
        let lambda = stdout.lines().next().unwrap().to_string();
        lambdas.push(lambda);
    }
    // Same degree means the same number of printed coefficients.
    let words: Vec<usize> = lambdas
        .iter()
        .map(|l| l.split_whitespace().count())
        .collect();
    assert!(
        words.windows(2).all(|w| w[0] == w[1]),
        "lambdas: {lambdas:?}"
    );
}

#[test]
fn decode_error_free_word_echoes_message() {
    // [8,2] over GF(17); message f = 3 + 2x evaluated at 0..7.
    let evals: Vec<String> = (0..8u64).map(|x| ((3 + 2 * x) % 17).to_string()).collect();
    let text = format!("17 8 2\nalphas 0 1 2 3 4 5 6 7\nr {}\n", evals.join(" "));
    let path = write_temp("decode-ok", &text);
    let out = bin()
        .args(["decode", "--ell", "2"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("decoded 3 2"), "got: {stdout}");
    assert!(stdout.contains("lambda 1"));
}

#[test]
fn decode_garbage_exits_1_not_crash() {
    // Evaluations of x^4 sit at distance >= 4 from every [8,2] codeword
    // (two polynomials of degree <= 4 agree on at most 4 points), so no
    // candidate can pass the re-encoding check.
    let text = "17 8 2\nalphas 0 1 2 3 4 5 6 7\nr 0 1 16 13 1 13 4 4\n";
    let path = write_temp("decode-garbage", text);
    for ell in ["1", "2", "3"] {
        let out = bin()
            .args(["decode", "--ell", ell])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1), "stdout: {}", stdout_of(&out));
        assert!(stdout_of(&out).starts_with("failure"));
    }
}

#[test]
fn decode_malformed_exits_2() {
    let path = write_temp("decode-bad", "17 8\nalphas 0 1\nr 0 1\n");
    let out = bin().args(["decode"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 1"));
}

#[test]
fn oracle_check_zero_trials_is_vacuous() {
    let out = bin()
        .args(["oracle-check", "--trials", "0", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_check_default_run_agrees() {
    let out = bin()
        .args(["oracle-check", "--trials", "150", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("all solvers agree"));
}

#[test]
fn oracle_check_injected_bug_prints_replayable_counterexample() {
    let out = bin()
        .args([
            "oracle-check",
            "--trials",
            "5",
            "--seed",
            "11",
            "--inject-bug",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let counterexample = stdout_of(&out);
    assert!(counterexample.contains("p "), "got: {counterexample}");

    // The printed instance replays to the same disagreement under the
    // same flag, and to agreement without it.
    let path = write_temp("replay", &counterexample);
    let replay_bug = bin()
        .args(["oracle-check", "--inject-bug", "--replay"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(replay_bug.status.code(), Some(1));
    let replay_clean = bin()
        .args(["oracle-check", "--replay"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(replay_clean.status.code(), Some(0));
}

#[test]
fn oracle_check_is_deterministic_per_seed() {
    let run = || {
        bin()
            .args(["oracle-check", "--trials", "40", "--seed", "123"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn seed_falls_back_to_environment() {
    let out = bin()
        .args(["oracle-check", "--trials", "20"])
        .env("MGLFSR_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bench_single_cell_emits_csv() {
    let out = bin()
        .args([
            "bench", "--ell", "1", "--m", "16", "--alg", "ms", "--shape", "monomial", "--trials",
            "2", "--seed", "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("shape,alg,ell,m,median_us"));
    let row = lines.next().expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 5);
    assert_eq!(fields[0], "monomial");
    assert_eq!(fields[1], "ms");
    assert_eq!(fields[2], "1");
    assert_eq!(fields[3], "16");
    assert!(fields[4].parse::<u128>().is_ok());
    assert!(lines.next().is_none());
}

#[test]
fn bench_rejects_bad_lists() {
    let out = bin().args(["bench", "--m", "abc"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
