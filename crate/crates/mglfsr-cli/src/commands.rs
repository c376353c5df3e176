//! The solve, decode and oracle-check subcommands.

use std::fs;
use std::str::FromStr;

use mglfsr::ff::{Degree, Field};
use mglfsr::instance::{format_instance, format_solution, parse_instance, Algorithm};
use mglfsr::oracle;
use mglfsr::rsdecode::{decode as rs_decode, GrsCode};
use mglfsr::sampling::{random_instance, SampleConfig};
use mglfsr::{MgLfsrInstance, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn parse_algorithm(name: &str) -> Result<Algorithm, i32> {
    Algorithm::from_str(name).map_err(|e| {
        eprintln!("error: {e}");
        2
    })
}

fn read_file(path: &str) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {path}: {e}");
        2
    })
}

pub fn solve(path: &str, alg: &str, stats: bool) -> i32 {
    let alg = match parse_algorithm(alg) {
        Ok(a) => a,
        Err(c) => return c,
    };
    let text = match read_file(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return 2;
        }
    };
    let (sol, reduction_stats) = inst.solve_with_stats(alg);
    print!("{}", format_solution(&sol));
    if stats {
        println!("algorithm {alg}");
        println!("row_reductions {}", reduction_stats.row_reductions);
        println!("bound {}", reduction_stats.bound);
        println!("m {}", inst.m());
    }
    0
}

pub fn decode(path: &str, ell: usize, alg: &str) -> i32 {
    let alg = match parse_algorithm(alg) {
        Ok(a) => a,
        Err(c) => return c,
    };
    if ell == 0 {
        eprintln!("error: --ell must be at least 1");
        return 2;
    }
    let text = match read_file(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let (code, word) = match parse_decode_file(&text) {
        Ok(cw) => cw,
        Err((line, msg)) => {
            eprintln!("error: {path}: line {line}: {msg}");
            return 2;
        }
    };
    let outcome = rs_decode(&code, &word, ell, alg);
    if let Some(message) = &outcome.message {
        println!("decoded {message}");
        println!("lambda {}", outcome.lambda);
        0
    } else {
        println!("failure");
        println!("lambda {}", outcome.lambda);
        1
    }
}

/// Line 1: `p n k`; line 2: `alphas <n values>`; line 3: `r <n values>`.
/// Blank lines and `#` comments are skipped.
fn parse_decode_file(text: &str) -> Result<(GrsCode, Vec<u64>), (usize, String)> {
    let mut header: Option<(u64, usize, usize, usize)> = None;
    let mut alphas: Option<Vec<u64>> = None;
    let mut word: Option<Vec<u64>> = None;
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last = lineno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if tokens.len() != 3 {
                return Err((lineno, "expected `p n k`".into()));
            }
            let p: u64 = tokens[0]
                .parse()
                .map_err(|_| (lineno, format!("bad prime `{}`", tokens[0])))?;
            let n: usize = tokens[1]
                .parse()
                .map_err(|_| (lineno, format!("bad length `{}`", tokens[1])))?;
            let k: usize = tokens[2]
                .parse()
                .map_err(|_| (lineno, format!("bad dimension `{}`", tokens[2])))?;
            header = Some((p, n, k, lineno));
        } else if alphas.is_none() {
            if tokens.first() != Some(&"alphas") {
                return Err((lineno, "expected `alphas <values>`".into()));
            }
            alphas = Some(parse_values(&tokens[1..], lineno)?);
        } else if word.is_none() {
            if tokens.first() != Some(&"r") {
                return Err((lineno, "expected `r <values>`".into()));
            }
            word = Some(parse_values(&tokens[1..], lineno)?);
        } else {
            return Err((lineno, "unexpected trailing line".into()));
        }
    }
    let eof = last + 1;
    let (p, n, k, header_line) = header.ok_or((eof, "missing `p n k` line".to_string()))?;
    let alphas = alphas.ok_or((eof, "missing alphas line".to_string()))?;
    let word = word.ok_or((eof, "missing r line".to_string()))?;
    let field = Field::new(p).map_err(|e| (header_line, e.to_string()))?;
    if alphas.len() != n {
        return Err((
            header_line,
            format!("expected {n} alphas, found {}", alphas.len()),
        ));
    }
    if word.len() != n {
        return Err((
            header_line,
            format!("expected {n} word symbols, found {}", word.len()),
        ));
    }
    let code = GrsCode::new(field, k, alphas).map_err(|e| (header_line, e.to_string()))?;
    let word = word.into_iter().map(|x| field.elem(x)).collect();
    Ok((code, word))
}

fn parse_values(tokens: &[&str], lineno: usize) -> Result<Vec<u64>, (usize, String)> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| (lineno, format!("bad value `{t}`")))
        })
        .collect()
}

pub struct OracleCheckArgs {
    pub trials: u64,
    pub seed: u64,
    pub max_ell: usize,
    pub max_deg_g: usize,
    pub max_weight: usize,
    pub replay: Option<String>,
    pub inject_bug: bool,
}

pub fn oracle_check(args: OracleCheckArgs) -> i32 {
    if let Some(path) = &args.replay {
        let text = match read_file(path) {
            Ok(t) => t,
            Err(c) => return c,
        };
        let inst = match parse_instance(&text) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("error: {path}: {e}");
                return 2;
            }
        };
        return check_one(&inst, args.inject_bug);
    }

    let cfg = SampleConfig {
        ell: 1..=args.max_ell.max(1),
        modulus_degree: 1..=args.max_deg_g.max(1),
        weight: 0..=args.max_weight,
        ..SampleConfig::default()
    };
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    for trial in 0..args.trials {
        let inst = random_instance(&cfg, &mut rng);
        let code = check_one(&inst, args.inject_bug);
        if code != 0 {
            eprintln!("disagreement at trial {trial} (seed {})", args.seed);
            return code;
        }
    }
    println!(
        "ok: {} instances, all solvers agree with the oracle",
        args.trials
    );
    0
}

/// Runs every solver plus the oracle on one instance; on any mismatch
/// prints the instance in replayable form and returns 1.
fn check_one(inst: &MgLfsrInstance, inject_bug: bool) -> i32 {
    let cap = oracle::default_degree_cap(inst);
    let Some((want, _witness)) = oracle::minimal_degree_by_linear_algebra(inst, cap) else {
        eprintln!("oracle found no solution (internal error)");
        print!("{}", format_instance(inst));
        return 1;
    };
    for alg in Algorithm::ALL {
        let mut sol = inst.solve(alg);
        if inject_bug && alg == Algorithm::Demand {
            // Harness self-test: push the reported solution off by one.
            sol.lambda = sol.lambda.mul(&Poly::monomial(inst.field(), 1, 1));
        }
        let got = sol.lambda.degree();
        if got != Degree::Finite(want) || !inst.is_solution(&sol.as_vector()) {
            eprintln!("counterexample: {alg} returned degree {got}, oracle minimum is {want}");
            print!("{}", format_instance(inst));
            return 1;
        }
    }
    0
}
