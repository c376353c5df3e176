//! The bench subcommand: CSV of median solver wall times over seeded
//! random instances, with monomial moduli (the demand fast path) and
//! dense moduli (the general path) reported separately.

use std::str::FromStr;
use std::time::Instant;

use mglfsr::instance::Algorithm;
use mglfsr::sampling::{random_instance, SampleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

const BENCH_PRIME: u64 = 65537;

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, i32> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        match tok.parse::<T>() {
            Ok(v) => out.push(v),
            Err(_) => {
                eprintln!("error: bad {what} entry `{tok}`");
                return Err(2);
            }
        }
    }
    if out.is_empty() {
        eprintln!("error: empty {what} list");
        return Err(2);
    }
    Ok(out)
}

pub fn run(ell: &str, m: &str, alg: &str, shape: &str, seed: u64, trials: usize) -> i32 {
    let ells: Vec<usize> = match parse_list(ell, "--ell") {
        Ok(v) => v,
        Err(c) => return c,
    };
    let ms: Vec<usize> = match parse_list(m, "--m") {
        Ok(v) => v,
        Err(c) => return c,
    };
    let algs: Vec<Algorithm> = match parse_list(alg, "--alg") {
        Ok(v) => v,
        Err(c) => return c,
    };
    let shapes: Vec<bool> = match shape {
        "monomial" => vec![true],
        "dense" => vec![false],
        "both" => vec![true, false],
        other => {
            eprintln!("error: bad --shape `{other}` (monomial, dense or both)");
            return 2;
        }
    };
    let trials = trials.max(1);

    println!("shape,alg,ell,m,median_us");
    for &monomial in &shapes {
        for &ell in &ells {
            for &m in &ms {
                let cfg = SampleConfig {
                    primes: vec![BENCH_PRIME],
                    ell: ell..=ell,
                    nu: 1..=1,
                    modulus_degree: m..=m,
                    weight: 0..=0,
                    monomial_moduli: monomial,
                };
                for &alg in &algs {
                    let micros = median_micros(&cfg, alg, seed, trials);
                    let label = if monomial { "monomial" } else { "dense" };
                    println!("{label},{alg},{ell},{m},{micros}");
                }
            }
        }
    }
    0
}

fn median_micros(cfg: &SampleConfig, alg: Algorithm, seed: u64, trials: usize) -> u128 {
    let mut times: Vec<u128> = (0..trials)
        .map(|t| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37));
            let inst = random_instance(cfg, &mut rng);
            let start = Instant::now();
            let sol = inst.solve(alg);
            let elapsed = start.elapsed().as_micros();
            assert!(!sol.lambda.is_zero());
            elapsed
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}
