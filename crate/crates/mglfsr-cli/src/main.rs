//! Command-line front door: solve instances from files, decode received
//! words, cross-check the solvers against the oracle, and emit benchmark
//! tables.

mod bench;
mod commands;

use clap::{Parser, Subcommand};

/// Exit codes: 0 success (or full agreement / decoded), 1 failure or
/// disagreement, 2 parse or usage error.
#[derive(Parser)]
#[command(
    name = "mglfsr",
    version,
    about = "Multi-sequence shift-register synthesis and Power-Gao decoding over GF(p)",
    after_help = "Seeds default to the MGLFSR_SEED environment variable, then 0."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print lambda and the omegas.
    ///
    /// Instance format (one item per line, `#` comments allowed):
    /// `p <prime>`, `ell <l>`, `nu <nu>`, `w <w_0> .. <w_l>`, then l lines
    /// `S <i> <coeffs ascending>` and l lines `G <i> <coeffs ascending>`.
    Solve {
        /// Path to the instance file.
        path: String,
        /// Solver to run.
        #[arg(long, default_value = "ms")]
        alg: String,
        /// Also print the row-reduction count and its bound.
        #[arg(long)]
        stats: bool,
    },
    /// Decode a received word file.
    ///
    /// Format: line 1 `p n k`, line 2 `alphas <n values>`, line 3
    /// `r <n values>`. Exit 0 when decoded, 1 on decoding failure.
    Decode {
        /// Path to the received-word file.
        path: String,
        /// Number of powers of the received word to use.
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Solver to run.
        #[arg(long, default_value = "ms")]
        alg: String,
    },
    /// Run random instances through all four solvers and the oracle;
    /// exit 0 only on complete agreement, printing any counterexample in
    /// the instance file format.
    OracleCheck {
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// RNG seed; defaults to MGLFSR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest number of sequences to draw.
        #[arg(long, default_value_t = 3)]
        max_ell: usize,
        /// Largest modulus degree to draw.
        #[arg(long, default_value_t = 8)]
        max_deg_g: usize,
        /// Largest weight to draw.
        #[arg(long, default_value_t = 4)]
        max_weight: usize,
        /// Check one instance from a file instead of sampling.
        #[arg(long)]
        replay: Option<String>,
        /// Deliberately corrupt one solver output (harness self-test).
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
    /// Time the solvers over seeded random instances and print a CSV
    /// table of median wall times.
    Bench {
        /// Comma-separated sequence counts.
        #[arg(long, default_value = "1,2")]
        ell: String,
        /// Comma-separated modulus degrees.
        #[arg(long, default_value = "64,128")]
        m: String,
        /// Comma-separated algorithms.
        #[arg(long, default_value = "ms,ms_mod,alekhnovich,demand")]
        alg: String,
        /// Modulus shapes to run: monomial, dense or both.
        #[arg(long, default_value = "both")]
        shape: String,
        /// RNG seed; defaults to MGLFSR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per table cell.
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

fn default_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed.unwrap_or_else(|| {
        std::env::var("MGLFSR_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve { path, alg, stats } => commands::solve(&path, &alg, stats),
        Command::Decode { path, ell, alg } => commands::decode(&path, ell, &alg),
        Command::OracleCheck {
            trials,
            seed,
            max_ell,
            max_deg_g,
            max_weight,
            replay,
            inject_bug,
        } => commands::oracle_check(commands::OracleCheckArgs {
            trials,
            seed: default_seed(seed),
            max_ell,
            max_deg_g,
            max_weight,
            replay,
            inject_bug,
        }),
        Command::Bench {
            ell,
            m,
            alg,
            shape,
            seed,
            trials,
        } => bench::run(&ell, &m, &alg, &shape, default_seed(seed), trials),
    };
    std::process::exit(code);
}
