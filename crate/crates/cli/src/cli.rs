//! Command-line interface definition.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "STRATAWALK_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "stratawalk",
    about = "Stratified hypercube walk: simulation, exact mixing analysis, couplings, and the row-addition authentication demo",
    version
)]
pub struct Cli {
    /// RNG seed (default: $STRATAWALK_SEED, then 0)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    /// Seed resolution: flag, then environment, then 0.
    pub fn resolved_seed(&self) -> u64 {
        self.seed
            .or_else(|| std::env::var(SEED_ENV).ok()?.parse().ok())
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChainKind {
    /// Hamming weight chain on {1..n}
    H,
    /// Two-block ones-count chain on pairs (a, b)
    W,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate walk trajectories; prints "run,final,weight" lines
    Simulate {
        #[arg(long)]
        n: usize,
        /// Start state as a 0/1 string (coordinate 0 leftmost)
        #[arg(long, conflicts_with = "start_weight")]
        start: Option<String>,
        /// Start from the state with this many leading ones (default 1)
        #[arg(long)]
        start_weight: Option<usize>,
        /// Number of steps per trajectory
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// With --trials 1: write the move log here (replayable key format)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact lumped-chain TV curve; CSV `n,m,start_a,start_b,t,tv`
    ExactTv {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ChainKind::W)]
        chain: ChainKind,
        /// Block split for the w chain (default 1)
        #[arg(long)]
        m: Option<usize>,
        /// Start: `k` for the h chain, `a,b` for the w chain (default m,0)
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        t_max: u64,
        /// Output CSV path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force full-chain TV curve (n <= 12); same CSV schema with m=0
    OracleTv {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "start_weight")]
        start: Option<String>,
        #[arg(long)]
        start_weight: Option<usize>,
        #[arg(long)]
        t_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least t with d(t) <= eps; prints the step count
    Tmix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ChainKind::H)]
        chain: ChainKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        start: Option<String>,
        /// Also append a `n,eps,tmix,tmix_over_nlogn` CSV row here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact hitting-time moments of a Hamming level
    Hitting {
        #[arg(long)]
        n: usize,
        /// Level whose hitting time is analysed
        #[arg(long)]
        target: usize,
        /// Report a single start level (default: all)
        #[arg(long)]
        start: Option<usize>,
    },
    /// Sample pairing-coupling times from the worst start; CSV `n,m,run,tau,capped`
    Couple {
        #[arg(long)]
        n: usize,
        /// Common Hamming weight of the two starts (default n/2)
        #[arg(long)]
        start_weight: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Cap on coupled steps (default 50 n ln n)
        #[arg(long)]
        t_cap: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-step traces; CSV `run,t,h,gap,mart`
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exact cutoff profile over an n grid; writes profile.csv and tmix.csv
    CutoffProfile {
        /// Comma-separated dimensions, ascending (e.g. 64,128,256)
        #[arg(long)]
        n_list: String,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        alpha_min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        alpha_max: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_step: f64,
        /// Thresholds for the tmix table (repeatable)
        #[arg(long = "eps", num_args = 1..)]
        eps_list: Vec<f64>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Row-addition authentication protocol demo with operation counters
    AuthDemo {
        #[arg(long)]
        n: usize,
        /// Secret walk length
        #[arg(long)]
        t: u64,
        /// Verifier's operation budget (default 2t)
        #[arg(long)]
        budget: Option<u64>,
    },
}
