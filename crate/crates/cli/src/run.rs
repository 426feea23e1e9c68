//! Subcommand implementations and CSV emission.
//!
//! All stochastic subcommands derive every random stream from the single
//! resolved seed (stream_id = trajectory index), so re-runs with the same
//! seed produce byte-identical artifacts. CSV files are written to a
//! temporary sibling and renamed into place.

use crate::cli::{ChainKind, Cli, Command};
use crate::oracle::{oracle_tv_curve, MAX_ORACLE_N};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use stratawalk::coupling::{coupling_time, default_t_cap, worst_start, CouplingOutcome};
use stratawalk::lumped::{exact_tv_curve, hitting_moments_for, tmix, ChainSpec, CurveCache, Space};
use stratawalk::matrix::{generate_key, naive_cost, naive_multiply, replay_answer, verify};
use stratawalk::{CubeState, RngStream};

/// Largest W state space exact mode will materialize.
pub const MAX_W_STATES: usize = 1 << 24;

/// Failures after successful argument parsing.
#[derive(Debug)]
pub enum RunError {
    /// Semantically invalid flags; exits with the usage code 2.
    Usage(String),
    /// Filesystem failure; exits with code 1.
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(msg) => write!(f, "{msg}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<stratawalk::Error> for RunError {
    fn from(e: stratawalk::Error) -> Self {
        RunError::Usage(e.to_string())
    }
}

pub type RunResult = Result<(), RunError>;

/// A float with 12 significant digits.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Write `content` atomically: temp sibling, then rename.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)
}

fn emit(out: Option<&Path>, content: &str) -> RunResult {
    match out {
        Some(path) => write_atomic(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

fn parse_start_state(
    n: usize,
    start: Option<&str>,
    start_weight: Option<usize>,
) -> Result<CubeState, RunError> {
    match (start, start_weight) {
        (Some(s), _) => {
            let state: CubeState = s.parse()?;
            if state.n() != n {
                return Err(usage(format!("--start has length {}, --n is {n}", state.n())));
            }
            Ok(state)
        }
        (None, w) => Ok(CubeState::prefix_ones(n, w.unwrap_or(1))?),
    }
}

fn chain_spec(
    n: usize,
    chain: ChainKind,
    m: Option<usize>,
    start: Option<&str>,
) -> Result<(usize, ChainSpec), RunError> {
    match chain {
        ChainKind::H => {
            if m.is_some() {
                return Err(usage("--m only applies to --chain w"));
            }
            let k = match start {
                Some(s) => s
                    .parse()
                    .map_err(|_| usage(format!("--start {s} is not a level for the h chain")))?,
                None => 1,
            };
            Ok((0, ChainSpec::Hamming { start: k }))
        }
        ChainKind::W => {
            let m = m.unwrap_or(1);
            let space = Space::blocks(n, m)?;
            if space.size() > MAX_W_STATES {
                return Err(usage(format!(
                    "W state space has {} states (cap {MAX_W_STATES}); use Monte Carlo via `simulate` instead",
                    space.size()
                )));
            }
            let (a, b) = match start {
                Some(s) => {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| usage(format!("--start {s} should be `a,b` for the w chain")))?;
                    let a = a.trim().parse().map_err(|_| usage("bad --start"))?;
                    let b = b.trim().parse().map_err(|_| usage("bad --start"))?;
                    (a, b)
                }
                None => (m, 0),
            };
            space.index_w(a, b)?;
            Ok((m, ChainSpec::Blocks { m, start: (a, b) }))
        }
    }
}

fn spec_start(spec: &ChainSpec) -> (usize, usize) {
    match *spec {
        ChainSpec::Hamming { start } => (start, 0),
        ChainSpec::Blocks { start, .. } => start,
    }
}

fn curve_csv(n: usize, m: usize, (sa, sb): (usize, usize), curve: &[(u64, f64)]) -> String {
    let mut csv = String::from("n,m,start_a,start_b,t,tv\n");
    for &(t, tv) in curve {
        writeln!(csv, "{n},{m},{sa},{sb},{t},{}", sig12(tv)).expect("string write");
    }
    csv
}

pub fn run(cli: &Cli) -> RunResult {
    let seed = cli.resolved_seed();
    match &cli.command {
        Command::Simulate {
            n,
            start,
            start_weight,
            t,
            trials,
            out,
        } => {
            let n = *n;
            let start = parse_start_state(n, start.as_deref(), *start_weight)?;
            let results: Vec<(CubeState, stratawalk::MoveLog)> = (0..*trials)
                .into_par_iter()
                .map(|run| {
                    let mut rng = RngStream::new(seed, run);
                    stratawalk::walk::simulate(&start, *t, &mut rng)
                })
                .collect();
            for (run, (state, _)) in results.iter().enumerate() {
                println!("{run},{state},{}", state.hamming());
            }
            if let Some(path) = out {
                if *trials != 1 {
                    return Err(usage("--out writes a single move log; use --trials 1"));
                }
                let mut buf = Vec::new();
                results[0].1.write_to(&mut buf)?;
                write_atomic(path, std::str::from_utf8(&buf).expect("ascii log"))?;
            }
            Ok(())
        }

        Command::ExactTv {
            n,
            chain,
            m,
            start,
            t_max,
            out,
        } => {
            let (m, spec) = chain_spec(*n, *chain, *m, start.as_deref())?;
            let curve = exact_tv_curve(*n, &spec, *t_max)?;
            emit(out.as_deref(), &curve_csv(*n, m, spec_start(&spec), &curve))
        }

        Command::OracleTv {
            n,
            start,
            start_weight,
            t_max,
            out,
        } => {
            if *n > MAX_ORACLE_N {
                return Err(usage(format!("oracle-tv supports n <= {MAX_ORACLE_N}")));
            }
            let start = parse_start_state(*n, start.as_deref(), *start_weight)?;
            let curve = oracle_tv_curve(&start, *t_max)?;
            emit(
                out.as_deref(),
                &curve_csv(*n, 0, (start.hamming(), 0), &curve),
            )
        }

        Command::Tmix {
            n,
            eps,
            chain,
            m,
            start,
            out,
        } => {
            if !(*eps > 0.0 && *eps < 1.0) {
                return Err(usage("--eps must lie in (0, 1)"));
            }
            let (_, spec) = chain_spec(*n, *chain, *m, start.as_deref())?;
            let t = tmix(*n, *eps, &spec)?;
            println!("{t}");
            if let Some(path) = out {
                let nlogn = *n as f64 * (*n as f64).ln();
                let mut csv = String::from("n,eps,tmix,tmix_over_nlogn\n");
                writeln!(csv, "{n},{},{t},{}", sig12(*eps), sig12(t as f64 / nlogn))
                    .expect("string write");
                write_atomic(path, &csv)?;
            }
            Ok(())
        }

        Command::Hitting { n, target, start } => {
            let hm = hitting_moments_for(*n, *target)?;
            let starts: Vec<usize> = match start {
                Some(k) => {
                    if *k < 1 || *k > *n {
                        return Err(usage(format!("--start {k} out of range 1..={n}")));
                    }
                    vec![*k]
                }
                None => (1..=*n).collect(),
            };
            println!("n={n} target={target}");
            for k in starts {
                println!(
                    "start={k} mean={} variance={}",
                    sig12(hm.mean(k)),
                    sig12(hm.variance(k))
                );
            }
            Ok(())
        }

        Command::Couple {
            n,
            start_weight,
            trials,
            t_cap,
            out,
            trace,
        } => {
            let n = *n;
            let xbar = start_weight.unwrap_or(n / 2);
            let (x, y) = worst_start(n, xbar)?;
            let t_cap = t_cap.unwrap_or_else(|| default_t_cap(n));
            let keep_traces = trace.is_some();
            let runs: Vec<_> = (0..*trials)
                .into_par_iter()
                .map(|run| {
                    let mut rng = RngStream::new(seed, run);
                    let (outcome, tr) =
                        coupling_time(&x, &y, xbar, &mut rng, t_cap).expect("validated start");
                    (run, outcome, keep_traces.then_some(tr))
                })
                .collect();

            let mut csv = String::from("n,m,run,tau,capped\n");
            for (run, outcome, _) in &runs {
                let (tau, capped) = match outcome {
                    CouplingOutcome::Met { tau } => (*tau, 0),
                    CouplingOutcome::Capped { t_cap } => (*t_cap, 1),
                };
                writeln!(csv, "{n},{xbar},{run},{tau},{capped}").expect("string write");
            }
            emit(out.as_deref(), &csv)?;

            if let Some(path) = trace {
                let mut csv = String::from("run,t,h,gap,mart\n");
                for (run, _, tr) in &runs {
                    for r in tr.as_ref().expect("traces kept").records() {
                        writeln!(csv, "{run},{},{},{},{}", r.t, r.h, r.gap, sig12(r.mart))
                            .expect("string write");
                    }
                }
                write_atomic(path, &csv)?;
            }
            Ok(())
        }

        Command::CutoffProfile {
            n_list,
            alpha_min,
            alpha_max,
            alpha_step,
            eps_list,
            out,
        } => {
            let ns: Vec<usize> = n_list
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| usage("bad --n-list")))
                .collect::<Result<_, _>>()?;
            if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] < 8 {
                return Err(usage("--n-list must be ascending with every n >= 8"));
            }
            if !(*alpha_step > 0.0) || alpha_max < alpha_min {
                return Err(usage("bad alpha grid"));
            }
            let eps_list = if eps_list.is_empty() {
                vec![0.9, 0.75, 0.5, 0.25, 0.1]
            } else {
                eps_list.clone()
            };
            if eps_list.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
                return Err(usage("--eps values must lie in (0, 1)"));
            }
            let mut alphas = Vec::new();
            let mut a = *alpha_min;
            while a <= alpha_max + 1e-12 {
                alphas.push(a);
                a += alpha_step;
            }

            // per-n curves in parallel, assembled in ascending-n order
            let per_n: Vec<_> = ns
                .par_iter()
                .map(|&n| {
                    let spec = ChainSpec::Blocks { m: 1, start: (1, 0) };
                    let mut cache = CurveCache::new(n, &spec)?;
                    let nlogn = n as f64 * (n as f64).ln();
                    let profile: Vec<(f64, u64, f64)> = alphas
                        .iter()
                        .map(|&alpha| {
                            let t = (1.5 * nlogn + alpha * n as f64).round().max(0.0) as u64;
                            (alpha, t, cache.eval(t))
                        })
                        .collect();
                    let tmixes: Vec<(f64, u64)> = eps_list
                        .iter()
                        .map(|&eps| Ok((eps, tmix(n, eps, &spec)?)))
                        .collect::<Result<_, stratawalk::Error>>()?;
                    Ok::<_, stratawalk::Error>((n, profile, tmixes))
                })
                .collect::<Result<_, _>>()?;

            fs::create_dir_all(out)?;
            let mut profile_csv = String::from("n,alpha,t,tv\n");
            let mut tmix_csv = String::from("n,eps,tmix,tmix_over_nlogn\n");
            for (n, profile, tmixes) in &per_n {
                let nlogn = *n as f64 * (*n as f64).ln();
                for (alpha, t, tv) in profile {
                    writeln!(profile_csv, "{n},{},{t},{}", sig12(*alpha), sig12(*tv))
                        .expect("string write");
                }
                for (eps, t) in tmixes {
                    writeln!(
                        tmix_csv,
                        "{n},{},{t},{}",
                        sig12(*eps),
                        sig12(*t as f64 / nlogn)
                    )
                    .expect("string write");
                }
            }
            write_atomic(&out.join("profile.csv"), &profile_csv)?;
            write_atomic(&out.join("tmix.csv"), &tmix_csv)?;
            Ok(())
        }

        Command::AuthDemo { n, t, budget } => {
            let n = *n;
            let mut rng = RngStream::new(seed, 0);
            let key = generate_key(n, *t, &mut rng)?;
            // uniform nonzero challenge
            let mut challenge = RngStream::new(seed, 1);
            let x = loop {
                let mut bits = stratawalk::bits::BitVec::zeros(n);
                for i in 0..n {
                    bits.set(i, challenge.next_bool(0.5));
                }
                if !bits.is_zero() {
                    break bits;
                }
            };
            let budget = budget.unwrap_or(2 * t);
            let (y, prover_ops) = replay_answer(&key, &x)?;
            let (y_naive, verifier_ops) = naive_multiply(key.public_matrix(), &x)?;
            let accepted = verify(key.public_matrix(), &x, &y, prover_ops, budget)?;
            println!("n={n} t={t} budget={budget}");
            println!("challenge={x}");
            println!("answer={y}");
            println!("prover_ops={prover_ops} naive_ops={verifier_ops} naive_cost={}", naive_cost(n));
            println!("answers_agree={}", y == y_naive);
            println!("accepted={accepted}");
            Ok(())
        }
    }
}
