//! Statistical validation: simulated laws against exact kernels, and the
//! lazy pairing-coupling step against its explicit-permutation reference.
//! All tests use fixed seeds; chi-square thresholds sit at the 0.999 (or
//! Sidak-corrected) quantile.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use stratawalk::coupling::{
    h_coupling_time, pair_coupled_step, pair_coupled_step_explicit, worst_start,
    CouplingOutcome, PairCouplingState,
};
use stratawalk::lumped::{evolve, h_kernel, DistVector, Kernel};
use stratawalk::walk::{sample_pair, step, simulate};
use stratawalk::{CubeState, OrderedPair, RngStream};

fn chi2_crit(df: usize, p: f64) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(p)
}

/// One-sample chi-square of counts against exact probabilities.
fn chi2_stat(counts: &[u64], probs: &[f64], samples: u64) -> (f64, usize) {
    let mut stat = 0.0;
    let mut df = 0;
    for (&c, &p) in counts.iter().zip(probs) {
        if p == 0.0 {
            assert_eq!(c, 0, "impossible outcome observed");
            continue;
        }
        let e = p * samples as f64;
        stat += (c as f64 - e).powi(2) / e;
        df += 1;
    }
    (stat, df - 1)
}

#[test]
fn one_step_law_matches_pair_enumeration() {
    // empirical one-step law from several fixed starts vs the exact law
    // obtained by enumerating all n(n-1) ordered pairs
    let starts = ["100", "110", "1010", "1110", "10011", "01110"];
    for (case, text) in starts.iter().enumerate() {
        let start: CubeState = text.parse().unwrap();
        let n = start.n();
        // exact law over next states, keyed by text form
        let mut exact: std::collections::BTreeMap<String, f64> = Default::default();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let next = step(&start, OrderedPair::new(i, j, n).unwrap()).unwrap();
                *exact.entry(next.to_string()).or_default() += 1.0 / (n * (n - 1)) as f64;
            }
        }
        let keys: Vec<&String> = exact.keys().collect();
        let samples = 200_000u64;
        let mut counts = vec![0u64; keys.len()];
        let mut rng = RngStream::new(31, case as u64);
        for _ in 0..samples {
            let pair = sample_pair(&mut rng, n).unwrap();
            let next = step(&start, pair).unwrap().to_string();
            let idx = keys.iter().position(|k| **k == next).expect("reachable state");
            counts[idx] += 1;
        }
        let probs: Vec<f64> = keys.iter().map(|k| exact[*k]).collect();
        let (stat, df) = chi2_stat(&counts, &probs, samples);
        assert!(
            stat <= chi2_crit(df, 0.9999),
            "start {text}: chi2 {stat} (df {df})"
        );
    }
}

#[test]
fn simulated_weight_marginal_matches_lumped_chain() {
    // H_50 over 100k trajectories at n=3 vs the exact Hamming-chain law
    let n = 3;
    let t = 50;
    let trials = 100_000u64;
    let start = CubeState::unit(n, 0).unwrap();
    let mut counts = vec![0u64; n];
    for run in 0..trials {
        let mut rng = RngStream::new(32, run);
        let (final_state, _) = simulate(&start, t, &mut rng);
        counts[final_state.hamming() - 1] += 1;
    }
    let kernel = h_kernel(n).unwrap();
    let d0 = DistVector::point_mass(*Kernel::space(&kernel), 0).unwrap();
    let exact = evolve(&kernel, &d0, t).unwrap();
    let (stat, df) = chi2_stat(&counts, exact.probs(), trials);
    assert!(stat <= chi2_crit(df, 0.9999), "chi2 {stat} (df {df})");
}

/// Two-sample chi-square with equal sample sizes:
/// sum (a_o - b_o)^2 / (a_o + b_o), df = outcomes - 1.
fn two_sample_stat(a: &std::collections::BTreeMap<String, u64>, b: &std::collections::BTreeMap<String, u64>) -> (f64, usize) {
    let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let mut stat = 0.0;
    for k in &keys {
        let x = *a.get(*k).unwrap_or(&0) as f64;
        let y = *b.get(*k).unwrap_or(&0) as f64;
        stat += (x - y).powi(2) / (x + y);
    }
    (stat, keys.len() - 1)
}

#[test]
fn lazy_pairing_step_matches_explicit_permutation_reference() {
    // joint next-state law (z', zt') of the O(1) step vs the full
    // Fisher-Yates permutation implementation
    let configs = [
        ("110100", "011010", 3usize),
        ("111000", "000111", 3),
        ("110000", "000011", 2),
        ("111100", "110011", 4),
    ];
    let samples = 150_000u64;
    for (case, (z, zt, m)) in configs.iter().enumerate() {
        let base = PairCouplingState::new(z.parse().unwrap(), zt.parse().unwrap(), *m).unwrap();
        let mut lazy: std::collections::BTreeMap<String, u64> = Default::default();
        let mut explicit = lazy.clone();
        let mut rng1 = RngStream::new(33, case as u64);
        let mut rng2 = RngStream::new(34, case as u64);
        for _ in 0..samples {
            let mut s = base.clone();
            pair_coupled_step(&mut s, &mut rng1);
            *lazy.entry(format!("{}|{}", s.z(), s.zt())).or_default() += 1;
            let mut s = base.clone();
            pair_coupled_step_explicit(&mut s, &mut rng2);
            *explicit.entry(format!("{}|{}", s.z(), s.zt())).or_default() += 1;
        }
        let (stat, df) = two_sample_stat(&lazy, &explicit);
        assert!(
            stat <= chi2_crit(df, 0.9999),
            "config {case}: chi2 {stat} (df {df})"
        );
    }
}

#[test]
fn height_coupling_meets_well_before_the_cap() {
    for n in [64usize, 128] {
        let t_cap = stratawalk::coupling::default_t_cap(n);
        let runs = 10_000u64;
        let mut total = 0u64;
        for run in 0..runs {
            let mut rng = RngStream::new(35, run);
            match h_coupling_time(n, 1, &mut rng, t_cap).unwrap() {
                CouplingOutcome::Met { tau } => total += tau,
                CouplingOutcome::Capped { .. } => panic!("n={n} run {run} hit the cap"),
            }
        }
        let mean = total as f64 / runs as f64;
        let nlogn = n as f64 * (n as f64).ln();
        assert!(mean <= 5.0 * nlogn, "n={n}: mean tau {mean} vs n ln n {nlogn}");
    }
}

#[test]
fn supermartingale_mean_is_nonincreasing_up_to_noise() {
    let n = 32usize;
    let (x, y) = worst_start(n, n / 2).unwrap();
    let runs = 20_000u64;
    let checkpoints = [0usize, 20, 60, 120, 240];
    let t_cap = *checkpoints.last().unwrap() as u64;
    let mut sums = vec![0.0; checkpoints.len()];
    let mut sqsums = vec![0.0; checkpoints.len()];
    for run in 0..runs {
        let mut rng = RngStream::new(36, run);
        let (_, trace) = stratawalk::coupling::coupling_time(&x, &y, n / 2, &mut rng, t_cap).unwrap();
        let records = trace.records();
        for (i, &t) in checkpoints.iter().enumerate() {
            // after meeting the martingale is frozen at zero
            let m = records.get(t).map_or(0.0, |r| r.mart);
            sums[i] += m;
            sqsums[i] += m * m;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / runs as f64).collect();
    for (i, w) in means.windows(2).enumerate() {
        let var = sqsums[i + 1] / runs as f64 - means[i + 1].powi(2);
        let se = (var / runs as f64).sqrt();
        assert!(
            w[1] <= w[0] + 4.0 * se,
            "mean M rose between checkpoints {i} and {}: {means:?}",
            i + 1
        );
    }
    assert!((means[0] - (n / 2) as f64).abs() < 1e-12); // D_0 = n/2 from the worst start
}
