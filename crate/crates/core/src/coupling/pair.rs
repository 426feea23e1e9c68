//! Uniform-pairing coupling of two full chains with equal Hamming weight.
//!
//! At each step the ones of the first chain are paired uniformly at random
//! with the ones of the second (likewise the zeros); the second chain replays
//! the first chain's move through the pairing. Once the block counts agree,
//! pairings respect blocks and the counts stay matched forever.
//!
//! Only the partner of the target coordinate affects the states, so the step
//! samples that partner directly from its class marginal instead of
//! materializing the permutation; `pair_coupled_step_explicit` is the
//! permutation-based reference the lazy form is tested against.

use crate::coupling::CouplingOutcome;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::state::CubeState;
use crate::walk::sample_pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    PreMatch,
    PostMatch,
}

/// Joint state (Z_t, Z~_t) with the block split m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCouplingState {
    z: CubeState,
    zt: CubeState,
    m: usize,
    phase: Phase,
}

impl PairCouplingState {
    pub fn new(z: CubeState, zt: CubeState, m: usize) -> Result<Self> {
        if z.n() != zt.n() {
            return Err(Error::LengthMismatch {
                expected: z.n(),
                got: zt.n(),
            });
        }
        if z.hamming() != zt.hamming() {
            return Err(Error::WeightMismatch(z.hamming(), zt.hamming()));
        }
        let (a, _) = z.block_counts(m)?;
        let (at, _) = zt.block_counts(m)?;
        if a < at {
            return Err(Error::InconsistentCounts);
        }
        let phase = if a == at {
            Phase::PostMatch
        } else {
            Phase::PreMatch
        };
        Ok(PairCouplingState { z, zt, m, phase })
    }

    pub fn z(&self) -> &CubeState {
        &self.z
    }

    pub fn zt(&self) -> &CubeState {
        &self.zt
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn hamming(&self) -> usize {
        self.z.hamming()
    }

    /// Block gap D_t = X_t - X~_t.
    pub fn gap(&self) -> usize {
        let (a, _) = self.z.block_counts(self.m).expect("m validated");
        let (at, _) = self.zt.block_counts(self.m).expect("m validated");
        a - at
    }
}

/// Uniform partner of coordinate `p` of `z` inside `zt`, marginalized over
/// the rest of the pairing: uniform over the coordinates of `zt` holding the
/// same value (and, block-respecting, in the same block).
fn sample_partner(
    zt: &CubeState,
    p: usize,
    value: bool,
    block_respecting: bool,
    m: usize,
    rng: &mut RngStream,
) -> usize {
    let n = zt.n();
    let (lo, hi) = if block_respecting {
        if p < m {
            (0, m)
        } else {
            (m, n)
        }
    } else {
        (0, n)
    };
    let count = zt.bits().count_in_range(lo, hi, value);
    debug_assert!(count > 0);
    let k = rng.next_below(count as u64) as usize;
    zt.bits().select_in_range(lo, hi, value, k, None)
}

/// One joint step. Each marginal is exactly one step of the full chain.
pub fn pair_coupled_step(state: &mut PairCouplingState, rng: &mut RngStream) {
    let n = state.z.n();
    if state.phase == Phase::PreMatch && state.gap() == 0 {
        state.phase = Phase::PostMatch;
    }
    let block_respecting = state.phase == Phase::PostMatch;
    let pair = sample_pair(rng, n).expect("n >= 2 by construction");
    let (i, j) = (pair.source(), pair.target());
    if !state.z.bit(i) {
        return; // zero source: both chains stay put
    }
    let vj = state.z.bit(j);
    let pj = sample_partner(&state.zt, j, vj, block_respecting, state.m, rng);
    state.z.flip(j);
    state.zt.flip(pj);
    debug_assert_eq!(state.z.hamming(), state.zt.hamming());
}

/// Reference implementation that materializes the full uniform pairing
/// permutation before replaying the move. Distributionally identical to
/// `pair_coupled_step`; kept for equivalence tests.
pub fn pair_coupled_step_explicit(state: &mut PairCouplingState, rng: &mut RngStream) {
    let n = state.z.n();
    if state.phase == Phase::PreMatch && state.gap() == 0 {
        state.phase = Phase::PostMatch;
    }
    let block_respecting = state.phase == Phase::PostMatch;

    // build the permutation class by class
    let mut perm = vec![usize::MAX; n];
    let classes: Vec<(usize, usize)> = if block_respecting {
        vec![(0, state.m), (state.m, n)]
    } else {
        vec![(0, n)]
    };
    for (lo, hi) in classes {
        for value in [false, true] {
            let src: Vec<usize> = (lo..hi).filter(|&p| state.z.bit(p) == value).collect();
            let mut dst: Vec<usize> = (lo..hi).filter(|&p| state.zt.bit(p) == value).collect();
            debug_assert_eq!(src.len(), dst.len());
            // Fisher-Yates
            for k in (1..dst.len()).rev() {
                let r = rng.next_below(k as u64 + 1) as usize;
                dst.swap(k, r);
            }
            for (s, d) in src.iter().zip(&dst) {
                perm[*s] = *d;
            }
        }
    }

    let pair = sample_pair(rng, n).expect("n >= 2 by construction");
    let (i, j) = (pair.source(), pair.target());
    if !state.z.bit(i) {
        return;
    }
    state.z.flip(j);
    state.zt.flip(perm[j]);
}

/// The one-step probabilities that the gap D moves by +1 or -1, on the event
/// that the chains have not yet matched. With H = X + Y:
///   p1  = H (m-X)(n-m-Y~) / (n(n-1)(n-H)) + (H-1) Y X~ / (n(n-1) H)
///   p-1 = H (m-X~)(n-m-Y) / (n(n-1)(n-H)) + (H-1) X Y~ / (n(n-1) H)
/// (the first summand is the vanishing limit 0 when H = n).
pub fn gap_move_probs(
    n: usize,
    m: usize,
    x: usize,
    y: usize,
    xt: usize,
    yt: usize,
) -> Result<(f64, f64)> {
    if m == 0 || m >= n {
        return Err(Error::SplitOutOfRange { m, n });
    }
    let h = x + y;
    if h != xt + yt || h < 1 || x < xt || x > m || xt > m || y > n - m || yt > n - m {
        return Err(Error::InconsistentCounts);
    }
    let base = (n * (n - 1)) as f64;
    let zero_pair = |src_zeros: usize, dst_zeros: usize| -> f64 {
        if h == n {
            0.0
        } else {
            (h * src_zeros * dst_zeros) as f64 / (base * (n - h) as f64)
        }
    };
    let one_pair = |src_ones: usize, dst_ones: usize| -> f64 {
        ((h - 1) * src_ones * dst_ones) as f64 / (base * h as f64)
    };
    let p1 = zero_pair(m - x, n - m - yt) + one_pair(y, xt);
    let p_minus1 = zero_pair(m - xt, n - m - y) + one_pair(x, yt);
    Ok((p1, p_minus1))
}

/// One record per step of a coupled run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRecord {
    pub t: u64,
    pub h: usize,
    pub gap: usize,
    pub mart: f64,
}

/// Per-step trace of (t, H_t, D_t, M_t), where
/// M_t = 1{tau > t} D_t exp(sum_{s<t} (2 H_s - 1)/n^2) is the
/// supermartingale certifying geometric gap decay.
#[derive(Debug, Clone, Default)]
pub struct GapTrace {
    records: Vec<GapRecord>,
}

impl GapTrace {
    pub fn records(&self) -> &[GapRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&GapRecord> {
        self.records.last()
    }
}

/// Runs the pairing coupling until the gap vanishes or `t_cap` steps elapse.
/// The trace covers t = 0 up to (and including) the meeting step.
pub fn coupling_time(
    start_z: &CubeState,
    start_zt: &CubeState,
    m: usize,
    rng: &mut RngStream,
    t_cap: u64,
) -> Result<(CouplingOutcome, GapTrace)> {
    let mut state = PairCouplingState::new(start_z.clone(), start_zt.clone(), m)?;
    let n = start_z.n();
    let n2 = (n * n) as f64;
    let mut trace = GapTrace::default();
    let mut log_weight = 0.0; // sum_{s<t} (2 H_s - 1)/n^2
    let mut prev_gap = state.gap();
    trace.records.push(GapRecord {
        t: 0,
        h: state.hamming(),
        gap: prev_gap,
        mart: prev_gap as f64,
    });
    if prev_gap == 0 {
        return Ok((CouplingOutcome::Met { tau: 0 }, trace));
    }
    for t in 1..=t_cap {
        let h_prev = state.hamming();
        log_weight += (2.0 * h_prev as f64 - 1.0) / n2;
        pair_coupled_step(&mut state, rng);
        let gap = state.gap();
        debug_assert!((gap as i64 - prev_gap as i64).abs() <= 1);
        prev_gap = gap;
        let mart = if gap == 0 {
            0.0
        } else {
            gap as f64 * log_weight.exp()
        };
        trace.records.push(GapRecord {
            t,
            h: state.hamming(),
            gap,
            mart,
        });
        if gap == 0 {
            return Ok((CouplingOutcome::Met { tau: t }, trace));
        }
    }
    Ok((CouplingOutcome::Capped { t_cap }, trace))
}

/// The start pair the coupling is slowest for: x has its xbar ones on the
/// first coordinates, y has block counts (max{0, 2 xbar - n}, min{xbar, n - xbar}).
pub fn worst_start(n: usize, xbar: usize) -> Result<(CubeState, CubeState)> {
    if xbar == 0 || xbar > n {
        return Err(Error::IndexOutOfRange { index: xbar, n });
    }
    let m = xbar;
    let x = CubeState::prefix_ones(n, xbar)?;
    let a = 2 * xbar as i64 - n as i64;
    let a = a.max(0) as usize;
    let b = xbar.min(n - xbar);
    let mut bits = crate::bits::BitVec::zeros(n);
    for i in 0..a {
        bits.set(i, true);
    }
    for i in 0..b {
        bits.set(m + i, true);
    }
    let y = CubeState::new(bits)?;
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> CubeState {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_unequal_weights() {
        assert!(matches!(
            PairCouplingState::new(st("1100"), st("1000"), 2),
            Err(Error::WeightMismatch(2, 1))
        ));
    }

    #[test]
    fn invariants_along_a_run() {
        let (x, y) = worst_start(8, 4).unwrap();
        let mut state = PairCouplingState::new(x, y, 4).unwrap();
        let mut rng = RngStream::new(21, 0);
        let mut prev_gap = state.gap();
        for _ in 0..2000 {
            pair_coupled_step(&mut state, &mut rng);
            assert_eq!(state.z().hamming(), state.zt().hamming());
            let gap = state.gap();
            assert!((gap as i64 - prev_gap as i64).abs() <= 1);
            if state.phase() == Phase::PostMatch {
                assert_eq!(gap, 0);
                assert_eq!(
                    state.z().block_counts(4).unwrap(),
                    state.zt().block_counts(4).unwrap()
                );
            }
            prev_gap = gap;
        }
    }

    #[test]
    fn matched_blocks_stay_matched() {
        let mut state = PairCouplingState::new(st("110010"), st("101001"), 3).unwrap();
        // equal block counts at entry: the coupling is already matched
        assert_eq!(state.phase(), Phase::PostMatch);
        assert_eq!(state.gap(), 0);
        let mut rng = RngStream::new(2, 0);
        for _ in 0..500 {
            pair_coupled_step(&mut state, &mut rng);
            assert_eq!(state.gap(), 0);
        }
    }

    #[test]
    fn gap_probs_worked_case() {
        let (p1, pm1) = gap_move_probs(4, 2, 2, 0, 1, 1).unwrap();
        assert_eq!(p1, 0.0);
        assert!((pm1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gap_probs_symmetric_when_matched() {
        for (n, m, x, y) in [(6usize, 3usize, 2usize, 1usize), (8, 4, 1, 3), (5, 2, 2, 2)] {
            let (p1, pm1) = gap_move_probs(n, m, x, y, x, y).unwrap();
            assert!((p1 - pm1).abs() < 1e-15);
        }
    }

    #[test]
    fn gap_probs_supermartingale_direction_grid() {
        for n in 2..=20usize {
            for m in 1..n {
                for x in 0..=m {
                    for y in 0..=(n - m) {
                        let h = x + y;
                        if h == 0 {
                            continue;
                        }
                        for xt in 0..x {
                            let yt = h - xt;
                            if yt > n - m {
                                continue;
                            }
                            let (p1, pm1) = gap_move_probs(n, m, x, y, xt, yt).unwrap();
                            assert!(
                                pm1 >= p1 - 1e-15,
                                "n={n} m={m} ({x},{y}) vs ({xt},{yt}): p1={p1} pm1={pm1}"
                            );
                            // drift identity: p1 - p_minus1 = -D(2H-1)/(n(n-1))
                            let d = (x - xt) as f64;
                            let expect = -d * (2.0 * h as f64 - 1.0) / (n * (n - 1)) as f64;
                            assert!(((p1 - pm1) - expect).abs() < 1e-15);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gap_probs_reject_inconsistent_counts() {
        assert!(gap_move_probs(4, 2, 1, 0, 2, 0).is_err()); // x < xt
        assert!(gap_move_probs(4, 2, 1, 1, 1, 0).is_err()); // weight mismatch
    }

    #[test]
    fn coupling_from_equal_start_is_immediate() {
        let s = st("110100");
        let mut rng = RngStream::new(1, 0);
        let (outcome, trace) = coupling_time(&s, &s, 3, &mut rng, 100).unwrap();
        assert_eq!(outcome, CouplingOutcome::Met { tau: 0 });
        assert_eq!(trace.records().len(), 1);
    }

    #[test]
    fn worst_start_block_counts() {
        let (x, y) = worst_start(6, 3).unwrap();
        assert_eq!(x.block_counts(3).unwrap(), (3, 0));
        assert_eq!(y.block_counts(3).unwrap(), (0, 3));
        let (x, y) = worst_start(8, 6).unwrap();
        assert_eq!(x.block_counts(6).unwrap(), (6, 0));
        assert_eq!(y.block_counts(6).unwrap(), (4, 2));
    }

    #[test]
    fn worst_start_n6_couples_quickly() {
        let (x, y) = worst_start(6, 3).unwrap();
        let mut capped = 0;
        let mut total_tau = 0u64;
        let runs = 10_000;
        for run in 0..runs {
            let mut rng = RngStream::new(77, run);
            let (outcome, trace) = coupling_time(&x, &y, 3, &mut rng, 1000).unwrap();
            match outcome {
                CouplingOutcome::Met { tau } => total_tau += tau,
                CouplingOutcome::Capped { .. } => capped += 1,
            }
            // M vanishes from tau onward and is nonnegative throughout
            for r in trace.records() {
                assert!(r.mart >= 0.0);
            }
            if let Some(last) = trace.last() {
                if outcome.tau().is_some() {
                    assert_eq!(last.mart, 0.0);
                }
            }
        }
        assert!(capped <= runs / 100, "capped {capped}/{runs}");
        assert!((total_tau as f64 / runs as f64).is_finite());
    }
}
