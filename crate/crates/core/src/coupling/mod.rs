//! Couplings of the walk as simulable joint processes.
//!
//! Two constructions: a coupling of two Hamming chains that anti-correlates
//! their move indicators (one chain started anywhere, the other from
//! stationarity), and a uniform-pairing coupling of two full chains with
//! equal Hamming weight (see `pair`).

mod pair;

pub use pair::{
    coupling_time, gap_move_probs, pair_coupled_step, pair_coupled_step_explicit, worst_start,
    GapRecord, GapTrace, PairCouplingState, Phase,
};

use crate::error::{Error, Result};
use crate::lumped::{h_stationary, DistVector};
use crate::rng::RngStream;

/// Result of running a coupling to its meeting time under a step cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingOutcome {
    Met { tau: u64 },
    Capped { t_cap: u64 },
}

impl CouplingOutcome {
    pub fn tau(&self) -> Option<u64> {
        match *self {
            CouplingOutcome::Met { tau } => Some(tau),
            CouplingOutcome::Capped { .. } => None,
        }
    }
}

/// Joint state of two coupled Hamming chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HCouplingState {
    n: usize,
    h1: usize,
    h2: usize,
    met: bool,
}

impl HCouplingState {
    pub fn new(n: usize, h1: usize, h2: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        if h1 < 1 || h1 > n {
            return Err(Error::IndexOutOfRange { index: h1, n });
        }
        if h2 < 1 || h2 > n {
            return Err(Error::IndexOutOfRange { index: h2, n });
        }
        Ok(HCouplingState {
            n,
            h1,
            h2,
            met: h1 == h2,
        })
    }

    pub fn h1(&self) -> usize {
        self.h1
    }

    pub fn h2(&self) -> usize {
        self.h2
    }

    pub fn met(&self) -> bool {
        self.met
    }
}

#[inline]
fn directed_move(n: usize, h: usize, rng: &mut RngStream) -> isize {
    // conditional on moving: up with probability (n-h)/(n-1)
    if rng.next_f64() < (n - h) as f64 / (n - 1) as f64 {
        1
    } else {
        -1
    }
}

/// One joint step. Each marginal follows its exact kernel row; the move
/// indicators (probability h/n each) are maximally anti-correlated, and when
/// both chains move their directions are drawn independently. After the first
/// meeting the chains move identically.
pub fn h_coupled_step(state: &HCouplingState, rng: &mut RngStream) -> HCouplingState {
    let n = state.n;
    let mut next = *state;
    if state.met {
        let u = rng.next_f64();
        if u < state.h1 as f64 / n as f64 {
            let d = directed_move(n, state.h1, rng);
            next.h1 = (state.h1 as isize + d) as usize;
            next.h2 = next.h1;
        }
        return next;
    }
    let q1 = state.h1 as f64 / n as f64;
    let q2 = state.h2 as f64 / n as f64;
    // chain 1 moves iff u < q1, chain 2 iff u >= 1 - q2: P(both move) is the
    // minimum possible, max(0, q1 + q2 - 1)
    let u = rng.next_f64();
    if u < q1 {
        let d = directed_move(n, state.h1, rng);
        next.h1 = (state.h1 as isize + d) as usize;
    }
    if u >= 1.0 - q2 {
        let d = directed_move(n, state.h2, rng);
        next.h2 = (state.h2 as isize + d) as usize;
    }
    next.met = next.h1 == next.h2;
    next
}

pub(crate) fn sample_from(dist: &DistVector, rng: &mut RngStream) -> usize {
    let u = rng.next_f64();
    let mut acc = 0.0;
    for (idx, p) in dist.probs().iter().enumerate() {
        acc += p;
        if u < acc {
            return idx;
        }
    }
    dist.probs().len() - 1
}

/// Time for a chain started at `h_start` to meet a chain started from the
/// stationary law, under the anti-correlated coupling.
pub fn h_coupling_time(
    n: usize,
    h_start: usize,
    rng: &mut RngStream,
    t_cap: u64,
) -> Result<CouplingOutcome> {
    let pi = h_stationary(n)?;
    let h2 = sample_from(&pi, rng) + 1;
    let mut state = HCouplingState::new(n, h_start, h2)?;
    if state.met {
        return Ok(CouplingOutcome::Met { tau: 0 });
    }
    for t in 1..=t_cap {
        state = h_coupled_step(&state, rng);
        if state.met {
            return Ok(CouplingOutcome::Met { tau: t });
        }
    }
    Ok(CouplingOutcome::Capped { t_cap })
}

/// Default step cap for coupling runs: 50 n log n.
pub fn default_t_cap(n: usize) -> u64 {
    (50.0 * n as f64 * (n as f64).ln()).ceil() as u64
}
