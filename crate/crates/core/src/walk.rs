//! The single-step move rule and trajectory simulation.
//!
//! One step of the chain: draw an ordered pair (i, j) of distinct coordinates
//! uniformly at random and replace x(j) by x(j) + x(i) mod 2. The source bit
//! is unchanged, so a nonzero state can never reach the all-zeros vector.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::state::{CubeState, MoveLog, OrderedPair};

/// Applies one move: bit `j` is XORed with bit `i`.
pub fn step(state: &CubeState, pair: OrderedPair) -> Result<CubeState> {
    if !pair.valid_for(state.n()) {
        return Err(Error::InvalidPair {
            i: pair.source(),
            j: pair.target(),
            n: state.n(),
        });
    }
    let mut out = state.clone();
    apply_unchecked(&mut out, pair);
    Ok(out)
}

#[inline]
pub(crate) fn apply_unchecked(state: &mut CubeState, pair: OrderedPair) {
    if state.bit(pair.source()) {
        state.flip(pair.target());
    }
}

/// Draws one of the n(n-1) ordered pairs with equal probability. Rejection-free:
/// i is uniform on [0, n), j uniform on [0, n-1) skipped past i.
pub fn sample_pair(rng: &mut RngStream, n: usize) -> Result<OrderedPair> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let i = rng.next_below(n as u64) as usize;
    let mut j = rng.next_below(n as u64 - 1) as usize;
    if j >= i {
        j += 1;
    }
    OrderedPair::new(i, j, n)
}

/// Runs `t` steps from `start`, returning the final state and the replayable
/// move record.
pub fn simulate(start: &CubeState, t: u64, rng: &mut RngStream) -> (CubeState, MoveLog) {
    let n = start.n();
    let mut state = start.clone();
    let mut moves = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let pair = sample_pair(rng, n).expect("dimension checked by CubeState");
        apply_unchecked(&mut state, pair);
        moves.push(pair);
    }
    let log = MoveLog::new(n, moves, Some(rng.seed())).expect("pairs sampled valid");
    (state, log)
}

/// Replays a move log from `start`; the result is bit-exact.
pub fn replay(start: &CubeState, log: &MoveLog) -> Result<CubeState> {
    if log.n() != start.n() {
        return Err(Error::LengthMismatch {
            expected: start.n(),
            got: log.n(),
        });
    }
    let mut state = start.clone();
    for &pair in log.moves() {
        apply_unchecked(&mut state, pair);
    }
    Ok(state)
}
