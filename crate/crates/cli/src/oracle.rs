//! Brute-force full-chain oracle for small n.
//!
//! Keeps the exact distribution of the walk over all 2^n - 1 nonzero states
//! and advances it by averaging over every ordered coordinate pair. This is
//! an independent check for the lumped-chain machinery: the two-block
//! projection of this distribution must match the block-chain evolution, and
//! per-state masses must equal the block mass split uniformly over the fiber.

use stratawalk::lumped::{DistVector, Space};
use stratawalk::{CubeState, Error, Result};

/// Largest dimension the dense oracle accepts (2^12 - 1 = 4095 states).
pub const MAX_ORACLE_N: usize = 12;

/// Exact distribution of the walk over the 2^n - 1 nonzero bit masks.
/// Index = mask - 1, with coordinate i stored in bit i of the mask.
#[derive(Debug, Clone)]
pub struct FullChainOracle {
    n: usize,
    probs: Vec<f64>,
}

fn state_mask(state: &CubeState) -> usize {
    let mut mask = 0usize;
    for i in 0..state.n() {
        if state.bit(i) {
            mask |= 1 << i;
        }
    }
    mask
}

impl FullChainOracle {
    /// Point mass at `start`.
    pub fn new(start: &CubeState) -> Result<Self> {
        let n = start.n();
        if n > MAX_ORACLE_N {
            return Err(Error::IndexOutOfRange {
                index: n,
                n: MAX_ORACLE_N,
            });
        }
        let mut probs = vec![0.0; (1 << n) - 1];
        probs[state_mask(start) - 1] = 1.0;
        Ok(FullChainOracle { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob_of(&self, state: &CubeState) -> f64 {
        self.probs[state_mask(state) - 1]
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// One exact step: average over all n(n-1) deterministic moves
    /// mask -> mask ^ (1 << j) when bit i is set, mask otherwise.
    pub fn step(&mut self) {
        let n = self.n;
        let inv = 1.0 / (n * (n - 1)) as f64;
        let mut next = vec![0.0; self.probs.len()];
        for (idx, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mask = idx + 1;
            let h = mask.count_ones() as usize;
            // pairs with an unset source leave the state alone
            next[idx] += p * ((n - h) as f64 / n as f64);
            for j in 0..n {
                // sources: set bits other than j
                let sources = h - ((mask >> j) & 1);
                if sources > 0 {
                    next[(mask ^ (1 << j)) - 1] += p * sources as f64 * inv;
                }
            }
        }
        self.probs = next;
    }

    pub fn evolve(&mut self, t: u64) {
        for _ in 0..t {
            self.step();
        }
    }

    /// TV distance to the uniform law on the nonzero states.
    pub fn tv_uniform(&self) -> f64 {
        let u = 1.0 / self.probs.len() as f64;
        0.5 * self.probs.iter().map(|&p| (p - u).abs()).sum::<f64>()
    }

    /// Projection onto the two-block ones-count chain with split m.
    pub fn project_blocks(&self, m: usize) -> Result<DistVector> {
        let space = Space::blocks(self.n, m)?;
        let low = (1usize << m) - 1;
        let mut probs = vec![0.0; space.size()];
        for (idx, &p) in self.probs.iter().enumerate() {
            let mask = idx + 1;
            let a = (mask & low).count_ones() as usize;
            let b = (mask >> m).count_ones() as usize;
            probs[space.index_w(a, b)?] += p;
        }
        DistVector::from_probs(space, probs)
    }

    /// Largest per-state deviation from the fiber-uniform reconstruction of a
    /// block-chain distribution: each full state of block counts (a, b) should
    /// carry mass w(a,b) / (C(m,a) C(n-m,b)).
    pub fn max_fiber_deviation(&self, m: usize, w: &DistVector) -> Result<f64> {
        let space = *w.space();
        if space != Space::blocks(self.n, m)? {
            return Err(Error::SpaceMismatch);
        }
        let low = (1usize << m) - 1;
        let mut worst = 0.0f64;
        for (idx, &p) in self.probs.iter().enumerate() {
            let mask = idx + 1;
            let a = (mask & low).count_ones() as usize;
            let b = (mask >> m).count_ones() as usize;
            let fiber = binomial(m, a) * binomial(self.n - m, b);
            let expect = w.probs()[space.index_w(a, b)?] / fiber;
            worst = worst.max((p - expect).abs());
        }
        Ok(worst)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Exact distribution of the walk after t steps from `start`.
pub fn oracle_evolve(start: &CubeState, t: u64) -> Result<FullChainOracle> {
    let mut oracle = FullChainOracle::new(start)?;
    oracle.evolve(t);
    Ok(oracle)
}

/// Exact full-chain TV curve (t, d(t)) for t = 0..=t_max.
pub fn oracle_tv_curve(start: &CubeState, t_max: u64) -> Result<Vec<(u64, f64)>> {
    let mut oracle = FullChainOracle::new(start)?;
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    curve.push((0, oracle.tv_uniform()));
    for t in 1..=t_max {
        oracle.step();
        curve.push((t, oracle.tv_uniform()));
    }
    Ok(curve)
}
