//! Hypercube states, ordered coordinate pairs, and trajectory move logs.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A nonzero configuration in {0,1}^n. The all-zeros vector is excluded from
/// the state space, and every operation on the chain preserves that.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeState {
    bits: BitVec,
}

impl CubeState {
    pub fn new(bits: BitVec) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::DimensionTooSmall { n: bits.len() });
        }
        if bits.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(CubeState { bits })
    }

    /// The basis vector e_c.
    pub fn unit(n: usize, c: usize) -> Result<Self> {
        if c >= n {
            return Err(Error::IndexOutOfRange { index: c, n });
        }
        CubeState::new(BitVec::unit(n, c))
    }

    /// Weight-`w` state with the ones on the first `w` coordinates.
    pub fn prefix_ones(n: usize, w: usize) -> Result<Self> {
        if w == 0 || w > n {
            return Err(Error::IndexOutOfRange { index: w, n });
        }
        CubeState::new(BitVec::prefix_ones(n, w))
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.bits.bit(i)
    }

    pub(crate) fn flip(&mut self, i: usize) {
        self.bits.flip(i);
        debug_assert!(!self.bits.is_zero());
    }

    /// Hamming weight H(x).
    pub fn hamming(&self) -> usize {
        self.bits.count_ones()
    }

    /// Ones among coordinates `[0, m)` and `[m, n)`.
    pub fn block_counts(&self, m: usize) -> Result<(usize, usize)> {
        let n = self.n();
        if m == 0 || m >= n {
            return Err(Error::SplitOutOfRange { m, n });
        }
        let a = self.bits.count_in_range(0, m, true);
        let b = self.bits.count_in_range(m, n, true);
        Ok((a, b))
    }
}

impl fmt::Display for CubeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

impl FromStr for CubeState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CubeState::new(s.parse()?)
    }
}

/// An ordered pair (i, j) of distinct coordinates: the bit at `i` is added to
/// the bit at `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedPair {
    i: usize,
    j: usize,
}

impl OrderedPair {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::InvalidPair { i, j, n });
        }
        Ok(OrderedPair { i, j })
    }

    pub fn source(&self) -> usize {
        self.i
    }

    pub fn target(&self) -> usize {
        self.j
    }

    pub fn valid_for(&self, n: usize) -> bool {
        self.i != self.j && self.i < n && self.j < n
    }
}

/// A trajectory's replayable move record; also the prover's secret key in the
/// authentication protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveLog {
    n: usize,
    moves: Vec<OrderedPair>,
    seed: Option<u64>,
}

impl MoveLog {
    pub fn new(n: usize, moves: Vec<OrderedPair>, seed: Option<u64>) -> Result<Self> {
        for p in &moves {
            if !p.valid_for(n) {
                return Err(Error::InvalidPair {
                    i: p.source(),
                    j: p.target(),
                    n,
                });
            }
        }
        Ok(MoveLog { n, moves, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &[OrderedPair] {
        &self.moves
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Writes the log as `n=<n>` followed by one `<i> <j>` line per move.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n={}", self.n)?;
        for p in &self.moves {
            writeln!(w, "{} {}", p.source(), p.target())?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty move log".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("bad header line: {header}")))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in header: {header}")))?;
        let mut moves = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let i: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad move line: {line}")))?;
            let j: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad move line: {line}")))?;
            moves.push(OrderedPair::new(i, j, n)?);
        }
        MoveLog::new(n, moves, None)
    }
}
