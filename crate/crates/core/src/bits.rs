//! Packed bit vectors over GF(2).
//!
//! Bits are stored in 64-bit words, coordinate 0 in the lowest bit of word 0.
//! Word padding beyond position `n` is kept zero after every mutation, so
//! popcounts and word-wise XOR need no masking.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const WORD_BITS: usize = 64;

/// A fixed-length bit vector of dimension `n`. The all-zeros vector is allowed
/// here; see `CubeState` for the chain's restricted state space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    n: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(n: usize) -> Self {
        BitVec {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    pub fn unit(n: usize, index: usize) -> Self {
        let mut v = BitVec::zeros(n);
        v.set(index, true);
        v
    }

    /// First `w` coordinates set to one.
    pub fn prefix_ones(n: usize, w: usize) -> Self {
        assert!(w <= n);
        let mut v = BitVec::zeros(n);
        for i in 0..w {
            v.set(i, true);
        }
        v
    }

    /// Coordinates `[lo, hi)` set to one.
    pub fn range_ones(n: usize, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= n);
        let mut v = BitVec::zeros(n);
        for i in lo..hi {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.n);
        let w = i / WORD_BITS;
        let b = i % WORD_BITS;
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the AND with `other` (inner product over GF(2)).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.n, other.n);
        let acc: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        acc % 2 == 1
    }

    /// Number of coordinates in `[lo, hi)` holding `value`.
    pub fn count_in_range(&self, lo: usize, hi: usize, value: bool) -> usize {
        debug_assert!(lo <= hi && hi <= self.n);
        let mut ones = 0;
        let mut i = lo;
        while i < hi {
            let w = i / WORD_BITS;
            let start = i % WORD_BITS;
            let take = (hi - i).min(WORD_BITS - start);
            let mask = if take == WORD_BITS {
                u64::MAX
            } else {
                ((1u64 << take) - 1) << start
            };
            ones += (self.words[w] & mask).count_ones() as usize;
            i += take;
        }
        if value {
            ones
        } else {
            (hi - lo) - ones
        }
    }

    /// Position of the `k`-th (0-based) coordinate in `[lo, hi)` holding
    /// `value`, skipping `exclude` if given. Panics if there is no such
    /// coordinate.
    pub fn select_in_range(
        &self,
        lo: usize,
        hi: usize,
        value: bool,
        mut k: usize,
        exclude: Option<usize>,
    ) -> usize {
        for i in lo..hi {
            if Some(i) == exclude {
                continue;
            }
            if self.bit(i) == value {
                if k == 0 {
                    return i;
                }
                k -= 1;
            }
        }
        panic!("select_in_range: rank {k} out of population");
    }
}

impl fmt::Display for BitVec {
    /// Coordinate 0 leftmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("invalid bit character '{c}'"))),
            }
        }
        Ok(v)
    }
}
