//! The row-addition random walk on invertible matrices over GF(2), the
//! column projection linking it to the hypercube walk, and the time-based
//! authentication protocol built on it.
//!
//! A move picks an ordered pair of distinct rows and adds the first to the
//! other mod 2; that is left-multiplication by an elementary matrix, so
//! invertibility is preserved. Column c of the product evolves exactly as
//! the hypercube chain started at e_c driven by the same move log.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitVec, WORD_BITS};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::state::{CubeState, MoveLog, OrderedPair};
use crate::walk::sample_pair;

/// An n x n matrix over GF(2) with packed-word rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn identity(n: usize) -> Self {
        BitMatrix {
            n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Ok(BitMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i].bit(j)
    }

    /// Rank over GF(2) by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let pivot = (rank..self.n).find(|&r| rows[r].bit(col));
            let Some(pivot) = pivot else { continue };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.bit(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Column c as a chain state; nonzero whenever the matrix is invertible.
    pub fn column_projection(&self, c: usize) -> Result<CubeState> {
        if c >= self.n {
            return Err(Error::IndexOutOfRange { index: c, n: self.n });
        }
        let mut bits = BitVec::zeros(self.n);
        for i in 0..self.n {
            if self.rows[i].bit(c) {
                bits.set(i, true);
            }
        }
        CubeState::new(bits)
    }

    /// One line per row, '0'/'1' characters, coordinate 0 leftmost.
    pub fn write_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.write_text())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Result<Vec<BitVec>> = s.lines().map(|l| l.parse()).collect();
        BitMatrix::from_rows(rows?)
    }
}

/// Row j <- row j XOR row i.
pub fn matrix_step(a: &BitMatrix, pair: OrderedPair) -> Result<BitMatrix> {
    if !pair.valid_for(a.n) {
        return Err(Error::InvalidPair {
            i: pair.source(),
            j: pair.target(),
            n: a.n,
        });
    }
    let mut out = a.clone();
    let src = out.rows[pair.source()].clone();
    out.rows[pair.target()].xor_assign(&src);
    Ok(out)
}

fn matrix_step_in_place(a: &mut BitMatrix, pair: OrderedPair) {
    let src = a.rows[pair.source()].clone();
    a.rows[pair.target()].xor_assign(&src);
}

/// The prover's key: the secret move log and the public matrix it produces.
#[derive(Debug, Clone)]
pub struct ProverKey {
    n: usize,
    t: u64,
    log: MoveLog,
    public_matrix: BitMatrix,
}

impl ProverKey {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn log(&self) -> &MoveLog {
        &self.log
    }

    pub fn public_matrix(&self) -> &BitMatrix {
        &self.public_matrix
    }
}

/// Runs the matrix walk for t uniform row-addition moves from the identity.
pub fn generate_key(n: usize, t: u64, rng: &mut RngStream) -> Result<ProverKey> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let mut a = BitMatrix::identity(n);
    let mut moves = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let pair = sample_pair(rng, n)?;
        matrix_step_in_place(&mut a, pair);
        moves.push(pair);
    }
    Ok(ProverKey {
        n,
        t,
        log: MoveLog::new(n, moves, Some(rng.seed()))?,
        public_matrix: a,
    })
}

/// The honest prover's answer y = A_t x, computed by replaying the logged
/// coordinate operations on the vector: t single-bit updates instead of a
/// full matrix-vector product. Returns the answer and the operation count.
pub fn replay_answer(key: &ProverKey, x: &BitVec) -> Result<(BitVec, u64)> {
    if x.len() != key.n {
        return Err(Error::LengthMismatch {
            expected: key.n,
            got: x.len(),
        });
    }
    let mut y = x.clone();
    let mut ops = 0u64;
    for p in key.log.moves() {
        // row operation "add row i to row j" acts on a column vector as
        // y(j) <- y(j) + y(i)
        if y.bit(p.source()) {
            y.flip(p.target());
        }
        ops += 1;
    }
    Ok((y, ops))
}

/// Word-parallel matrix-vector product y(i) = <row i, x> mod 2.
/// Returns the answer and the operation count (one unit per row-word).
pub fn naive_multiply(a: &BitMatrix, x: &BitVec) -> Result<(BitVec, u64)> {
    if x.len() != a.n {
        return Err(Error::LengthMismatch {
            expected: a.n,
            got: x.len(),
        });
    }
    let mut y = BitVec::zeros(a.n);
    for i in 0..a.n {
        if a.rows[i].dot(x) {
            y.set(i, true);
        }
    }
    Ok((y, naive_cost(a.n)))
}

/// Operation count of the naive product: n rows times ceil(n/w) words.
pub fn naive_cost(n: usize) -> u64 {
    (n * n.div_ceil(WORD_BITS)) as u64
}

/// Accept iff the answer is correct and was produced within the budget.
/// Costs are abstract operation counts, not wall-clock time.
pub fn verify(
    public_matrix: &BitMatrix,
    x: &BitVec,
    y: &BitVec,
    elapsed_ops: u64,
    budget: u64,
) -> Result<bool> {
    let (expected, _) = naive_multiply(public_matrix, x)?;
    Ok(&expected == y && elapsed_ops <= budget)
}
