//! Exact finite-state analysis of the two lumped projections of the walk:
//! the Hamming weight chain on {1..n} and the two-block chain on pairs
//! (a, b) of ones-counts, with kernels, stationary laws, distribution
//! evolution, and total-variation distances.

mod curve;
mod drift;
pub mod exact;
mod hitting;

pub use curve::{exact_tv_curve, tmix, ChainSpec, CurveCache};
pub use drift::{h_drift, HDrift};
pub use hitting::{hitting_mean_formula, hitting_moments, hitting_moments_for, HittingMoments};

use crate::error::{Error, Result};

/// Index set of a lumped state space.
///
/// Hamming states are k = 1..n. Block states are (a, b) with 0 <= a <= m,
/// 0 <= b <= n-m and a+b >= 1; the unreachable (0, 0) is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Hamming { n: usize },
    Blocks { n: usize, m: usize },
}

impl Space {
    pub fn hamming(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        Ok(Space::Hamming { n })
    }

    pub fn blocks(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        if m == 0 || m >= n {
            return Err(Error::SplitOutOfRange { m, n });
        }
        Ok(Space::Blocks { n, m })
    }

    pub fn size(&self) -> usize {
        match *self {
            Space::Hamming { n } => n,
            Space::Blocks { n, m } => (m + 1) * (n - m + 1) - 1,
        }
    }

    pub fn index_h(&self, k: usize) -> Result<usize> {
        match *self {
            Space::Hamming { n } if k >= 1 && k <= n => Ok(k - 1),
            Space::Hamming { n } => Err(Error::IndexOutOfRange { index: k, n }),
            _ => Err(Error::SpaceMismatch),
        }
    }

    pub fn index_w(&self, a: usize, b: usize) -> Result<usize> {
        match *self {
            Space::Blocks { n, m } if a <= m && b <= n - m && a + b >= 1 => {
                Ok(a * (n - m + 1) + b - 1)
            }
            Space::Blocks { n, .. } => Err(Error::IndexOutOfRange { index: a, n }),
            _ => Err(Error::SpaceMismatch),
        }
    }

    /// Block state at a given index (inverse of `index_w`).
    pub fn state_w(&self, index: usize) -> (usize, usize) {
        match *self {
            Space::Blocks { n, m } => {
                let linear = index + 1;
                (linear / (n - m + 1), linear % (n - m + 1))
            }
            _ => panic!("state_w on a Hamming space"),
        }
    }
}

/// Neumaier compensated summation.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A probability vector over a lumped state space.
#[derive(Debug, Clone, PartialEq)]
pub struct DistVector {
    space: Space,
    probs: Vec<f64>,
}

impl DistVector {
    pub fn point_mass(space: Space, index: usize) -> Result<Self> {
        if index >= space.size() {
            return Err(Error::IndexOutOfRange {
                index,
                n: space.size(),
            });
        }
        let mut probs = vec![0.0; space.size()];
        probs[index] = 1.0;
        Ok(DistVector { space, probs })
    }

    pub fn from_probs(space: Space, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != space.size() {
            return Err(Error::SpaceMismatch);
        }
        let sum = compensated_sum(probs.iter().copied());
        if probs.iter().any(|&p| p < -1e-15) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Parse(format!(
                "not a probability vector (sum = {sum})"
            )));
        }
        let mut d = DistVector { space, probs };
        d.clamp_negatives();
        Ok(d)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    fn clamp_negatives(&mut self) {
        for p in &mut self.probs {
            if *p < 0.0 {
                debug_assert!(*p >= -1e-15);
                *p = 0.0;
            }
        }
    }

    fn renormalize(&mut self) {
        self.clamp_negatives();
        let sum = self.sum();
        debug_assert!((sum - 1.0).abs() < 1e-12);
        for p in &mut self.probs {
            *p /= sum;
        }
    }
}

/// Total-variation distance: half the l1 distance.
pub fn tv(p: &DistVector, q: &DistVector) -> Result<f64> {
    if p.space != q.space {
        return Err(Error::SpaceMismatch);
    }
    let l1 = compensated_sum(p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()));
    Ok(0.5 * l1)
}

/// A sparse row-stochastic transition kernel over a lumped state space.
pub trait Kernel {
    fn space(&self) -> &Space;

    /// One step of distribution evolution: `dst = src * P`.
    fn apply(&self, src: &[f64], dst: &mut [f64]);
}

/// Transition kernel of the Hamming birth-and-death chain on {1..n}:
/// up k(n-k)/(n(n-1)), down k(k-1)/(n(n-1)), stay (n-k)/n.
#[derive(Debug, Clone)]
pub struct HKernel {
    space: Space,
    n: usize,
    up: Vec<f64>,
    down: Vec<f64>,
    stay: Vec<f64>,
}

impl HKernel {
    pub fn new(n: usize) -> Result<Self> {
        let space = Space::hamming(n)?;
        let denom = (n * (n - 1)) as f64;
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        let mut stay = Vec::with_capacity(n);
        for k in 1..=n {
            up.push((k * (n - k)) as f64 / denom);
            down.push((k * (k - 1)) as f64 / denom);
            stay.push((n - k) as f64 / n as f64);
        }
        Ok(HKernel {
            space,
            n,
            up,
            down,
            stay,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn up(&self, k: usize) -> f64 {
        self.up[k - 1]
    }

    pub fn down(&self, k: usize) -> f64 {
        self.down[k - 1]
    }

    pub fn stay(&self, k: usize) -> f64 {
        self.stay[k - 1]
    }
}

impl Kernel for HKernel {
    fn space(&self) -> &Space {
        &self.space
    }

    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        dst.iter_mut().for_each(|x| *x = 0.0);
        for k in 1..=self.n {
            let p = src[k - 1];
            if p == 0.0 {
                continue;
            }
            dst[k - 1] += p * self.stay[k - 1];
            if k < self.n {
                dst[k] += p * self.up[k - 1];
            }
            if k > 1 {
                dst[k - 2] += p * self.down[k - 1];
            }
        }
    }
}

/// Transition kernel of the two-block chain on (a, b).
///
/// With h = a+b, the reachable moves and their probabilities are
///   (a+1, b): h(m-a)/(n(n-1))      (a-1, b): a(h-1)/(n(n-1))
///   (a, b+1): h(n-m-b)/(n(n-1))    (a, b-1): b(h-1)/(n(n-1))
///   stay: (n-h)/n.
#[derive(Debug, Clone)]
pub struct WKernel {
    space: Space,
    n: usize,
    m: usize,
    up_a: Vec<f64>,
    down_a: Vec<f64>,
    up_b: Vec<f64>,
    down_b: Vec<f64>,
    stay: Vec<f64>,
}

impl WKernel {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let space = Space::blocks(n, m)?;
        let size = space.size();
        let denom = (n * (n - 1)) as f64;
        let mut up_a = vec![0.0; size];
        let mut down_a = vec![0.0; size];
        let mut up_b = vec![0.0; size];
        let mut down_b = vec![0.0; size];
        let mut stay = vec![0.0; size];
        for idx in 0..size {
            let (a, b) = space.state_w(idx);
            let h = a + b;
            up_a[idx] = (h * (m - a)) as f64 / denom;
            down_a[idx] = (a * (h - 1)) as f64 / denom;
            up_b[idx] = (h * (n - m - b)) as f64 / denom;
            down_b[idx] = (b * (h - 1)) as f64 / denom;
            stay[idx] = (n - h) as f64 / n as f64;
        }
        Ok(WKernel {
            space,
            n,
            m,
            up_a,
            down_a,
            up_b,
            down_b,
            stay,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Row of the kernel at (a, b) as (up_a, down_a, up_b, down_b, stay).
    pub fn row(&self, a: usize, b: usize) -> Result<(f64, f64, f64, f64, f64)> {
        let idx = self.space.index_w(a, b)?;
        Ok((
            self.up_a[idx],
            self.down_a[idx],
            self.up_b[idx],
            self.down_b[idx],
            self.stay[idx],
        ))
    }
}

impl Kernel for WKernel {
    fn space(&self) -> &Space {
        &self.space
    }

    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        dst.iter_mut().for_each(|x| *x = 0.0);
        let stride = self.n - self.m + 1;
        for idx in 0..src.len() {
            let p = src[idx];
            if p == 0.0 {
                continue;
            }
            dst[idx] += p * self.stay[idx];
            if self.up_a[idx] > 0.0 {
                dst[idx + stride] += p * self.up_a[idx];
            }
            if self.down_a[idx] > 0.0 {
                dst[idx - stride] += p * self.down_a[idx];
            }
            if self.up_b[idx] > 0.0 {
                dst[idx + 1] += p * self.up_b[idx];
            }
            if self.down_b[idx] > 0.0 {
                dst[idx - 1] += p * self.down_b[idx];
            }
        }
    }
}

pub fn h_kernel(n: usize) -> Result<HKernel> {
    HKernel::new(n)
}

pub fn w_kernel(n: usize, m: usize) -> Result<WKernel> {
    WKernel::new(n, m)
}

/// Natural logs of binomial coefficients ln C(n, k) for k = 0..=n,
/// built from the multiplicative ratio C(n,k+1)/C(n,k) = (n-k)/(k+1).
fn log_binomials(n: usize) -> Vec<f64> {
    let mut lc = Vec::with_capacity(n + 1);
    lc.push(0.0);
    let mut acc = 0.0;
    for k in 0..n {
        acc += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        lc.push(acc);
    }
    lc
}

fn normalize_from_logs(space: Space, logs: Vec<f64>) -> DistVector {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total = compensated_sum(probs.iter().copied());
    for p in &mut probs {
        *p /= total;
    }
    DistVector { space, probs }
}

/// Stationary law of the Hamming chain: pi_H(k) = C(n,k)/(2^n - 1).
/// Computed in log space, stable up to n = 4096.
pub fn h_stationary(n: usize) -> Result<DistVector> {
    let space = Space::hamming(n)?;
    let lc = log_binomials(n);
    Ok(normalize_from_logs(space, lc[1..].to_vec()))
}

/// Stationary law of the block chain: pi_W(a,b) = C(m,a)C(n-m,b)/(2^n - 1).
pub fn w_stationary(n: usize, m: usize) -> Result<DistVector> {
    let space = Space::blocks(n, m)?;
    let lca = log_binomials(m);
    let lcb = log_binomials(n - m);
    let mut logs = Vec::with_capacity(space.size());
    for idx in 0..space.size() {
        let (a, b) = space.state_w(idx);
        logs.push(lca[a] + lcb[b]);
    }
    Ok(normalize_from_logs(space, logs))
}

/// Exact distribution evolution: `dist * P^t` by t sparse row-vector
/// products, renormalized each step so the mass drift stays below 1e-12.
pub fn evolve<K: Kernel>(kernel: &K, dist: &DistVector, t: u64) -> Result<DistVector> {
    if kernel.space() != &dist.space {
        return Err(Error::SpaceMismatch);
    }
    let mut cur = dist.clone();
    let mut scratch = vec![0.0; cur.probs.len()];
    for _ in 0..t {
        kernel.apply(&cur.probs, &mut scratch);
        std::mem::swap(&mut cur.probs, &mut scratch);
        cur.renormalize();
    }
    Ok(cur)
}
