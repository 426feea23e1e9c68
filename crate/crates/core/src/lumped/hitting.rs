//! Hitting-time moments for the Hamming birth-and-death chain.

use crate::error::{Error, Result};
use crate::lumped::{h_kernel, HKernel};

/// E_{l-1}(T_l) = (1/P_H(l, l-1)) * sum_{i=1}^{l-1} pi_H(i)/pi_H(l),
/// computed with binomial ratio recurrences so nothing overflows.
pub fn hitting_mean_formula(n: usize, ell: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if ell < 2 || ell > n {
        return Err(Error::IndexOutOfRange { index: ell, n });
    }
    // ratio[i] = C(n,i)/C(n,ell), built downward from i = ell:
    // C(n,i-1)/C(n,i) = i/(n-i+1)
    let mut sum = 0.0;
    let mut ratio = 1.0;
    for i in (1..ell).rev() {
        ratio *= (i + 1) as f64 / (n - i) as f64;
        sum += ratio;
    }
    let down = (ell * (ell - 1)) as f64 / (n * (n - 1)) as f64;
    Ok(sum / down)
}

/// Exact mean, second moment, and variance of the hitting time of `target`
/// from every start, indexed by start state (1-based).
#[derive(Debug, Clone)]
pub struct HittingMoments {
    target: usize,
    mean: Vec<f64>,
    second: Vec<f64>,
    variance: Vec<f64>,
}

impl HittingMoments {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn mean(&self, start: usize) -> f64 {
        self.mean[start - 1]
    }

    pub fn second_moment(&self, start: usize) -> f64 {
        self.second[start - 1]
    }

    pub fn variance(&self, start: usize) -> f64 {
        self.variance[start - 1]
    }
}

/// One-step-up legs: mu[l] = E_{l-1} T_l and q[l] = E_{l-1} T_l^2 for
/// l = 2..=hi, from the first-step decomposition at l-1. Every coefficient
/// is nonnegative, so the recursion is cancellation-free (a generic
/// tridiagonal elimination loses all precision here once the means grow
/// like 2^n).
fn upward_legs(kernel: &HKernel, hi: usize) -> (Vec<f64>, Vec<f64>) {
    let mut mu = vec![0.0; hi + 1];
    let mut q = vec![0.0; hi + 1];
    for l in 2..=hi {
        let u = kernel.up(l - 1);
        let d = kernel.down(l - 1);
        let s = kernel.stay(l - 1);
        let m_prev = mu[l - 1];
        let m = (1.0 + d * m_prev) / u;
        mu[l] = m;
        q[l] = (1.0 + 2.0 * m * (s + d) + 2.0 * d * m_prev * (1.0 + m) + d * q[l - 1]) / u;
    }
    (mu, q)
}

/// One-step-down legs: nu[l] = E_{l+1} T_l and r[l] = E_{l+1} T_l^2 for
/// l = lo..n-1, from the first-step decomposition at l+1.
fn downward_legs(kernel: &HKernel, lo: usize) -> (Vec<f64>, Vec<f64>) {
    let n = kernel.n();
    let mut nu = vec![0.0; n + 1];
    let mut r = vec![0.0; n + 1];
    for l in (lo..n).rev() {
        let u = kernel.up(l + 1);
        let d = kernel.down(l + 1);
        let s = kernel.stay(l + 1);
        let m_prev = if l + 1 < n { nu[l + 1] } else { 0.0 };
        let q_prev = if l + 1 < n { r[l + 1] } else { 0.0 };
        let m = (1.0 + u * m_prev) / d;
        nu[l] = m;
        r[l] = (1.0 + 2.0 * m * (s + u) + 2.0 * u * m_prev * (1.0 + m) + u * q_prev) / d;
    }
    (nu, r)
}

/// Moments of the hitting time of `target` from every start. Starts below
/// the target sum independent upward legs; starts above sum downward legs
/// (the strong Markov property makes successive legs independent).
pub fn hitting_moments(kernel: &HKernel, target: usize) -> Result<HittingMoments> {
    let n = kernel.n();
    if target < 1 || target > n {
        return Err(Error::IndexOutOfRange { index: target, n });
    }
    let mut mean = vec![0.0; n];
    let mut variance = vec![0.0; n];

    let (mu, q) = upward_legs(kernel, target);
    let mut m_acc = 0.0;
    let mut v_acc = 0.0;
    for j in (1..target).rev() {
        m_acc += mu[j + 1];
        v_acc += (q[j + 1] - mu[j + 1] * mu[j + 1]).max(0.0);
        mean[j - 1] = m_acc;
        variance[j - 1] = v_acc;
    }

    let (nu, r) = downward_legs(kernel, target);
    let mut m_acc = 0.0;
    let mut v_acc = 0.0;
    for j in target + 1..=n {
        m_acc += nu[j - 1];
        v_acc += (r[j - 1] - nu[j - 1] * nu[j - 1]).max(0.0);
        mean[j - 1] = m_acc;
        variance[j - 1] = v_acc;
    }

    let second: Vec<f64> = mean
        .iter()
        .zip(&variance)
        .map(|(m, v)| v + m * m)
        .collect();
    Ok(HittingMoments {
        target,
        mean,
        second,
        variance,
    })
}

/// Convenience: hitting moments of `target` in the n-state Hamming chain.
pub fn hitting_moments_for(n: usize, target: usize) -> Result<HittingMoments> {
    hitting_moments(&h_kernel(n)?, target)
}
