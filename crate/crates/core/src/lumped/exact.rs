//! Exact rational twins of the lumped kernels, for oracle tests at n <= 64.
//!
//! Everything here is arbitrary-precision; the double-precision kernels are
//! validated against these entrywise.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::error::Result;
use crate::state::{CubeState, OrderedPair};
use crate::walk::step;

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn rat(num: usize, den: usize) -> BigRational {
    ratio(BigInt::from(num), BigInt::from(den))
}

/// Exact Hamming kernel row at k: (up, down, stay).
pub fn h_row_exact(n: usize, k: usize) -> (BigRational, BigRational, BigRational) {
    let denom = n * (n - 1);
    (
        rat(k * (n - k), denom),
        rat(k * (k - 1), denom),
        rat(n - k, n),
    )
}

/// Exact stationary probabilities pi_H(k) = C(n,k)/(2^n - 1), k = 1..n.
pub fn h_stationary_exact(n: usize) -> Vec<BigRational> {
    let total = (BigInt::one() << n) - BigInt::one();
    (1..=n)
        .map(|k| ratio(binomial(n, k), total.clone()))
        .collect()
}

/// Exact block-kernel row at (a, b): (up_a, down_a, up_b, down_b, stay).
pub fn w_row_exact(
    n: usize,
    m: usize,
    a: usize,
    b: usize,
) -> (
    BigRational,
    BigRational,
    BigRational,
    BigRational,
    BigRational,
) {
    let h = a + b;
    let denom = n * (n - 1);
    (
        rat(h * (m - a), denom),
        rat(a * (h - 1), denom),
        rat(h * (n - m - b), denom),
        rat(b * (h - 1), denom),
        rat(n - h, n),
    )
}

/// Brute-force one-step law of the block counts from a representative state:
/// enumerate all n(n-1) ordered pairs and tally the (da, db) outcomes.
/// Independent of the kernel formulas.
pub fn w_row_by_enumeration(state: &CubeState, m: usize) -> Result<Vec<((i64, i64), BigRational)>> {
    let n = state.n();
    let (a0, b0) = state.block_counts(m)?;
    let mut tally: std::collections::BTreeMap<(i64, i64), usize> = Default::default();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let next = step(state, OrderedPair::new(i, j, n)?)?;
            let (a1, b1) = next.block_counts(m)?;
            *tally
                .entry((a1 as i64 - a0 as i64, b1 as i64 - b0 as i64))
                .or_default() += 1;
        }
    }
    let denom = n * (n - 1);
    Ok(tally
        .into_iter()
        .map(|(delta, count)| (delta, rat(count, denom)))
        .collect())
}

/// Exact value of E_{l-1}(T_l).
pub fn hitting_mean_formula_exact(n: usize, ell: usize) -> BigRational {
    assert!((2..=n).contains(&ell));
    let c_ell = binomial(n, ell);
    let sum: BigRational = (1..ell)
        .map(|i| ratio(binomial(n, i), c_ell.clone()))
        .sum();
    let down = rat(ell * (ell - 1), n * (n - 1));
    sum / down
}

/// Exact drift of D = n/2 - H at height k: (E[dD], E[D_{t+1}^2 - D_t^2]).
pub fn d_drift_exact(n: usize, k: usize) -> (BigRational, BigRational) {
    let (up, down, _) = h_row_exact(n, k);
    let d = rat(n, 2) - rat(k, 1);
    let two = rat(2, 1);
    let one = BigRational::one();
    let mean = &down - &up;
    let second = (&two * &d + &one) * &down + (-(&two * &d) + &one) * &up;
    (mean, second)
}

/// Closed forms for the drifts above, as exact rationals.
pub fn d_drift_closed(n: usize, k: usize) -> (BigRational, BigRational) {
    let nn = rat(n, 1);
    let kk = rat(k, 1);
    let one = BigRational::one();
    let d = rat(n, 2) - &kk;
    let denom = &nn * (&nn - &one);
    let mean = -(&kk * (&nn - rat(2 * k, 1) + &one)) / &denom;
    let second = -(rat(4, 1) * &kk * &d * (&d + rat(1, 2))) / &denom + &kk / &nn;
    (mean, second)
}
