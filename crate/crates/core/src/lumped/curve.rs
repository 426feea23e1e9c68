//! Exact total-variation curves and mixing-time location.

use crate::error::Result;
use crate::lumped::{
    h_kernel, h_stationary, tv, w_kernel, w_stationary, DistVector, HKernel, Kernel, WKernel,
};

/// Which lumped chain to evolve, with its starting state.
///
/// For a full-chain curve from a weight-m start vertex, use the block chain
/// with split m and start (m, 0): conditional uniformity over block fibers
/// makes that curve equal to the full chain's distance to stationarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainSpec {
    Hamming { start: usize },
    Blocks { m: usize, start: (usize, usize) },
}

enum AnyKernel {
    H(HKernel),
    W(WKernel),
}

impl AnyKernel {
    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        match self {
            AnyKernel::H(k) => k.apply(src, dst),
            AnyKernel::W(k) => k.apply(src, dst),
        }
    }
}

/// Incrementally evolves a chain and caches d(t) values, so bracketing
/// searches never recompute a prefix of the curve.
pub struct CurveCache {
    kernel: AnyKernel,
    stationary: DistVector,
    dist: DistVector,
    ds: Vec<f64>,
}

impl CurveCache {
    pub fn new(n: usize, spec: &ChainSpec) -> Result<Self> {
        let (kernel, stationary, dist) = match *spec {
            ChainSpec::Hamming { start } => {
                let k = h_kernel(n)?;
                let pi = h_stationary(n)?;
                let d0 = DistVector::point_mass(*pi.space(), pi.space().index_h(start)?)?;
                (AnyKernel::H(k), pi, d0)
            }
            ChainSpec::Blocks { m, start } => {
                let k = w_kernel(n, m)?;
                let pi = w_stationary(n, m)?;
                let idx = pi.space().index_w(start.0, start.1)?;
                let d0 = DistVector::point_mass(*pi.space(), idx)?;
                (AnyKernel::W(k), pi, d0)
            }
        };
        let d0 = tv(&dist, &stationary)?;
        Ok(CurveCache {
            kernel,
            stationary,
            dist,
            ds: vec![d0],
        })
    }

    /// d(t); extends the cached evolution as needed.
    pub fn eval(&mut self, t: u64) -> f64 {
        let t = t as usize;
        let mut scratch = vec![0.0; self.dist.probs.len()];
        while self.ds.len() <= t {
            self.kernel.apply(&self.dist.probs, &mut scratch);
            std::mem::swap(&mut self.dist.probs, &mut scratch);
            self.dist.renormalize();
            let d = tv(&self.dist, &self.stationary).expect("spaces match by construction");
            self.ds.push(d);
        }
        self.ds[t]
    }

    /// The current distribution of the evolving chain (at the last cached t).
    pub fn current_dist(&self) -> &DistVector {
        &self.dist
    }

    pub fn cached_len(&self) -> usize {
        self.ds.len()
    }
}

/// The exact curve (t, d(t)) for t = 0..=t_max.
pub fn exact_tv_curve(n: usize, spec: &ChainSpec, t_max: u64) -> Result<Vec<(u64, f64)>> {
    let mut cache = CurveCache::new(n, spec)?;
    cache.eval(t_max);
    Ok((0..=t_max).map(|t| (t, cache.ds[t as usize])).collect())
}

/// Least t with d(t) <= eps, by doubling then bisection on the cached curve.
pub fn tmix(n: usize, eps: f64, spec: &ChainSpec) -> Result<u64> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let mut cache = CurveCache::new(n, spec)?;
    if cache.eval(0) <= eps {
        return Ok(0);
    }
    let mut hi = 1u64;
    while cache.eval(hi) > eps {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if cache.eval(mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
