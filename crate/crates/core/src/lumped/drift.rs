//! Drift identities for the gap process D_t = n/2 - H_t, computed directly
//! from the Hamming kernel row and compared against their closed forms.
//!
//! Note the closed form of the mean drift carries n-2k+1 (i.e. D + 1/2), not
//! the n-2k+2 that a D + 1 form would give; the kernel value is authoritative
//! here and the D + 1 variant is kept only as a direction bound.

use crate::error::Result;
use crate::lumped::{h_kernel, HKernel};

#[derive(Debug, Clone, Copy)]
pub struct HDrift {
    pub n: usize,
    pub k: usize,
    /// E[H_{t+1} - H_t | H_t = k], from the kernel row.
    pub mean_dh: f64,
    /// E[D_{t+1} - D_t | H_t = k] = -mean_dh.
    pub mean_dd: f64,
    /// E[D_{t+1}^2 - D_t^2 | H_t = k], from the kernel row.
    pub second_moment_dd: f64,
}

impl HDrift {
    /// Closed form k(n-2k+1)/(n(n-1)).
    pub fn closed_mean_dh(&self) -> f64 {
        let n = self.n as f64;
        let k = self.k as f64;
        k * (n - 2.0 * k + 1.0) / (n * (n - 1.0))
    }

    /// Closed form -4kD(D+1/2)/(n(n-1)) + k/n with D = n/2 - k.
    pub fn closed_second_moment_dd(&self) -> f64 {
        let n = self.n as f64;
        let k = self.k as f64;
        let d = n / 2.0 - k;
        -4.0 * k * d * (d + 0.5) / (n * (n - 1.0)) + k / n
    }

    /// The first-moment display's right-hand bound -D/n + 2D^2/(n(n-1)).
    pub fn first_moment_bound(&self) -> f64 {
        let n = self.n as f64;
        let d = n / 2.0 - self.k as f64;
        -d / n + 2.0 * d * d / (n * (n - 1.0))
    }
}

/// Drift of H and of D = n/2 - H at height k, from the kernel row.
pub fn h_drift(n: usize, k: usize) -> Result<HDrift> {
    let kernel = h_kernel(n)?;
    Ok(h_drift_from_kernel(&kernel, k))
}

pub fn h_drift_from_kernel(kernel: &HKernel, k: usize) -> HDrift {
    let n = kernel.n();
    let up = kernel.up(k);
    let down = kernel.down(k);
    let mean_dh = up - down;
    let d = n as f64 / 2.0 - k as f64;
    // D moves +1 with the down-probability and -1 with the up-probability
    let second_moment_dd = (2.0 * d + 1.0) * down + (-2.0 * d + 1.0) * up;
    HDrift {
        n,
        k,
        mean_dh,
        mean_dd: -mean_dh,
        second_moment_dd,
    }
}
