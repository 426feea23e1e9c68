//! Stratified random walk on the hypercube.
//!
//! The chain moves on {0,1}^n \ {0} by drawing an ordered pair (i, j) of
//! distinct coordinates uniformly at random and adding bit i to bit j mod 2.
//! This crate provides:
//!
//! - bit-parallel simulation of the walk with replayable move logs and
//!   counter-based per-trajectory random streams ([`walk`], [`rng`]);
//! - exact analysis of the two lumped projections, the Hamming weight
//!   birth-and-death chain and the two-block ones-count chain: kernels,
//!   stationary laws, distribution evolution, total-variation curves,
//!   mixing times, hitting-time moments, and drift identities ([`lumped`]);
//! - the two couplings behind the chain's cutoff analysis, as measurable
//!   joint processes with their gap process and supermartingale diagnostic
//!   ([`coupling`]);
//! - the row-addition walk on invertible GF(2) matrices and the time-based
//!   authentication protocol it motivates ([`matrix`]).
//!
//! Coordinates are 0-based everywhere, including all textual I/O.

pub mod bits;
pub mod coupling;
pub mod error;
pub mod lumped;
pub mod matrix;
pub mod rng;
pub mod state;
pub mod walk;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use state::{CubeState, MoveLog, OrderedPair};
