//! Experiment driver for the stratified hypercube walk: batch subcommands
//! for simulation, exact total-variation curves, mixing-time location,
//! hitting moments, coupling-time sampling, cutoff profiles, and the
//! row-addition authentication demo, plus the brute-force full-chain oracle
//! used to cross-check the lumped machinery.

pub mod cli;
pub mod oracle;
pub mod run;
