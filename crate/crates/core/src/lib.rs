//! Synchronous majority dynamics on random graphs.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation: seeded graph samplers, the bit-parallel majority kernel,
//! exact probability oracles used to check the supporting identities, and a
//! sequential trial harness. IO, threading and the command line live in the
//! `majsim` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod bits;
pub mod dynamics;
pub mod graph;
pub mod harness;
pub mod rng;

pub use bits::BitVec;
pub use dynamics::{
    magnetization, majority_step, run_dynamics, sgn, Magnetization, Period, RunOptions,
    StateVector, Trajectory,
};
pub use graph::{sample_gnp, sample_random_regular, Graph, GraphError, GraphModel};
pub use harness::{ExperimentConfig, InitMode, SummaryStats, TrialOutcome};
