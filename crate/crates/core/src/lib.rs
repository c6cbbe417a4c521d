//! Surrogate-guided multi-objective search for diverse failing scenarios.
//!
//! The pipeline: train an MLP surrogate on labelled scenario logs, evolve
//! scenario configurations against two objectives (predicted failure
//! likelihood and diversity w.r.t. an archive of already-selected
//! scenarios), execute the archived scenarios in a synthetic environment,
//! then cluster the resulting traces to count distinct failure types and
//! compare strategies statistically.

pub mod analysis;
pub mod diversity;
pub mod moea;
pub mod rng;
pub mod scenario;
pub mod search;
pub mod surrogate;
pub mod testbed;

#[cfg(test)]
pub(crate) mod testutil;
