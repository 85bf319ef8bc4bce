//! Hidden-variable fractal interpolation built on Edelstein contractions.
//!
//! The crate is `no_std` and only needs `alloc`. It covers four stages:
//!
//! * [`interp`]: assemble the iterated function system `{I x K; g_j}` from a
//!   generalized data set and per-interval parameter choices, and check its
//!   hypotheses (column-sum norm conditions, sampled Edelstein ratio,
//!   invariant rectangle).
//! * [`fixed_point`]: compute `f = (f1, f2)` as the fixed point of the
//!   Read-Bajraktarevic operator on a sampled function space.
//! * [`attractor`]: rebuild the attractor independently (Hutchinson iteration
//!   and chaos game) and compare point sets by Hausdorff distance.
//! * [`analysis`]: box-counting dimension, Holder exponent and the bound
//!   `dim_B <= 2 - alpha`, plus a scalar reference solver for the classical
//!   sub-case.
//!
//! IO, configuration and plotting live in the companion `fif-cli` crate.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod attractor;
mod error;
pub mod fixed_point;
pub mod interp;

pub use error::{Error, Result};

/// Tolerance for structural identities (endpoint and join-up conditions).
pub const STRUCTURAL_TOL: f64 = 1e-12;
