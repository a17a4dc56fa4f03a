//! Exact computations with σ-modules: Hilbert–Mumford weights, GIT
//! (semi)stability, Jordan–Hölder filtrations, S-equivalence and the
//! dual-number fiber groups of parahoric reductions.

pub mod cli;
pub mod error;
pub mod format;
pub mod gitdecide;
pub mod hilbertmumford;
pub mod linalg;
pub mod parahoric;
pub mod registry;
pub mod sample;
pub mod sigmamod;

pub use error::{Error, Result};
