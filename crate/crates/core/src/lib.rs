//! Accuracy and diversity metrics for sets of generated captions.
//!
//! The crate is `no_std` and only needs `alloc`. File loading, report
//! rendering and the command line live in the `capdiv` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod divmetrics;
mod error;
pub mod numkit;
pub mod refmetrics;
pub mod simcore;
pub mod stats;
pub mod textproc;

pub use error::{Error, Result};
