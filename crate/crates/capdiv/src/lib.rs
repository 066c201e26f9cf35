//! File formats, report rendering and the `capdiv` command-line driver for
//! [`capdiv_core`].

pub mod cli;
mod error;
pub mod io;
pub mod render;

pub use capdiv_core;
pub use error::{Error, Result};
