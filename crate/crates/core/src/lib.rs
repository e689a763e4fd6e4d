//! Exact Weil-Deligne representation calculus.

pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod pseudo;
pub mod sample;
pub mod scalars;
pub mod structure;
pub mod wd;

pub use error::{Error, Result};
