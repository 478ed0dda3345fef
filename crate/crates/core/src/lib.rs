//! Polynomial formulations of hard problems, deterministic splitter
//! families and arithmetic-circuit verification, sized for exhaustive
//! checking on a desk machine.

pub mod algebra;
pub mod bits;
pub mod circuits;
pub mod error;
pub mod formulations;
pub mod par;
pub mod pipeline;
pub mod reference;
pub mod selftest;
pub mod solvers;
pub mod splitters;

pub use error::{Error, Result};
