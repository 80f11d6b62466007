//! Protein solubility classification on four representations of the same
//! protein set: residue sequences, labeled contact graphs, seriated vector
//! sequences and graph-complexity features.

pub mod complexity;
pub mod datamodel;
mod error;
pub mod evolve;
pub mod graphcore;
pub mod kernel;
pub mod seqdist;
pub mod stats;
pub mod svm;

pub use error::{Error, ErrorKind, Result};
