pub mod cli;
pub mod conjugation;
pub mod coordring;
pub mod curve;
pub mod domain;
pub mod error;
pub mod field;
pub mod homology;
pub mod laurent;
pub mod linalg;
pub mod orbits;
pub mod stabilizers;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
