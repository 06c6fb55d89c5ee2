//! Homological quantum codes on triangulated 3-manifolds.
//!
//! The crate builds Δ-complexes for small closed 3-manifolds, derives toric
//! and color codes from them, evaluates triple cup products, and checks that
//! diagonal CCZ/CZ/T circuits act as logical gates whose structure is fixed by
//! the triple intersection form. Companion modules cover the symplectic
//! algebra of surface mapping classes and a synthesis route from prescribed
//! 3-forms back to gluing maps.

pub mod codes;
pub mod complex;
pub mod cup;
pub mod gates;
pub mod gf2;
pub mod homology;
pub mod hypergraph;
pub mod mcg;
mod serde_util;
pub mod sullivan;

pub use gf2::{BitMatrix, BitVec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a cycle: boundary supported on {witness:?}")]
    NotACycle { witness: Vec<usize> },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("unknown coefficient on triple {0:?}")]
    UnknownCoefficient([usize; 3]),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("logical check failed: {0}")]
    CheckFailed(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
