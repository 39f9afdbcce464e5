//! Exact symbolic kernel for graded pre-Lie² and Nijenhuis structures.
//!
//! Everything here is exact rational arithmetic over finite bases:
//!
//! - [`sign`], [`FormalSum`], [`Scalar`]: Koszul signs and linear combinations.
//! - [`freelie`]: the free graded Lie algebra on `W ⊕ ΠW` with the contracting
//!   pair `d`, `Q` and the operations it induces on `Im Q`.
//! - [`algebra`]: structure constants, identity checkers, the dg Lie algebra
//!   on `V ⊕ ΠV`, supersymmetry transformations and Koszul dual examples.
//! - [`ce`]: Chevalley-Eilenberg complexes, the bicomplex of `d_∘`, `d_•`
//!   and operadic homology.
//! - [`geometry`]: polynomial super-calculus on `T[1]V̂`, the
//!   Nijenhuis-Richardson product and the Frölicher-Nijenhuis bracket.
//! - [`operad`]: mixed-symmetry corollas, trees, grafting, the cobar
//!   differential and relation trees.
//! - [`infinity`]: `μ_{k,p}` collections, their geometric assembly and the
//!   Maurer-Cartan checks.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod ce;
pub mod formal_sum;
pub mod freelie;
pub mod geometry;
pub mod infinity;
pub mod linalg;
pub mod operad;
pub mod samples;
pub mod scalar;
pub mod sign;

pub use formal_sum::FormalSum;
pub use scalar::Scalar;

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("permutation is not a bijection on word positions")]
    MalformedPermutation,
    #[error("blocks overlap, are unsorted or do not cover the ordered set")]
    MalformedPartition,
    #[error("weight must be at least 1")]
    WeightOutOfRange,
    #[error("generator contexts differ")]
    ContextMismatch,
    #[error("element is not in the image of Q: {0}")]
    NotInImageOfQ(String),
    #[error("structure is missing operation `{0}`")]
    MissingOperation(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}
