//! Regular inclusions of finite-dimensional von Neumann algebras.
//!
//! Starting from an inclusion matrix and the summand sizes of the smaller
//! algebra, this crate decides regularity with a checkable certificate,
//! canonicalizes normalizer matrices, computes the spectral condition and
//! matrix depth, and, when a unitary orthonormal basis inside the normalizer
//! exists, constructs one and verifies it numerically.
//!
//! The modules follow the pipeline:
//!
//! - [`inclusion`]: exact integer combinatorics of inclusion matrices
//! - [`classify`]: regularity verdicts, decomposition, spectral condition, depth
//! - [`algebra`]: dense multi-matrix algebras, the embedding, trace and expectation
//! - [`basis`]: unitary orthonormal bases and the scalar-inclusion solver
//! - [`verify`]: independent numerical certification
//! - [`report`]: descriptor documents, reports and basis payloads

pub mod algebra;
pub mod basis;
pub mod classify;
pub mod error;
pub mod inclusion;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use inclusion::{DimensionVector, InclusionDescriptor, InclusionMatrix};
