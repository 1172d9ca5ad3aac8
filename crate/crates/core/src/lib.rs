//! Exterior calculus of multivector and multiform fields on a single chart.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: point-level exterior algebra (wedge, grade projection,
//!   reversion, duality scalar product, left and right contractions).
//! - [`extensor`]: grade-1 operators and their lifts (duality adjoint,
//!   outermorphism extension, derivation generalization, inverse).
//! - [`fields`]: polynomial-coefficient fields on a chart, exact directional
//!   derivatives, dual coframes and forward-mode jets.
//! - [`connection`]: covariant derivatives of a parallelism structure,
//!   deformed derivatives, relative derivatives and Jacobian transport.
//! - [`verify`]: a seeded randomized suite checking every identity the
//!   engine is meant to satisfy.
//!
//! Coefficient arithmetic is generic over [`algebra::Ring`], so the same
//! kernels serve real values, polynomial fields and dual numbers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod connection;
pub mod error;
pub mod extensor;
pub mod fields;
pub mod verify;

pub use error::{Error, Result};

/// Largest supported dimension of the underlying vector module.
pub const MAX_DIM: usize = 8;
