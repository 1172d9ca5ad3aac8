//! Covariant derivatives on a single chart.
//!
//! A [`ParallelismStructure`] stores coordinate-frame coefficients
//! `Gamma^k_ij` (direction `i`, argument `j`, output `k`) and defines
//!
//! ```text
//! nabla_a X   = a(X) + gen(gamma_a)(X)          multivectors
//! nabla_a Phi = a(Phi) - gen(gamma_a^T)(Phi)    multiforms
//! gamma_a(e_j) = sum_{i,k} a^i Gamma^k_ij e_k
//! ```
//!
//! where `a(.)` differentiates coordinate components. These are polynomial
//! and exact. Deformed derivatives, relative derivatives for non-constant
//! frames, and Jacobian transport involve matrix inverses, so they are
//! evaluated at a point; their inner derivatives are taken exactly with
//! [`Jet`](crate::fields::Jet) arithmetic.

mod covariant;
mod deformed;
mod parallelism;
mod relative;

pub use covariant::{Covariant, OperatorField};
pub use deformed::DeformedStructure;
pub use parallelism::ParallelismStructure;
pub use relative::{JacobianField, RelativeConnection, RelativeStructure};
