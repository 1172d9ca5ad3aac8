//! Polynomial-coefficient fields on a single chart.
//!
//! Every field stores one [`Polynomial`] per blade (or per matrix entry), so
//! the module operations, exterior and duality products, and coordinate
//! directional derivatives all stay exact and polynomial. Objects that are
//! only rational, such as dual coframes of non-constant frames or inverses of
//! extensor fields, are evaluated pointwise; their directional derivatives
//! come from evaluating at a [`Jet`] point.

mod chart;
mod field;
mod jet;
mod polynomial;

pub use chart::Chart;
pub use field::{
    pointwise, singular_frame, AnyField, ExtensorField, FormField, FrameField, GradedField,
    MultiformField, MultivectorField, ScalarField, VectorField, INVERTIBILITY_SAMPLES,
};
pub use jet::{central_difference, split, split_extensor, Jet, FD_STEP};
pub use polynomial::{Exponents, Polynomial};
