//! Point-level exterior algebra over an `n`-dimensional module.
//!
//! A [`Grassmann`] element stores one coefficient per ascending blade in a
//! dense `2^n` array indexed by [`BladeIndex`] masks. The kind parameter
//! separates tangent-side [`Multivector`]s from cotangent-side
//! [`Multiform`]s at the type level; same-kind products never mix them.
//!
//! The duality pairing uses the normalization `<eps^J, e_K> = delta_JK`, so
//! it is the plain coefficient sum over blades. Contractions are fixed by
//! adjoint relations against the wedge with a reversion:
//!
//! ```text
//! < <Phi,X| , Psi > = < X , rev(Phi) ^ Psi >      left:   Phi.left_contract(X)
//! < <X,Phi| , Y   > = < Phi , rev(X) ^ Y >        mirror: X.left_contract(Phi)
//! < |Phi,X> , Y   > = < Phi , Y ^ rev(X) >        right:  Phi.right_contract(X)
//! < |X,Phi> , Psi > = < X , Psi ^ rev(Phi) >      mirror: X.right_contract(Phi)
//! ```

mod blade;
mod element;
mod format;
mod grassmann;
mod ring;

pub use blade::{blades_by_grade, reorder_sign, reversion_sign, BladeIndex};
pub use element::{BinaryOp, Element};
pub use format::format_real;
pub(crate) use grassmann::check_dim;
pub use grassmann::Grassmann;
pub use ring::{Ring, Scalar};

use std::fmt::Debug;

/// Marker for the two sides of the duality: vectors and forms.
pub trait Kind: Copy + Clone + Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    type Dual: Kind<Dual = Self>;
    /// Blade name prefix (`e` or `eps`).
    const PREFIX: &'static str;
    const NAME: &'static str;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Vector;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Form;

impl Kind for Vector {
    type Dual = Form;
    const PREFIX: &'static str = "e";
    const NAME: &'static str = "multivector";
}

impl Kind for Form {
    type Dual = Vector;
    const PREFIX: &'static str = "eps";
    const NAME: &'static str = "multiform";
}

pub type Multivector<T = f64> = Grassmann<Vector, T>;
pub type Multiform<T = f64> = Grassmann<Form, T>;
