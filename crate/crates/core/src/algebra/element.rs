use std::fmt;

use super::{format_real, Form, Grassmann, Multiform, Multivector, Ring, Vector};
use crate::{Error, Result};

/// A value of either kind, or a plain scalar, for dynamically typed callers.
#[derive(Clone, Debug, PartialEq)]
pub enum Element<T = f64> {
    Scalar(T),
    Multivector(Multivector<T>),
    Multiform(Multiform<T>),
}

/// The binary operations that lift pointwise to fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    ScalarMul,
    Wedge,
    DualityScalar,
    LeftContract,
    RightContract,
}

impl BinaryOp {
    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Add => "add",
            BinaryOp::ScalarMul => "scalar_mul",
            BinaryOp::Wedge => "wedge",
            BinaryOp::DualityScalar => "duality_scalar",
            BinaryOp::LeftContract => "left_contract",
            BinaryOp::RightContract => "right_contract",
        }
    }
}

impl<T: Ring> Element<T> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Scalar(_) => "scalar",
            Element::Multivector(_) => "multivector",
            Element::Multiform(_) => "multiform",
        }
    }

    pub fn grade_part(&self, k: usize) -> Result<Self> {
        Ok(match self {
            Element::Scalar(s) if k == 0 => Element::Scalar(s.clone()),
            Element::Scalar(_) => Element::Scalar(T::zero()),
            Element::Multivector(x) => Element::Multivector(x.grade_part(k)?),
            Element::Multiform(x) => Element::Multiform(x.grade_part(k)?),
        })
    }

    pub fn reversion(&self) -> Self {
        match self {
            Element::Scalar(s) => Element::Scalar(s.clone()),
            Element::Multivector(x) => Element::Multivector(x.reversion()),
            Element::Multiform(x) => Element::Multiform(x.reversion()),
        }
    }

    /// Scalars are promoted to grade 0 of the other operand's kind.
    pub fn binary(op: BinaryOp, a: &Self, b: &Self) -> Result<Self> {
        use Element::*;
        let mismatch = || Error::KindMismatch {
            op: op.name().to_string(),
            operands: format!("{} and {}", a.kind_name(), b.kind_name()),
        };
        match (a, b) {
            (Scalar(x), Scalar(y)) => match op {
                BinaryOp::Add => Ok(Scalar(x.clone() + y.clone())),
                _ => Ok(Scalar(x.clone() * y.clone())),
            },
            (Scalar(s), Multivector(x)) => Self::binary(
                op,
                &Multivector(promote(x.dim(), s)),
                &Multivector(x.clone()),
            ),
            (Scalar(s), Multiform(x)) => {
                Self::binary(op, &Multiform(promote(x.dim(), s)), &Multiform(x.clone()))
            }
            (Multivector(x), Scalar(s)) => Self::binary(
                op,
                &Multivector(x.clone()),
                &Multivector(promote(x.dim(), s)),
            ),
            (Multiform(x), Scalar(s)) => {
                Self::binary(op, &Multiform(x.clone()), &Multiform(promote(x.dim(), s)))
            }
            (Multivector(x), Multivector(y)) => match op {
                BinaryOp::Add => {
                    same_dim(x.dim(), y.dim()).map(|_| Multivector(x.clone() + y.clone()))
                }
                BinaryOp::Wedge | BinaryOp::ScalarMul => scalar_or_wedge(op, x, y).map(Multivector),
                _ => Err(mismatch()),
            },
            (Multiform(x), Multiform(y)) => match op {
                BinaryOp::Add => {
                    same_dim(x.dim(), y.dim()).map(|_| Multiform(x.clone() + y.clone()))
                }
                BinaryOp::Wedge | BinaryOp::ScalarMul => scalar_or_wedge(op, x, y).map(Multiform),
                _ => Err(mismatch()),
            },
            (Multiform(x), Multivector(y)) => match op {
                BinaryOp::DualityScalar => Ok(Scalar(x.pair(y)?)),
                BinaryOp::LeftContract => Ok(Multivector(x.left_contract(y)?)),
                BinaryOp::RightContract => Ok(Multiform(x.right_contract(y)?)),
                _ => Err(mismatch()),
            },
            (Multivector(x), Multiform(y)) => match op {
                BinaryOp::DualityScalar => Ok(Scalar(x.pair(y)?)),
                BinaryOp::LeftContract => Ok(Multiform(x.left_contract(y)?)),
                BinaryOp::RightContract => Ok(Multivector(x.right_contract(y)?)),
                _ => Err(mismatch()),
            },
        }
    }
}

fn promote<K: super::Kind, T: Ring>(dim: usize, s: &T) -> Grassmann<K, T> {
    Grassmann::scalar(dim, s.clone())
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

// Scalar multiplication only makes sense with a grade-0 operand; on graded
// operands it coincides with the wedge.
fn scalar_or_wedge<K: super::Kind, T: Ring>(
    op: BinaryOp,
    x: &Grassmann<K, T>,
    y: &Grassmann<K, T>,
) -> Result<Grassmann<K, T>> {
    if op == BinaryOp::ScalarMul && !x.is_homogeneous(0) && !y.is_homogeneous(0) {
        return Err(Error::KindMismatch {
            op: op.name().to_string(),
            operands: "two non-scalar operands".to_string(),
        });
    }
    x.wedge(y)
}

impl fmt::Display for Element<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Scalar(s) => f.write_str(&format_real(*s, false)),
            Element::Multivector(x) => x.fmt(f),
            Element::Multiform(x) => x.fmt(f),
        }
    }
}

impl<T> From<Grassmann<Vector, T>> for Element<T> {
    fn from(x: Grassmann<Vector, T>) -> Self {
        Element::Multivector(x)
    }
}

impl<T> From<Grassmann<Form, T>> for Element<T> {
    fn from(x: Grassmann<Form, T>) -> Self {
        Element::Multiform(x)
    }
}
