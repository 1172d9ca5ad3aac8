use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Commutative coefficient ring for algebra elements and extensor matrices.
///
/// Implemented for `f64`, [`crate::fields::Jet`] and
/// [`crate::fields::Polynomial`].
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(c: f64) -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, c: f64) -> Self;

    /// `self += sign * a * b`.
    fn mul_acc(&mut self, a: &Self, b: &Self, sign: f64) {
        *self += (a.clone() * b.clone()).scale(sign);
    }
}

/// A ring with division and a real part, used for pivoting and tolerances.
pub trait Scalar: Ring + Copy + Div<Output = Self> {
    /// Real (value) part.
    fn re(self) -> f64;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(c: f64) -> Self {
        c
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn mul_acc(&mut self, a: &Self, b: &Self, sign: f64) {
        *self += sign * a * b;
    }
}

impl Scalar for f64 {
    fn re(self) -> f64 {
        self
    }
}
