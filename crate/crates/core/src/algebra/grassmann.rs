use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use super::blade::{reorder_sign, reversion_sign, BladeIndex};
use super::{format_real, Kind, Ring};
use crate::{Error, Result, MAX_DIM};

/// Dense element of the exterior algebra over an `n`-dimensional module.
#[derive(Clone, PartialEq, Debug)]
pub struct Grassmann<K, T = f64> {
    dim: usize,
    coeffs: Vec<T>,
    kind: PhantomData<K>,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::DimensionCap { dim, max: MAX_DIM })
    } else {
        Ok(())
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

impl<K: Kind, T: Ring> Grassmann<K, T> {
    /// Zero element.
    ///
    /// Panics when `dim` is outside `1..=MAX_DIM`; use [`Grassmann::from_coeffs`]
    /// for a checked constructor.
    pub fn zero(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "dimension {dim} outside 1..={MAX_DIM}"
        );
        Grassmann {
            dim,
            coeffs: vec![T::zero(); 1 << dim],
            kind: PhantomData,
        }
    }

    pub fn scalar(dim: usize, c: T) -> Self {
        Self::blade(dim, BladeIndex::SCALAR, c)
    }

    pub fn blade(dim: usize, blade: BladeIndex, c: T) -> Self {
        let mut x = Self::zero(dim);
        x.coeffs[blade.0 as usize] = c;
        x
    }

    /// Grade-1 basis element `i` (zero-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::blade(dim, BladeIndex::basis(i), T::one())
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<T>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(Error::CoefficientCount {
                expected: 1 << dim,
                got: coeffs.len(),
            });
        }
        Ok(Grassmann {
            dim,
            coeffs,
            kind: PhantomData,
        })
    }

    /// Grade-1 element from its `n` frame components.
    pub fn from_components(dim: usize, components: Vec<T>) -> Result<Self> {
        check_dim(dim)?;
        if components.len() != dim {
            return Err(Error::CoefficientCount {
                expected: dim,
                got: components.len(),
            });
        }
        let mut x = Self::zero(dim);
        for (i, c) in components.into_iter().enumerate() {
            x.coeffs[1 << i] = c;
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> &T {
        &self.coeffs[blade.0 as usize]
    }

    pub fn set(&mut self, blade: BladeIndex, c: T) {
        self.coeffs[blade.0 as usize] = c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (BladeIndex, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| (BladeIndex(m as u32), c))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Grassmann<K, U> {
        Grassmann {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(f).collect(),
            kind: PhantomData,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Keeps only blades of grade `k`.
    pub fn grade_part(&self, k: usize) -> Result<Self> {
        if k > self.dim {
            return Err(Error::GradeOutOfRange {
                grade: k,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (b, c) in self.iter() {
            if b.grade() == k {
                out.coeffs[b.0 as usize] = c.clone();
            }
        }
        Ok(out)
    }

    /// Grades carrying at least one nonzero coefficient, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut present = vec![false; self.dim + 1];
        for (b, c) in self.iter() {
            if !c.is_zero() {
                present[b.grade()] = true;
            }
        }
        (0..=self.dim).filter(|&k| present[k]).collect()
    }

    /// True when every nonzero coefficient sits on a grade-`k` blade (zero qualifies).
    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.iter().all(|(b, c)| b.grade() == k || c.is_zero())
    }

    /// Frame components of a grade-1 element.
    pub fn components(&self) -> Result<Vec<T>> {
        if !self.is_homogeneous(1) {
            return Err(Error::WrongGrade { expected: 1 });
        }
        Ok((0..self.dim).map(|i| self.coeffs[1 << i].clone()).collect())
    }

    /// Grade-wise sign `(-1)^{k(k-1)/2}`.
    pub fn reversion(&self) -> Self {
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut().enumerate() {
            if reversion_sign(m.count_ones() as usize) < 0.0 {
                *c = -c.clone();
            }
        }
        out
    }

    /// Multiplication by a ring element.
    pub fn mul_scalar(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scale(s))
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.nonzero() {
            for (b, cb) in other.nonzero() {
                if a & b != 0 {
                    continue;
                }
                out.coeffs[(a | b) as usize].mul_acc(ca, cb, reorder_sign(a, b));
            }
        }
        Ok(out)
    }

    /// Duality scalar product `sum_J A_J B_J`.
    pub fn pair(&self, other: &Grassmann<K::Dual, T>) -> Result<T> {
        same_dim(self.dim, other.dim)?;
        let mut acc = T::zero();
        for (m, ca) in self.nonzero() {
            acc.mul_acc(ca, &other.coeffs[m as usize], 1.0);
        }
        Ok(acc)
    }

    /// Left contraction of `self` into an element of the opposite kind.
    ///
    /// For blades `A ⊆ B` the result is `rev(|A|) sign(A, B\A)` on `B\A`,
    /// zero otherwise, so a grade-`j` element against a grade-`k` one lands
    /// on grade `k - j`.
    pub fn left_contract(&self, other: &Grassmann<K::Dual, T>) -> Result<Grassmann<K::Dual, T>> {
        same_dim(self.dim, other.dim)?;
        let mut out = Grassmann::<K::Dual, T>::zero(self.dim);
        for (a, ca) in self.nonzero() {
            let rev = reversion_sign(a.count_ones() as usize);
            for (b, cb) in other.nonzero() {
                if a & !b != 0 {
                    continue;
                }
                let rest = b & !a;
                out.coeffs[rest as usize].mul_acc(ca, cb, rev * reorder_sign(a, rest));
            }
        }
        Ok(out)
    }

    /// Right contraction of `self` by an element of the opposite kind; the
    /// result keeps the kind of `self`.
    ///
    /// For blades `B ⊆ A` the result is `rev(|B|) sign(A\B, B)` on `A\B`.
    pub fn right_contract(&self, other: &Grassmann<K::Dual, T>) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.nonzero() {
            for (b, cb) in other.nonzero() {
                if b & !a != 0 {
                    continue;
                }
                let rest = a & !b;
                let sign = reversion_sign(b.count_ones() as usize) * reorder_sign(rest, b);
                out.coeffs[rest as usize].mul_acc(ca, cb, sign);
            }
        }
        Ok(out)
    }

    fn nonzero(&self) -> impl Iterator<Item = (u32, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m as u32, c))
    }
}

impl<K: Kind> Grassmann<K, f64> {
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl<K: Kind, T: Ring> Add for Grassmann<K, T> {
    type Output = Self;

    /// Panics on dimension mismatch.
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl<K: Kind, T: Ring> Sub for Grassmann<K, T> {
    type Output = Self;

    /// Panics on dimension mismatch.
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl<K: Kind, T: Ring> Neg for Grassmann<K, T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

/// Blade expansion ordered by grade then mask, zero terms suppressed:
/// `+ 1.0 e1 - 2.5 e12`, or `0` for the zero element.
impl<K: Kind> fmt::Display for Grassmann<K, f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for b in super::blades_by_grade(self.dim) {
            let c = self.coeffs[b.0 as usize];
            let text = format_real(c.abs(), true);
            if c == 0.0 || text == "0.0" {
                continue;
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            terms.push(format!("{sign} {text} {}", b.name::<K>()));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Form, Multiform, Multivector};

    fn e(dim: usize, mask: u32) -> Multivector {
        Multivector::blade(dim, BladeIndex(mask), 1.0)
    }

    fn eps(dim: usize, mask: u32) -> Multiform {
        Multiform::blade(dim, BladeIndex(mask), 1.0)
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(e(2, 0b01).wedge(&e(2, 0b10)).unwrap(), e(2, 0b11));
        assert!(e(2, 0b01).wedge(&e(2, 0b01)).unwrap().is_zero());
        // (2e1 + e2) ^ (e1 - e2) = -2 e12 - e12 = -3 e12
        let a = e(2, 1).scale(2.0) + e(2, 2);
        let b = e(2, 1) - e(2, 2);
        assert_eq!(a.wedge(&b).unwrap(), e(2, 0b11).scale(-3.0));
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert_eq!(
            e(2, 1).wedge(&e(3, 1)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn grade_part_examples() {
        let x = Multivector::scalar(2, 3.0) + e(2, 1) + e(2, 3).scale(2.0);
        assert_eq!(x.grade_part(1).unwrap(), e(2, 1));
        assert_eq!(x.grade_part(0).unwrap(), Multivector::scalar(2, 3.0));
        assert!(e(2, 1).grade_part(2).unwrap().is_zero());
        assert!(matches!(
            x.grade_part(3),
            Err(Error::GradeOutOfRange { .. })
        ));
        let sum = (0..=2).fold(Multivector::zero(2), |acc, k| {
            acc + x.grade_part(k).unwrap()
        });
        assert_eq!(sum, x);
    }

    #[test]
    fn reversion_examples() {
        assert_eq!(
            Multivector::scalar(3, 5.0).reversion(),
            Multivector::scalar(3, 5.0)
        );
        assert_eq!(e(2, 3).reversion(), -e(2, 3));
        assert_eq!(e(3, 7).reversion(), -e(3, 7));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(eps(2, 1).pair(&e(2, 1)).unwrap(), 1.0);
        assert_eq!(eps(2, 3).pair(&e(2, 3)).unwrap(), 1.0);
        let x = e(3, 0b011).scale(2.0) + e(3, 0b101);
        let phi = eps(3, 1).wedge(&eps(3, 2)).unwrap();
        assert_eq!(phi.pair(&x).unwrap(), 2.0);
    }

    #[test]
    fn contraction_examples() {
        // <eps1, e12| = e2
        assert_eq!(eps(2, 1).left_contract(&e(2, 3)).unwrap(), e(2, 2));
        // <1, X| = X
        let x = e(2, 3).scale(0.5) + e(2, 1);
        assert_eq!(Multiform::scalar(2, 1.0).left_contract(&x).unwrap(), x);
        // <eps12, e12| = <e12, rev(eps12)> = -1
        assert_eq!(
            eps(2, 3).left_contract(&e(2, 3)).unwrap(),
            Multivector::scalar(2, -1.0)
        );
        // |Phi, 1> = Phi
        let phi = eps(2, 3) + eps(2, 2).scale(3.0);
        assert_eq!(
            phi.right_contract(&Multivector::scalar(2, 1.0)).unwrap(),
            phi
        );
        // |eps12, e2> = eps1
        assert_eq!(eps(2, 3).right_contract(&e(2, 2)).unwrap(), eps(2, 1));
        // |e12, eps1> = -e2
        assert_eq!(e(2, 3).right_contract(&eps(2, 1)).unwrap(), -e(2, 2));
    }

    #[test]
    fn contraction_grade_arithmetic() {
        // A 2-form against a vector contracts to zero.
        assert!(eps(3, 3).left_contract(&e(3, 1)).unwrap().is_zero());
        let r = eps(3, 1).left_contract(&e(3, 7)).unwrap();
        assert_eq!(r.grades(), vec![2]);
    }

    #[test]
    fn display() {
        let x = e(2, 3) - e(2, 1).scale(2.0) + Multivector::scalar(2, 0.5);
        assert_eq!(x.to_string(), "+ 0.5 1 - 2.0 e1 + 1.0 e12");
        assert_eq!(Multivector::zero(2).to_string(), "0");
        let f = Grassmann::<Form, f64>::basis(3, 2);
        assert_eq!(f.to_string(), "+ 1.0 eps3");
    }
}
