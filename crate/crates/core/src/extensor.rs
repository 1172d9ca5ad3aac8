//! Linear operators on the vector (or form) module and their lifts to the
//! full exterior algebra.
//!
//! An [`Extensor`] is stored frame-relative as an `n x n` matrix whose
//! column `j` is the image of basis element `j`. Lifts are computed on demand:
//!
//! - [`Extensor::duality_adjoint`]: transpose, an operator of the opposite kind;
//! - [`Extensor::extend`]: outermorphism, `t(v1) ^ ... ^ t(vk)`;
//! - [`Extensor::generalize`]: derivation, `sum_i v1 ^ .. ^ t(vi) ^ .. ^ vk`.

use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use crate::algebra::{check_dim, reorder_sign, BladeIndex, Grassmann, Kind, Ring, Scalar};
use crate::{Error, Result, MAX_DIM};

/// `|det|` at or below this value is treated as singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, PartialEq, Debug)]
pub struct Extensor<K, T = f64> {
    dim: usize,
    // row-major: entry (k, j) = coefficient of basis k in the image of basis j
    m: Vec<T>,
    kind: PhantomData<K>,
}

impl<K: Kind, T: Ring> Extensor<K, T> {
    pub fn zero(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "dimension {dim} outside 1..={MAX_DIM}"
        );
        Extensor {
            dim,
            m: vec![T::zero(); dim * dim],
            kind: PhantomData,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, T::one())
    }

    pub fn scaled_identity(dim: usize, c: T) -> Self {
        Self::diagonal(vec![c; dim])
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let mut t = Self::zero(diag.len());
        for (i, c) in diag.into_iter().enumerate() {
            t.set(i, i, c);
        }
        t
    }

    /// `rows[k][j]` is the coefficient of basis `k` in the image of basis `j`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut m = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::CoefficientCount {
                    expected: dim,
                    got: row.len(),
                });
            }
            m.extend(row);
        }
        Ok(Extensor {
            dim,
            m,
            kind: PhantomData,
        })
    }

    /// Operator sending basis `j` to `images[j]` (each grade 1).
    pub fn from_columns(images: &[Grassmann<K, T>]) -> Result<Self> {
        let dim = images.len();
        check_dim(dim)?;
        let mut t = Self::zero(dim);
        for (j, img) in images.iter().enumerate() {
            if img.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: img.dim(),
                });
            }
            for (k, c) in img.components()?.into_iter().enumerate() {
                t.set(k, j, c);
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, k: usize, j: usize) -> &T {
        &self.m[k * self.dim + j]
    }

    pub fn set(&mut self, k: usize, j: usize, c: T) {
        self.m[k * self.dim + j] = c;
    }

    pub fn entries(&self) -> &[T] {
        &self.m
    }

    /// Image of basis element `j`.
    pub fn column(&self, j: usize) -> Grassmann<K, T> {
        let mut v = Grassmann::zero(self.dim);
        for k in 0..self.dim {
            v.set(BladeIndex::basis(k), self.entry(k, j).clone());
        }
        v
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Extensor<K, U> {
        Extensor {
            dim: self.dim,
            m: self.m.iter().map(f).collect(),
            kind: PhantomData,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Linear action on a grade-1 element.
    pub fn apply(&self, v: &Grassmann<K, T>) -> Result<Grassmann<K, T>> {
        self.check(v.dim())?;
        let comps = v.components()?;
        let mut out = Grassmann::zero(self.dim);
        for k in 0..self.dim {
            let mut acc = T::zero();
            for (j, c) in comps.iter().enumerate() {
                acc.mul_acc(self.entry(k, j), c, 1.0);
            }
            out.set(BladeIndex::basis(k), acc);
        }
        Ok(out)
    }

    /// Transpose: `<adj(t)(w), v> = <w, t(v)>`.
    pub fn duality_adjoint(&self) -> Extensor<K::Dual, T> {
        let n = self.dim;
        let mut m = Vec::with_capacity(n * n);
        for k in 0..n {
            for j in 0..n {
                m.push(self.entry(j, k).clone());
            }
        }
        Extensor {
            dim: n,
            m,
            kind: PhantomData,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other.dim)?;
        let n = self.dim;
        let mut out = Self::zero(n);
        for k in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for i in 0..n {
                    acc.mul_acc(self.entry(k, i), other.entry(i, j), 1.0);
                }
                out.set(k, j, acc);
            }
        }
        Ok(out)
    }

    /// Outermorphism: identity on scalars, `t` on vectors, multiplicative over wedge.
    pub fn extend(&self, a: &Grassmann<K, T>) -> Result<Grassmann<K, T>> {
        self.check(a.dim())?;
        let n = self.dim;
        let columns: Vec<Grassmann<K, T>> = (0..n).map(|j| self.column(j)).collect();
        // images[J] = t(e_J), built by peeling the highest index off J
        let mut images: Vec<Option<Grassmann<K, T>>> = vec![None; 1 << n];
        images[0] = Some(Grassmann::scalar(n, T::one()));
        let mut out = Grassmann::zero(n);
        for mask in 0..(1u32 << n) {
            if mask != 0 {
                let high = 31 - mask.leading_zeros();
                let rest = mask & !(1 << high);
                let img = images[rest as usize]
                    .as_ref()
                    .expect("lower masks are built first")
                    .wedge(&columns[high as usize])?;
                images[mask as usize] = Some(img);
            }
            let c = a.coeff(BladeIndex(mask));
            if c.is_zero() {
                continue;
            }
            let img = images[mask as usize].as_ref().expect("built above");
            out = out + img.mul_scalar(c);
        }
        Ok(out)
    }

    /// Derivation extension: zero on scalars, `t` on vectors, Leibniz over wedge.
    pub fn generalize(&self, a: &Grassmann<K, T>) -> Result<Grassmann<K, T>> {
        self.check(a.dim())?;
        let n = self.dim;
        let mut out = Grassmann::<K, T>::zero(n);
        let mut acc: Vec<T> = vec![T::zero(); 1 << n];
        for (blade, c) in a.iter() {
            if c.is_zero() {
                continue;
            }
            let mask = blade.0;
            for ji in blade.indices() {
                let below = mask & ((1u32 << ji) - 1);
                let above = mask & !((2u32 << ji) - 1);
                for target in 0..n {
                    let t_bit = 1u32 << target;
                    if (below | above) & t_bit != 0 {
                        continue;
                    }
                    let coef = self.entry(target, ji);
                    if coef.is_zero() {
                        continue;
                    }
                    // e_below ^ e_target ^ e_above
                    let sign = reorder_sign(below, t_bit) * reorder_sign(below | t_bit, above);
                    acc[(below | t_bit | above) as usize].mul_acc(coef, c, sign);
                }
            }
        }
        for (m, c) in acc.into_iter().enumerate() {
            out.set(BladeIndex(m as u32), c);
        }
        Ok(out)
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: dim,
            })
        }
    }
}

impl<K: Kind, T: Scalar> Extensor<K, T> {
    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> T {
        let n = self.dim;
        let mut a = self.m.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    a[r * n + col]
                        .re()
                        .abs()
                        .total_cmp(&a[s * n + col].re().abs())
                })
                .unwrap_or(col);
            if a[pivot * n + col].re() == 0.0 {
                return T::zero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det = det * p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with_tolerance(SINGULARITY_TOLERANCE)
    }

    /// Gauss-Jordan inverse with partial pivoting; fails when `|det| <= tol`.
    pub fn invert_with_tolerance(&self, tol: f64) -> Result<Self> {
        let det = self.determinant().re();
        if !(det.abs() > tol) {
            return Err(Error::SingularExtensor { det: det.abs() });
        }
        let n = self.dim;
        let mut a = self.m.clone();
        let mut inv = Self::identity(n).m;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    a[r * n + col]
                        .re()
                        .abs()
                        .total_cmp(&a[s * n + col].re().abs())
                })
                .unwrap_or(col);
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] = a[col * n + j] / p;
                inv[col * n + j] = inv[col * n + j] / p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * x;
                    inv[r * n + j] -= f * y;
                }
            }
        }
        Ok(Extensor {
            dim: n,
            m: inv,
            kind: PhantomData,
        })
    }
}

impl<K: Kind> Extensor<K, f64> {
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl<K: Kind, T: Ring> Add for Extensor<K, T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for (a, b) in self.m.iter_mut().zip(rhs.m) {
            *a += b;
        }
        self
    }
}

impl<K: Kind, T: Ring> Sub for Extensor<K, T> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        for (a, b) in self.m.iter_mut().zip(rhs.m) {
            *a -= b;
        }
        self
    }
}

impl<K: Kind, T: Ring> Neg for Extensor<K, T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Form, Multiform, Multivector, Vector};

    fn shift() -> Extensor<Vector> {
        // t(e1) = e2, t(e2) = 0
        Extensor::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap()
    }

    fn e(mask: u32) -> Multivector {
        Multivector::blade(2, BladeIndex(mask), 1.0)
    }

    fn eps(mask: u32) -> Multiform {
        Multiform::blade(2, BladeIndex(mask), 1.0)
    }

    #[test]
    fn apply_examples() {
        let v = e(1) + e(2).scale(3.0);
        assert_eq!(Extensor::identity(2).apply(&v).unwrap(), v);
        assert_eq!(shift().apply(&e(1)).unwrap(), e(2));
        assert!(shift().apply(&Multivector::zero(2)).unwrap().is_zero());
        assert_eq!(shift().apply(&e(3)), Err(Error::WrongGrade { expected: 1 }));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(
            Extensor::<Vector>::identity(3).duality_adjoint(),
            Extensor::<Form>::identity(3)
        );
        let adj = shift().duality_adjoint();
        assert_eq!(adj.apply(&eps(2)).unwrap(), eps(1));
        assert!(adj.apply(&eps(1)).unwrap().is_zero());
        let d = Extensor::<Vector>::diagonal(vec![1.0, 2.0, 3.0]);
        assert_eq!(
            d.duality_adjoint(),
            Extensor::<Form>::diagonal(vec![1.0, 2.0, 3.0])
        );
    }

    #[test]
    fn extend_examples() {
        let two = Extensor::<Vector>::scaled_identity(2, 2.0);
        assert_eq!(two.extend(&e(3)).unwrap(), e(3).scale(4.0));
        let s = Multivector::scalar(2, 7.0);
        assert_eq!(shift().extend(&s).unwrap(), s);
        let x = e(0).scale(1.5) + e(1) - e(3).scale(2.0);
        assert_eq!(Extensor::identity(2).extend(&x).unwrap(), x);
    }

    #[test]
    fn generalize_examples() {
        let id = Extensor::<Vector>::identity(3);
        let x2 = Multivector::blade(3, BladeIndex(0b011), 1.0)
            + Multivector::blade(3, BladeIndex(0b110), -2.0);
        assert_eq!(id.generalize(&x2).unwrap(), x2.scale(2.0));
        assert!(shift()
            .generalize(&Multivector::scalar(2, 3.0))
            .unwrap()
            .is_zero());
        assert!(shift().generalize(&e(3)).unwrap().is_zero());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            Extensor::<Vector>::identity(3).invert().unwrap(),
            Extensor::identity(3)
        );
        let d = Extensor::<Vector>::diagonal(vec![2.0, 4.0]);
        assert_eq!(d.invert().unwrap(), Extensor::diagonal(vec![0.5, 0.25]));
        assert!(matches!(
            shift().invert(),
            Err(Error::SingularExtensor { .. })
        ));
    }

    #[test]
    fn determinant_and_top_blade() {
        let t = Extensor::<Vector>::from_rows(vec![
            vec![1.0, 2.0, 0.5],
            vec![0.0, 3.0, -1.0],
            vec![4.0, 0.0, 1.0],
        ])
        .unwrap();
        // cofactor expansion along the first row
        let det =
            1.0 * (3.0 * 1.0 - -0.0) - 2.0 * (0.0 * 1.0 - -4.0) + 0.5 * (0.0 * 0.0 - 3.0 * 4.0);
        assert!((t.determinant() - det).abs() < 1e-12);
        let top = Multivector::blade(3, BladeIndex(0b111), 1.0);
        let img = t.extend(&top).unwrap();
        assert!((img.coeff(BladeIndex(0b111)) - det).abs() < 1e-12);
    }
}
