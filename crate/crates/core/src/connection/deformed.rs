use super::covariant::{conjugated, direction_at, Covariant};
use super::ParallelismStructure;
use crate::algebra::{Grassmann, Multiform, Multivector, Vector};
use crate::fields::{ExtensorField, GradedField, MultiformField, MultivectorField, VectorField};
use crate::{Error, Result};

/// A parallelism structure deformed by an invertible extensor field `lambda`:
///
/// ```text
/// nabla^lambda_a X   = ext(lambda)  nabla_a ext(lambda^-1) X
/// nabla^lambda_a Phi = ext(lambda^-T) nabla_a ext(lambda^T) Phi
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedStructure {
    base: ParallelismStructure,
    lambda: ExtensorField<Vector>,
}

impl DeformedStructure {
    /// Fails with `SingularExtensor` if `lambda` is singular at a sampled point.
    pub fn new(base: ParallelismStructure, lambda: ExtensorField<Vector>) -> Result<Self> {
        if **base.chart() != **lambda.chart() {
            return Err(Error::ChartMismatch);
        }
        lambda.check_invertible()?;
        Ok(DeformedStructure { base, lambda })
    }

    pub fn base(&self) -> &ParallelismStructure {
        &self.base
    }

    pub fn lambda(&self) -> &ExtensorField<Vector> {
        &self.lambda
    }

    /// The deformed derivative of `x` along `a`, evaluated at `p`.
    pub fn deriv<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
        p: &[f64],
    ) -> Result<Grassmann<K>> {
        let dir = direction_at(a, p)?;
        let gamma = self.base.gamma_at(&dir, p);
        conjugated(&self.lambda, x, a, p, Some(&gamma))
    }

    pub fn deriv_multivector(
        &self,
        a: &VectorField,
        x: &MultivectorField,
        p: &[f64],
    ) -> Result<Multivector> {
        self.deriv(a, x, p)
    }

    pub fn deriv_multiform(
        &self,
        a: &VectorField,
        phi: &MultiformField,
        p: &[f64],
    ) -> Result<Multiform> {
        self.deriv(a, phi, p)
    }
}
