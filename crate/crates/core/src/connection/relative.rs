use std::sync::Arc;

use super::covariant::{conjugated, direction_at, Covariant, OperatorField};
use super::ParallelismStructure;
use crate::algebra::{Grassmann, Scalar, Vector};
use crate::extensor::Extensor;
use crate::fields::{split, Chart, FrameField, GradedField, Jet, VectorField};
use crate::{Error, Result};

/// A frame field `B` and its frame-constant derivative `d_a`: expand in
/// the frame (or coframe) blades, differentiate the components as scalars,
/// reassemble.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeStructure {
    frame: FrameField,
}

impl RelativeStructure {
    pub fn new(frame: FrameField) -> Self {
        RelativeStructure { frame }
    }

    pub fn coordinate(chart: Arc<Chart>) -> Self {
        Self::new(FrameField::coordinate(chart))
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.frame.chart()
    }

    /// `d_a x` at `p`.
    pub fn deriv<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
        p: &[f64],
    ) -> Result<Grassmann<K>> {
        conjugated(&self.frame, x, a, p, None)
    }

    /// `d_a Y` at the real part of `q`, for `Y` given by its jet at `q`.
    pub fn deriv_of_jet<K: Covariant>(
        &self,
        q: &[Jet],
        y: &Grassmann<K, Jet>,
    ) -> Result<Grassmann<K>> {
        let (outer, inner) = K::conjugators(&self.frame.matrix_at(q))?;
        let (_, dc) = split(&inner.extend(y)?);
        outer.map(|c| c.re).extend(&dc)
    }
}

fn overlap(a: &Chart, b: &Chart) -> Result<Chart> {
    if !a.compatible(b) {
        return Err(Error::ChartMismatch);
    }
    a.intersect(b)
}

/// The relative connection `gamma_a = nabla_a - d_a` of a parallelism
/// structure with respect to a relative structure.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeConnection {
    structure: ParallelismStructure,
    relative: RelativeStructure,
    overlap: Chart,
}

impl RelativeConnection {
    /// Fails with `EmptyOverlap` when the two domains do not intersect.
    pub fn new(structure: ParallelismStructure, relative: RelativeStructure) -> Result<Self> {
        let overlap = overlap(structure.chart(), relative.chart())?;
        Ok(RelativeConnection {
            structure,
            relative,
            overlap,
        })
    }

    pub fn overlap(&self) -> &Chart {
        &self.overlap
    }

    pub fn structure(&self) -> &ParallelismStructure {
        &self.structure
    }

    pub fn relative(&self) -> &RelativeStructure {
        &self.relative
    }

    /// The extensor `gamma_a(p)` for direction components `a` at `p`.
    pub fn gamma_at(&self, a: &[f64], p: &[f64]) -> Result<Extensor<Vector>> {
        self.overlap.check_point(p)?;
        let n = self.overlap.dim();
        let q = Jet::seed(p, a);
        let mut gamma = self.structure.gamma_at(a, p);
        // gamma_a(e_m) = nabla_a e_m - d_a e_m, with e_m constant
        for m in 0..n {
            let e_m = Grassmann::<Vector, Jet>::basis(n, m);
            let d = self.relative.deriv_of_jet(&q, &e_m)?;
            for k in 0..n {
                let c = *gamma.entry(k, m) - *d.coeff(crate::algebra::BladeIndex::basis(k));
                gamma.set(k, m, c);
            }
        }
        Ok(gamma)
    }

    /// `nabla_a v - d_a v` at `p`, computed from the two derivatives.
    pub fn apply_at(
        &self,
        a: &VectorField,
        v: &VectorField,
        p: &[f64],
    ) -> Result<Grassmann<Vector>> {
        self.overlap.check_point(p)?;
        let nabla = self.structure.cov_deriv_vector(a, v)?.eval_at(p);
        Ok(nabla - self.relative.deriv(a, v, p)?)
    }

    /// Split form `d_a x + correction(gamma_a)(x)` at `p`.
    pub fn split_at<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
        p: &[f64],
    ) -> Result<Grassmann<K>> {
        let dir = direction_at(a, p)?;
        let gamma = self.gamma_at(&dir, p)?;
        Ok(self.relative.deriv(a, x, p)? + K::correction(&gamma, &x.eval_at(p))?)
    }
}

/// The Jacobian field `J = F' F^-1` mapping frame `B` onto frame `B'`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianField {
    from: RelativeStructure,
    to: RelativeStructure,
    overlap: Chart,
}

impl JacobianField {
    pub fn new(from: RelativeStructure, to: RelativeStructure) -> Result<Self> {
        let overlap = overlap(from.chart(), to.chart())?;
        Ok(JacobianField { from, to, overlap })
    }

    pub fn from(&self) -> &RelativeStructure {
        &self.from
    }

    pub fn to(&self) -> &RelativeStructure {
        &self.to
    }

    pub fn overlap(&self) -> &Chart {
        &self.overlap
    }

    /// The Jacobian in the reverse direction.
    pub fn inverse(&self) -> JacobianField {
        JacobianField {
            from: self.to.clone(),
            to: self.from.clone(),
            overlap: self.overlap.clone(),
        }
    }

    pub fn at(&self, p: &[f64]) -> Result<Extensor<Vector>> {
        self.overlap.check_point(p)?;
        self.operator_at(p)
    }

    /// `J(d_a J^-1 x)` at `p`, with `d` the derivative of `from`.
    pub fn transport<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
        p: &[f64],
    ) -> Result<Grassmann<K>> {
        self.overlap.check_point(p)?;
        let q = Jet::seed(p, &direction_at(a, p)?);
        let (outer, inner) = K::conjugators(&self.operator_at(&q)?)?;
        let y = inner.extend(&x.eval_at(&q))?;
        let d = self.from.deriv_of_jet(&q, &y)?;
        outer.map(|c| c.re).extend(&d)
    }
}

impl OperatorField for JacobianField {
    fn operator_at<T: Scalar>(&self, p: &[T]) -> Result<Extensor<Vector, T>> {
        let f = self.from.frame.matrix_at(p);
        let inv = f.invert().map_err(crate::fields::singular_frame)?;
        self.to.frame.matrix_at(p).compose(&inv)
    }
}
