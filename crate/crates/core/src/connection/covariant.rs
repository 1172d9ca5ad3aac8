use super::ParallelismStructure;
use crate::algebra::{Form, Grassmann, Kind, Ring, Scalar, Vector};
use crate::extensor::Extensor;
use crate::fields::{split, ExtensorField, FrameField, GradedField, Jet, VectorField};
use crate::Result;

/// Kind-dependent pieces of covariant calculus.
pub trait Covariant: Kind {
    /// Connection term added to the coordinate derivative:
    /// `gen(gamma)` on multivectors, `-gen(gamma^T)` on multiforms.
    fn correction<T: Ring>(
        gamma: &Extensor<Vector, T>,
        x: &Grassmann<Self, T>,
    ) -> Result<Grassmann<Self, T>>;

    /// `(outer, inner)` lifts of an invertible vector operator used to
    /// conjugate a derivative: `(op, op^-1)` on vectors and
    /// `(op^-T, op^T)` on forms.
    fn conjugators<T: Scalar>(
        op: &Extensor<Vector, T>,
    ) -> Result<(Extensor<Self, T>, Extensor<Self, T>)>;

    /// The grade-1 covariant derivative by its index formula.
    fn grade_one(
        s: &ParallelismStructure,
        a: &VectorField,
        x: &GradedField<Self>,
    ) -> Result<GradedField<Self>>;
}

impl Covariant for Vector {
    fn correction<T: Ring>(
        gamma: &Extensor<Vector, T>,
        x: &Grassmann<Vector, T>,
    ) -> Result<Grassmann<Vector, T>> {
        gamma.generalize(x)
    }

    fn conjugators<T: Scalar>(
        op: &Extensor<Vector, T>,
    ) -> Result<(Extensor<Vector, T>, Extensor<Vector, T>)> {
        Ok((op.clone(), op.invert()?))
    }

    fn grade_one(
        s: &ParallelismStructure,
        a: &VectorField,
        x: &GradedField<Vector>,
    ) -> Result<GradedField<Vector>> {
        s.cov_deriv_vector(a, x)
    }
}

impl Covariant for Form {
    fn correction<T: Ring>(
        gamma: &Extensor<Vector, T>,
        x: &Grassmann<Form, T>,
    ) -> Result<Grassmann<Form, T>> {
        Ok(-gamma.duality_adjoint().generalize(x)?)
    }

    fn conjugators<T: Scalar>(
        op: &Extensor<Vector, T>,
    ) -> Result<(Extensor<Form, T>, Extensor<Form, T>)> {
        Ok((op.invert()?.duality_adjoint(), op.duality_adjoint()))
    }

    fn grade_one(
        s: &ParallelismStructure,
        a: &VectorField,
        x: &GradedField<Form>,
    ) -> Result<GradedField<Form>> {
        s.cov_deriv_form(a, x)
    }
}

/// A vector-operator field that can be evaluated at real or jet points.
pub trait OperatorField {
    fn operator_at<T: Scalar>(&self, p: &[T]) -> Result<Extensor<Vector, T>>;
}

impl OperatorField for ExtensorField<Vector> {
    fn operator_at<T: Scalar>(&self, p: &[T]) -> Result<Extensor<Vector, T>> {
        Ok(self.eval_at(p))
    }
}

impl OperatorField for FrameField {
    fn operator_at<T: Scalar>(&self, p: &[T]) -> Result<Extensor<Vector, T>> {
        Ok(self.matrix_at(p))
    }
}

/// Values of a direction field at `p`, as plain components.
pub(crate) fn direction_at(a: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
    a.eval(p)?.components()
}

/// `outer(p) . D(inner . X)(p)`, where `D` is the coordinate derivative
/// along `a` plus an optional connection term evaluated at `p`.
pub(crate) fn conjugated<K, O>(
    op: &O,
    x: &GradedField<K>,
    a: &VectorField,
    p: &[f64],
    gamma: Option<&Extensor<Vector>>,
) -> Result<Grassmann<K>>
where
    K: Covariant,
    O: OperatorField,
{
    let dir = direction_at(a, p)?;
    x.chart().check_point(p)?;
    let q = Jet::seed(p, &dir);
    let (outer, inner) = K::conjugators(&op.operator_at(&q)?)?;
    let (y, dy) = split(&inner.extend(&x.eval_at(&q))?);
    let inner_deriv = match gamma {
        Some(g) => dy + K::correction(g, &y)?,
        None => dy,
    };
    outer.map(|c| c.re).extend(&inner_deriv)
}
