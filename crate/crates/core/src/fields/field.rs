use std::sync::Arc;

use super::{Chart, Polynomial};
use crate::algebra::{BinaryOp, BladeIndex, Element, Form, Grassmann, Kind, Ring, Scalar, Vector};
use crate::extensor::Extensor;
use crate::{Error, Result};

/// Number of quasi-random points used by sampled invertibility checks.
pub const INVERTIBILITY_SAMPLES: usize = 64;

fn same_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

fn check_poly(chart: &Chart, p: &Polynomial) -> Result<()> {
    let used = p.variables_used();
    if used > chart.dim() {
        Err(Error::IndexOutOfRange {
            index: used - 1,
            dim: chart.dim(),
        })
    } else {
        Ok(())
    }
}

/// Components of a direction field, which must be grade 1.
fn direction(a: &VectorField) -> Result<Vec<Polynomial>> {
    a.value.components()
}

/// `sum_i a^i d_i f`.
fn derivative_along(a: &[Polynomial], f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        out.mul_acc(ai, &f.partial(i), 1.0);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    chart: Arc<Chart>,
    poly: Polynomial,
}

impl ScalarField {
    pub fn new(chart: Arc<Chart>, poly: Polynomial) -> Result<Self> {
        check_poly(&chart, &poly)?;
        Ok(ScalarField { chart, poly })
    }

    pub fn parse(chart: Arc<Chart>, text: &str) -> Result<Self> {
        let poly = Polynomial::parse(text, chart.names())?;
        Self::new(chart, poly)
    }

    pub fn constant(chart: Arc<Chart>, c: f64) -> Self {
        ScalarField {
            chart,
            poly: Polynomial::constant(c),
        }
    }

    pub fn coordinate(chart: Arc<Chart>, i: usize) -> Result<Self> {
        if i >= chart.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: chart.dim(),
            });
        }
        Ok(ScalarField {
            chart,
            poly: Polynomial::variable(i),
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        self.chart.check_point(p)?;
        Ok(self.poly.eval(p))
    }

    /// Unchecked evaluation at a real or jet point.
    pub fn eval_at<T: Scalar>(&self, p: &[T]) -> T {
        self.poly.eval(p)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.poly.clone() + other.poly.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.poly.clone() - other.poly.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.poly.clone() * other.poly.clone()))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with(self.poly.scale(c))
    }

    /// The action `a f = sum_i a^i df/dx^i` of a vector field, exact.
    pub fn directional_derivative(&self, a: &VectorField) -> Result<Self> {
        same_chart(&self.chart, &a.chart)?;
        Ok(self.with(derivative_along(&direction(a)?, &self.poly)))
    }

    fn with(&self, poly: Polynomial) -> Self {
        ScalarField {
            chart: self.chart.clone(),
            poly,
        }
    }
}

/// Multivector or multiform field: one polynomial per blade of the
/// coordinate frame (resp. coframe).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedField<K: Kind> {
    chart: Arc<Chart>,
    value: Grassmann<K, Polynomial>,
}

pub type MultivectorField = GradedField<Vector>;
pub type MultiformField = GradedField<Form>;
/// Grade-1 multivector field; grade is checked where it matters.
pub type VectorField = MultivectorField;
/// Grade-1 multiform field.
pub type FormField = MultiformField;

impl<K: Kind> GradedField<K> {
    pub fn new(chart: Arc<Chart>, value: Grassmann<K, Polynomial>) -> Result<Self> {
        if value.dim() != chart.dim() {
            return Err(Error::DimensionMismatch {
                left: chart.dim(),
                right: value.dim(),
            });
        }
        for c in value.coeffs() {
            check_poly(&chart, c)?;
        }
        Ok(GradedField { chart, value })
    }

    pub fn zero(chart: Arc<Chart>) -> Self {
        let value = Grassmann::zero(chart.dim());
        GradedField { chart, value }
    }

    /// `poly * e_J` (or `eps^J`).
    pub fn blade(chart: Arc<Chart>, blade: BladeIndex, poly: Polynomial) -> Result<Self> {
        if blade.0 >= 1 << chart.dim() {
            return Err(Error::IndexOutOfRange {
                index: blade.0 as usize,
                dim: chart.dim(),
            });
        }
        let value = Grassmann::blade(chart.dim(), blade, poly);
        Self::new(chart, value)
    }

    /// Constant coordinate basis field `i` (zero-based).
    pub fn basis(chart: Arc<Chart>, i: usize) -> Result<Self> {
        Self::blade(chart, BladeIndex::basis(i), Polynomial::constant(1.0))
    }

    pub fn from_components(chart: Arc<Chart>, components: Vec<Polynomial>) -> Result<Self> {
        let value = Grassmann::from_components(chart.dim(), components)?;
        Self::new(chart, value)
    }

    pub fn from_scalar(f: &ScalarField) -> Self {
        GradedField {
            chart: f.chart.clone(),
            value: Grassmann::scalar(f.chart.dim(), f.poly.clone()),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn value(&self) -> &Grassmann<K, Polynomial> {
        &self.value
    }

    pub fn component(&self, blade: BladeIndex) -> ScalarField {
        ScalarField {
            chart: self.chart.clone(),
            poly: self.value.coeff(blade).clone(),
        }
    }

    pub fn eval(&self, p: &[f64]) -> Result<Grassmann<K>> {
        self.chart.check_point(p)?;
        Ok(self.eval_at(p))
    }

    /// Unchecked evaluation at a real or jet point.
    pub fn eval_at<T: Scalar>(&self, p: &[T]) -> Grassmann<K, T> {
        self.value.map(|c| c.eval(p))
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.value.is_homogeneous(k)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.value.clone() + other.value.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.value.clone() - other.value.clone()))
    }

    pub fn neg(&self) -> Self {
        self.with(-self.value.clone())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with(self.value.scale(c))
    }

    /// `(f X)(p) = f(p) X(p)`.
    pub fn scalar_mul(&self, f: &ScalarField) -> Result<Self> {
        same_chart(&self.chart, &f.chart)?;
        Ok(self.with(self.value.mul_scalar(&f.poly)))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.value.wedge(&other.value)?))
    }

    pub fn grade_part(&self, k: usize) -> Result<Self> {
        Ok(self.with(self.value.grade_part(k)?))
    }

    pub fn reversion(&self) -> Self {
        self.with(self.value.reversion())
    }

    pub fn pair(&self, other: &GradedField<K::Dual>) -> Result<ScalarField> {
        same_chart(&self.chart, &other.chart)?;
        Ok(ScalarField {
            chart: self.chart.clone(),
            poly: self.value.pair(&other.value)?,
        })
    }

    pub fn left_contract(&self, other: &GradedField<K::Dual>) -> Result<GradedField<K::Dual>> {
        same_chart(&self.chart, &other.chart)?;
        Ok(GradedField {
            chart: self.chart.clone(),
            value: self.value.left_contract(&other.value)?,
        })
    }

    pub fn right_contract(&self, other: &GradedField<K::Dual>) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(self.with(self.value.right_contract(&other.value)?))
    }

    /// Componentwise coordinate derivative `a(X^J)` of every blade coefficient.
    pub fn derivative_along(&self, a: &VectorField) -> Result<Self> {
        same_chart(&self.chart, &a.chart)?;
        let dir = direction(a)?;
        Ok(self.with(self.value.map(|c| derivative_along(&dir, c))))
    }

    fn with(&self, value: Grassmann<K, Polynomial>) -> Self {
        GradedField {
            chart: self.chart.clone(),
            value,
        }
    }
}

/// Extensor field with polynomial matrix entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensorField<K: Kind> {
    chart: Arc<Chart>,
    op: Extensor<K, Polynomial>,
}

impl<K: Kind> ExtensorField<K> {
    pub fn new(chart: Arc<Chart>, op: Extensor<K, Polynomial>) -> Result<Self> {
        if op.dim() != chart.dim() {
            return Err(Error::DimensionMismatch {
                left: chart.dim(),
                right: op.dim(),
            });
        }
        for c in op.entries() {
            check_poly(&chart, c)?;
        }
        Ok(ExtensorField { chart, op })
    }

    pub fn identity(chart: Arc<Chart>) -> Self {
        let op = Extensor::identity(chart.dim());
        ExtensorField { chart, op }
    }

    /// `rows[k][j]`: coefficient of basis `k` in the image of basis `j`.
    pub fn from_rows(chart: Arc<Chart>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let op = Extensor::from_rows(rows)?;
        Self::new(chart, op)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn op(&self) -> &Extensor<K, Polynomial> {
        &self.op
    }

    pub fn eval(&self, p: &[f64]) -> Result<Extensor<K>> {
        self.chart.check_point(p)?;
        Ok(self.eval_at(p))
    }

    pub fn eval_at<T: Scalar>(&self, p: &[T]) -> Extensor<K, T> {
        self.op.map(|c| c.eval(p))
    }

    pub fn duality_adjoint(&self) -> ExtensorField<K::Dual> {
        ExtensorField {
            chart: self.chart.clone(),
            op: self.op.duality_adjoint(),
        }
    }

    pub fn apply(&self, v: &GradedField<K>) -> Result<GradedField<K>> {
        same_chart(&self.chart, &v.chart)?;
        Ok(v.with(self.op.apply(&v.value)?))
    }

    pub fn extend(&self, x: &GradedField<K>) -> Result<GradedField<K>> {
        same_chart(&self.chart, &x.chart)?;
        Ok(x.with(self.op.extend(&x.value)?))
    }

    pub fn generalize(&self, x: &GradedField<K>) -> Result<GradedField<K>> {
        same_chart(&self.chart, &x.chart)?;
        Ok(x.with(self.op.generalize(&x.value)?))
    }

    /// Sampled invertibility: `|det| > tol` with one sign at
    /// [`INVERTIBILITY_SAMPLES`] quasi-random domain points. A sign change
    /// means the determinant vanishes somewhere in the box.
    pub fn check_invertible(&self) -> Result<()> {
        let mut sign = 0.0;
        for p in self.chart.sample_points(INVERTIBILITY_SAMPLES) {
            let det = self.eval_at(&p).determinant();
            if !(det.abs() > crate::extensor::SINGULARITY_TOLERANCE) {
                return Err(Error::SingularExtensor { det: det.abs() });
            }
            if sign == 0.0 {
                sign = det.signum();
            } else if det.signum() != sign {
                return Err(Error::SingularExtensor { det: 0.0 });
            }
        }
        Ok(())
    }
}

/// `n` vector fields `e_1..e_n`, stored as the columns of a vector-kind
/// extensor field. The dual coframe is computed pointwise.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField {
    matrix: ExtensorField<Vector>,
}

impl FrameField {
    pub fn coordinate(chart: Arc<Chart>) -> Self {
        FrameField {
            matrix: ExtensorField::identity(chart),
        }
    }

    /// Column `j` of `matrix` is the frame vector `e_j`; checked for
    /// invertibility on sampled points.
    pub fn new(matrix: ExtensorField<Vector>) -> Result<Self> {
        matrix.check_invertible().map_err(singular_frame)?;
        Ok(FrameField { matrix })
    }

    pub fn from_vectors(vectors: &[VectorField]) -> Result<Self> {
        let chart = vectors
            .first()
            .map(|v| v.chart.clone())
            .ok_or(Error::DimensionCap {
                dim: 0,
                max: crate::MAX_DIM,
            })?;
        if vectors.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                left: chart.dim(),
                right: vectors.len(),
            });
        }
        let mut rows = vec![vec![Polynomial::zero(); chart.dim()]; chart.dim()];
        for (j, v) in vectors.iter().enumerate() {
            same_chart(&chart, &v.chart)?;
            for (k, c) in v.value.components()?.into_iter().enumerate() {
                rows[k][j] = c;
            }
        }
        Self::new(ExtensorField::from_rows(chart, rows)?)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.matrix.chart
    }

    pub fn matrix(&self) -> &ExtensorField<Vector> {
        &self.matrix
    }

    /// Frame vector `e_j` (zero-based).
    pub fn vector(&self, j: usize) -> VectorField {
        GradedField {
            chart: self.matrix.chart.clone(),
            value: self.matrix.op.column(j),
        }
    }

    pub fn matrix_at<T: Scalar>(&self, p: &[T]) -> Extensor<Vector, T> {
        self.matrix.eval_at(p)
    }

    /// Coframe operator `F^{-T}`: column `i` is `eps^i` in the coordinate coframe.
    pub fn coframe_at<T: Scalar>(&self, p: &[T]) -> Result<Extensor<Form, T>> {
        self.matrix_at(p)
            .invert()
            .map(|inv| inv.duality_adjoint())
            .map_err(singular_frame)
    }

    /// The dual coframe `eps^1..eps^n` at `p`, with `<eps^i, e_j> = delta`.
    pub fn dual_frame(&self, p: &[f64]) -> Result<Vec<Grassmann<Form>>> {
        self.chart().check_point(p)?;
        let co = self.coframe_at(p)?;
        Ok((0..self.chart().dim()).map(|i| co.column(i)).collect())
    }
}

/// Maps a singular-extensor error onto the frame variant.
pub fn singular_frame(e: Error) -> Error {
    match e {
        Error::SingularExtensor { det } => Error::SingularFrame { det },
        other => other,
    }
}

/// A field of any kind, for dynamically typed callers.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Scalar(ScalarField),
    Multivector(MultivectorField),
    Multiform(MultiformField),
}

impl AnyField {
    pub fn chart(&self) -> &Arc<Chart> {
        match self {
            AnyField::Scalar(f) => &f.chart,
            AnyField::Multivector(f) => &f.chart,
            AnyField::Multiform(f) => &f.chart,
        }
    }

    pub fn element(&self) -> Element<Polynomial> {
        match self {
            AnyField::Scalar(f) => Element::Scalar(f.poly.clone()),
            AnyField::Multivector(f) => Element::Multivector(f.value.clone()),
            AnyField::Multiform(f) => Element::Multiform(f.value.clone()),
        }
    }

    pub fn from_element(chart: Arc<Chart>, e: Element<Polynomial>) -> Result<Self> {
        Ok(match e {
            Element::Scalar(p) => AnyField::Scalar(ScalarField::new(chart, p)?),
            Element::Multivector(x) => AnyField::Multivector(GradedField::new(chart, x)?),
            Element::Multiform(x) => AnyField::Multiform(GradedField::new(chart, x)?),
        })
    }

    pub fn eval(&self, p: &[f64]) -> Result<Element> {
        Ok(match self {
            AnyField::Scalar(f) => Element::Scalar(f.eval(p)?),
            AnyField::Multivector(f) => Element::Multivector(f.eval(p)?),
            AnyField::Multiform(f) => Element::Multiform(f.eval(p)?),
        })
    }
}

/// Lifts a binary algebra operation to fields; the result is polynomial and
/// evaluates to the operation applied to the evaluated operands.
pub fn pointwise(op: BinaryOp, a: &AnyField, b: &AnyField) -> Result<AnyField> {
    same_chart(a.chart(), b.chart())?;
    let e = Element::binary(op, &a.element(), &b.element())?;
    AnyField::from_element(a.chart().clone(), e)
}
