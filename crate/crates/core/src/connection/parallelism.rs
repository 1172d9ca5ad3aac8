use std::collections::BTreeMap;
use std::sync::Arc;

use super::covariant::{direction_at, Covariant};
use crate::algebra::{Grassmann, Ring, Scalar, Vector};
use crate::extensor::Extensor;
use crate::fields::{
    split, Chart, ExtensorField, FormField, GradedField, Jet, MultiformField, MultivectorField,
    Polynomial, ScalarField, VectorField,
};
use crate::{Error, Result};

/// Chart plus connection coefficients `Gamma^k_ij`, zero-based and sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelismStructure {
    chart: Arc<Chart>,
    gamma: BTreeMap<(usize, usize, usize), Polynomial>,
}

impl ParallelismStructure {
    /// The flat structure (`Gamma = 0`).
    pub fn flat(chart: Arc<Chart>) -> Self {
        ParallelismStructure {
            chart,
            gamma: BTreeMap::new(),
        }
    }

    /// Coefficients keyed by zero-based `(i, j, k)`.
    pub fn new(
        chart: Arc<Chart>,
        coefficients: impl IntoIterator<Item = ((usize, usize, usize), Polynomial)>,
    ) -> Result<Self> {
        let mut s = Self::flat(chart);
        for ((i, j, k), p) in coefficients {
            s.set(i, j, k, p)?;
        }
        Ok(s)
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, p: Polynomial) -> Result<()> {
        let n = self.chart.dim();
        for idx in [i, j, k] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, dim: n });
            }
        }
        // validates the variables against the chart
        ScalarField::new(self.chart.clone(), p.clone())?;
        if p.is_zero() {
            self.gamma.remove(&(i, j, k));
        } else {
            self.gamma.insert((i, j, k), p);
        }
        Ok(())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Polynomial {
        self.gamma.get(&(i, j, k)).cloned().unwrap_or_default()
    }

    /// Non-zero coefficients in `(i, j, k)` order.
    pub fn coefficients(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Polynomial)> {
        self.gamma.iter()
    }

    fn same_chart(&self, c: &Chart) -> Result<()> {
        if *self.chart == *c {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// The extensor field `gamma_a` with entry `(k, j) = sum_i a^i Gamma^k_ij`.
    pub fn gamma_field(&self, a: &VectorField) -> Result<ExtensorField<Vector>> {
        self.same_chart(a.chart())?;
        let dir = a.value().components()?;
        let n = self.chart.dim();
        let mut op = Extensor::<Vector, Polynomial>::zero(n);
        for (&(i, j, k), g) in &self.gamma {
            let mut e = op.entry(k, j).clone();
            e.mul_acc(&dir[i], g, 1.0);
            op.set(k, j, e);
        }
        ExtensorField::new(self.chart.clone(), op)
    }

    /// `gamma_a` at `p` for a direction with components `a` at `p`.
    pub fn gamma_at<T: Scalar>(&self, a: &[T], p: &[T]) -> Extensor<Vector, T> {
        let mut op = Extensor::<Vector, T>::zero(self.chart.dim());
        for (&(i, j, k), g) in &self.gamma {
            let e = *op.entry(k, j) + a[i] * g.eval(p);
            op.set(k, j, e);
        }
        op
    }

    pub fn cov_deriv_scalar(&self, a: &VectorField, f: &ScalarField) -> Result<ScalarField> {
        self.same_chart(f.chart())?;
        f.directional_derivative(a)
    }

    /// `(nabla_a v)^k = a(v^k) + sum_{i,j} a^i Gamma^k_ij v^j`.
    pub fn cov_deriv_vector(&self, a: &VectorField, v: &VectorField) -> Result<VectorField> {
        self.same_chart(v.chart())?;
        let dir = a.value().components()?;
        let vc = v.value().components()?;
        let mut out: Vec<Polynomial> = v.derivative_along(a)?.value().components()?;
        for (&(i, j, k), g) in &self.gamma {
            out[k] += dir[i].clone() * g.clone() * vc[j].clone();
        }
        GradedField::from_components(self.chart.clone(), out)
    }

    /// `(nabla_a w)_j = a(w_j) - sum_{i,k} a^i Gamma^k_ij w_k`.
    pub fn cov_deriv_form(&self, a: &VectorField, w: &FormField) -> Result<FormField> {
        self.same_chart(w.chart())?;
        let dir = a.value().components()?;
        let wc = w.value().components()?;
        let mut out: Vec<Polynomial> = w.derivative_along(a)?.value().components()?;
        for (&(i, j, k), g) in &self.gamma {
            out[j] -= dir[i].clone() * g.clone() * wc[k].clone();
        }
        GradedField::from_components(self.chart.clone(), out)
    }

    /// Split form on any grade: coordinate derivative plus the
    /// kind-dependent connection term.
    pub fn cov_deriv<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
    ) -> Result<GradedField<K>> {
        self.same_chart(x.chart())?;
        let gamma = self.gamma_field(a)?;
        let correction = K::correction(gamma.op(), x.value())?;
        x.derivative_along(a)?
            .add(&GradedField::new(self.chart.clone(), correction)?)
    }

    pub fn cov_deriv_multivector(
        &self,
        a: &VectorField,
        x: &MultivectorField,
    ) -> Result<MultivectorField> {
        self.cov_deriv(a, x)
    }

    pub fn cov_deriv_multiform(
        &self,
        a: &VectorField,
        phi: &MultiformField,
    ) -> Result<MultiformField> {
        self.cov_deriv(a, phi)
    }

    /// `(nabla_a Y)(p)` for a field known only through its jet
    /// `Y(p) + eps (aY)(p)` at `p`, with `a` the direction components at `p`.
    pub fn cov_deriv_at<K: Covariant>(
        &self,
        a: &[f64],
        p: &[f64],
        y: &Grassmann<K, Jet>,
    ) -> Result<Grassmann<K>> {
        let (value, deriv) = split(y);
        Ok(deriv + K::correction(&self.gamma_at(a, p), &value)?)
    }

    /// Axiom form on a homogeneous `k`-vector field at `p`:
    /// `a<w1^..^wk, X> - sum_i <w1^..^nabla_a wi^..^wk, X>`.
    pub fn axiom_deriv_multivector(
        &self,
        a: &VectorField,
        x: &MultivectorField,
        forms: &[FormField],
        p: &[f64],
    ) -> Result<f64> {
        self.axiom_deriv(a, x, forms, p)
    }

    /// Axiom form on a homogeneous `k`-form field at `p`:
    /// `a<Phi, v1^..^vk> - sum_i <Phi, v1^..^nabla_a vi^..^vk>`.
    pub fn axiom_deriv_multiform(
        &self,
        a: &VectorField,
        phi: &MultiformField,
        vectors: &[VectorField],
        p: &[f64],
    ) -> Result<f64> {
        self.axiom_deriv(a, phi, vectors, p)
    }

    /// Axiom form on a homogeneous field of either kind, with grade-1 test
    /// fields of the dual kind differentiated by their index formulas.
    pub fn axiom_deriv<K: Covariant>(
        &self,
        a: &VectorField,
        x: &GradedField<K>,
        tests: &[GradedField<K::Dual>],
        p: &[f64],
    ) -> Result<f64>
    where
        K::Dual: Covariant,
    {
        axiom(self, a, x, tests, p)
    }
}

fn wedge_all<K: crate::algebra::Kind, T: Ring>(
    dim: usize,
    items: impl Iterator<Item = Grassmann<K, T>>,
) -> Result<Grassmann<K, T>> {
    let mut acc = Grassmann::scalar(dim, T::one());
    for it in items {
        acc = acc.wedge(&it)?;
    }
    Ok(acc)
}

fn axiom<K: Covariant>(
    s: &ParallelismStructure,
    a: &VectorField,
    x: &GradedField<K>,
    tests: &[GradedField<K::Dual>],
    p: &[f64],
) -> Result<f64>
where
    K::Dual: Covariant,
{
    let k = tests.len();
    if !x.is_homogeneous(k) {
        return Err(Error::WrongGrade { expected: k });
    }
    for t in tests {
        if !t.is_homogeneous(1) {
            return Err(Error::WrongGrade { expected: 1 });
        }
    }
    let n = s.chart.dim();
    let dir = direction_at(a, p)?;
    let q = Jet::seed(p, &dir);
    // a<w1^..^wk, X>, exactly through the jet point
    let w = wedge_all(n, tests.iter().map(|t| t.eval_at(&q)))?;
    let mut total = x.eval_at(&q).pair(&w)?.d;
    let values: Vec<Grassmann<K::Dual>> = tests.iter().map(|t| t.eval_at(p)).collect();
    let xp = x.eval_at(p);
    for (i, t) in tests.iter().enumerate().take(k) {
        let d = K::Dual::grade_one(s, a, t)?.eval_at(p);
        let w = wedge_all(
            n,
            values
                .iter()
                .enumerate()
                .map(|(m, v)| if m == i { d.clone() } else { v.clone() }),
        )?;
        total -= xp.pair(&w)?;
    }
    Ok(total)
}
