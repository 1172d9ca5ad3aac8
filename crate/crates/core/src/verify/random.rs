use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Grassmann, Kind, Ring, Vector};
use crate::connection::ParallelismStructure;
use crate::extensor::Extensor;
use crate::fields::{
    Chart, Exponents, ExtensorField, FrameField, GradedField, Polynomial, ScalarField,
};
use crate::Result;

/// Largest number of monomials in a random polynomial.
pub const MAX_TERMS: usize = 3;
/// Scale of the perturbation in random frames and deformations.
pub const PERTURBATION: f64 = 0.2;
/// Fraction of each domain interval kept clear of sampled points.
pub const POINT_MARGIN: f64 = 0.05;

/// Seeded generator of random polynomial fields, operators and points.
///
/// Polynomials have 1 to [`MAX_TERMS`] monomials of total degree at most
/// `degree`, with coefficients uniform in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    chart: Arc<Chart>,
    degree: usize,
}

impl Sampler {
    pub fn new(chart: Arc<Chart>, seed: u64, degree: usize) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            chart,
            degree,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn coefficient(&mut self) -> f64 {
        self.rng.gen_range(-1.0..=1.0)
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn poly(&mut self) -> Polynomial {
        let terms = self
            .rng
            .gen_range(1..=MAX_TERMS)
            .min(monomial_count(self.dim(), self.degree));
        let mut p = Polynomial::zero();
        let mut used: Vec<Exponents> = Vec::with_capacity(terms);
        while used.len() < terms {
            let mut e: Exponents = [0; crate::MAX_DIM];
            let total = self.rng.gen_range(0..=self.degree);
            for _ in 0..total {
                e[self.rng.gen_range(0..self.dim())] += 1;
            }
            // distinct monomials keep every coefficient in [-1, 1]
            if !used.contains(&e) {
                used.push(e);
                p += Polynomial::monomial(self.coefficient(), e);
            }
        }
        p
    }

    /// A polynomial scaled so its coefficient magnitudes sum to at most 1,
    /// which bounds it by 1 on `[-1, 1]^n`.
    pub fn bounded_poly(&mut self) -> Polynomial {
        let p = self.poly();
        let total: f64 = p.terms().map(|(_, c)| c.abs()).sum();
        if total > 1.0 {
            p.scale(1.0 / total)
        } else {
            p
        }
    }

    pub fn scalar(&mut self) -> ScalarField {
        let p = self.poly();
        ScalarField::new(self.chart.clone(), p).expect("variables within the chart")
    }

    /// Every blade coefficient random.
    pub fn graded<K: Kind>(&mut self) -> GradedField<K> {
        let n = self.dim();
        let coeffs = (0..1usize << n).map(|_| self.poly()).collect();
        let value = Grassmann::from_coeffs(n, coeffs).expect("2^n coefficients");
        GradedField::new(self.chart.clone(), value).expect("chart dimension")
    }

    pub fn homogeneous<K: Kind>(&mut self, k: usize) -> GradedField<K> {
        let n = self.dim();
        let mut value = Grassmann::zero(n);
        for mask in 0..1u32 << n {
            if mask.count_ones() as usize == k {
                value.set(crate::algebra::BladeIndex(mask), self.poly());
            }
        }
        GradedField::new(self.chart.clone(), value).expect("chart dimension")
    }

    pub fn vector<K: Kind>(&mut self) -> GradedField<K> {
        self.homogeneous(1)
    }

    /// Dense random coefficients `Gamma^k_ij`.
    pub fn structure(&mut self) -> ParallelismStructure {
        let n = self.dim();
        let mut s = ParallelismStructure::flat(self.chart.clone());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = self.poly();
                    s.set(i, j, k, p).expect("indices within the chart");
                }
            }
        }
        s
    }

    /// `Id + s P` with `s = min(0.2, 0.8 / n)` and every entry of `P`
    /// bounded by 1 on the unit box, so the rows sum to less than 0.8.
    pub fn near_identity(&mut self) -> ExtensorField<Vector> {
        let n = self.dim();
        let s = PERTURBATION.min(0.8 / n as f64);
        let mut op = Extensor::<Vector, Polynomial>::identity(n);
        for k in 0..n {
            for j in 0..n {
                let e = op.entry(k, j).clone() + self.bounded_poly().scale(s);
                op.set(k, j, e);
            }
        }
        ExtensorField::new(self.chart.clone(), op).expect("chart dimension")
    }

    pub fn lambda(&mut self) -> Result<ExtensorField<Vector>> {
        let l = self.near_identity();
        l.check_invertible()?;
        Ok(l)
    }

    pub fn frame(&mut self) -> Result<FrameField> {
        FrameField::new(self.near_identity())
    }

    /// A point inside the domain, away from its boundary.
    pub fn point(&mut self) -> Vec<f64> {
        let domain = self.chart.domain().to_vec();
        domain
            .iter()
            .map(|&(lo, hi)| {
                let m = (hi - lo) * POINT_MARGIN;
                self.rng.gen_range(lo + m..=hi - m)
            })
            .collect()
    }

    /// Random element value with every coefficient in `[-1, 1]`.
    pub fn value<K: Kind>(&mut self) -> Grassmann<K> {
        let n = self.dim();
        let coeffs = (0..1usize << n).map(|_| self.coefficient()).collect();
        Grassmann::from_coeffs(n, coeffs).expect("2^n coefficients")
    }

    pub fn matrix(&mut self) -> Extensor<Vector> {
        let n = self.dim();
        let rows = (0..n)
            .map(|_| (0..n).map(|_| self.coefficient()).collect())
            .collect();
        Extensor::from_rows(rows).expect("square matrix")
    }

    /// `Id + 0.2 M` with `M` random; bounded away from singular for `n <= 4`.
    pub fn invertible_matrix(&mut self) -> Extensor<Vector> {
        let n = self.dim();
        let s = PERTURBATION.min(0.8 / n as f64);
        Extensor::identity(n) + self.matrix().scale(s)
    }
}

/// Number of monomials of total degree at most `d` in `n` variables.
fn monomial_count(n: usize, d: usize) -> usize {
    // C(n + d, d), small enough for the dimension cap
    (1..=d).fold(1usize, |acc, i| acc * (n + i) / i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let c = Arc::new(Chart::new(3).unwrap());
        let mut a = Sampler::new(c.clone(), 7, 3);
        let mut b = Sampler::new(c.clone(), 7, 3);
        assert_eq!(a.graded::<Vector>(), b.graded::<Vector>());
        assert_eq!(a.point(), b.point());
    }

    #[test]
    fn polynomials_respect_bounds() {
        let c = Arc::new(Chart::new(4).unwrap());
        let mut s = Sampler::new(c, 1, 3);
        for _ in 0..200 {
            let p = s.poly();
            assert!(p.degree() <= 3 && p.len() <= MAX_TERMS);
            assert!(p.terms().all(|(_, c)| (-1.0..=1.0).contains(&c)));
            let q = s.bounded_poly();
            assert!(q.terms().map(|(_, c)| c.abs()).sum::<f64>() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn tiny_monomial_spaces_terminate() {
        assert_eq!(monomial_count(1, 0), 1);
        assert_eq!(monomial_count(2, 3), 10);
        let c = Arc::new(Chart::new(1).unwrap());
        let mut s = Sampler::new(c, 9, 0);
        for _ in 0..20 {
            assert_eq!(s.poly().len(), 1);
        }
    }

    #[test]
    fn near_identity_is_invertible_on_the_box() {
        let c = Arc::new(Chart::new(4).unwrap());
        let mut s = Sampler::new(c, 3, 3);
        for _ in 0..20 {
            assert!(s.frame().is_ok());
        }
    }

    #[test]
    fn points_stay_inside_the_margin() {
        let c = Arc::new(Chart::new(2).unwrap());
        let mut s = Sampler::new(c, 5, 3);
        for _ in 0..100 {
            assert!(s.point().iter().all(|x| x.abs() <= 0.9));
        }
    }
}
