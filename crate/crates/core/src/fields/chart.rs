use crate::{Error, Result, MAX_DIM};

/// A single coordinate chart with an axis-aligned box domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    dim: usize,
    names: Vec<String>,
    domain: Vec<(f64, f64)>,
}

impl Chart {
    /// Chart with coordinates `x1..xn` on `[-1, 1]^n`.
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_domain(vec![(-1.0, 1.0); dim])
    }

    pub fn with_domain(domain: Vec<(f64, f64)>) -> Result<Self> {
        let dim = domain.len();
        let names = (1..=dim).map(|i| format!("x{i}")).collect();
        Self::with_names(names, domain)
    }

    pub fn with_names(names: Vec<String>, domain: Vec<(f64, f64)>) -> Result<Self> {
        let dim = domain.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionCap { dim, max: MAX_DIM });
        }
        if names.len() != dim {
            return Err(Error::InvalidDomain(format!(
                "{} coordinate names for dimension {dim}",
                names.len()
            )));
        }
        for (i, &(lo, hi)) in domain.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "interval {} = [{lo}, {hi}] is degenerate",
                    i + 1
                )));
            }
        }
        Ok(Chart { dim, names, domain })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    /// Same coordinates (dimension and names); domains may differ.
    pub fn compatible(&self, other: &Chart) -> bool {
        self.dim == other.dim && self.names == other.names
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p.iter()
                .zip(&self.domain)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: p.len(),
            });
        }
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: p.to_vec() })
        }
    }

    /// Box intersection on a shared chart.
    pub fn intersect(&self, other: &Chart) -> Result<Chart> {
        if !self.compatible(other) {
            return Err(Error::ChartMismatch);
        }
        let mut domain = Vec::with_capacity(self.dim);
        for (a, b) in self.domain.iter().zip(&other.domain) {
            let (lo, hi) = (a.0.max(b.0), a.1.min(b.1));
            if !(lo < hi) {
                return Err(Error::EmptyOverlap);
            }
            domain.push((lo, hi));
        }
        Ok(Chart {
            dim: self.dim,
            names: self.names.clone(),
            domain,
        })
    }

    /// Deterministic quasi-random points of the domain (Halton sequence,
    /// one prime base per axis, skipping the first index).
    pub fn sample_points(&self, count: usize) -> Vec<Vec<f64>> {
        const PRIMES: [u64; MAX_DIM] = [2, 3, 5, 7, 11, 13, 17, 19];
        (1..=count as u64)
            .map(|i| {
                self.domain
                    .iter()
                    .zip(PRIMES)
                    .map(|(&(lo, hi), base)| lo + (hi - lo) * radical_inverse(i, base))
                    .collect()
            })
            .collect()
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_checks() {
        let c = Chart::new(2).unwrap();
        assert!(c.check_point(&[0.5, -1.0]).is_ok());
        assert_eq!(
            c.check_point(&[1.5, 0.0]),
            Err(Error::OutOfDomain {
                point: vec![1.5, 0.0]
            })
        );
        assert!(Chart::with_domain(vec![(0.0, 0.0)]).is_err());
        assert!(Chart::new(9).is_err());
        assert!(Chart::new(0).is_err());
    }

    #[test]
    fn intersections() {
        let a = Chart::with_domain(vec![(0.0, 2.0), (-1.0, 1.0)]).unwrap();
        let b = Chart::with_domain(vec![(1.0, 3.0), (-2.0, 0.5)]).unwrap();
        assert_eq!(
            a.intersect(&b).unwrap().domain(),
            &[(1.0, 2.0), (-1.0, 0.5)]
        );
        let far = Chart::with_domain(vec![(5.0, 6.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(a.intersect(&far), Err(Error::EmptyOverlap));
    }

    #[test]
    fn samples_stay_inside() {
        let c = Chart::with_domain(vec![(1.0, 2.0), (-3.0, -2.0), (0.0, 0.1)]).unwrap();
        let pts = c.sample_points(64);
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().all(|p| c.contains(p)));
        assert_eq!(pts, c.sample_points(64));
    }
}
