use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::algebra::{Grassmann, Kind, Ring, Scalar};
use crate::extensor::Extensor;
use crate::Result;

/// First-order jet `re + eps·d` with `eps² = 0`.
///
/// Evaluating a field at the jet point `p + eps·a(p)` yields its value and
/// its exact directional derivative `(a f)(p)` in one pass, through any
/// composition of ring operations and divisions (matrix inverses included).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub re: f64,
    pub d: f64,
}

impl Jet {
    pub fn new(re: f64, d: f64) -> Self {
        Jet { re, d }
    }

    pub fn constant(re: f64) -> Self {
        Jet { re, d: 0.0 }
    }

    /// The jet point `p + eps·direction`.
    pub fn seed(p: &[f64], direction: &[f64]) -> Vec<Jet> {
        p.iter()
            .zip(direction)
            .map(|(&x, &v)| Jet::new(x, v))
            .collect()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.re + o.re, self.d + o.d)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.re - o.re, self.d - o.d)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.re * o.re, self.re * o.d + self.d * o.re)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        Jet::new(
            self.re / o.re,
            (self.d * o.re - self.re * o.d) / (o.re * o.re),
        )
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.re, -self.d)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl Ring for Jet {
    fn zero() -> Self {
        Jet::constant(0.0)
    }
    fn one() -> Self {
        Jet::constant(1.0)
    }
    fn from_f64(c: f64) -> Self {
        Jet::constant(c)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.d == 0.0
    }
    fn scale(&self, c: f64) -> Self {
        Jet::new(self.re * c, self.d * c)
    }
}

impl Scalar for Jet {
    fn re(self) -> f64 {
        self.re
    }
}

/// Splits a jet-valued element into (value, derivative).
pub fn split<K: Kind>(x: &Grassmann<K, Jet>) -> (Grassmann<K>, Grassmann<K>) {
    (x.map(|j| j.re), x.map(|j| j.d))
}

pub fn split_extensor<K: Kind>(t: &Extensor<K, Jet>) -> (Extensor<K>, Extensor<K>) {
    (t.map(|j| j.re), t.map(|j| j.d))
}

/// Default step for [`central_difference`].
pub const FD_STEP: f64 = 1e-5;

/// Central finite difference of `f` at `p` along `direction`:
/// `(f(p + h·dir) - f(p - h·dir)) / 2h`.
pub fn central_difference<K: Kind>(
    p: &[f64],
    direction: &[f64],
    h: f64,
    f: impl Fn(&[f64]) -> Result<Grassmann<K>>,
) -> Result<Grassmann<K>> {
    let shifted = |s: f64| -> Vec<f64> {
        p.iter()
            .zip(direction)
            .map(|(x, v)| x + s * h * v)
            .collect()
    };
    let plus = f(&shifted(1.0))?;
    let minus = f(&shifted(-1.0))?;
    Ok((plus - minus).scale(0.5 / h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_rule() {
        // d/dx (x / (1 + x^2)) at x = 2 is (1 - x^2) / (1 + x^2)^2 = -3/25
        let x = Jet::new(2.0, 1.0);
        let y = x / (Jet::one() + x * x);
        assert!((y.re - 0.4).abs() < 1e-15);
        assert!((y.d + 3.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_matrix_derivative() {
        // d(A^-1) = -A^-1 dA A^-1 for A(t) = [[1 + t, t], [0, 2]]
        use crate::algebra::Vector;
        let t = Jet::new(0.5, 1.0);
        let a = Extensor::<Vector, Jet>::from_rows(vec![
            vec![Jet::one() + t, t],
            vec![Jet::zero(), Jet::constant(2.0)],
        ])
        .unwrap();
        let (inv, dinv) = split_extensor(&a.invert().unwrap());
        let (_, da) = split_extensor(&a);
        let expected = -inv.compose(&da).unwrap().compose(&inv).unwrap();
        assert!((dinv - expected).max_abs() < 1e-14);
    }
}
