use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::algebra::{Ring, Scalar};
use crate::{Error, Result, MAX_DIM};

/// Exponent vector; entries past the chart dimension stay zero.
pub type Exponents = [u8; MAX_DIM];

/// Multivariate polynomial with real coefficients in canonical form:
/// monomials merged, exact-zero coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, [0; MAX_DIM])
    }

    /// The coordinate function `x_{i+1}` (zero-based `i`).
    pub fn variable(i: usize) -> Self {
        let mut e = [0; MAX_DIM];
        e[i] = 1;
        Self::monomial(1.0, e)
    }

    pub fn monomial(c: f64, exponents: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(exponents, c);
        }
        Polynomial { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Number of leading variables the polynomial may depend on.
    pub fn variables_used(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&k| k > 0))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    /// Evaluation over any scalar type (reals or jets).
    ///
    /// `p` must cover [`Polynomial::variables_used`] coordinates.
    pub fn eval<T: Scalar>(&self, p: &[T]) -> T {
        let mut acc = T::zero();
        for (e, &c) in &self.terms {
            let mut t = T::from_f64(c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t * p[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact partial derivative with respect to coordinate `i` (zero-based).
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Polynomial::zero();
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            *out.terms.entry(d).or_insert(0.0) += c * e[i] as f64;
        }
        out.prune();
        out
    }

    /// Parses `c * x1^a1 * x2^a2 ... (+|-) ...` against the given coordinate names.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Self> {
        Parser::new(text, names).parse()
    }

    /// Canonical text using the given coordinate names; re-parses to `self`.
    pub fn to_string_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Exponents, f64)> = self.terms().collect();
        ordered.sort_by_key(|(e, _)| (e.iter().map(|&k| k as u32).sum::<u32>(), **e));
        let mut out = String::new();
        for (idx, (e, c)) in ordered.into_iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names
                        .get(i)
                        .map(|s| s.as_ref().to_string())
                        .unwrap_or_else(|| format!("x{}", i + 1));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let magnitude = c.abs();
            let body = if factors.is_empty() {
                format!("{magnitude}")
            } else if magnitude == 1.0 {
                factors.join("*")
            } else {
                format!("{magnitude}*{}", factors.join("*"))
            };
            match (idx, c < 0.0) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }
}

fn add_exponents(a: &Exponents, b: &Exponents) -> Exponents {
    let mut e = [0u8; MAX_DIM];
    for i in 0..MAX_DIM {
        e[i] = a[i].checked_add(b[i]).expect("polynomial degree overflow");
    }
    e
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: [&str; 0] = [];
        f.write_str(&self.to_string_with(&names))
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let names: Vec<String> = (1..=MAX_DIM).map(|i| format!("x{i}")).collect();
        Self::parse(s, &names)
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Self) {
        for (e, c) in rhs.terms {
            *self.terms.entry(e).or_insert(0.0) += c;
        }
        self.prune();
    }
}

impl SubAssign for Polynomial {
    fn sub_assign(&mut self, rhs: Self) {
        for (e, c) in rhs.terms {
            *self.terms.entry(e).or_insert(0.0) -= c;
        }
        self.prune();
    }
}

impl Add for Polynomial {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl Neg for Polynomial {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Polynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Polynomial::zero();
        out.mul_acc(&self, &rhs, 1.0);
        out
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::constant(1.0)
    }
    fn from_f64(c: f64) -> Self {
        Polynomial::constant(c)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune();
        out
    }
    fn mul_acc(&mut self, a: &Self, b: &Self, sign: f64) {
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                *self.terms.entry(add_exponents(ea, eb)).or_insert(0.0) += sign * ca * cb;
            }
        }
        self.prune();
    }
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    names: &'a [S],
}

impl<'a, S: AsRef<str>> Parser<'a, S> {
    fn new(text: &'a str, names: &'a [S]) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            names,
        }
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        self.skip_ws();
        let mut sign = 1.0;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                sign = -1.0;
            }
            _ => {}
        }
        loop {
            acc += self.term()?.scale(sign);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1.0,
                Some(b'-') => sign = -1.0,
                Some(c) => {
                    return Err(Error::parse(
                        self.pos,
                        format!("expected `+`, `-` or end of input, found `{}`", c as char),
                    ))
                }
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut t = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok(t);
            }
            self.pos += 1;
            t = t * self.factor()?;
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Polynomial::constant(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident();
                let idx = self
                    .names
                    .iter()
                    .position(|n| n.as_ref() == name)
                    .ok_or_else(|| Error::parse(start, format!("unknown coordinate `{name}`")))?;
                if idx >= MAX_DIM {
                    return Err(Error::parse(start, "coordinate index beyond dimension cap"));
                }
                self.skip_ws();
                let mut power = 1u8;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    power = self.exponent()?;
                }
                let mut e = [0u8; MAX_DIM];
                e[idx] = power;
                Ok(Polynomial::monomial(1.0, e))
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("expected a number or coordinate, found `{}`", c as char),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            self.digits();
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.digits();
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse()
            .map_err(|_| Error::parse(start, format!("malformed number `{text}`")))
    }

    fn exponent(&mut self) -> Result<u8> {
        let start = self.pos;
        self.digits();
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse()
            .map_err(|_| Error::parse(start, format!("exponent `{text}` out of range")))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn digits(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }
}
