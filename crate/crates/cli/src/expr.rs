//! Expression grammar for `mfcalc eval`:
//!
//! ```text
//! expr := NAME | NUMBER | NAME '(' expr (',' expr)* ')'
//! ```
//!
//! Functions: `nabla(a, F)`, `partial(B, a, F)`, `dnabla(lam, a, F)`,
//! `wedge(F, G)`, `sp(Phi, X)`, `lc(A, B)`, `rc(A, B)`, `grade(F, k)`,
//! `rev(F)`. Names are blade literals (`1`, `e12`, `eps1`) or objects bound
//! by the scene. Positions in errors are one-based character columns.

use std::sync::Arc;

use mfcalc::algebra::{BinaryOp, BladeIndex, Element, Grassmann, Vector};
use mfcalc::connection::{DeformedStructure, RelativeStructure};
use mfcalc::fields::{
    pointwise, AnyField, Chart, GradedField, Polynomial, ScalarField, VectorField,
};

use crate::error::{CliError, Result};
use crate::scene::{parse_blade, BladeKind, Scene};

pub const FUNCTIONS: &[&str] = &[
    "nabla", "partial", "dnabla", "wedge", "sp", "lc", "rc", "grade", "rev",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Name {
        name: String,
        pos: usize,
    },
    Number {
        value: f64,
        pos: usize,
    },
    Call {
        name: String,
        args: Vec<Expr>,
        pos: usize,
    },
}

impl Expr {
    pub fn pos(&self) -> usize {
        match self {
            Expr::Name { pos, .. } | Expr::Number { pos, .. } | Expr::Call { pos, .. } => *pos,
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        at: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.at < p.chars.len() {
        return Err(CliError::expr(
            p.at + 1,
            format!("unexpected `{}`", p.chars[p.at]),
        ));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    at: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.at += 1;
                Ok(())
            }
            Some(x) => Err(CliError::expr(
                self.at + 1,
                format!("expected `{c}`, found `{x}`"),
            )),
            None => Err(CliError::expr(
                self.at + 1,
                format!("expected `{c}`, found end of input"),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.at;
        let pos = start + 1;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.at += 1;
                }
                let name: String = self.chars[start..self.at].iter().collect();
                self.skip_ws();
                if self.peek() != Some('(') {
                    return Ok(Expr::Name { name, pos });
                }
                self.at += 1;
                let mut args = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => {
                            self.at += 1;
                            args.push(self.expr()?);
                        }
                        _ => break,
                    }
                }
                self.expect(')')?;
                Ok(Expr::Call { name, args, pos })
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                self.at += 1;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E')
                {
                    let was_exp = matches!(self.peek(), Some('e' | 'E'));
                    self.at += 1;
                    if was_exp && matches!(self.peek(), Some('+' | '-')) {
                        self.at += 1;
                    }
                }
                let text: String = self.chars[start..self.at].iter().collect();
                let value = text
                    .parse::<f64>()
                    .map_err(|_| CliError::expr(pos, format!("invalid number `{text}`")))?;
                Ok(Expr::Number { value, pos })
            }
            Some(c) => Err(CliError::expr(pos, format!("unexpected `{c}`"))),
            None => Err(CliError::expr(pos, "unexpected end of input")),
        }
    }
}

/// Intermediate results: polynomial fields stay symbolic so they can still
/// be differentiated; relative and deformed derivatives exist only at the
/// evaluation point.
#[derive(Clone, Debug)]
enum Value {
    Field(AnyField),
    At(Element),
    Number(f64),
    Frame(String),
    Lambda(String),
}

pub struct Evaluator<'a> {
    scene: &'a Scene,
    point: &'a [f64],
}

impl<'a> Evaluator<'a> {
    pub fn new(scene: &'a Scene, point: &'a [f64]) -> Result<Self> {
        let chart = scene.chart();
        if point.len() != chart.dim() {
            return Err(CliError::Point(format!(
                "{} coordinates given for dimension {}",
                point.len(),
                chart.dim()
            )));
        }
        chart.check_point(point)?;
        Ok(Evaluator { scene, point })
    }

    pub fn eval(&self, e: &Expr) -> Result<Element> {
        match self.value(e)? {
            Value::Field(f) => Ok(f.eval(self.point)?),
            Value::At(x) => Ok(x),
            Value::Number(c) => Ok(Element::Scalar(c)),
            Value::Frame(n) | Value::Lambda(n) => {
                Err(CliError::expr(e.pos(), format!("`{n}` is not a field")))
            }
        }
    }

    fn chart(&self) -> &Arc<Chart> {
        self.scene.chart()
    }

    fn value(&self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Number { value, .. } => Ok(Value::Number(*value)),
            Expr::Name { name, pos } => self.name(name, *pos),
            Expr::Call { name, args, pos } => self.call(name, args, *pos),
        }
    }

    fn name(&self, name: &str, pos: usize) -> Result<Value> {
        let n = self.chart().dim();
        if let Some((kind, indices)) = parse_blade(name) {
            if let Some(&i) = indices.iter().find(|&&i| i >= n) {
                return Err(CliError::expr(
                    pos,
                    format!("`{name}` uses index {} beyond dimension {n}", i + 1),
                ));
            }
            let b = BladeIndex::from_indices(&indices);
            let one = Polynomial::constant(1.0);
            let c = self.chart().clone();
            return Ok(Value::Field(match kind {
                BladeKind::Scalar => AnyField::Scalar(ScalarField::constant(c, 1.0)),
                BladeKind::Vector => AnyField::Multivector(GradedField::blade(c, b, one)?),
                BladeKind::Form => AnyField::Multiform(GradedField::blade(c, b, one)?),
            }));
        }
        if let Some(f) = self.scene.field(name) {
            return Ok(Value::Field(f.clone()));
        }
        if let Some(v) = self.scene.direction(name) {
            return Ok(Value::Field(AnyField::Multivector(v.clone())));
        }
        if self.scene.frame(name).is_some() {
            return Ok(Value::Frame(name.to_string()));
        }
        if self.scene.lambda(name).is_some() {
            return Ok(Value::Lambda(name.to_string()));
        }
        if FUNCTIONS.contains(&name) {
            return Err(CliError::expr(
                pos,
                format!("`{name}` is a function and needs arguments"),
            ));
        }
        Err(CliError::expr(pos, format!("unbound name `{name}`")))
    }

    fn call(&self, name: &str, args: &[Expr], pos: usize) -> Result<Value> {
        let arity = match name {
            "partial" | "dnabla" => 3,
            "rev" => 1,
            _ if FUNCTIONS.contains(&name) => 2,
            _ => return Err(CliError::expr(pos, format!("unknown function `{name}`"))),
        };
        if args.len() != arity {
            return Err(CliError::expr(
                pos,
                format!(
                    "`{name}` takes {arity} argument{}, got {}",
                    if arity == 1 { "" } else { "s" },
                    args.len()
                ),
            ));
        }
        match name {
            "wedge" => self.binary(BinaryOp::Wedge, args, pos),
            "sp" => self.binary(BinaryOp::DualityScalar, args, pos),
            "lc" => self.binary(BinaryOp::LeftContract, args, pos),
            "rc" => self.binary(BinaryOp::RightContract, args, pos),
            "rev" => Ok(match self.value(&args[0])? {
                Value::Field(f) => Value::Field(field_map(&f, |x| Ok(x.reversion()))?),
                other => Value::At(self.at(other, &args[0])?.reversion()),
            }),
            "grade" => {
                let k = match self.value(&args[1])? {
                    Value::Number(k) if k >= 0.0 && k.fract() == 0.0 => k as usize,
                    _ => {
                        return Err(CliError::expr(
                            args[1].pos(),
                            "grade needs a non-negative integer",
                        ))
                    }
                };
                if k > self.chart().dim() {
                    return Err(CliError::expr(
                        args[1].pos(),
                        format!("grade {k} exceeds dimension {}", self.chart().dim()),
                    ));
                }
                Ok(match self.value(&args[0])? {
                    Value::Field(f) => Value::Field(field_map(&f, |x| x.grade_part(k))?),
                    other => Value::At(self.at(other, &args[0])?.grade_part(k)?),
                })
            }
            "nabla" => {
                let a = self.direction(&args[0])?;
                let f = self.field(&args[1], name)?;
                let s = self.scene.structure();
                Ok(Value::Field(match f {
                    AnyField::Scalar(f) => AnyField::Scalar(s.cov_deriv_scalar(&a, &f)?),
                    AnyField::Multivector(x) => AnyField::Multivector(s.cov_deriv(&a, &x)?),
                    AnyField::Multiform(x) => AnyField::Multiform(s.cov_deriv(&a, &x)?),
                }))
            }
            "partial" => {
                let frame = match self.value(&args[0])? {
                    Value::Frame(b) => self.scene.frame(&b).expect("bound").clone(),
                    _ => {
                        return Err(CliError::expr(
                            args[0].pos(),
                            "partial needs a frame bound by the scene",
                        ))
                    }
                };
                let a = self.direction(&args[1])?;
                let f = self.field(&args[2], name)?;
                let r = RelativeStructure::new(frame);
                Ok(Value::At(self.at_point(
                    &f,
                    |x| r.deriv(&a, x, self.point),
                    |x| r.deriv(&a, x, self.point),
                )?))
            }
            "dnabla" => {
                let lambda = match self.value(&args[0])? {
                    Value::Lambda(l) => self.scene.lambda(&l).expect("bound").clone(),
                    _ => {
                        return Err(CliError::expr(
                            args[0].pos(),
                            "dnabla needs a lambda bound by the scene",
                        ))
                    }
                };
                let a = self.direction(&args[1])?;
                let f = self.field(&args[2], name)?;
                let d = DeformedStructure::new(self.scene.structure().clone(), lambda)?;
                Ok(Value::At(self.at_point(
                    &f,
                    |x| d.deriv(&a, x, self.point),
                    |x| d.deriv(&a, x, self.point),
                )?))
            }
            _ => unreachable!("arity table covers every function"),
        }
    }

    fn binary(&self, op: BinaryOp, args: &[Expr], pos: usize) -> Result<Value> {
        let a = self.constant_as_field(self.value(&args[0])?);
        let b = self.constant_as_field(self.value(&args[1])?);
        let wrap = |e: mfcalc::Error| CliError::expr(pos, e.to_string());
        if let (Value::Field(x), Value::Field(y)) = (&a, &b) {
            return Ok(Value::Field(pointwise(op, x, y).map_err(wrap)?));
        }
        let x = self.at(a, &args[0])?;
        let y = self.at(b, &args[1])?;
        Ok(Value::At(Element::binary(op, &x, &y).map_err(wrap)?))
    }

    fn constant_as_field(&self, v: Value) -> Value {
        match v {
            Value::Number(c) => Value::Field(AnyField::Scalar(ScalarField::constant(
                self.chart().clone(),
                c,
            ))),
            other => other,
        }
    }

    fn at(&self, v: Value, e: &Expr) -> Result<Element> {
        match v {
            Value::Field(f) => Ok(f.eval(self.point)?),
            Value::At(x) => Ok(x),
            Value::Number(c) => Ok(Element::Scalar(c)),
            Value::Frame(n) | Value::Lambda(n) => {
                Err(CliError::expr(e.pos(), format!("`{n}` is not a field")))
            }
        }
    }

    fn direction(&self, e: &Expr) -> Result<VectorField> {
        match self.value(e)? {
            Value::Field(AnyField::Multivector(v))
                if v.is_homogeneous(1) || v.value().is_zero() =>
            {
                Ok(v)
            }
            _ => Err(CliError::expr(e.pos(), "direction must be a vector field")),
        }
    }

    fn field(&self, e: &Expr, op: &str) -> Result<AnyField> {
        match self.value(e)? {
            Value::Field(f) => Ok(f),
            Value::Number(c) => Ok(AnyField::Scalar(ScalarField::constant(
                self.chart().clone(),
                c,
            ))),
            Value::At(_) => Err(CliError::expr(
                e.pos(),
                format!(
                    "`{op}` needs a polynomial field; this argument is only known at the point"
                ),
            )),
            Value::Frame(n) | Value::Lambda(n) => {
                Err(CliError::expr(e.pos(), format!("`{n}` is not a field")))
            }
        }
    }

    /// Runs a pointwise derivative; scalars go through grade 0 of a multivector.
    fn at_point(
        &self,
        f: &AnyField,
        vector: impl Fn(&GradedField<Vector>) -> mfcalc::Result<Grassmann<Vector>>,
        form: impl Fn(
            &GradedField<mfcalc::algebra::Form>,
        ) -> mfcalc::Result<Grassmann<mfcalc::algebra::Form>>,
    ) -> Result<Element> {
        Ok(match f {
            AnyField::Scalar(s) => {
                Element::Scalar(*vector(&GradedField::from_scalar(s))?.coeff(BladeIndex::SCALAR))
            }
            AnyField::Multivector(x) => Element::Multivector(vector(x)?),
            AnyField::Multiform(x) => Element::Multiform(form(x)?),
        })
    }
}

fn field_map(
    f: &AnyField,
    op: impl Fn(&Element<Polynomial>) -> mfcalc::Result<Element<Polynomial>>,
) -> Result<AnyField> {
    Ok(AnyField::from_element(
        f.chart().clone(),
        op(&f.element())?,
    )?)
}

/// `0.3,0.7`, optionally parenthesized or space separated.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Point(format!("`{s}` is not a number")))
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(CliError::Point("no coordinates".into()))
            } else {
                Ok(v)
            }
        })
}

/// Parses and evaluates `expression` at `point`, returning the printed value.
pub fn evaluate(scene: &Scene, expression: &str, point: &[f64]) -> Result<String> {
    let e = parse(expression)?;
    Ok(Evaluator::new(scene, point)?.eval(&e)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(text: &str) -> Scene {
        Scene::parse(text).unwrap()
    }

    fn flat2() -> Scene {
        scene("n = 2\n[fields.X]\ne12 = \"1\"\n")
    }

    #[test]
    fn parses_nested_calls() {
        let e = parse(" nabla( e1 , wedge(X, eps2) )").unwrap();
        match e {
            Expr::Call { name, args, pos } => {
                assert_eq!((name.as_str(), pos), ("nabla", 2));
                assert_eq!(args.len(), 2);
                assert_eq!(args[1].pos(), 14);
            }
            _ => panic!("not a call"),
        }
        assert_eq!(
            parse("grade(X, 2)").unwrap(),
            Expr::Call {
                name: "grade".into(),
                args: vec![
                    Expr::Name {
                        name: "X".into(),
                        pos: 7
                    },
                    Expr::Number {
                        value: 2.0,
                        pos: 10
                    }
                ],
                pos: 1,
            }
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let pos = |s: &str| match parse(s) {
            Err(CliError::Expr { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("wedge(e1, e2"), 13);
        assert_eq!(pos("wedge(e1 e2)"), 10);
        assert_eq!(pos(""), 1);
        assert_eq!(pos("e1)"), 3);
        assert_eq!(pos("wedge(,e1)"), 7);
    }

    #[test]
    fn worked_examples() {
        let s = scene("n = 2\n[gamma]\n\"1,2,2\" = \"1\"\n[fields.X]\ne12 = \"1\"\n");
        assert_eq!(
            evaluate(&s, "nabla(e1, X)", &[0.3, 0.7]).unwrap(),
            "+ 1.0 e12"
        );
        let f = flat2();
        assert_eq!(evaluate(&f, "wedge(e1, e1)", &[0.0, 0.0]).unwrap(), "0");
        assert_eq!(evaluate(&f, "sp(eps1, e1)", &[0.0, 0.0]).unwrap(), "1");
        assert_eq!(evaluate(&f, "rev(X)", &[0.0, 0.0]).unwrap(), "- 1.0 e12");
        assert_eq!(
            evaluate(&f, "lc(eps1, X)", &[0.0, 0.0]).unwrap(),
            "+ 1.0 e2"
        );
        assert_eq!(evaluate(&f, "grade(X, 1)", &[0.0, 0.0]).unwrap(), "0");
    }

    #[test]
    fn ordering_and_formatting() {
        let s = scene("n = 2\n[fields.F]\ne12 = \"-x1\"\ne2 = \"1\"\ne1 = \"0.5*x2\"\n");
        assert_eq!(
            evaluate(&s, "F", &[0.25, 0.5]).unwrap(),
            "+ 0.25 e1 + 1.0 e2 - 0.25 e12"
        );
    }

    #[test]
    fn every_derivative_operator_runs() {
        let s = scene(
            r#"
n = 2
[gamma]
"1,1,2" = "x2"
[fields.X]
e1 = "x1"
e12 = "x1*x2"
[fields.f]
"1" = "x1*x2"
[directions.a]
components = ["1", "0"]
[frames.C]
vectors = [["1", "0"], ["0", "1"]]
[lambda.I]
matrix = [["1", "0"], ["0", "1"]]
"#,
        );
        let p = [0.3, 0.7];
        // coordinate frame: the relative derivative is the plain directional derivative
        assert_eq!(
            evaluate(&s, "partial(C, a, X)", &p).unwrap(),
            "+ 1.0 e1 + 0.7 e12"
        );
        assert_eq!(evaluate(&s, "partial(C, a, f)", &p).unwrap(), "0.7");
        // an identity deformation reproduces nabla
        assert_eq!(
            evaluate(&s, "dnabla(I, a, X)", &p).unwrap(),
            evaluate(&s, "nabla(a, X)", &p).unwrap()
        );
        assert_eq!(evaluate(&s, "nabla(a, f)", &p).unwrap(), "0.7");
        assert_eq!(evaluate(&s, "sp(eps1, nabla(a, X))", &p).unwrap(), "1");
        assert_eq!(
            evaluate(&s, "grade(partial(C, a, X), 2)", &p).unwrap(),
            "+ 0.7 e12"
        );
    }

    #[test]
    fn evaluation_errors() {
        let s = scene("n = 2\n[fields.X]\ne12 = \"1\"\n[frames.B]\nvectors = [[\"1\", \"0\"], [\"0\", \"1\"]]\n");
        let err = |e: &str, p: &[f64]| evaluate(&s, e, p).unwrap_err();
        assert!(matches!(
            err("nabla(e1, Y)", &[0.0, 0.0]),
            CliError::Expr { position: 11, .. }
        ));
        assert!(matches!(
            err("foo(e1)", &[0.0, 0.0]),
            CliError::Expr { position: 1, .. }
        ));
        assert!(matches!(
            err("wedge(e1)", &[0.0, 0.0]),
            CliError::Expr { .. }
        ));
        assert!(matches!(
            err("nabla(X, X)", &[0.0, 0.0]),
            CliError::Expr { position: 7, .. }
        ));
        assert!(matches!(
            err("nabla(e1, partial(B, e1, X))", &[0.0, 0.0]),
            CliError::Expr { position: 11, .. }
        ));
        assert!(matches!(
            err("wedge(e1, eps1)", &[0.0, 0.0]),
            CliError::Expr { position: 1, .. }
        ));
        assert!(matches!(err("e3", &[0.0, 0.0]), CliError::Expr { .. }));
        assert!(matches!(err("B", &[0.0, 0.0]), CliError::Expr { .. }));
        assert!(matches!(
            err("X", &[2.0, 0.0]),
            CliError::Core(mfcalc::Error::OutOfDomain { .. })
        ));
        assert!(matches!(err("X", &[0.0]), CliError::Point(_)));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0.3,0.7").unwrap(), vec![0.3, 0.7]);
        assert_eq!(parse_point("(0.3, -0.7)").unwrap(), vec![0.3, -0.7]);
        assert!(parse_point("a,b").is_err());
        assert!(parse_point("").is_err());
    }
}
