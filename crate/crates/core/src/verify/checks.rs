//! One function per catalog identity. Each evaluates both sides at a random
//! point for freshly drawn random data and returns them as flat vectors.

use crate::algebra::{BinaryOp, Element, Form, Grassmann, Kind, Vector};
use crate::connection::{
    Covariant, DeformedStructure, JacobianField, OperatorField, ParallelismStructure,
    RelativeConnection, RelativeStructure,
};
use crate::extensor::Extensor;
use crate::fields::{
    central_difference, pointwise, AnyField, ExtensorField, FrameField, GradedField, Jet,
    VectorField, FD_STEP,
};
use crate::{Error, Result};

use super::random::Sampler;
use super::Overrides;

/// Per-trial random data shared by every check.
pub(crate) struct Trial<'a> {
    pub g: Sampler,
    pub s: ParallelismStructure,
    pub a: VectorField,
    pub p: Vec<f64>,
    pub index: usize,
    pub mutate: bool,
    pub overrides: &'a Overrides,
}

impl Trial<'_> {
    /// `-1` in mutation mode, `1` otherwise.
    fn flip(&self) -> f64 {
        if self.mutate {
            -1.0
        } else {
            1.0
        }
    }

    fn n(&self) -> usize {
        self.g.dim()
    }

    /// Direction components at the trial point.
    fn dir(&self) -> Vec<f64> {
        self.a
            .eval_at(&self.p)
            .components()
            .expect("grade-1 direction")
    }

    fn jet_point(&self) -> Vec<Jet> {
        Jet::seed(&self.p, &self.dir())
    }

    fn lambda(&mut self) -> Result<ExtensorField<Vector>> {
        match &self.overrides.lambda {
            Some(l) => Ok(l.clone()),
            None => self.g.lambda(),
        }
    }

    fn frame(&mut self, slot: usize) -> Result<FrameField> {
        let frames = &self.overrides.frames;
        if frames.is_empty() {
            self.g.frame()
        } else {
            Ok(frames[(self.index + slot) % frames.len()].clone())
        }
    }

    fn deformed(&mut self) -> Result<DeformedStructure> {
        let l = self.lambda()?;
        DeformedStructure::new(self.s.clone(), l)
    }
}

/// Both sides of an identity, flattened.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Sides {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl Sides {
    fn el<K: Kind>(mut self, l: &Grassmann<K>, r: &Grassmann<K>) -> Self {
        self.lhs.extend_from_slice(l.coeffs());
        self.rhs.extend_from_slice(r.coeffs());
        self
    }

    fn num(mut self, l: f64, r: f64) -> Self {
        self.lhs.push(l);
        self.rhs.push(r);
        self
    }

    fn ext<K: Kind>(mut self, l: &Extensor<K>, r: &Extensor<K>) -> Self {
        self.lhs.extend_from_slice(l.entries());
        self.rhs.extend_from_slice(r.entries());
        self
    }

    fn any(mut self, l: &Element, r: &Element) -> Self {
        self.lhs.extend(flatten(l));
        self.rhs.extend(flatten(r));
        self
    }
}

fn flatten(e: &Element) -> Vec<f64> {
    match e {
        Element::Scalar(x) => vec![*x],
        Element::Multivector(x) => x.coeffs().to_vec(),
        Element::Multiform(x) => x.coeffs().to_vec(),
    }
}

type CheckFn = fn(&mut Trial) -> Result<Sides>;

/// The check implementing catalog entry `id`.
pub(crate) fn lookup(id: &str) -> Option<CheckFn> {
    Some(match id {
        "MMF9" => mmf::<Vector, Vector>(BinaryOp::Add),
        "MMF10" => mmf::<Form, Form>(BinaryOp::Add),
        "MMF11" => |t| mmf_scalar::<Vector>(t),
        "MMF12" => |t| mmf_scalar::<Form>(t),
        "MMF13" => mmf::<Vector, Vector>(BinaryOp::Wedge),
        "MMF14" => mmf::<Form, Form>(BinaryOp::Wedge),
        "MMF15" => mmf::<Form, Vector>(BinaryOp::DualityScalar),
        "MMF16" => mmf::<Form, Vector>(BinaryOp::LeftContract),
        "MMF17" => mmf::<Vector, Form>(BinaryOp::LeftContract),
        "MMF18" => mmf::<Form, Vector>(BinaryOp::RightContract),
        "MMF19" => mmf::<Vector, Form>(BinaryOp::RightContract),
        "CDMMF1" => |t| cd_scalar::<Vector>(t),
        "CDMMF2" => |t| cd_axiom::<Vector>(t),
        "CDMMF3" => |t| cd_grade_sum::<Vector>(t),
        "CDMMF4" => |t| cd_grade::<Vector>(t),
        "CDMMF5" => |t| cd_direction_linear::<Vector>(t),
        "CDMMF6" => |t| cd_module::<Vector>(t),
        "CDMMF7" => |t| cd_wedge::<Vector>(t),
        "CDMMF8" => |t| cd_scalar::<Form>(t),
        "CDMMF9" => |t| cd_axiom::<Form>(t),
        "CDMMF10" => |t| cd_grade_sum::<Form>(t),
        "CDMMF11" => |t| cd_grade::<Form>(t),
        "CDMMF12" => |t| cd_direction_linear::<Form>(t),
        "CDMMF13" => |t| cd_module::<Form>(t),
        "CDMMF14" => |t| cd_wedge::<Form>(t),
        "CDMMF15" => cd_pairing,
        "CDMMF16" => |t| cd_left::<Form>(t),
        "CDMMF17" => |t| cd_left::<Vector>(t),
        "CDMMF18" => |t| cd_right::<Form>(t),
        "CDMMF19" => |t| cd_right::<Vector>(t),
        "DCD1" => dcd_vector,
        "DCD2" => dcd_form,
        "DCD3" => dcd_multivector,
        "DCD4" => dcd_multiform,
        "DCD-LEIBNIZ" => dcd_leibniz,
        "RCD1" => rcd_tensorial,
        "RCD2" => rcd_form,
        "RCD3" => |t| rcd_split::<Vector>(t),
        "RCD4" => |t| rcd_split::<Form>(t),
        "RCD7" => rcd_transport_vector,
        "RCD8" => rcd_transport_form,
        "PROOF-B" => proof_b,
        "PROOF-E" => proof_e,
        "EXT-ADJ" => ext_adjoint,
        "EXT-INV" => ext_inverse,
        "GEN-ADJ" => gen_adjoint,
        _ => return None,
    })
}

// ---------------------------------------------------------------------------
// pointwise homomorphisms

trait Wrap: Kind {
    fn wrap(x: GradedField<Self>) -> AnyField;
}

impl Wrap for Vector {
    fn wrap(x: GradedField<Vector>) -> AnyField {
        AnyField::Multivector(x)
    }
}

impl Wrap for Form {
    fn wrap(x: GradedField<Form>) -> AnyField {
        AnyField::Multiform(x)
    }
}

fn mmf<A: Wrap, B: Wrap>(op: BinaryOp) -> CheckFn {
    fn run<A: Wrap, B: Wrap>(t: &mut Trial, op: BinaryOp) -> Result<Sides> {
        let x = A::wrap(t.g.graded::<A>());
        let y = B::wrap(t.g.graded::<B>());
        let lhs = pointwise(op, &x, &y)?.eval(&t.p)?;
        let yp = match y.eval(&t.p)? {
            Element::Multivector(v) => Element::Multivector(v.scale(t.flip())),
            Element::Multiform(v) => Element::Multiform(v.scale(t.flip())),
            s => s,
        };
        let rhs = Element::binary(op, &x.eval(&t.p)?, &yp)?;
        Ok(Sides::default().any(&lhs, &rhs))
    }
    match op {
        BinaryOp::Add => |t| run::<A, B>(t, BinaryOp::Add),
        BinaryOp::Wedge => |t| run::<A, B>(t, BinaryOp::Wedge),
        BinaryOp::DualityScalar => |t| run::<A, B>(t, BinaryOp::DualityScalar),
        BinaryOp::LeftContract => |t| run::<A, B>(t, BinaryOp::LeftContract),
        BinaryOp::RightContract => |t| run::<A, B>(t, BinaryOp::RightContract),
        BinaryOp::ScalarMul => |t| run::<A, B>(t, BinaryOp::ScalarMul),
    }
}

fn mmf_scalar<K: Wrap>(t: &mut Trial) -> Result<Sides> {
    let f = t.g.scalar();
    let x = K::wrap(t.g.graded::<K>());
    let lhs = pointwise(BinaryOp::ScalarMul, &AnyField::Scalar(f.clone()), &x)?.eval(&t.p)?;
    let fp = f.eval(&t.p)? * t.flip();
    let rhs = Element::binary(BinaryOp::ScalarMul, &Element::Scalar(fp), &x.eval(&t.p)?)?;
    Ok(Sides::default().any(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// covariant derivative identities

fn cd_scalar<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let f = t.g.scalar();
    let jet = f.eval_at(&t.jet_point()).d * t.flip();
    let direct = t.s.cov_deriv_scalar(&t.a, &f)?.eval(&t.p)?;
    let lifted =
        t.s.cov_deriv(&t.a, &GradedField::<K>::from_scalar(&f))?
            .eval(&t.p)?;
    let want = Grassmann::<K>::scalar(t.n(), jet);
    Ok(Sides::default().num(direct, jet).el(&lifted, &want))
}

fn cd_axiom<K: Covariant>(t: &mut Trial) -> Result<Sides>
where
    K::Dual: Covariant,
{
    let n = t.n();
    let k = 1 + t.index % n;
    let x = t.g.homogeneous::<K>(k);
    let tests: Vec<GradedField<K::Dual>> = (0..k).map(|_| t.g.vector()).collect();
    let mut w = Grassmann::<K::Dual>::scalar(n, 1.0);
    for v in &tests {
        w = w.wedge(&v.eval(&t.p)?)?;
    }
    let split = t.s.cov_deriv(&t.a, &x)?.eval(&t.p)?.pair(&w)?;
    let axiom = t.s.axiom_deriv(&t.a, &x, &tests, &t.p)?;
    let rhs = if t.mutate {
        // a<w, X> + corrections instead of a<w, X> - corrections
        let q = t.jet_point();
        let mut wj = Grassmann::<K::Dual, Jet>::scalar(n, Jet::constant(1.0));
        for v in &tests {
            wj = wj.wedge(&v.eval_at(&q))?;
        }
        let ax = x.eval_at(&q).pair(&wj)?.d;
        2.0 * ax - axiom
    } else {
        axiom
    };
    Ok(Sides::default().num(split, rhs))
}

fn cd_grade_sum<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let n = t.n();
    let x = t.g.graded::<K>();
    let lhs = t.s.cov_deriv(&t.a, &x)?.eval(&t.p)?;
    let top = if t.mutate { n } else { n + 1 };
    let mut rhs = Grassmann::<K>::zero(n);
    for k in 0..top {
        rhs = rhs + t.s.cov_deriv(&t.a, &x.grade_part(k)?)?.eval(&t.p)?;
    }
    Ok(Sides::default().el(&lhs, &rhs))
}

fn cd_grade<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let n = t.n();
    let k = t.index % (n + 1);
    let x = t.g.homogeneous::<K>(k);
    let d = t.s.cov_deriv(&t.a, &x)?.eval(&t.p)?;
    let target = if t.mutate { (k + 1) % (n + 1) } else { k };
    let projected = d.grade_part(target)?;
    Ok(Sides::default().el(&d, &projected))
}

fn cd_direction_linear<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let x = t.g.graded::<K>();
    let b = t.g.vector::<Vector>();
    let f = t.g.scalar();
    let s = &t.s;
    let p = &t.p;
    let da = s.cov_deriv(&t.a, &x)?.eval(p)?;
    let db = s.cov_deriv(&b, &x)?.eval(p)?;
    let sum = s.cov_deriv(&t.a.add(&b)?, &x)?.eval(p)?;
    let scaled = s.cov_deriv(&t.a.scalar_mul(&f)?, &x)?.eval(p)?;
    let fd = da.scale(f.eval(p)?);
    Ok(Sides::default()
        .el(&sum, &(da + db.scale(t.flip())))
        .el(&scaled, &fd))
}

fn cd_module<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let x = t.g.graded::<K>();
    let y = t.g.graded::<K>();
    let f = t.g.scalar();
    let s = &t.s;
    let p = &t.p;
    let a = &t.a;
    let dx = s.cov_deriv(a, &x)?.eval(p)?;
    let dy = s.cov_deriv(a, &y)?.eval(p)?;
    let sum = s.cov_deriv(a, &x.add(&y)?)?.eval(p)?;
    let fx = s.cov_deriv(a, &x.scalar_mul(&f)?)?.eval(p)?;
    let af = f.directional_derivative(a)?.eval(p)?;
    let mut leibniz = dx.scale(f.eval(p)?);
    if !t.mutate {
        leibniz = leibniz + x.eval(p)?.scale(af);
    }
    Ok(Sides::default().el(&sum, &(dx + dy)).el(&fx, &leibniz))
}

fn cd_wedge<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let x = t.g.graded::<K>();
    let y = t.g.graded::<K>();
    let s = &t.s;
    let p = &t.p;
    let lhs = s.cov_deriv(&t.a, &x.wedge(&y)?)?.eval(p)?;
    let dx = s.cov_deriv(&t.a, &x)?.eval(p)?;
    let dy = s.cov_deriv(&t.a, &y)?.eval(p)?;
    let rhs = dx.wedge(&y.eval(p)?)? + x.eval(p)?.wedge(&dy)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

fn cd_pairing(t: &mut Trial) -> Result<Sides> {
    let phi = t.g.graded::<Form>();
    let x = t.g.graded::<Vector>();
    let p = &t.p;
    let lhs = phi.pair(&x)?.directional_derivative(&t.a)?.eval(p)?;
    let dphi = t.s.cov_deriv(&t.a, &phi)?.eval(p)?;
    let dx = t.s.cov_deriv(&t.a, &x)?.eval(p)?;
    let rhs = dphi.pair(&x.eval(p)?)? + t.flip() * phi.eval(p)?.pair(&dx)?;
    Ok(Sides::default().num(lhs, rhs))
}

fn cd_left<K: Covariant>(t: &mut Trial) -> Result<Sides>
where
    K::Dual: Covariant,
{
    let x = t.g.graded::<K>();
    let y = t.g.graded::<K::Dual>();
    let s = &t.s;
    let p = &t.p;
    let lhs = s.cov_deriv(&t.a, &x.left_contract(&y)?)?.eval(p)?;
    let dx = s.cov_deriv(&t.a, &x)?.eval(p)?;
    let dy = s.cov_deriv(&t.a, &y)?.eval(p)?;
    let rhs = dx.left_contract(&y.eval(p)?)? + x.eval(p)?.left_contract(&dy)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

fn cd_right<K: Covariant>(t: &mut Trial) -> Result<Sides>
where
    K::Dual: Covariant,
{
    let x = t.g.graded::<K>();
    let y = t.g.graded::<K::Dual>();
    let s = &t.s;
    let p = &t.p;
    let lhs = s.cov_deriv(&t.a, &x.right_contract(&y)?)?.eval(p)?;
    let dx = s.cov_deriv(&t.a, &x)?.eval(p)?;
    let dy = s.cov_deriv(&t.a, &y)?.eval(p)?;
    let rhs = dx.right_contract(&y.eval(p)?)? + x.eval(p)?.right_contract(&dy)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// deformed derivatives

/// `lambda(p)[fd(lambda^-1 v) + sign gamma_a(p) lambda^-1(p) v(p)]` for a
/// vector given at arbitrary points.
fn deformed_vector_fd(
    t: &Trial,
    lambda: &ExtensorField<Vector>,
    v: impl Fn(&[f64]) -> Grassmann<Vector>,
    sign: f64,
) -> Result<Grassmann<Vector>> {
    let inner = |q: &[f64]| lambda.eval_at(q).invert()?.apply(&v(q));
    let d = central_difference(&t.p, &t.dir(), FD_STEP, inner)?;
    let gamma = t.s.gamma_at(&t.dir(), &t.p);
    let corrected = d + gamma.apply(&inner(&t.p)?)?.scale(sign);
    lambda.eval_at(&t.p).apply(&corrected)
}

/// `lambda^-T(p)[fd(lambda^T w) - sign gamma_a^T(p) lambda^T(p) w(p)]`.
fn deformed_form_fd(
    t: &Trial,
    lambda: &ExtensorField<Vector>,
    w: impl Fn(&[f64]) -> Grassmann<Form>,
    sign: f64,
) -> Result<Grassmann<Form>> {
    let inner = |q: &[f64]| lambda.eval_at(q).duality_adjoint().apply(&w(q));
    let d = central_difference(&t.p, &t.dir(), FD_STEP, inner)?;
    let gamma_t = t.s.gamma_at(&t.dir(), &t.p).duality_adjoint();
    let corrected = d - gamma_t.apply(&inner(&t.p)?)?.scale(sign);
    lambda
        .eval_at(&t.p)
        .invert()?
        .duality_adjoint()
        .apply(&corrected)
}

fn dcd_vector(t: &mut Trial) -> Result<Sides> {
    let d = t.deformed()?;
    let v = t.g.vector::<Vector>();
    let lhs = d.deriv(&t.a, &v, &t.p)?;
    let rhs = deformed_vector_fd(t, d.lambda(), |q| v.eval_at(q), t.flip())?;
    Ok(Sides::default().el(&lhs, &rhs))
}

fn dcd_form(t: &mut Trial) -> Result<Sides> {
    let d = t.deformed()?;
    let w = t.g.vector::<Form>();
    let lhs = d.deriv(&t.a, &w, &t.p)?;
    let rhs = deformed_form_fd(t, d.lambda(), |q| w.eval_at(q), t.flip())?;
    Ok(Sides::default().el(&lhs, &rhs))
}

fn dcd_multivector(t: &mut Trial) -> Result<Sides> {
    let d = t.deformed()?;
    let n = t.n();
    let x = t.g.graded::<Vector>();
    let lhs = d.deriv(&t.a, &x, &t.p)?;
    let columns = (0..n)
        .map(|j| deformed_vector_fd(t, d.lambda(), |_| Grassmann::basis(n, j), 1.0))
        .collect::<Result<Vec<_>>>()?;
    let gamma = Extensor::<Vector>::from_columns(&columns)?;
    let rhs =
        x.derivative_along(&t.a)?.eval(&t.p)? + gamma.generalize(&x.eval(&t.p)?)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

fn dcd_multiform(t: &mut Trial) -> Result<Sides> {
    let d = t.deformed()?;
    let n = t.n();
    let phi = t.g.graded::<Form>();
    let lhs = d.deriv(&t.a, &phi, &t.p)?;
    let columns = (0..n)
        .map(|j| deformed_form_fd(t, d.lambda(), |_| Grassmann::basis(n, j), 1.0))
        .collect::<Result<Vec<_>>>()?;
    let g = Extensor::<Form>::from_columns(&columns)?;
    let rhs =
        phi.derivative_along(&t.a)?.eval(&t.p)? + g.generalize(&phi.eval(&t.p)?)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

fn dcd_leibniz(t: &mut Trial) -> Result<Sides> {
    let d = t.deformed()?;
    let phi = t.g.graded::<Form>();
    let x = t.g.graded::<Vector>();
    let p = &t.p;
    let lhs = phi.pair(&x)?.directional_derivative(&t.a)?.eval(p)?;
    let dphi = d.deriv(&t.a, &phi, p)?;
    let dx = d.deriv(&t.a, &x, p)?;
    let rhs = dphi.pair(&x.eval(p)?)? + t.flip() * phi.eval(p)?.pair(&dx)?;
    Ok(Sides::default().num(lhs, rhs))
}

// ---------------------------------------------------------------------------
// relative structures

fn relative(t: &mut Trial, slot: usize) -> Result<RelativeStructure> {
    Ok(RelativeStructure::new(t.frame(slot)?))
}

/// `F(p) fd(F^-1 y)` for a multivector-valued `y`.
fn relative_vector_fd(
    t: &Trial,
    frame: &FrameField,
    y: impl Fn(&[f64]) -> Result<Grassmann<Vector>>,
) -> Result<Grassmann<Vector>> {
    let comps = |q: &[f64]| {
        let inv = frame.matrix_at(q).invert()?;
        inv.extend(&y(q)?)
    };
    let dc = central_difference(&t.p, &t.dir(), FD_STEP, comps)?;
    frame.matrix_at(&t.p).extend(&dc)
}

/// `F^-T(p) fd(F^T y)` for a multiform-valued `y`.
fn relative_form_fd(
    t: &Trial,
    frame: &FrameField,
    y: impl Fn(&[f64]) -> Result<Grassmann<Form>>,
) -> Result<Grassmann<Form>> {
    let comps = |q: &[f64]| frame.matrix_at(q).duality_adjoint().extend(&y(q)?);
    let dc = central_difference(&t.p, &t.dir(), FD_STEP, comps)?;
    frame
        .matrix_at(&t.p)
        .invert()?
        .duality_adjoint()
        .extend(&dc)
}

fn rcd_tensorial(t: &mut Trial) -> Result<Sides> {
    let r = relative(t, 0)?;
    let rc = RelativeConnection::new(t.s.clone(), r.clone())?;
    let f = t.g.scalar();
    let v = t.g.vector::<Vector>();
    let p = t.p.clone();
    let fv = v.scalar_mul(&f)?;
    let nabla_fv = t.s.cov_deriv_vector(&t.a, &fv)?.eval(&p)?;
    let partial_fv = relative_vector_fd(t, r.frame(), |q| Ok(fv.eval_at(q)))?;
    let gamma_fv = nabla_fv - partial_fv;
    let gamma_v = rc.apply_at(&t.a, &v, &p)?;
    let fp = f.eval(&p)?;
    let via_matrix = rc.gamma_at(&t.dir(), &p)?.apply(&v.eval(&p)?)?;
    Ok(Sides::default()
        .el(&gamma_fv, &gamma_v.scale(fp * t.flip()))
        .el(&gamma_v, &via_matrix))
}

fn rcd_form(t: &mut Trial) -> Result<Sides> {
    let r = relative(t, 0)?;
    let rc = RelativeConnection::new(t.s.clone(), r.clone())?;
    let w = t.g.vector::<Form>();
    let p = &t.p;
    let lhs = t.s.cov_deriv_form(&t.a, &w)?.eval(p)?;
    let gamma_t = rc.gamma_at(&t.dir(), p)?.duality_adjoint();
    let rhs = r.deriv(&t.a, &w, p)? - gamma_t.apply(&w.eval(p)?)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

fn rcd_split<K: Covariant>(t: &mut Trial) -> Result<Sides> {
    let r = if t.index.is_multiple_of(2) && t.overrides.frames.is_empty() {
        RelativeStructure::coordinate(t.g.chart().clone())
    } else {
        relative(t, 0)?
    };
    let rc = RelativeConnection::new(t.s.clone(), r.clone())?;
    let x = t.g.graded::<K>();
    let p = &t.p;
    let lhs = t.s.cov_deriv(&t.a, &x)?.eval(p)?;
    let rhs = if t.mutate {
        let gamma = rc.gamma_at(&t.dir(), p)?;
        r.deriv(&t.a, &x, p)? - K::correction(&gamma, &x.eval(p)?)?
    } else {
        rc.split_at(&t.a, &x, p)?
    };
    Ok(Sides::default().el(&lhs, &rhs))
}

fn jacobian(t: &mut Trial) -> Result<JacobianField> {
    let b = relative(t, 0)?;
    let b2 = relative(t, 1)?;
    JacobianField::new(b, b2)
}

fn jacobian_round_trip(t: &Trial, j: &JacobianField, sides: Sides) -> Result<Sides> {
    let there = j.at(&t.p)?;
    let back = j.inverse().at(&t.p)?;
    Ok(sides.ext(&back.compose(&there)?, &Extensor::identity(t.n())))
}

fn rcd_transport_vector(t: &mut Trial) -> Result<Sides> {
    let j = jacobian(t)?;
    let x = t.g.graded::<Vector>();
    let lhs = j.to().deriv(&t.a, &x, &t.p)?;
    // Y = J^-1 X, differentiated relative to the source frame
    let y = |q: &[f64]| j.operator_at(q)?.invert()?.extend(&x.eval_at(q));
    let dy = relative_vector_fd(t, j.from().frame(), y)?;
    let rhs = j.at(&t.p)?.extend(&dy)?.scale(t.flip());
    jacobian_round_trip(t, &j, Sides::default().el(&lhs, &rhs))
}

fn rcd_transport_form(t: &mut Trial) -> Result<Sides> {
    let j = jacobian(t)?;
    let phi = t.g.graded::<Form>();
    let lhs = j.to().deriv(&t.a, &phi, &t.p)?;
    let y = |q: &[f64]| j.operator_at(q)?.duality_adjoint().extend(&phi.eval_at(q));
    let dy = relative_form_fd(t, j.from().frame(), y)?;
    let outer = j.at(&t.p)?.invert()?.duality_adjoint();
    let rhs = outer.extend(&dy)?.scale(t.flip());
    Ok(Sides::default().el(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// grade-1 relations

fn proof_b(t: &mut Trial) -> Result<Sides> {
    let w = t.g.vector::<Form>();
    let v = t.g.vector::<Vector>();
    let p = &t.p;
    let lhs = w.pair(&v)?.directional_derivative(&t.a)?.eval(p)?;
    let dw = t.s.cov_deriv_form(&t.a, &w)?.eval(p)?;
    let dv = t.s.cov_deriv_vector(&t.a, &v)?.eval(p)?;
    let rhs = dw.pair(&v.eval(p)?)? + t.flip() * w.eval(p)?.pair(&dv)?;
    Ok(Sides::default().num(lhs, rhs))
}

fn proof_e(t: &mut Trial) -> Result<Sides> {
    let n = t.n();
    let frame = t.frame(0)?;
    let dir = t.dir();
    let coframe_jet = frame.coframe_at(&t.jet_point())?;
    let coframe = frame.coframe_at(&t.p)?;
    let mut sides = Sides::default();
    for j in 0..n {
        let e_j = frame.vector(j);
        let de_j = t.s.cov_deriv_vector(&t.a, &e_j)?.eval(&t.p)?;
        for q in 0..n {
            let eps = coframe.column(q);
            let deps = t.s.cov_deriv_at(&dir, &t.p, &coframe_jet.column(q))?;
            let lhs = eps.pair(&de_j)?;
            let rhs = -t.flip() * deps.pair(&e_j.eval(&t.p)?)?;
            sides = sides.num(lhs, rhs);
        }
    }
    Ok(sides)
}

// ---------------------------------------------------------------------------
// extensor identities

fn ext_adjoint(t: &mut Trial) -> Result<Sides> {
    let m = t.g.matrix();
    let phi = t.g.value::<Form>();
    let x = t.g.value::<Vector>();
    let lhs = m.duality_adjoint().extend(&phi)?.pair(&x)?;
    let rhs = t.flip() * phi.pair(&m.extend(&x)?)?;
    Ok(Sides::default()
        .num(lhs, rhs)
        .ext(&m.duality_adjoint().duality_adjoint(), &m))
}

fn ext_inverse(t: &mut Trial) -> Result<Sides> {
    let m = t.g.invertible_matrix();
    let inv = m.invert()?;
    let x = t.g.value::<Vector>();
    let phi = t.g.value::<Form>();
    let back = inv.extend(&m.extend(&x)?)?;
    let forward = m.extend(&inv.extend(&x)?)?;
    let adj = m.duality_adjoint();
    let form_back = inv.duality_adjoint().extend(&adj.extend(&phi)?)?;
    Ok(Sides::default()
        .el(&back, &x.scale(t.flip()))
        .el(&forward, &x)
        .ext(&inv.duality_adjoint(), &adj.invert()?)
        .el(&form_back, &phi))
}

fn gen_adjoint(t: &mut Trial) -> Result<Sides> {
    let m = t.g.matrix();
    let phi = t.g.value::<Form>();
    let x = t.g.value::<Vector>();
    let lhs = m.duality_adjoint().generalize(&phi)?.pair(&x)?;
    let rhs = t.flip() * phi.pair(&m.generalize(&x)?)?;
    Ok(Sides::default().num(lhs, rhs))
}

/// Error kinds that mark a degenerate random draw rather than a bug.
pub(crate) fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularExtensor { .. } | Error::SingularFrame { .. }
    )
}
