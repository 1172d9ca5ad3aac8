use crate::{Error, Result};

/// A registered identity: what it states and which engine operations
/// produce each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity {
    pub id: &'static str,
    pub statement: &'static str,
    /// The identity as a formula.
    pub formula: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    /// Whether one side goes through central finite differences.
    pub fd: bool,
    /// What the negative control changes.
    pub mutation: &'static str,
}

const fn id(
    id: &'static str,
    statement: &'static str,
    formula: &'static str,
    lhs: &'static str,
    rhs: &'static str,
    fd: bool,
    mutation: &'static str,
) -> Identity {
    Identity {
        id,
        statement,
        formula,
        lhs,
        rhs,
        fd,
        mutation,
    }
}

const NEG_B: &str = "negates the second operand on the right";

static CATALOG: &[Identity] = &[
    id("MMF9", "Addition of multivector fields is pointwise.", "(X + Y)(p) = X(p) + Y(p)",
        "fields::pointwise(Add) then eval", "eval then Grassmann add", false, NEG_B),
    id("MMF10", "Addition of multiform fields is pointwise.", "(Phi + Psi)(p) = Phi(p) + Psi(p)",
        "fields::pointwise(Add) then eval", "eval then Grassmann add", false, NEG_B),
    id("MMF11", "Scalar multiplication of multivector fields is pointwise.", "(f X)(p) = f(p) X(p)",
        "fields::pointwise(ScalarMul) then eval", "eval then Grassmann::mul_scalar", false, NEG_B),
    id("MMF12", "Scalar multiplication of multiform fields is pointwise.", "(f Phi)(p) = f(p) Phi(p)",
        "fields::pointwise(ScalarMul) then eval", "eval then Grassmann::mul_scalar", false, NEG_B),
    id("MMF13", "The exterior product of multivector fields is pointwise.", "(X ^ Y)(p) = X(p) ^ Y(p)",
        "fields::pointwise(Wedge) then eval", "eval then Grassmann::wedge", false, NEG_B),
    id("MMF14", "The exterior product of multiform fields is pointwise.", "(Phi ^ Psi)(p) = Phi(p) ^ Psi(p)",
        "fields::pointwise(Wedge) then eval", "eval then Grassmann::wedge", false, NEG_B),
    id("MMF15", "The duality scalar product of fields is pointwise.", "<Phi, X>(p) = <Phi(p), X(p)>",
        "fields::pointwise(DualityScalar) then eval", "eval then Grassmann::pair", false, NEG_B),
    id("MMF16", "The left contraction of a multiform with a multivector field is pointwise.",
        "<Phi, X|(p) = <Phi(p), X(p)|",
        "fields::pointwise(LeftContract) then eval", "eval then Grassmann::left_contract", false, NEG_B),
    id("MMF17", "The left contraction of a multivector with a multiform field is pointwise.",
        "<X, Phi|(p) = <X(p), Phi(p)|",
        "fields::pointwise(LeftContract) then eval", "eval then Grassmann::left_contract", false, NEG_B),
    id("MMF18", "The right contraction of a multiform with a multivector field is pointwise.",
        "|Phi, X>(p) = |Phi(p), X(p)>",
        "fields::pointwise(RightContract) then eval", "eval then Grassmann::right_contract", false, NEG_B),
    id("MMF19", "The right contraction of a multivector with a multiform field is pointwise.",
        "|X, Phi>(p) = |X(p), Phi(p)>",
        "fields::pointwise(RightContract) then eval", "eval then Grassmann::right_contract", false, NEG_B),
    id("CDMMF1", "On scalar fields the covariant derivative is the action of the direction.",
        "nabla_a f = a f",
        "ParallelismStructure::cov_deriv_scalar and grade-0 cov_deriv_multivector",
        "jet evaluation of f at p + eps a(p)", false, "negates the right side"),
    id("CDMMF2", "The split-form derivative of a k-vector agrees with the axiom evaluated on k test forms.",
        "nabla_a X(w1..wk) = a X(w1..wk) - sum_i X(w1..nabla_a wi..wk)",
        "<w1 ^ .. ^ wk, cov_deriv_multivector(X)>",
        "ParallelismStructure::axiom_deriv_multivector", false, "flips the sign of the correction sum"),
    id("CDMMF3", "The covariant derivative is the sum of the derivatives of the homogeneous parts.",
        "nabla_a X = sum_k nabla_a X^k",
        "cov_deriv_multivector(X)", "sum over k of cov_deriv_multivector(grade_part(X, k))", false,
        "drops the top-grade term"),
    id("CDMMF4", "The covariant derivative preserves the grade of a k-vector field.",
        "X in grade k implies nabla_a X in grade k",
        "cov_deriv_multivector(X^k)", "grade_part(cov_deriv_multivector(X^k), k)", false,
        "projects onto grade k + 1 instead"),
    id("CDMMF5", "The covariant derivative of multivectors is linear in the direction over scalar fields.",
        "nabla_{a+b} X = nabla_a X + nabla_b X,  nabla_{fa} X = f nabla_a X",
        "cov_deriv_multivector along a + b and f a", "sums and scalar multiples of cov_deriv_multivector",
        false, "subtracts nabla_b X"),
    id("CDMMF6", "The covariant derivative of multivectors is additive and obeys the module Leibniz rule.",
        "nabla_a (X + Y) = nabla_a X + nabla_a Y,  nabla_a (f X) = (a f) X + f nabla_a X",
        "cov_deriv_multivector(X + Y) and cov_deriv_multivector(f X)",
        "cov_deriv_multivector, directional_derivative, scalar_mul", false, "drops the (a f) X term"),
    id("CDMMF7", "The covariant derivative of multivectors obeys the Leibniz rule over the exterior product.",
        "nabla_a (X ^ Y) = (nabla_a X) ^ Y + X ^ nabla_a Y",
        "cov_deriv_multivector(X ^ Y)", "wedge of cov_deriv_multivector with the other factor", false,
        "flips the sign of X ^ nabla_a Y"),
    id("CDMMF8", "On scalar multiform fields the covariant derivative is the action of the direction.",
        "nabla_a f = a f",
        "ParallelismStructure::cov_deriv_scalar and grade-0 cov_deriv_multiform",
        "jet evaluation of f at p + eps a(p)", false, "negates the right side"),
    id("CDMMF9", "The split-form derivative of a k-form agrees with the axiom evaluated on k test vectors.",
        "nabla_a Phi(v1..vk) = a Phi(v1..vk) - sum_i Phi(v1..nabla_a vi..vk)",
        "<cov_deriv_multiform(Phi), v1 ^ .. ^ vk>",
        "ParallelismStructure::axiom_deriv_multiform", false, "flips the sign of the correction sum"),
    id("CDMMF10", "The covariant derivative is the sum of the derivatives of the homogeneous form parts.",
        "nabla_a Phi = sum_k nabla_a Phi_k",
        "cov_deriv_multiform(Phi)", "sum over k of cov_deriv_multiform(grade_part(Phi, k))", false,
        "drops the top-grade term"),
    id("CDMMF11", "The covariant derivative preserves the grade of a k-form field.",
        "Phi in grade k implies nabla_a Phi in grade k",
        "cov_deriv_multiform(Phi_k)", "grade_part(cov_deriv_multiform(Phi_k), k)", false,
        "projects onto grade k + 1 instead"),
    id("CDMMF12", "The covariant derivative of multiforms is linear in the direction over scalar fields.",
        "nabla_{a+b} Phi = nabla_a Phi + nabla_b Phi,  nabla_{fa} Phi = f nabla_a Phi",
        "cov_deriv_multiform along a + b and f a", "sums and scalar multiples of cov_deriv_multiform",
        false, "subtracts nabla_b Phi"),
    id("CDMMF13", "The covariant derivative of multiforms is additive and obeys the module Leibniz rule.",
        "nabla_a (Phi + Psi) = nabla_a Phi + nabla_a Psi,  nabla_a (f Phi) = (a f) Phi + f nabla_a Phi",
        "cov_deriv_multiform(Phi + Psi) and cov_deriv_multiform(f Phi)",
        "cov_deriv_multiform, directional_derivative, scalar_mul", false, "drops the (a f) Phi term"),
    id("CDMMF14", "The covariant derivative of multiforms obeys the Leibniz rule over the exterior product.",
        "nabla_a (Phi ^ Psi) = (nabla_a Phi) ^ Psi + Phi ^ nabla_a Psi",
        "cov_deriv_multiform(Phi ^ Psi)", "wedge of cov_deriv_multiform with the other factor", false,
        "flips the sign of Phi ^ nabla_a Psi"),
    id("CDMMF15", "The duality scalar product obeys the Leibniz rule.",
        "a <Phi, X> = <nabla_a Phi, X> + <Phi, nabla_a X>",
        "directional_derivative of the pairing field", "pairings of cov_deriv_multiform and cov_deriv_multivector",
        false, "flips the sign of <Phi, nabla_a X>"),
    id("CDMMF16", "The left contraction <Phi, X| obeys the Leibniz rule.",
        "nabla_a <Phi, X| = <nabla_a Phi, X| + <Phi, nabla_a X|",
        "cov_deriv_multivector(Phi.left_contract(X))", "left contractions of the covariant derivatives",
        false, "flips the sign of <Phi, nabla_a X|"),
    id("CDMMF17", "The left contraction <X, Phi| obeys the Leibniz rule.",
        "nabla_a <X, Phi| = <nabla_a X, Phi| + <X, nabla_a Phi|",
        "cov_deriv_multiform(X.left_contract(Phi))", "left contractions of the covariant derivatives",
        false, "flips the sign of <X, nabla_a Phi|"),
    id("CDMMF18", "The right contraction |Phi, X> obeys the Leibniz rule.",
        "nabla_a |Phi, X> = |nabla_a Phi, X> + |Phi, nabla_a X>",
        "cov_deriv_multiform(Phi.right_contract(X))", "right contractions of the covariant derivatives",
        false, "flips the sign of |Phi, nabla_a X>"),
    id("CDMMF19", "The right contraction |X, Phi> obeys the Leibniz rule.",
        "nabla_a |X, Phi> = |nabla_a X, Phi> + |X, nabla_a Phi>",
        "cov_deriv_multivector(X.right_contract(Phi))", "right contractions of the covariant derivatives",
        false, "flips the sign of |X, nabla_a Phi>"),
    id("DCD1", "On vector fields the deformed derivative conjugates the base derivative by lambda.",
        "nabla^lambda_a v = lambda(nabla_a lambda^-1(v))",
        "DeformedStructure::deriv (jets)",
        "lambda(p) applied to a finite difference of lambda^-1 v plus gamma_a", true,
        "flips the sign of the gamma_a term"),
    id("DCD2", "On form fields the deformed derivative conjugates the base derivative by the adjoint of lambda.",
        "nabla^lambda_a w = lambda^-T(nabla_a lambda^T(w))",
        "DeformedStructure::deriv (jets)",
        "lambda^-T(p) applied to a finite difference of lambda^T w minus gamma_a^T", true,
        "flips the sign of the gamma_a^T term"),
    id("DCD3", "The deformed derivative on multivectors is the split extension of its grade-1 restriction.",
        "ext(lambda)(nabla_a ext(lambda^-1) X) = a(X) + gen(gamma'_a)(X),  gamma'_a(e_j) = nabla^lambda_a e_j",
        "DeformedStructure::deriv on all grades (jets)",
        "coordinate derivative plus generalize of gamma'_a extracted by finite differences", true,
        "flips the sign of the generalize term"),
    id("DCD4", "The deformed derivative on multiforms is the split extension of its grade-1 restriction.",
        "ext(lambda^-T)(nabla_a ext(lambda^T) Phi) = a(Phi) + gen(G_a)(Phi),  G_a(eps^j) = nabla^lambda_a eps^j",
        "DeformedStructure::deriv on all grades (jets)",
        "coordinate derivative plus generalize of G_a extracted by finite differences", true,
        "flips the sign of the generalize term"),
    id("DCD-LEIBNIZ", "Deformed derivatives of forms and vectors jointly obey the pairing Leibniz rule.",
        "a <Phi, X> = <nabla^lambda_a Phi, X> + <Phi, nabla^lambda_a X>",
        "directional_derivative of the pairing field", "pairings with DeformedStructure::deriv",
        false, "flips the sign of <Phi, nabla^lambda_a X>"),
    id("RCD1", "The relative connection on vectors is tensorial.",
        "gamma_a(f v) = f gamma_a(v),  gamma_a(v) = nabla_a v - d_a v",
        "nabla_a (f v) minus a finite-difference relative derivative; RelativeConnection::apply_at(v)",
        "f(p) RelativeConnection::apply_at(v); RelativeConnection::gamma_at applied to v(p)", true,
        "negates f gamma_a(v)"),
    id("RCD2", "On form fields the covariant derivative splits through the adjoint relative connection.",
        "nabla_a w = d_a w - gamma_a^T(w)",
        "cov_deriv_form", "RelativeStructure::deriv minus the adjoint of RelativeConnection::gamma_at",
        false, "flips the sign of the gamma_a^T term"),
    id("RCD3", "Split theorem for multivector fields.",
        "nabla_a X = d_a X + gen(gamma_a)(X)",
        "cov_deriv_multivector", "RelativeConnection::split_at (coordinate frame on even trials, random frame on odd)",
        false, "flips the sign of the generalize term"),
    id("RCD4", "Split theorem for multiform fields.",
        "nabla_a Phi = d_a Phi - gen(gamma_a^T)(Phi)",
        "cov_deriv_multiform", "RelativeConnection::split_at (coordinate frame on even trials, random frame on odd)",
        false, "flips the sign of the generalize term"),
    id("RCD7", "The Jacobian field transports one relative derivative of multivectors into another; J and its reverse compose to the identity.",
        "d'_a X = ext(J)(d_a ext(J^-1) X),  J' J = Id",
        "RelativeStructure::deriv for the target frame (jets); JacobianField products",
        "ext(J(p)) applied to a finite-difference relative derivative; identity", true,
        "negates the transported side"),
    id("RCD8", "The Jacobian field transports one relative derivative of multiforms into another.",
        "d'_a Phi = ext(J^-T)(d_a ext(J^T) Phi)",
        "RelativeStructure::deriv for the target frame (jets)",
        "ext(J^-T(p)) applied to a finite-difference relative derivative", true,
        "negates the transported side"),
    id("PROOF-B", "Pairing a form field with a vector field obeys the Leibniz rule at grade 1.",
        "a <w, v> = <nabla_a w, v> + <w, nabla_a v>",
        "directional_derivative of the pairing field", "cov_deriv_form and cov_deriv_vector index formulas",
        false, "flips the sign of <w, nabla_a v>"),
    id("PROOF-E", "Covariant derivatives of a dual frame pair are antisymmetric under the pairing.",
        "<eps^p, nabla_a e_j> = -<nabla_a eps^p, e_j>",
        "cov_deriv_vector of frame vectors paired with the coframe",
        "ParallelismStructure::cov_deriv_at on the jet-evaluated coframe", false,
        "drops the minus sign"),
    id("EXT-ADJ", "The extension of the adjoint is the adjoint of the extension.",
        "<ext(t^T) Phi, X> = <Phi, ext(t) X>,  (t^T)^T = t",
        "Extensor::duality_adjoint then extend", "Extensor::extend then pair", false,
        "negates the right pairing"),
    id("EXT-INV", "The extension of the inverse is the inverse of the extension, and inversion commutes with the adjoint.",
        "ext(t^-1) ext(t) A = A,  (t^-1)^T = (t^T)^-1",
        "Extensor::invert, extend, duality_adjoint", "the input, and the inverse of the adjoint", false,
        "negates the recovered element"),
    id("GEN-ADJ", "The generalization of the adjoint is the adjoint of the generalization.",
        "<gen(t^T) Phi, X> = <Phi, gen(t) X>",
        "Extensor::duality_adjoint then generalize", "Extensor::generalize then pair", false,
        "negates the right pairing"),
];

/// All registered identities in report order.
pub fn catalog() -> &'static [Identity] {
    CATALOG
}

pub fn lookup(id: &str) -> Result<&'static Identity> {
    CATALOG
        .iter()
        .find(|i| i.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Splits `CDMMF15` into (`CDMMF`, 15).
fn numbered(id: &str) -> Option<(&str, u32)> {
    let pos = id.find(|c: char| c.is_ascii_digit())?;
    let (prefix, digits) = id.split_at(pos);
    digits.parse().ok().map(|n| (prefix, n))
}

/// Resolves a comma-separated selection. Items are ids, ranges such as
/// `CDMMF15..19` or `CDMMF15..CDMMF19`, or prefixes ending in `*`.
pub fn select(selection: &str) -> Result<Vec<&'static str>> {
    let mut out: Vec<&'static str> = Vec::new();
    for item in selection
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let item_upper = item.to_ascii_uppercase();
        let matched: Vec<&'static str> = if let Some(prefix) = item_upper.strip_suffix('*') {
            CATALOG
                .iter()
                .filter(|i| i.id.starts_with(prefix))
                .map(|i| i.id)
                .collect()
        } else if let Some((start, end)) = item_upper.split_once("..") {
            let (prefix, lo) =
                numbered(start).ok_or_else(|| Error::UnknownIdentity(item.into()))?;
            let hi = match numbered(end) {
                Some((p, hi)) if p == prefix || p.is_empty() => hi,
                _ => return Err(Error::UnknownIdentity(item.into())),
            };
            CATALOG
                .iter()
                .filter(|i| matches!(numbered(i.id), Some((p, k)) if p == prefix && (lo..=hi).contains(&k)))
                .map(|i| i.id)
                .collect()
        } else {
            vec![lookup(item)?.id]
        };
        if matched.is_empty() {
            return Err(Error::UnknownIdentity(item.into()));
        }
        for m in matched {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    // report order follows the catalog
    out.sort_by_key(|id| CATALOG.iter().position(|i| i.id == *id));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = catalog().iter().map(|i| i.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), catalog().len());
    }

    #[test]
    fn selection() {
        assert_eq!(
            select("CDMMF15..19").unwrap(),
            vec!["CDMMF15", "CDMMF16", "CDMMF17", "CDMMF18", "CDMMF19"]
        );
        assert_eq!(select("rcd7, MMF9").unwrap(), vec!["MMF9", "RCD7"]);
        assert_eq!(select("EXT*").unwrap(), vec!["EXT-ADJ", "EXT-INV"]);
        assert!(matches!(select("XYZ"), Err(Error::UnknownIdentity(_))));
    }
}
