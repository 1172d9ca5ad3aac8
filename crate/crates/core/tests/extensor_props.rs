use mfcalc::algebra::{BladeIndex, Form, Grassmann, Kind, Multiform, Multivector, Vector};
use mfcalc::extensor::Extensor;
use mfcalc::Error;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn element<K: Kind>(n: usize) -> impl Strategy<Value = Grassmann<K>> {
    prop::collection::vec(-1.0f64..1.0, 1 << n)
        .prop_map(move |c| Grassmann::from_coeffs(n, c).unwrap())
}

fn matrix(n: usize) -> impl Strategy<Value = Extensor<Vector>> {
    prop::collection::vec(-1.0f64..1.0, n * n)
        .prop_map(move |c| Extensor::from_rows(c.chunks(n).map(|r| r.to_vec()).collect()).unwrap())
}

/// Identity plus a perturbation small enough to stay well conditioned.
fn invertible(n: usize) -> impl Strategy<Value = Extensor<Vector>> {
    matrix(n).prop_map(move |t| Extensor::identity(n) + t.scale(0.5 / n as f64))
}

/// Leibniz permutation expansion, independent of the elimination routine.
fn oracle_det(t: &Extensor<Vector>) -> f64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = t.dim();
    perms(n)
        .into_iter()
        .map(|p| {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inv % 2 == 0 { 1.0 } else { -1.0 };
            sign * (0..n).map(|j| t.entry(p[j], j)).product::<f64>()
        })
        .sum()
}

fn close<K: Kind>(a: &Grassmann<K>, b: &Grassmann<K>) -> bool {
    (a.clone() - b.clone()).max_abs() <= TOL
}

fn dim() -> impl Strategy<Value = usize> {
    1usize..=4
}

proptest! {
    #[test]
    fn extension_is_functorial((t, s, x) in dim().prop_flat_map(|n| (matrix(n), matrix(n), element::<Vector>(n)))) {
        let l = t.compose(&s).unwrap().extend(&x).unwrap();
        let r = t.extend(&s.extend(&x).unwrap()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn extension_is_multiplicative((t, x, y) in dim().prop_flat_map(|n| (matrix(n), element::<Vector>(n), element::<Vector>(n)))) {
        let l = t.extend(&x.wedge(&y).unwrap()).unwrap();
        let r = t.extend(&x).unwrap().wedge(&t.extend(&y).unwrap()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn adjoint_commutes_with_extension((t, phi, x) in dim().prop_flat_map(|n| (matrix(n), element::<Form>(n), element::<Vector>(n)))) {
        let l = t.duality_adjoint().extend(&phi).unwrap().pair(&x).unwrap();
        let r = phi.pair(&t.extend(&x).unwrap()).unwrap();
        prop_assert!((l - r).abs() <= TOL);
    }

    #[test]
    fn adjoint_is_an_involution_and_commutes_with_inverse(t in dim().prop_flat_map(invertible)) {
        prop_assert_eq!(t.duality_adjoint().duality_adjoint(), t.clone());
        let a = t.invert().unwrap().duality_adjoint();
        let b = t.duality_adjoint().invert().unwrap();
        prop_assert!((a - b).max_abs() <= TOL);
    }

    #[test]
    fn extension_of_inverse_inverts((t, x) in dim().prop_flat_map(|n| (invertible(n), element::<Vector>(n)))) {
        let back = t.invert().unwrap().extend(&t.extend(&x).unwrap()).unwrap();
        prop_assert!(close(&back, &x));
    }

    #[test]
    fn generalization_is_a_derivation((t, x, y) in dim().prop_flat_map(|n| (matrix(n), element::<Form>(n), element::<Form>(n)))) {
        let t = t.duality_adjoint();
        let l = t.generalize(&x.wedge(&y).unwrap()).unwrap();
        let r = t.generalize(&x).unwrap().wedge(&y).unwrap() + x.wedge(&t.generalize(&y).unwrap()).unwrap();
        prop_assert!(close(&l, &r));
    }

    #[test]
    fn generalized_adjoint_duality((t, phi, x) in dim().prop_flat_map(|n| (matrix(n), element::<Form>(n), element::<Vector>(n)))) {
        let l = t.duality_adjoint().generalize(&phi).unwrap().pair(&x).unwrap();
        let r = phi.pair(&t.generalize(&x).unwrap()).unwrap();
        prop_assert!((l - r).abs() <= TOL);
    }

    #[test]
    fn determinant_law(t in dim().prop_flat_map(matrix)) {
        let n = t.dim();
        let top = BladeIndex((1 << n) - 1);
        let img = t.extend(&Multivector::blade(n, top, 1.0)).unwrap();
        let det = oracle_det(&t);
        prop_assert!((img.coeff(top) - det).abs() <= TOL);
        prop_assert!((t.determinant() - det).abs() <= TOL);
    }

    #[test]
    fn generalization_is_the_derivative_of_extension((t, x) in dim().prop_flat_map(|n| (matrix(n), element::<Vector>(n)))) {
        // d/ds extend(Id + s t) at s = 0, by a symmetric quotient exact on polynomials of degree <= 2 in s
        let n = t.dim();
        let h = 1e-3;
        let plus = (Extensor::identity(n) + t.scale(h)).extend(&x).unwrap();
        let minus = (Extensor::identity(n) - t.scale(h)).extend(&x).unwrap();
        let d = (plus - minus).scale(0.5 / h);
        let g = t.generalize(&x).unwrap();
        prop_assert!((d - g).max_abs() <= 1e-5);
    }
}

#[test]
fn worked_values() {
    let shift = Extensor::<Vector>::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
    let e1 = Multivector::basis(2, 0);
    let e2 = Multivector::basis(2, 1);
    assert_eq!(shift.apply(&e1).unwrap(), e2);
    assert!(shift.apply(&Multivector::zero(2)).unwrap().is_zero());
    let adj = shift.duality_adjoint();
    assert_eq!(
        adj.apply(&Multiform::basis(2, 1)).unwrap(),
        Multiform::basis(2, 0)
    );
    assert!(adj.apply(&Multiform::basis(2, 0)).unwrap().is_zero());
    let e12 = Multivector::blade(2, BladeIndex(0b11), 1.0);
    assert!(shift.generalize(&e12).unwrap().is_zero());
    assert_eq!(
        Extensor::<Vector>::scaled_identity(2, 2.0)
            .extend(&e12)
            .unwrap(),
        e12.scale(4.0)
    );
    for k in 0..=3 {
        let x = Multivector::from_coeffs(3, (0..8).map(|m| m as f64 + 1.0).collect())
            .unwrap()
            .grade_part(k)
            .unwrap();
        assert_eq!(
            Extensor::<Vector>::identity(3).generalize(&x).unwrap(),
            x.scale(k as f64)
        );
    }
    let inv = Extensor::<Form>::diagonal(vec![2.0, 4.0]).invert().unwrap();
    assert_eq!(inv, Extensor::diagonal(vec![0.5, 0.25]));
    let singular = Extensor::<Vector>::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
    assert!(matches!(
        singular.invert(),
        Err(Error::SingularExtensor { .. })
    ));
}
