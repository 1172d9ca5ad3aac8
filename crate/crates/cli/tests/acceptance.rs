//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mfcalc::algebra::{BladeIndex, Form, Grassmann, Kind, Multivector, Vector};
use mfcalc::connection::{Covariant, DeformedStructure, ParallelismStructure};
use mfcalc::extensor::Extensor;
use mfcalc::fields::{Chart, ExtensorField, GradedField, Polynomial};
use mfcalc::verify::{catalog, run_suite, Sampler, SuiteConfig};

/// Wall-clock budget for the full suite run through the binary.
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const EXACT_TOL: f64 = 1e-9;
const FD_TOL: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-9;
const FIXTURE_TOL: f64 = 1e-12;
const ORACLE_TRIALS: u64 = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn mfcalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mfcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let json = dir.path().join("report.json");
    let start = Instant::now();
    let o = mfcalc(&[
        "verify",
        "--seed",
        "42",
        "--trials",
        "100",
        "--dims",
        "2,3,4",
        "--tol",
        "1e-9",
        "--json",
        json.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    let report: serde_json::Value = match std::fs::read_to_string(&json)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
    {
        Some(v) => v,
        None => return outcome(false, format!("no report (exit {:?})", o.status.code())),
    };
    let checks = report["checks"].as_array().cloned().unwrap_or_default();
    let exact: Vec<_> = checks.iter().filter(|c| c["fd"] == false).collect();
    let exact_failed: Vec<_> = exact
        .iter()
        .filter(|c| c["pass"] != true)
        .map(|c| c["id"].to_string())
        .collect();
    let worst = exact
        .iter()
        .filter_map(|c| c["max_abs_residual"].as_f64())
        .fold(0.0, f64::max);
    let pass = o.status.code() == Some(0)
        && exact_failed.is_empty()
        && checks.len() == catalog().len()
        && worst <= EXACT_TOL
        && elapsed < SUITE_BUDGET;
    outcome(
        pass,
        format!(
            "{} checks ({} exact), exit {:?}, worst exact residual {worst:.2e}, {:.1}s{}",
            checks.len(),
            exact.len(),
            o.status.code(),
            elapsed.as_secs_f64(),
            if exact_failed.is_empty() {
                String::new()
            } else {
                format!(", failed {exact_failed:?}")
            }
        ),
    )
}

fn criterion_2() -> Outcome {
    let ids: Vec<String> = catalog()
        .iter()
        .filter(|i| i.fd)
        .map(|i| i.id.to_string())
        .collect();
    let config = SuiteConfig {
        trials: 100,
        fd_tol: FD_TOL,
        checks: Some(ids.clone()),
        ..SuiteConfig::default()
    };
    match run_suite(&config) {
        Ok(r) => {
            let worst = r
                .checks
                .iter()
                .map(|c| c.max_abs_residual)
                .fold(0.0, f64::max);
            let failed: Vec<_> = r
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.id.clone())
                .collect();
            outcome(
                r.pass && worst <= FD_TOL,
                format!(
                    "{} ({}) at 100 trials, worst residual {worst:.2e}{}",
                    ids.len(),
                    ids.join(", "),
                    fmt_failed(&failed)
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn fmt_failed(failed: &[String]) -> String {
    if failed.is_empty() {
        String::new()
    } else {
        format!(", failed {failed:?}")
    }
}

fn wedge_at<K: Kind>(fields: &[GradedField<K>], p: &[f64]) -> Grassmann<K> {
    fields
        .iter()
        .fold(Grassmann::scalar(p.len(), 1.0), |acc, f| {
            acc.wedge(&f.eval(p).unwrap()).unwrap()
        })
}

fn axiom_residual<K: Covariant>(n: usize, k: usize, seed: u64) -> f64
where
    K::Dual: Covariant,
{
    let mut s = Sampler::new(Arc::new(Chart::new(n).unwrap()), seed, 3);
    let structure = s.structure();
    let a = s.vector::<Vector>();
    let x = s.homogeneous::<K>(k);
    let tests: Vec<GradedField<K::Dual>> = (0..k).map(|_| s.vector::<K::Dual>()).collect();
    let p = s.point();
    let axiom = structure.axiom_deriv(&a, &x, &tests, &p).unwrap();
    let split = structure.cov_deriv(&a, &x).unwrap().eval(&p).unwrap();
    (axiom - wedge_at(&tests, &p).pair(&split).unwrap()).abs()
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=4 {
        for k in 1..=n {
            for seed in 0..ORACLE_TRIALS {
                let seed = seed + 1000 * (n * 10 + k) as u64;
                worst = worst.max(axiom_residual::<Vector>(n, k, seed));
                worst = worst.max(axiom_residual::<Form>(n, k, seed));
                cases += 2;
            }
        }
    }
    outcome(
        worst <= ORACLE_TOL,
        format!("{cases} axiom/split comparisons, n <= 4, k = 1..n, worst {worst:.2e}"),
    )
}

fn perm_sign(a: u32, b: u32) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let list: Vec<u32> = (0..32)
        .filter(|i| a >> i & 1 == 1)
        .chain((0..32).filter(|i| b >> i & 1 == 1))
        .collect();
    let inv = (0..list.len())
        .flat_map(|i| (i + 1..list.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| list[i] > list[j])
        .count();
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn rev_sign(m: u32) -> f64 {
    let k = m.count_ones();
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Blade tables at n <= 3 against the adjoint relations, solved by brute
/// force with permutation-sign wedges.
fn criterion_4() -> Outcome {
    let mut mismatches = 0;
    let mut entries = 0;
    for n in 1..=3usize {
        let size = 1u32 << n;
        let v = |m: u32| Grassmann::<Vector>::blade(n, BladeIndex(m), 1.0);
        let f = |m: u32| Grassmann::<Form>::blade(n, BladeIndex(m), 1.0);
        for a in 0..size {
            for b in 0..size {
                // wedge and pairing
                let mut want = vec![0.0; size as usize];
                if a & b == 0 {
                    want[(a | b) as usize] = perm_sign(a, b);
                }
                let checks = [
                    v(a).wedge(&v(b)).unwrap().coeffs() == want.as_slice(),
                    f(a).wedge(&f(b)).unwrap().coeffs() == want.as_slice(),
                    f(a).pair(&v(b)).unwrap() == if a == b { 1.0 } else { 0.0 },
                ];
                // <<Phi,X|, e^c> = <X, rev(Phi) ^ e^c> and the three mirror relations
                let mut lc_fv = vec![0.0; size as usize];
                let mut lc_vf = vec![0.0; size as usize];
                let mut rc_fv = vec![0.0; size as usize];
                let mut rc_vf = vec![0.0; size as usize];
                for c in 0..size {
                    let hit = |m: u32, s: f64| if m == b { s } else { 0.0 };
                    let left = if a & c == 0 {
                        hit(a | c, rev_sign(a) * perm_sign(a, c))
                    } else {
                        0.0
                    };
                    let right = if a & c == 0 {
                        hit(a | c, rev_sign(a) * perm_sign(c, a))
                    } else {
                        0.0
                    };
                    lc_fv[c as usize] = left;
                    lc_vf[c as usize] = left;
                    rc_fv[c as usize] = right;
                    rc_vf[c as usize] = right;
                }
                // operands: A is blade a, B is blade b of the opposite kind
                let contractions = [
                    f(a).left_contract(&v(b)).unwrap().coeffs() == lc_fv.as_slice(),
                    v(a).left_contract(&f(b)).unwrap().coeffs() == lc_vf.as_slice(),
                    v(b).right_contract(&f(a)).unwrap().coeffs() == rc_fv.as_slice(),
                    f(b).right_contract(&v(a)).unwrap().coeffs() == rc_vf.as_slice(),
                ];
                for ok in checks.iter().chain(&contractions) {
                    entries += 1;
                    if !ok {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{entries} table entries over all blade pairs at n = 1..3, {mismatches} mismatches"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut results: Vec<(&str, f64)> = Vec::new();
    let c2 = Arc::new(Chart::new(2).unwrap());
    let gamma =
        ParallelismStructure::new(c2.clone(), [((0, 1, 1), Polynomial::constant(1.0))]).unwrap();
    let e1 = GradedField::<Vector>::basis(c2.clone(), 0).unwrap();
    let p = [0.3, 0.7];

    let eps2 = GradedField::<Form>::basis(c2.clone(), 1).unwrap();
    let got = gamma.cov_deriv(&e1, &eps2).unwrap().eval(&p).unwrap();
    results.push((
        "nabla_e1 eps2 = -eps2",
        (got + eps2.eval(&p).unwrap()).max_abs(),
    ));

    let e12 = GradedField::<Vector>::blade(c2.clone(), BladeIndex(0b11), Polynomial::constant(1.0))
        .unwrap();
    let got = gamma.cov_deriv(&e1, &e12).unwrap().eval(&p).unwrap();
    results.push((
        "nabla_e1 e12 = e12",
        (got - e12.eval(&p).unwrap()).max_abs(),
    ));

    let strip = Arc::new(Chart::with_domain(vec![(1.0, 2.0), (-1.0, 1.0)]).unwrap());
    let x1 = Polynomial::variable(0);
    let lambda = ExtensorField::from_rows(
        strip.clone(),
        vec![
            vec![x1.clone(), Polynomial::zero()],
            vec![Polynomial::zero(), x1],
        ],
    )
    .unwrap();
    let d = DeformedStructure::new(ParallelismStructure::flat(strip.clone()), lambda).unwrap();
    let a = GradedField::<Vector>::basis(strip.clone(), 0).unwrap();
    let mut worst = 0.0f64;
    for q in [[1.0, 0.0], [1.25, -0.5], [1.5, 0.3], [2.0, 1.0]] {
        let got = d.deriv(&a, &a, &q).unwrap();
        let want = Multivector::basis(2, 0).scale(-1.0 / q[0]);
        worst = worst.max((got - want).max_abs());
    }
    results.push(("deformed x1 Id: -(1/x1) e1", worst));

    let e12v = Multivector::blade(2, BladeIndex(0b11), 1.0);
    let got = Extensor::<Vector>::scaled_identity(2, 2.0)
        .extend(&e12v)
        .unwrap();
    results.push((
        "extend(2 Id, e12) = 4 e12",
        (got - e12v.scale(4.0)).max_abs(),
    ));

    let mut worst = 0.0f64;
    for n in 1..=4 {
        let x = Multivector::from_coeffs(n, (0..1 << n).map(|m| 0.5 + m as f64).collect()).unwrap();
        for k in 0..=n {
            let xk = x.grade_part(k).unwrap();
            let got = Extensor::<Vector>::identity(n).generalize(&xk).unwrap();
            worst = worst.max((got - xk.scale(k as f64)).max_abs());
        }
    }
    results.push(("generalize(Id, X^k) = k X^k", worst));

    let failed: Vec<_> = results
        .iter()
        .filter(|(_, r)| !(*r <= FIXTURE_TOL))
        .map(|(n, r)| format!("{n}: {r:.2e}"))
        .collect();
    let worst = results.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    outcome(
        failed.is_empty(),
        format!(
            "{} fixtures, worst deviation {worst:.2e}{}",
            results.len(),
            fmt_failed(&failed)
        ),
    )
}

fn criterion_6() -> Outcome {
    let config = SuiteConfig {
        mutate: true,
        ..SuiteConfig::default()
    };
    match run_suite(&config) {
        Ok(r) => {
            let survivors: Vec<_> = r
                .checks
                .iter()
                .filter(|c| c.pass)
                .map(|c| c.id.clone())
                .collect();
            outcome(
                survivors.is_empty() && r.checks.len() == catalog().len(),
                format!(
                    "{} of {} mutation variants fail{}",
                    r.failed,
                    r.checks.len(),
                    if survivors.is_empty() {
                        String::new()
                    } else {
                        format!(", survivors {survivors:?}")
                    }
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str, threads: Option<&str>| -> Option<Vec<u8>> {
        let path = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mfcalc"));
        cmd.args([
            "verify",
            "--seed",
            "42",
            "--trials",
            "25",
            "--json",
            path.to_str().unwrap(),
        ]);
        if let Some(t) = threads {
            cmd.env("RAYON_NUM_THREADS", t);
        }
        cmd.output().ok()?;
        std::fs::read(path).ok()
    };
    let a = run("a.json", None);
    let b = run("b.json", None);
    let serial = run("serial.json", Some("1"));
    let wide = run("wide.json", Some("8"));
    match (a, b, serial, wide) {
        (Some(a), Some(b), Some(s), Some(w)) => {
            let same = a == b && a == s && a == w;
            outcome(same, format!("4 runs (default, default, 1 thread, 8 threads), {} bytes each, identical: {same}", a.len()))
        }
        _ => outcome(false, "a run produced no report"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "identity suite on exact paths at seed 42 under 60 s",
            criterion_1,
        ),
        ("finite-difference paths at 1e-6", criterion_2),
        (
            "axiom form agrees with split form on every grade",
            criterion_3,
        ),
        (
            "exhaustive blade tables against the adjoint oracle",
            criterion_4,
        ),
        ("hand-derived fixtures to 1e-12", criterion_5),
        ("every mutation variant fails", criterion_6),
        ("byte-identical reports under concurrency", criterion_7),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
