//! TOML scene files.
//!
//! ```toml
//! n = 2
//! coordinates = ["x1", "x2"]        # optional, default x1..xn
//! domain = [[-1.0, 1.0], [0.5, 2.0]] # optional, default [-1, 1]^n
//!
//! [gamma]          # Gamma^k_ij keyed "i,j,k", one-based: direction, argument, output
//! "1,2,2" = "1"
//!
//! [fields.X]       # blade -> polynomial; "1", "e12", "eps1", ...
//! e12 = "x1*x2"
//!
//! [directions.a]
//! components = ["1", "x1"]
//!
//! [frames.B]       # vectors[j] = coordinate components of e_j
//! vectors = [["1", "0"], ["x1", "1"]]
//!
//! [lambda.L]       # matrix[k][j] = coefficient of e_k in L(e_j)
//! matrix = [["2", "0"], ["0", "1"]]
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use mfcalc::algebra::{BladeIndex, Form, Grassmann, Kind, Vector};
use mfcalc::connection::ParallelismStructure;
use mfcalc::fields::{
    AnyField, Chart, ExtensorField, FrameField, GradedField, Polynomial, ScalarField, VectorField,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest dimension accepted by the command-line tool.
pub const CLI_MAX_DIM: usize = 6;

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    gamma: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    fields: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    directions: BTreeMap<String, RawDirection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    frames: BTreeMap<String, RawFrame>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    lambda: BTreeMap<String, RawMatrix>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDirection {
    components: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    vectors: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    matrix: Vec<Vec<String>>,
}

/// A loaded scene: chart, parallelism structure and named objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    chart: Arc<Chart>,
    structure: ParallelismStructure,
    fields: BTreeMap<String, AnyField>,
    directions: BTreeMap<String, VectorField>,
    frames: BTreeMap<String, FrameField>,
    lambdas: BTreeMap<String, ExtensorField<Vector>>,
}

impl Scene {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScene =
            toml::from_str(text).map_err(|e| CliError::SceneSyntax(e.message().to_string()))?;
        Self::from_raw(raw)
    }

    /// Canonical TOML that parses back to an equal scene.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_raw()).expect("scene serializes")
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn structure(&self) -> &ParallelismStructure {
        &self.structure
    }

    pub fn field(&self, name: &str) -> Option<&AnyField> {
        self.fields.get(name)
    }

    pub fn direction(&self, name: &str) -> Option<&VectorField> {
        self.directions.get(name)
    }

    pub fn frame(&self, name: &str) -> Option<&FrameField> {
        self.frames.get(name)
    }

    pub fn lambda(&self, name: &str) -> Option<&ExtensorField<Vector>> {
        self.lambdas.get(name)
    }

    pub fn frames(&self) -> impl Iterator<Item = (&String, &FrameField)> {
        self.frames.iter()
    }

    pub fn lambdas(&self) -> impl Iterator<Item = (&String, &ExtensorField<Vector>)> {
        self.lambdas.iter()
    }

    fn from_raw(raw: RawScene) -> Result<Self> {
        let n = raw.n;
        if n == 0 || n > CLI_MAX_DIM {
            return Err(mfcalc::Error::DimensionCap {
                dim: n,
                max: CLI_MAX_DIM,
            }
            .into());
        }
        let names = raw
            .coordinates
            .unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
        for name in &names {
            if !is_identifier(name) {
                return Err(CliError::scene(format!(
                    "coordinate name `{name}` is not an identifier"
                )));
            }
        }
        let domain = match raw.domain {
            Some(d) => d.into_iter().map(|[lo, hi]| (lo, hi)).collect(),
            None => vec![(-1.0, 1.0); n],
        };
        if domain.len() != n {
            return Err(CliError::scene(format!(
                "domain has {} intervals, expected {n}",
                domain.len()
            )));
        }
        let chart = Arc::new(Chart::with_names(names, domain)?);
        let poly = |ctx: &str, text: &str| -> Result<Polynomial> {
            Polynomial::parse(text, chart.names())
                .map_err(|e| CliError::scene(format!("{ctx}: {e}")))
        };

        let mut structure = ParallelismStructure::flat(chart.clone());
        for (key, text) in &raw.gamma {
            let (i, j, k) = gamma_key(key, n)?;
            structure.set(i, j, k, poly(&format!("gamma \"{key}\""), text)?)?;
        }

        let mut taken = Vec::new();
        let mut claim = |name: &str| -> Result<()> {
            if !is_identifier(name) || is_reserved(name) {
                return Err(CliError::scene(format!(
                    "`{name}` cannot be used as a name"
                )));
            }
            if taken.iter().any(|t: &String| t == name) {
                return Err(CliError::scene(format!("name `{name}` is defined twice")));
            }
            taken.push(name.to_string());
            Ok(())
        };

        let mut fields = BTreeMap::new();
        for (name, blades) in &raw.fields {
            claim(name)?;
            fields.insert(
                name.clone(),
                field_from_blades(&chart, name, blades, &poly)?,
            );
        }

        let mut directions = BTreeMap::new();
        for (name, d) in &raw.directions {
            claim(name)?;
            let comps = row(&d.components, n, &format!("direction {name}"))?
                .iter()
                .map(|t| poly(&format!("direction {name}"), t))
                .collect::<Result<Vec<_>>>()?;
            directions.insert(
                name.clone(),
                VectorField::from_components(chart.clone(), comps)?,
            );
        }

        let mut frames = BTreeMap::new();
        for (name, f) in &raw.frames {
            claim(name)?;
            let ctx = format!("frame {name}");
            let vectors = square(&f.vectors, n, &ctx)?
                .iter()
                .map(|v| {
                    let comps = v
                        .iter()
                        .map(|t| poly(&ctx, t))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(VectorField::from_components(chart.clone(), comps)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let frame = FrameField::from_vectors(&vectors)
                .map_err(|e| CliError::scene(format!("{ctx}: {e}")))?;
            frames.insert(name.clone(), frame);
        }

        let mut lambdas = BTreeMap::new();
        for (name, m) in &raw.lambda {
            claim(name)?;
            let ctx = format!("lambda {name}");
            let rows = square(&m.matrix, n, &ctx)?
                .iter()
                .map(|r| r.iter().map(|t| poly(&ctx, t)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let l = ExtensorField::from_rows(chart.clone(), rows)?;
            l.check_invertible()
                .map_err(|e| CliError::scene(format!("{ctx}: {e}")))?;
            lambdas.insert(name.clone(), l);
        }

        Ok(Scene {
            chart,
            structure,
            fields,
            directions,
            frames,
            lambdas,
        })
    }

    fn to_raw(&self) -> RawScene {
        let names = self.chart.names();
        let text = |p: &Polynomial| p.to_string_with(names);
        let n = self.chart.dim();
        let default_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let default_domain = vec![(-1.0, 1.0); n];
        RawScene {
            n,
            coordinates: (names != default_names.as_slice()).then(|| names.to_vec()),
            domain: (self.chart.domain() != default_domain.as_slice()).then(|| {
                self.chart
                    .domain()
                    .iter()
                    .map(|&(lo, hi)| [lo, hi])
                    .collect()
            }),
            gamma: self
                .structure
                .coefficients()
                .map(|(&(i, j, k), p)| (format!("{},{},{}", i + 1, j + 1, k + 1), text(p)))
                .collect(),
            fields: self
                .fields
                .iter()
                .map(|(name, f)| (name.clone(), blades_of(f, &text)))
                .collect(),
            directions: self
                .directions
                .iter()
                .map(|(name, v)| {
                    let comps = v.value().components().expect("grade one");
                    (
                        name.clone(),
                        RawDirection {
                            components: comps.iter().map(text).collect(),
                        },
                    )
                })
                .collect(),
            frames: self
                .frames
                .iter()
                .map(|(name, f)| {
                    let vectors = (0..n)
                        .map(|j| {
                            f.vector(j)
                                .value()
                                .components()
                                .expect("grade one")
                                .iter()
                                .map(text)
                                .collect()
                        })
                        .collect();
                    (name.clone(), RawFrame { vectors })
                })
                .collect(),
            lambda: self
                .lambdas
                .iter()
                .map(|(name, l)| {
                    let matrix = (0..n)
                        .map(|k| (0..n).map(|j| text(l.op().entry(k, j))).collect())
                        .collect();
                    (name.clone(), RawMatrix { matrix })
                })
                .collect(),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Function names and blade literals are resolved before scene names.
pub fn is_reserved(name: &str) -> bool {
    crate::expr::FUNCTIONS.contains(&name) || parse_blade(name).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BladeKind {
    Scalar,
    Vector,
    Form,
}

/// `1`, `e` + ascending one-based digits, or `eps` + ascending digits.
pub fn parse_blade(s: &str) -> Option<(BladeKind, Vec<usize>)> {
    if s == "1" {
        return Some((BladeKind::Scalar, Vec::new()));
    }
    let (kind, digits) = if let Some(d) = s.strip_prefix("eps") {
        (BladeKind::Form, d)
    } else {
        let d = s.strip_prefix('e')?;
        (BladeKind::Vector, d)
    };
    if digits.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    for c in digits.chars() {
        let d = c.to_digit(10)? as usize;
        if d == 0 || out.last().is_some_and(|&l| l >= d - 1) {
            return None;
        }
        out.push(d - 1);
    }
    Some((kind, out))
}

fn gamma_key(key: &str, n: usize) -> Result<(usize, usize, usize)> {
    let bad = || {
        CliError::scene(format!(
            "gamma key \"{key}\" must be \"i,j,k\" with indices in 1..={n}"
        ))
    };
    let idx: Vec<usize> = key
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match idx.as_slice() {
        &[i, j, k] if [i, j, k].iter().all(|&x| (1..=n).contains(&x)) => Ok((i - 1, j - 1, k - 1)),
        _ => Err(bad()),
    }
}

fn row<'a>(r: &'a [String], n: usize, ctx: &str) -> Result<&'a [String]> {
    if r.len() != n {
        return Err(CliError::scene(format!(
            "{ctx}: expected {n} entries, got {}",
            r.len()
        )));
    }
    Ok(r)
}

fn square<'a>(m: &'a [Vec<String>], n: usize, ctx: &str) -> Result<&'a [Vec<String>]> {
    if m.len() != n {
        return Err(CliError::scene(format!(
            "{ctx}: expected {n} rows, got {}",
            m.len()
        )));
    }
    for r in m {
        row(r, n, ctx)?;
    }
    Ok(m)
}

fn field_from_blades(
    chart: &Arc<Chart>,
    name: &str,
    blades: &BTreeMap<String, String>,
    poly: &dyn Fn(&str, &str) -> Result<Polynomial>,
) -> Result<AnyField> {
    let n = chart.dim();
    let ctx = format!("field {name}");
    let mut kind = BladeKind::Scalar;
    let mut coeffs = vec![Polynomial::zero(); 1 << n];
    for (key, text) in blades {
        let (k, indices) = parse_blade(key)
            .ok_or_else(|| CliError::scene(format!("{ctx}: `{key}` is not a blade name")))?;
        if let Some(&i) = indices.iter().find(|&&i| i >= n) {
            return Err(mfcalc::Error::IndexOutOfRange {
                index: i + 1,
                dim: n,
            }
            .into());
        }
        if k != BladeKind::Scalar {
            if kind != BladeKind::Scalar && kind != k {
                return Err(CliError::scene(format!(
                    "{ctx}: mixes multivector and multiform blades"
                )));
            }
            kind = k;
        }
        coeffs[BladeIndex::from_indices(&indices).0 as usize] = poly(&ctx, text)?;
    }
    Ok(match kind {
        BladeKind::Scalar => {
            let p = coeffs.swap_remove(0);
            AnyField::Scalar(ScalarField::new(chart.clone(), p)?)
        }
        BladeKind::Vector => AnyField::Multivector(GradedField::new(
            chart.clone(),
            Grassmann::from_coeffs(n, coeffs)?,
        )?),
        BladeKind::Form => AnyField::Multiform(GradedField::new(
            chart.clone(),
            Grassmann::from_coeffs(n, coeffs)?,
        )?),
    })
}

fn blades_of(f: &AnyField, text: &dyn Fn(&Polynomial) -> String) -> BTreeMap<String, String> {
    fn graded<K: Kind>(
        x: &Grassmann<K, Polynomial>,
        text: &dyn Fn(&Polynomial) -> String,
    ) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> = x
            .iter()
            .filter(|(_, p)| !p.is_empty())
            .map(|(b, p)| (b.name::<K>(), text(p)))
            .collect();
        // a lone scalar key would read back as a scalar field
        if out.keys().all(|k| k == "1") {
            out.insert(BladeIndex::basis(0).name::<K>(), "0".to_string());
        }
        out
    }
    match f {
        AnyField::Scalar(s) => BTreeMap::from([("1".to_string(), text(s.poly()))]),
        AnyField::Multivector(x) => graded::<Vector>(x.value(), text),
        AnyField::Multiform(x) => graded::<Form>(x.value(), text),
    }
}
