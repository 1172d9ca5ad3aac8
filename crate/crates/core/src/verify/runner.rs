use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::catalog::{self, Identity};
use super::checks::{self, Sides, Trial};
use super::random::Sampler;
use crate::algebra::Vector;
use crate::connection::ParallelismStructure;
use crate::fields::{Chart, ExtensorField, FrameField};
use crate::{Error, Result, MAX_DIM};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_FD_TOL: f64 = 1e-6;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_DEGREE: usize = 3;
pub const DEFAULT_DIMS: [usize; 3] = [2, 3, 4];
/// Redraws allowed for a trial whose random operator came out singular.
pub const MAX_ATTEMPTS: usize = 8;

/// Fixed data replacing random draws, typically loaded from a scene.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    /// Replaces the random structure; also fixes the chart and dimension.
    pub structure: Option<ParallelismStructure>,
    pub lambda: Option<ExtensorField<Vector>>,
    /// Used in rotation instead of random frames.
    pub frames: Vec<FrameField>,
}

impl Overrides {
    fn chart(&self) -> Option<&Arc<Chart>> {
        self.structure.as_ref().map(|s| s.chart())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub id: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub degree: usize,
    pub tolerance: f64,
    pub fd: bool,
}

impl CheckSpec {
    /// Default check settings for `id` with the tolerance of its tier.
    pub fn new(id: &str) -> Result<Self> {
        let entry = catalog::lookup(id)?;
        Ok(CheckSpec {
            id: entry.id.to_string(),
            dims: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            degree: DEFAULT_DEGREE,
            tolerance: if entry.fd {
                DEFAULT_FD_TOL
            } else {
                DEFAULT_TOL
            },
            fd: entry.fd,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimReport {
    pub dim: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub worst_trial: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub fd: bool,
    pub trials: usize,
    pub tolerance: f64,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub pass: bool,
    pub seed: u64,
    pub mutated: bool,
    pub dims: Vec<DimReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub degree: usize,
    pub tol: f64,
    pub fd_tol: f64,
    /// `None` runs the whole catalog.
    pub checks: Option<Vec<String>>,
    pub mutate: bool,
    pub overrides: Overrides,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: DEFAULT_TRIALS,
            dims: DEFAULT_DIMS.to_vec(),
            degree: DEFAULT_DEGREE,
            tol: DEFAULT_TOL,
            fd_tol: DEFAULT_FD_TOL,
            checks: None,
            mutate: false,
            overrides: Overrides::default(),
        }
    }
}

impl SuiteConfig {
    /// Rejects empty or over-cap dimension lists, zero trials and bad tolerances.
    pub fn validate(&self, dim_cap: usize) -> Result<()> {
        let cap = dim_cap.min(MAX_DIM);
        if self.dims.is_empty() {
            return Err(Error::Config("no dimensions selected".into()));
        }
        for &d in &self.dims {
            if d == 0 || d > cap {
                return Err(Error::DimensionCap { dim: d, max: cap });
            }
        }
        if let Some(c) = self.overrides.chart() {
            if c.dim() > cap {
                return Err(Error::DimensionCap {
                    dim: c.dim(),
                    max: cap,
                });
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        for (name, t) in [("tol", self.tol), ("fd-tol", self.fd_tol)] {
            if !(t >= 0.0) || t.is_infinite() {
                return Err(Error::Config(format!(
                    "{name} must be a finite non-negative number"
                )));
            }
        }
        if let Some(ids) = &self.checks {
            for id in ids {
                catalog::lookup(id)?;
            }
        }
        Ok(())
    }

    fn selected(&self) -> Result<Vec<&'static Identity>> {
        match &self.checks {
            None => Ok(catalog::catalog().iter().collect()),
            Some(ids) => {
                let mut out: Vec<&'static Identity> = ids
                    .iter()
                    .map(|id| catalog::lookup(id))
                    .collect::<Result<_>>()?;
                out.sort_by_key(|e| catalog::catalog().iter().position(|c| c.id == e.id));
                out.dedup_by_key(|e| e.id);
                Ok(out)
            }
        }
    }

    /// Dimensions actually run: a scene structure pins its own.
    fn effective_dims(&self) -> Vec<usize> {
        match self.overrides.chart() {
            Some(c) => vec![c.dim()],
            None => self.dims.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub tol: f64,
    pub fd_tol: f64,
    pub mutate: bool,
    pub pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckReport>,
    /// Kept out of the machine-readable report so it stays byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:>4} {:>7} {:>10} {:>12} {:>12}  result",
            "check", "tier", "trials", "tol", "max |res|", "max rel"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<12} {:>4} {:>7} {:>10.1e} {:>12.3e} {:>12.3e}  {}{}",
                c.id,
                if c.fd { "fd" } else { "exact" },
                c.trials,
                c.tolerance,
                c.max_abs_residual,
                c.max_rel_residual,
                if c.pass { "PASS" } else { "FAIL" },
                c.error
                    .as_deref()
                    .map(|e| format!(" ({e})"))
                    .unwrap_or_default(),
            );
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, seed {}, {:.2}s{}",
            self.passed,
            self.failed,
            self.seed,
            self.wall_time.as_secs_f64(),
            if self.mutate { ", mutation mode" } else { "" }
        );
        s
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one attempt of one trial.
pub fn trial_seed(seed: u64, id: &str, dim: usize, trial: usize, attempt: usize) -> u64 {
    [fnv1a(id), dim as u64, trial as u64, attempt as u64]
        .into_iter()
        .fold(splitmix(seed), |h, x| splitmix(h ^ x))
}

/// Evaluates both sides of `id` once, redrawing degenerate data.
pub fn evaluate(
    id: &str,
    chart: &Arc<Chart>,
    seed: u64,
    trial: usize,
    degree: usize,
    mutate: bool,
    overrides: &Overrides,
) -> Result<Sides> {
    let entry = catalog::lookup(id)?;
    let check = checks::lookup(entry.id).ok_or_else(|| Error::UnknownIdentity(id.into()))?;
    let mut last = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let mut g = Sampler::new(
            chart.clone(),
            trial_seed(seed, entry.id, chart.dim(), trial, attempt),
            degree,
        );
        let s = match &overrides.structure {
            Some(s) => s.clone(),
            None => g.structure(),
        };
        let a = g.vector::<Vector>();
        let p = g.point();
        let mut t = Trial {
            g,
            s,
            a,
            p,
            index: trial,
            mutate,
            overrides,
        };
        match check(&mut t) {
            Ok(sides) => return Ok(sides),
            Err(e) if checks::is_degenerate(&e) => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_ATTEMPTS,
        reason: last,
    })
}

fn residuals(s: &Sides) -> Result<(f64, f64)> {
    if s.lhs.len() != s.rhs.len() {
        return Err(Error::DimensionMismatch {
            left: s.lhs.len(),
            right: s.rhs.len(),
        });
    }
    let mut abs = 0.0f64;
    let mut scale = 0.0f64;
    for (l, r) in s.lhs.iter().zip(&s.rhs) {
        let d = (l - r).abs();
        // NaN poisons the maximum so it can never pass
        abs = if d.is_nan() || abs.is_nan() {
            f64::NAN
        } else {
            abs.max(d)
        };
        scale = scale.max(l.abs()).max(r.abs());
    }
    let rel = if abs == 0.0 {
        0.0
    } else {
        abs / scale.max(f64::MIN_POSITIVE)
    };
    Ok((abs, rel))
}

fn chart_for(dim: usize, overrides: &Overrides) -> Result<Arc<Chart>> {
    match overrides.chart() {
        Some(c) => Ok(c.clone()),
        None => Ok(Arc::new(Chart::new(dim)?)),
    }
}

fn run_dim(
    spec: &CheckSpec,
    dim: usize,
    seed: u64,
    mutate: bool,
    ov: &Overrides,
) -> Result<DimReport> {
    let chart = chart_for(dim, ov)?;
    let mut report = DimReport {
        dim: chart.dim(),
        max_abs_residual: 0.0,
        max_rel_residual: 0.0,
        worst_trial: 0,
    };
    for trial in 0..spec.trials {
        let sides = evaluate(&spec.id, &chart, seed, trial, spec.degree, mutate, ov)?;
        let (abs, rel) = residuals(&sides)?;
        if abs.is_nan() || abs > report.max_abs_residual {
            report.max_abs_residual = abs;
            report.worst_trial = trial;
        }
        if rel.is_nan() || rel > report.max_rel_residual {
            report.max_rel_residual = rel;
        }
        if report.max_abs_residual.is_nan() {
            break;
        }
    }
    Ok(report)
}

/// Runs one check over its dimensions. Degenerate draws and engine errors
/// propagate; [`run_suite`] records them as failures.
pub fn run_check(
    spec: &CheckSpec,
    seed: u64,
    mutate: bool,
    overrides: &Overrides,
) -> Result<CheckReport> {
    let entry = catalog::lookup(&spec.id)?;
    if spec.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let dims = match overrides.chart() {
        Some(c) => vec![c.dim()],
        None => spec.dims.clone(),
    };
    let per_dim = dims
        .iter()
        .map(|&d| run_dim(spec, d, seed, mutate, overrides))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(entry, spec, seed, mutate, per_dim, None))
}

fn summarize(
    entry: &Identity,
    spec: &CheckSpec,
    seed: u64,
    mutate: bool,
    dims: Vec<DimReport>,
    error: Option<String>,
) -> CheckReport {
    let fold = |f: fn(&DimReport) -> f64| {
        dims.iter().map(f).fold(0.0f64, |m, x| {
            if x.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(x)
            }
        })
    };
    let max_abs = fold(|d| d.max_abs_residual);
    let max_rel = fold(|d| d.max_rel_residual);
    CheckReport {
        id: entry.id.to_string(),
        fd: entry.fd,
        trials: spec.trials,
        tolerance: spec.tolerance,
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        pass: error.is_none() && max_abs <= spec.tolerance,
        seed,
        mutated: mutate,
        dims,
        error,
    }
}

/// Runs the selected checks concurrently, one task per (check, dimension).
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate(MAX_DIM)?;
    let start = Instant::now();
    let entries = config.selected()?;
    let dims = config.effective_dims();
    let specs: Vec<CheckSpec> = entries
        .iter()
        .map(|e| CheckSpec {
            id: e.id.to_string(),
            dims: dims.clone(),
            trials: config.trials,
            degree: config.degree,
            tolerance: if e.fd { config.fd_tol } else { config.tol },
            fd: e.fd,
        })
        .collect();
    let tasks: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|c| dims.iter().map(move |&d| (c, d)))
        .collect();
    let results: Vec<Result<DimReport>> = tasks
        .par_iter()
        .map(|&(c, d)| run_dim(&specs[c], d, config.seed, config.mutate, &config.overrides))
        .collect();

    let mut checks = Vec::with_capacity(specs.len());
    let mut results = results.into_iter();
    for (entry, spec) in entries.iter().zip(&specs) {
        let mut per_dim = Vec::new();
        let mut error = None;
        for r in results.by_ref().take(dims.len()) {
            match r {
                Ok(d) => per_dim.push(d),
                Err(e) => {
                    error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        checks.push(summarize(
            entry,
            spec,
            config.seed,
            config.mutate,
            per_dim,
            error,
        ));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(SuiteReport {
        seed: config.seed,
        trials: config.trials,
        dims,
        tol: config.tol,
        fd_tol: config.fd_tol,
        mutate: config.mutate,
        pass: passed == checks.len(),
        passed,
        failed: checks.len() - passed,
        checks,
        wall_time: start.elapsed(),
    })
}
