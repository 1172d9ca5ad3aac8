use std::io::Write;
use std::path::{Path, PathBuf};

use mfcalc::verify::{self, Overrides, SuiteConfig};

use crate::error::{CliError, Result};
use crate::expr;
use crate::scene::{Scene, CLI_MAX_DIM};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn eval(scene: &Path, expression: &str, point: &str, out: &mut dyn Write) -> Result<i32> {
    let scene = Scene::load(scene)?;
    let point = expr::parse_point(point)?;
    let text = expr::evaluate(&scene, expression, &point)?;
    writeln!(out, "{text}").map_err(|e| io_error("stdout", e))?;
    Ok(EXIT_OK)
}

#[derive(Clone, Debug)]
pub struct VerifyArgs {
    pub scene: Option<PathBuf>,
    pub config: SuiteConfig,
    pub checks: Option<String>,
    pub json: Option<PathBuf>,
}

/// Runs the suite; exit 0 iff every selected check passes.
pub fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut config = args.config;
    if let Some(sel) = &args.checks {
        config.checks = Some(verify::select(sel)?.into_iter().map(String::from).collect());
    }
    if let Some(path) = &args.scene {
        config.overrides = scene_overrides(&Scene::load(path)?);
    }
    config.validate(CLI_MAX_DIM)?;
    let report = verify::run_suite(&config)?;
    write!(out, "{}", report.table()).map_err(|e| io_error("stdout", e))?;
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json()).map_err(|e| io_error(path, e))?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
}

/// A scene pins the structure and dimension; its first lambda (by name)
/// replaces random deformations and its frames replace random frames.
pub fn scene_overrides(scene: &Scene) -> Overrides {
    Overrides {
        structure: Some(scene.structure().clone()),
        lambda: scene.lambdas().next().map(|(_, l)| l.clone()),
        frames: scene.frames().map(|(_, f)| f.clone()).collect(),
    }
}

pub fn explain(id: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let text = match id {
        Some(id) => describe(verify::lookup(id)?),
        None => verify::catalog()
            .iter()
            .map(|i| format!("{:<12} {}\n", i.id, i.statement))
            .collect(),
    };
    write!(out, "{text}").map_err(|e| io_error("stdout", e))?;
    Ok(EXIT_OK)
}

fn describe(i: &verify::Identity) -> String {
    let tier = if i.fd {
        format!(
            "finite differences (default tolerance {:e})",
            verify::DEFAULT_FD_TOL
        )
    } else {
        format!(
            "exact polynomial (default tolerance {:e})",
            verify::DEFAULT_TOL
        )
    };
    format!(
        "{}\n  statement: {}\n  anchor:    {}\n  lhs:       {}\n  rhs:       {}\n  tier:      {}\n  mutation:  {}\n",
        i.id, i.statement, i.formula, i.lhs, i.rhs, tier, i.mutation
    )
}

fn io_error(path: impl AsRef<Path>, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.as_ref().to_path_buf(),
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explain_prints_statement_and_sides() {
        let mut out = Vec::new();
        explain(Some("cdmmf15"), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("CDMMF15\n"));
        assert!(text.contains("Leibniz rule"));
        assert!(text.contains("anchor:    a <Phi, X> = <nabla_a Phi, X> + <Phi, nabla_a X>"));
        assert!(explain(Some("XYZ"), &mut Vec::new()).is_err());
    }

    #[test]
    fn explain_without_id_lists_the_catalog() {
        let mut out = Vec::new();
        explain(None, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap().lines().count(),
            verify::catalog().len()
        );
    }
}
