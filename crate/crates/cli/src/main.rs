use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mfcalc::verify::{SuiteConfig, DEFAULT_DEGREE, DEFAULT_FD_TOL, DEFAULT_TOL, DEFAULT_TRIALS};
use mfcalc_cli::commands::{self, VerifyArgs, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "mfcalc",
    version,
    about = "Covariant, deformed and relative derivatives of multivector and multiform fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression from a scene file at a point.
    Eval {
        /// Scene file (TOML).
        scene: PathBuf,
        /// For example `nabla(e1, X)` or `dnabla(L, a, wedge(X, Y))`.
        expression: String,
        /// Comma-separated coordinates, for example `0.3,0.7`.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Run the randomized identity suite.
    Verify {
        /// Use the structure, frames and lambda of a scene instead of random ones.
        #[arg(long)]
        scene: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Tolerance for exact-polynomial checks.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Tolerance for checks that use finite differences.
        #[arg(long, default_value_t = DEFAULT_FD_TOL)]
        fd_tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        dims: Vec<usize>,
        /// Polynomial degree bound of random fields.
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: usize,
        /// Ids, ranges (`CDMMF15..19`) or prefixes (`RCD*`), comma-separated.
        #[arg(long)]
        checks: Option<String>,
        /// Write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run the negative controls; every check is expected to fail.
        #[arg(long)]
        mutate: bool,
    },
    /// Describe a catalog identity, or list them all.
    Explain { id: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let result = match cli.command {
        Command::Eval {
            scene,
            expression,
            point,
        } => commands::eval(&scene, &expression, &point, &mut out),
        Command::Verify {
            scene,
            trials,
            tol,
            fd_tol,
            seed,
            dims,
            degree,
            checks,
            json,
            mutate,
        } => {
            let config = SuiteConfig {
                seed,
                trials,
                dims,
                degree,
                tol,
                fd_tol,
                mutate,
                ..SuiteConfig::default()
            };
            commands::verify(
                VerifyArgs {
                    scene,
                    config,
                    checks,
                    json,
                },
                &mut out,
            )
        }
        Command::Explain { id } => commands::explain(id.as_deref(), &mut out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
