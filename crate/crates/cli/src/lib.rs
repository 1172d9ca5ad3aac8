//! Command-line front end: scene files, expression evaluation and the
//! identity suite.

pub mod commands;
pub mod error;
pub mod expr;
pub mod scene;

pub use error::{CliError, Result};
pub use scene::Scene;
