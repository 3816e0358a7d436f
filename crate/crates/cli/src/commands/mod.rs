pub mod evaluate;
pub mod flow;
pub mod probe;
pub mod report;

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sobolev_flow::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return error_code(err);
        }
        if cause.is::<serde_json::Error>() {
            return EXIT_VALIDATION;
        }
    }
    EXIT_OTHER
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::StepFailure { .. }
        | Error::AreaCollapse { .. }
        | Error::AreaGuard { .. }
        | Error::ZeroArea { .. }
        | Error::DegenerateSpeed { .. }
        | Error::CouldNotGeneratePositiveArea { .. } => EXIT_NUMERICAL,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::Io(_) => EXIT_OTHER,
        _ => EXIT_VALIDATION,
    }
}

/// JSON body with the config hash as its first field.
#[derive(Serialize)]
pub struct Stamped<'a, T: Serialize> {
    pub config_hash: &'a str,
    #[serde(flatten)]
    pub body: T,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
