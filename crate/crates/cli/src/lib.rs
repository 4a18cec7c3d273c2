//! Command-line experiments over the `liegrowth` library.

use liegrowth::extremal::ExtremalError;
use liegrowth::forms::FormError;
use liegrowth::growth::GrowthError;
use liegrowth::lie::LieError;
use liegrowth::numfields::NumberFieldError;
use liegrowth::roots::RootError;
use thiserror::Error;

mod commands;
pub mod config;
pub mod experiments;
pub mod output;

pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    NumberField(#[from] NumberFieldError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 when a computed result fails its check, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 3,
            CliError::Growth(GrowthError::CutoffExceeded { .. } | GrowthError::NormCutoff(_)) => 3,
            CliError::Extremal(ExtremalError::PrimeTooSmall(_)) => 2,
            CliError::Extremal(_) => 3,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
            _ => 2,
        }
    }
}
