//! Batch driver for the herzlab engine: reads a TOML run configuration,
//! executes one command and writes `summary.json` plus `<command>.csv`.

pub mod commands;
pub mod config;
pub mod output;

use serde::Serialize;

pub use commands::{execute, Report, Table};
pub use config::{Command, RunConfig};

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] herzlab::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use herzlab::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::Rejected(_)) => 3,
            CliError::Core(E::Divergent(_)) => 4,
            CliError::Core(
                E::InvalidParameter(_)
                | E::Bandwidth { .. }
                | E::InvalidGrid(_)
                | E::NegativeLevel(_)
                | E::LevelTooDeep(_)
                | E::UnsupportedDimension(_)
                | E::DimensionMismatch { .. }
                | E::NonFinite { .. }
                | E::InvalidPartition(_)
                | E::Unsupported(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "rejected",
            4 => "divergence",
            _ => match self {
                CliError::Io(_) => "io",
                _ => "internal",
            },
        }
    }

    pub fn to_object(&self) -> ErrorObject {
        ErrorObject {
            error: ErrorBody {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorObject {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(herzlab::Error::Rejected("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(herzlab::Error::Divergent("x".into())).exit_code(), 4);
        assert_eq!(
            CliError::Core(herzlab::Error::Bandwidth { level: 9, max: 4 }).exit_code(),
            2
        );
        assert_eq!(CliError::Io("disk".into()).exit_code(), 1);
        let obj = serde_json::to_value(CliError::Config("bad".into()).to_object()).unwrap();
        assert_eq!(obj["error"]["kind"], "config");
        assert_eq!(obj["error"]["exit_code"], 2);
    }
}
