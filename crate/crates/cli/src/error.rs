use std::fmt;
use std::process::ExitCode;

use evochess::arena::ArenaError;
use evochess::epd::EpdError;
use evochess::eval::ParamError;
use evochess::expert::ExpertError;
use evochess::ga::GaError;

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Backend(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
            CliError::Backend(m) => write!(f, "backend error: {m}"),
        }
    }
}

impl From<ExpertError> for CliError {
    fn from(e: ExpertError) -> Self {
        match e {
            ExpertError::Uci(_) => CliError::Backend(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<GaError> for CliError {
    fn from(e: GaError) -> Self {
        match e {
            GaError::Config(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<ArenaError> for CliError {
    fn from(e: ArenaError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EpdError> for CliError {
    fn from(e: EpdError) -> Self {
        CliError::Data(e.to_string())
    }
}
