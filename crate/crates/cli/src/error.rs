use thiserror::Error;

/// Failures of the pipeline, each with a machine-readable category and a
/// distinct exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Edelstein(String),
    #[error("{0}")]
    InvariantRect(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    Sampling(String),
    #[error("{0}")]
    MissingInput(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Validation(_) => "validation",
            CliError::Edelstein(_) => "edelstein",
            CliError::InvariantRect(_) => "invariant_rect",
            CliError::Convergence(_) => "convergence",
            CliError::Sampling(_) => "sampling",
            CliError::MissingInput(_) => "missing_input",
            CliError::Io(_) => "io",
            CliError::Check(_) => "check",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Edelstein(_) => 4,
            CliError::InvariantRect(_) => 5,
            CliError::Convergence(_) => 6,
            CliError::Sampling(_) => 7,
            CliError::MissingInput(_) => 8,
            CliError::Io(_) => 9,
            CliError::Check(_) => 10,
        }
    }
}

impl From<fif_core::Error> for CliError {
    fn from(e: fif_core::Error) -> Self {
        use fif_core::Error as E;
        let msg = e.to_string();
        match e {
            E::NotEdelstein(_) => CliError::Edelstein(msg),
            E::NoInvariantRect { .. } => CliError::InvariantRect(msg),
            E::NotConverged { .. } | E::LeftContinuousSpace { .. } => CliError::Convergence(msg),
            E::Undersampled { .. } => CliError::Sampling(msg),
            E::InvalidScales(_) => CliError::Config(msg),
            _ => CliError::Validation(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
