use std::fmt;
use std::process::ExitCode;

/// Failure with its stable exit code: 1 I/O, 2 usage, 3 validation.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    /// The machine-readable report was already written.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Usage(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<ising_core::Error> for CliError {
    fn from(e: ising_core::Error) -> Self {
        use ising_core::Error as E;
        match e {
            E::InvalidSpec(_)
            | E::DimensionMismatch { .. }
            | E::SiteOutOfRange { .. }
            | E::TemperatureOutOfRange(_)
            | E::TooLarge { .. }
            | E::InvalidConfig(_) => CliError::Usage(e.to_string()),
            E::Snapshot(_) | E::Parse(_) | E::Decode { .. } | E::Io { .. } | E::Json { .. } | E::Image(_) => {
                CliError::Io(e.to_string())
            }
        }
    }
}

/// Names the flag in a usage error.
pub fn flag_error(flag: &str) -> impl Fn(ising_core::Error) -> CliError + '_ {
    move |e| match CliError::from(e) {
        CliError::Usage(m) => CliError::Usage(format!("{flag}: {m}")),
        other => other,
    }
}
