use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Rejected before any computation.
    Invalid(String),
    Solver(nlse_core::Error),
    /// A requested state does not exist and `--strict` was given.
    NoSolution(String),
    /// A verification check exceeded its tolerance.
    Verification(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use nlse_core::Error as E;
        let code = match self {
            CliError::Invalid(_) | CliError::Solver(E::Domain(_)) => 2,
            CliError::NoSolution(_) | CliError::Solver(E::NoSolution { .. }) => 4,
            CliError::Solver(_) | CliError::Verification(_) => 3,
            CliError::Output(_) => 1,
        };
        ExitCode::from(code)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid parameters: {m}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::NoSolution(m) => write!(f, "no solution: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl From<nlse_core::Error> for CliError {
    fn from(e: nlse_core::Error) -> Self {
        CliError::Solver(e)
    }
}

pub fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Invalid(msg.into()))
}
