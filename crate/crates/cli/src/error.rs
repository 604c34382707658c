use thiserror::Error;

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_ACCURACY: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    /// Flags that parse but do not make sense together.
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] fermi_core::Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use fermi_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            // non-convergence and failed internal checks are numerical
            // problems rather than bad input
            CliError::Core(E::Accuracy { .. } | E::Consistency(_) | E::Bracket { .. }) => EXIT_ACCURACY,
            CliError::Core(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_DOMAIN,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
