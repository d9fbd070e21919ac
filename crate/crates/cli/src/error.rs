use std::fmt;

/// Exit code 1: user, configuration or schema error.
pub const EXIT_USER: u8 = 1;
/// Exit code 2: numerical, statistical or I/O failure.
pub const EXIT_FAILURE: u8 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn user(message: impl Into<String>) -> Self {
        Self { code: EXIT_USER, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Self { code: EXIT_FAILURE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<mmqi::Error> for CliError {
    fn from(e: mmqi::Error) -> Self {
        use mmqi::Error as E;
        let code = match e {
            E::InvalidArgument(_) | E::InvalidParams(_) | E::Parse { .. } => EXIT_USER,
            _ => EXIT_FAILURE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::failure(format!("I/O error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::failure(format!("JSON serialization failed: {e}"))
    }
}
