use std::fmt;

/// Why a run ended unsuccessfully; each variant owns one exit status.
#[derive(Debug)]
pub enum Failure {
    /// A verification ran to completion and did not pass.
    Verification(String),
    /// Bad flags, bad literals, or parameters outside a result's validity.
    Usage(String),
    /// Quadrature or extrapolation could not deliver a value.
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<distmul::Error> for Failure {
    fn from(e: distmul::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("output error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numeric(format!("output error: {e}"))
    }
}
