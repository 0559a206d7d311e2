use std::io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 success, 2 input error, 3 resource guard, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<hcube_core::Error> for CliError {
    fn from(e: hcube_core::Error) -> Self {
        use hcube_core::Error as E;
        match e {
            E::Resource { .. } => CliError::Resource(e.to_string()),
            E::Verification(_) => CliError::Verification(e.to_string()),
            E::Domain(_) | E::NotInImage(_) | E::Solver(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<crate::format::ParseError> for CliError {
    fn from(e: crate::format::ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}
