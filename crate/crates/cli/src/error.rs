use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Numeric(#[from] mtb_dqm::error::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration problems, 3 for instability, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        use mtb_dqm::error::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(E::Config(_) | E::Domain(_)) => 2,
            CliError::Numeric(E::NonFiniteState { .. }) => 3,
            _ => 4,
        }
    }
}

pub fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}
