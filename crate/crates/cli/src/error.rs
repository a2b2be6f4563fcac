use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot load mesh: {0}")]
    Mesh(nccurl::Error),

    #[error("{0}")]
    Failed(String),

    #[error(transparent)]
    Core(#[from] nccurl::Error),

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Mesh(_) | Self::Core(nccurl::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}
