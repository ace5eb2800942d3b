use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid {0}")]
    Validation(String),
    #[error("aborted: {0}")]
    Divergence(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    /// Classifies a core error raised while handling config section `section`.
    pub fn field(section: &str, err: gpe_core::Error) -> Self {
        use gpe_core::Error as E;
        match err {
            E::Divergence { .. } | E::PicardNotConverged { .. } => CliError::Divergence(err.to_string()),
            E::InvalidParameter { name, reason } => CliError::Validation(format!("{section}.{name}: {reason}")),
            E::BetaOutOfRange(_) => CliError::Validation(format!("{section}.beta: {err}")),
            E::InvalidDimension(_) => CliError::Validation(format!("{section}.dim: {err}")),
            E::InvalidModeCount(_) => CliError::Validation(format!("{section}.n_modes: {err}")),
            E::InvalidQuadFactor(_) | E::QuadratureTooLarge(_) => {
                CliError::Validation(format!("{section}.quad_factor: {err}"))
            }
            E::GridTooLarge(_) => CliError::Validation(format!("{section}.n_modes: {err}")),
            other => CliError::Validation(format!("{section}: {other}")),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
