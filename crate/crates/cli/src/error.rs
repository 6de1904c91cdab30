use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] thzmc::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("config {path}: {source}")]
    ConfigParse { path: PathBuf, source: toml::de::Error },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(
        "cannot load spectrum file {path}: {source}\n\
         expected plain text, one `frequency_hz<TAB>k_abs_per_m` pair per line, \
         frequencies strictly increasing, `#` starts a comment line"
    )]
    Spectrum { path: PathBuf, source: thzmc::Error },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("plot scripts need CSV files that do not exist: {}", .0.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "))]
    MissingCsv(Vec<PathBuf>),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
