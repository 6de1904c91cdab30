use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency {freq_hz} Hz outside window [{lo_hz}, {hi_hz}] Hz")]
    OutOfRange { freq_hz: f64, lo_hz: f64, hi_hz: f64 },

    #[error("degenerate link geometry: 3D distance is zero")]
    DegenerateGeometry,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid absorption spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("spectrum parse error on line {line}: {reason}")]
    SpectrumParse { line: usize, reason: String },

    #[error("distances must satisfy r0 <= x1 <= x2 <= ... (got {0})")]
    UnorderedDistances(String),

    #[error("links are never blocked (blocker density is zero); blockage duration undefined")]
    NeverBlocked,

    #[error("singular matrix in switch-chain fundamental matrix")]
    SingularMatrix,

    #[error("capacity of the single-connectivity baseline is zero; gain undefined")]
    ZeroBaseline,

    #[error("simulation region too small: {insufficient} of {trials} trials had fewer than {needed} APs; enlarge the region")]
    InconclusiveRegion {
        insufficient: usize,
        trials: usize,
        needed: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
