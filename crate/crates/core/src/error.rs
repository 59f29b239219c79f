use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational {0:?}: expected \"p/q\" or \"p\"")]
    MalformedRational(String),

    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("level k={k} out of range for n={n}")]
    LevelOutOfRange { n: usize, k: usize },

    #[error("array {0:?} is not a 0/1 array")]
    NotHardcore(Vec<u32>),

    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate t={0}: a normalization 1 - t^K vanishes")]
    DegenerateT(String),

    #[error("configurations lie in different sectors")]
    SectorMismatch,

    #[error("site {site} is empty; nothing to activate")]
    EmptySite { site: usize },

    #[error("spectral parameter z={z} hits a pole of the fusion normalization")]
    FusionPole { z: String },

    #[error("Fock trace denominator 1 - q^{beta} z vanishes")]
    TracePole { beta: i64 },

    #[error("odd residual power q^{0} after gauge; q^2 = t substitution impossible")]
    OddQPower(i64),

    #[error("generator kernel has dimension {0}, expected 1")]
    KernelDimension(usize),

    #[error("t = 1 is not allowed here")]
    TEqualsOne,

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
