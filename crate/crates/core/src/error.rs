use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("L = {0} must be at least 8 and divisible by 4")]
    BadSubchannelCount(usize),
    #[error("overlap {overlap} is below the minimum of 3")]
    OverlapTooShort { overlap: usize },
    #[error("overlap {overlap} reaches orthogonality residual {achieved:.3e}, above {bound:.0e}")]
    OverlapTooSmall {
        overlap: usize,
        achieved: f64,
        bound: f64,
    },
    #[error("prototype coefficients must have odd length and even symmetry")]
    NotSymmetric,
    #[error("gain v[{index}] = {magnitude:.3e} is too small to invert")]
    GainTooSmall { index: usize, magnitude: f64 },
    #[error("zero-forcing inverse is singular at subcarrier {0}")]
    ZfSingular(usize),
    #[error("channel length {lc} exceeds {limit}")]
    ChannelTooLong { lc: usize, limit: usize },
    #[error("invalid power-delay profile: {0}")]
    BadProfile(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
