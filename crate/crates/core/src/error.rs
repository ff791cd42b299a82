use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid word {0:?}: expected a non-empty string of 0/1 of length at most {max}", max = crate::symbolic::MAX_WORD_LEN)]
    InvalidWord(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("point {0} lies outside [0, 1)")]
    PointOutOfRange(String),

    #[error("metric is undefined at the dyadic point {0}")]
    DyadicPoint(String),

    #[error("derivative has a pole at x = {0}")]
    Pole(f64),

    #[error("word {word} contains a forbidden run for m = {m}")]
    Inadmissible { word: String, m: u32 },

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("level {level} exceeds the resource cap {cap} (override with TM_MAX_LEVEL)")]
    LevelCap { level: u32, cap: u32 },

    #[error("pressure is +inf for t = {0} < 0")]
    NegativeTemperature(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("entropy schemes disagree: resummation {resummed} vs extrapolated {extrapolated} ({digits} digits agree, {target} requested)")]
    Convergence {
        resummed: String,
        extrapolated: String,
        digits: u32,
        target: u32,
    },
}
