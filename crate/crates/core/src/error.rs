use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quantum number {0}: confined modes start at n = 1")]
    InvalidQuantumNumber(i64),
    #[error("invalid box length {0}: l0 must be finite and positive")]
    InvalidBox(f64),
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
    #[error("plane-wave phase k^2/(4 omega) is undefined at omega = 0; use the free plane wave")]
    UndefinedPhase,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    IncompatibleGrids,
    #[error("invalid superposition: {0}")]
    InvalidSuperposition(String),
    #[error("target time {target} is not after the current time {current}")]
    InvalidTargetTime { current: f64, target: f64 },
    #[error("invalid step count {0}: need at least one step")]
    InvalidSteps(usize),
    #[error("cannot fit a slope with {0} sample(s); need at least two distinct times")]
    InvalidFit(usize),
    #[error("invalid inverse temperature {0}: beta0 must be finite and positive")]
    InvalidTemperature(f64),
    #[error("level cutoff {0} too small: need n_max >= 2")]
    InvalidCutoff(usize),
    #[error("level cutoff exceeded the cap of {cap} levels without reaching the tail bound")]
    CutoffInsufficient { cap: usize },
    #[error("invalid time schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
