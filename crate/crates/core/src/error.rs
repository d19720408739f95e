use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("fock dimension {dim} too small: coherent tail mass {tail_mass:.3e} exceeds tolerance {tolerance:.1e}")]
    TruncationTooSmall {
        dim: usize,
        tail_mass: f64,
        tolerance: f64,
    },

    #[error("truncation leak: population {population:.3e} in the top two fock levels at omega*t = {time}")]
    TruncationLeak { population: f64, time: f64 },

    #[error("step too large: half-step deviation {deviation:.3e} exceeds {threshold:.1e}")]
    StepTooLarge { deviation: f64, threshold: f64 },

    #[error("dispersive validity unchecked: bare coupling g and detuning delta are both required")]
    MissingBareCouplings,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("integration invariant violated: {0}")]
    InvariantViolated(String),

    #[error("empty sweep")]
    EmptySweep,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// 1 for configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::EmptySweep | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
