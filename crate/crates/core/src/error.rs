use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("form degree error: {0}")]
    Degree(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("quotient is not zero-dimensional: {0}")]
    PositiveDimensional(String),
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("ansatz exhausted after {rounds} rounds (pole cap {pole_cap}): {detail}")]
    EscalationCap { rounds: u32, pole_cap: u32, detail: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
