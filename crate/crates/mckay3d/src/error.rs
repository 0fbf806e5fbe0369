use thiserror::Error;

/// Errors raised by the library.
///
/// Parse and validation errors describe bad input. `Invariant` errors signal that
/// a computed structure violated a property the theory guarantees; they carry a
/// diagnostic dump and are never silently repaired.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator {index} ({generator}) is not in SL(3): weights must sum to 0 mod r")]
    NotSl3 { index: usize, generator: String },

    #[error("point {point} lies on a wall: {detail}")]
    Wall { point: String, detail: String },

    #[error("character {0} is trivial; no CT-subdivision is defined")]
    TrivialCharacter(String),

    #[error("invariant `{name}` failed: {detail}")]
    Invariant { name: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(name: &'static str, detail: impl Into<String>) -> Error {
    Error::Invariant { name, detail: detail.into() }
}
