use thiserror::Error;

use crate::eisenstein::Eisenstein;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("point {point} lies outside the evaluation radius {radius}")]
    OutOfRadius { point: Eisenstein, radius: i64 },
    #[error("bound exceeded: {point} is not within {bound} hops of P")]
    BoundExceeded { point: Eisenstein, bound: u32 },
    #[error("enumeration cap: requested {requested}, cap is {cap}")]
    EnumerationCap { requested: usize, cap: usize },
    #[error("length mismatch: word has length {word}, path has {path} steps")]
    LengthMismatch { word: usize, path: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
