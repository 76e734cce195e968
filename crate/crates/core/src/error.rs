use thiserror::Error;

/// Rejected query arguments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("invalid range: from {from} is after to {to}")]
    InvalidRange { from: i64, to: i64 },
    #[error("invalid date: month {month}, day {day} is not a calendar day")]
    InvalidDate { month: u32, day: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown article `{0}`")]
    UnknownArticle(String),
}
