use thiserror::Error;

use crate::interval::Interval;
use crate::rat::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Every invariant the candidate map violates, in a stable order.
    #[error("invalid map: {}", .0.join("; "))]
    InvalidMap(Vec<String>),

    #[error("point {point} outside domain {domain}")]
    OutsideDomain { point: Rat, domain: Box<Interval> },

    #[error("interval {interval} not contained in domain {domain}")]
    IntervalOutsideDomain {
        interval: Box<Interval>,
        domain: Box<Interval>,
    },

    #[error("lap cap {cap} exceeded; largest completed iterate {completed}")]
    LapCapExceeded { cap: usize, completed: usize },

    #[error("node cap {cap} exceeded; completed depth {completed_depth}")]
    NodeCapExceeded { cap: usize, completed_depth: usize },

    #[error("branch cap {cap} exceeded")]
    BranchCapExceeded { cap: usize },

    #[error("branch of length {len} too short for tail start {tail_start}")]
    BranchTooShort { len: usize, tail_start: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("no two-point neighborhood at probe {probe}")]
    CoverFailed { probe: Rat },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Resource-limit failures, as opposed to bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::LapCapExceeded { .. } | Error::NodeCapExceeded { .. } | Error::BranchCapExceeded { .. }
        )
    }
}
