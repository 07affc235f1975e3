use thiserror::Error;

use crate::term::Position;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid position {0}")]
    InvalidPosition(Position),
    #[error("no weak redex at {0} under the given barrier")]
    NotAWeakRedex(Position),
    #[error("no labeled redex at {0} under the given barrier")]
    NotALabeledRedex(Position),
    #[error("no marked redex at {0}")]
    NotAMarkedRedex(Position),
    #[error("marked redex at {0} is not away from its binding path")]
    BarrierViolated(Position),
    #[error("term is not initially marked")]
    NotInitiallyMarked,
    #[error("term is not initially labeled: label {0} decorates more than one abstraction")]
    NotInitiallyLabeled(String),
    #[error("superstep result set exceeds the cap of {0} terms")]
    SizeCapExceeded(usize),
    #[error("{lemma}: {hypothesis}")]
    SideConditionViolated {
        lemma: &'static str,
        hypothesis: String,
    },
    #[error("diamond premises are not derivable: {0}")]
    PremisesNotDerivable(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
