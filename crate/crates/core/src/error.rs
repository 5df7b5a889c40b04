use thiserror::Error;

use crate::board::{Element, Player};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("illegal move by {player:?}: {reason}")]
    IllegalMove { player: Player, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("family too large: about {estimate:.3e} sets exceeds cap {cap}")]
    FamilyTooLarge { estimate: f64, cap: usize },

    #[error("size limit exceeded for {what}: {got} > {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("infeasible at this scale: {0}")]
    Infeasible(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("no bunch: {0}")]
    NoBunch(String),
}

impl Error {
    pub(crate) fn illegal(player: Player, reason: impl Into<String>) -> Self {
        Error::IllegalMove {
            player,
            reason: reason.into(),
        }
    }

    pub(crate) fn not_free(player: Player, e: Element) -> Self {
        Error::illegal(player, format!("element {e} is not free"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
