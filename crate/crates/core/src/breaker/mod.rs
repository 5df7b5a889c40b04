//! Breaker strategies.

pub mod beck;
pub mod forest;
pub mod greedy;
pub mod hgame;

pub use beck::{beck_breaker_move, spanning_tree_scores, BeckBreaker, BeckState};
pub use forest::{greedy_forests, group_forests, ForestBreaker, ForestStageRecord};
pub use greedy::GreedyBreaker;
pub use hgame::{
    derive_bunch_parameters, enumerate_bunch_family, min_delta, BunchFamily, BunchParameters,
    BunchScope, HGameBreaker, HGameConfig, HGameReport,
};

/// Uniformly random Breaker.
pub fn random_breaker(seed: u64) -> crate::baseline::RandomPlayer {
    crate::baseline::RandomPlayer::breaker(seed)
}
