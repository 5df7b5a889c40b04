//! Engine, strategy library and exact solver for (1:b) multistage Maker-Breaker games.
//!
//! A multistage game is played on a board `X` with a winning family `F`. Each stage is
//! an ordinary (1:b) Maker-Breaker game; afterwards the board shrinks to Maker's
//! elements and the family to the winning sets inside it. `tau` counts the stages
//! that end with a nonempty family.

pub mod baseline;
pub mod board;
pub mod breaker;
pub mod dsu;
pub mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod maker;
pub mod solver;
pub mod sweep;

pub use board::{
    complete_graph_board, family_stats, reduce_stage, Board, Element, Family, GameState,
    GraphProperty, Group, GroupStats, Move, Objective, Owner, Player, StageReduction, Variant,
};
pub use engine::{
    play_multistage, play_stage, replay, GameSetup, MatchTrace, StageOutcome, StageView, Strategy,
};
pub use error::{Error, Result};
