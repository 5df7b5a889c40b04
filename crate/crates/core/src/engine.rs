//! Stage and multistage game loops, match traces and replay.

use serde::{Deserialize, Serialize};

use crate::board::{
    reduce_stage, Board, Element, GameState, Move, Objective, Player, StageReduction, Variant,
};
use crate::error::{Error, Result};

pub const TRACE_VERSION: u32 = 1;
pub const DEFAULT_MAX_STAGES: usize = 64;

/// What a strategy sees when a stage begins.
#[derive(Clone, Copy, Debug)]
pub struct StageView<'a> {
    pub board: &'a Board,
    pub objective: &'a Objective,
    pub bias: usize,
    pub stage: usize,
    pub variant: Variant,
}

/// A player. The engine calls `start_stage`, then alternates `choose` calls of the
/// side to move with `observe` notifications of every applied move (both sides),
/// and finally `end_stage` with the reduction.
pub trait Strategy {
    fn name(&self) -> String;
    fn role(&self) -> Player;
    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()>;
    fn observe(&mut self, _state: &GameState, _mv: &Move) -> Result<()> {
        Ok(())
    }
    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>>;
    fn end_stage(&mut self, _reduction: &StageReduction) -> Result<()> {
        Ok(())
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn role(&self) -> Player {
        (**self).role()
    }
    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        (**self).start_stage(view)
    }
    fn observe(&mut self, state: &GameState, mv: &Move) -> Result<()> {
        (**self).observe(state, mv)
    }
    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        (**self).choose(state)
    }
    fn end_stage(&mut self, reduction: &StageReduction) -> Result<()> {
        (**self).end_stage(reduction)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageEnd {
    Exhausted,
    MakerWon,
    Forfeit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub index: usize,
    pub board_size: usize,
    pub moves: Vec<Move>,
    pub survivors: Vec<usize>,
    pub maker_count: usize,
    pub ended_by: StageEnd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub stage: usize,
    pub reason: String,
    /// The strategy reported a broken internal invariant (as opposed to an
    /// illegal move or a configuration problem).
    pub invariant_violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub ground: usize,
    pub n: usize,
    pub b: usize,
    pub variant: Variant,
    pub max_stages: usize,
    pub objective: String,
    pub maker: String,
    pub breaker: String,
    pub seed: Option<u64>,
    pub rounding: String,
    /// Caller-supplied description sufficient to rebuild the objective.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchTrace {
    pub version: u32,
    pub config: TraceConfig,
    pub stages: Vec<StageTrace>,
    pub tau_observed: usize,
    pub truncated: bool,
    pub forfeit: Option<Forfeit>,
}

impl MatchTrace {
    pub fn stage_lengths(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.moves.len()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameSetup {
    pub board: Board,
    pub objective: Objective,
    pub bias: usize,
    pub variant: Variant,
    pub max_stages: usize,
}

impl GameSetup {
    pub fn new(board: Board, objective: Objective, bias: usize) -> GameSetup {
        GameSetup {
            board,
            objective,
            bias,
            variant: Variant::Standard,
            max_stages: DEFAULT_MAX_STAGES,
        }
    }

    pub fn variant(mut self, variant: Variant) -> GameSetup {
        self.variant = variant;
        self
    }

    pub fn max_stages(mut self, max_stages: usize) -> GameSetup {
        self.max_stages = max_stages;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bias == 0 {
            return Err(Error::InvalidArgument("bias must be >= 1".into()));
        }
        if self.max_stages == 0 {
            return Err(Error::InvalidArgument("max_stages must be >= 1".into()));
        }
        self.objective.check_board(&self.board)
    }

    pub fn trace_config(&self, maker: &str, breaker: &str, seed: Option<u64>) -> TraceConfig {
        TraceConfig {
            ground: self.board.ground(),
            n: self.board.n(),
            b: self.bias,
            variant: self.variant,
            max_stages: self.max_stages,
            objective: self.objective.name(),
            maker: maker.to_string(),
            breaker: breaker.to_string(),
            seed,
            rounding: "nearest".into(),
            game: None,
        }
    }
}

/// Result of one stage: either it finished, or a player forfeited.
#[derive(Clone, Debug)]
pub enum StageOutcome {
    Finished(StageTrace, StageReduction),
    Forfeited(StageTrace, Forfeit),
}

fn forfeit_of(player: Player, stage: usize, err: &Error) -> Forfeit {
    Forfeit {
        player,
        stage,
        reason: err.to_string(),
        invariant_violation: matches!(err, Error::InvariantViolation(_)),
    }
}

fn turn(
    state: &mut GameState,
    player: Player,
    mover: &mut dyn Strategy,
    other: &mut dyn Strategy,
) -> std::result::Result<(), (Player, Error)> {
    let elements = mover.choose(state).map_err(|e| (player, e))?;
    let mv = Move { player, elements };
    state.apply_move_mut(mv.clone()).map_err(|e| (player, e))?;
    mover.observe(state, &mv).map_err(|e| (player, e))?;
    other
        .observe(state, &mv)
        .map_err(|e| (player.opponent(), e))?;
    Ok(())
}

/// Plays one stage, Maker first. In the stop variant the stage ends right after a
/// Maker move that completes a winning set.
pub fn play_stage(
    board: &Board,
    objective: &Objective,
    bias: usize,
    stage: usize,
    variant: Variant,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
) -> Result<StageOutcome> {
    if board.is_empty() {
        return Err(Error::InvalidArgument(
            "stage board has no free element".into(),
        ));
    }
    let mut state = GameState::new(board.clone(), bias, stage)?;
    let view = StageView {
        board,
        objective,
        bias,
        stage,
        variant,
    };
    let trace_of = |state: &GameState, ended_by| StageTrace {
        index: stage,
        board_size: board.len(),
        moves: state.history().to_vec(),
        survivors: Vec::new(),
        maker_count: state.maker_set().count_ones(..),
        ended_by,
    };
    let started = maker
        .start_stage(&view)
        .map_err(|e| (Player::Maker, e))
        .and_then(|_| breaker.start_stage(&view).map_err(|e| (Player::Breaker, e)));
    if let Err((p, e)) = started {
        let f = forfeit_of(p, stage, &e);
        return Ok(StageOutcome::Forfeited(
            trace_of(&state, StageEnd::Forfeit),
            f,
        ));
    }
    let mut ended_by = StageEnd::Exhausted;
    while state.free_count() > 0 {
        if let Err((p, e)) = turn(&mut state, Player::Maker, maker, breaker) {
            let f = forfeit_of(p, stage, &e);
            return Ok(StageOutcome::Forfeited(
                trace_of(&state, StageEnd::Forfeit),
                f,
            ));
        }
        if variant == Variant::Stop && objective.is_won_by(&state.maker_set())? {
            ended_by = StageEnd::MakerWon;
            break;
        }
        if state.free_count() == 0 {
            break;
        }
        if let Err((p, e)) = turn(&mut state, Player::Breaker, breaker, maker) {
            let f = forfeit_of(p, stage, &e);
            return Ok(StageOutcome::Forfeited(
                trace_of(&state, StageEnd::Forfeit),
                f,
            ));
        }
    }
    let reduction = reduce_stage(&state, objective, variant)?;
    let ended = maker
        .end_stage(&reduction)
        .map_err(|e| (Player::Maker, e))
        .and_then(|_| {
            breaker
                .end_stage(&reduction)
                .map_err(|e| (Player::Breaker, e))
        });
    if let Err((p, e)) = ended {
        let f = forfeit_of(p, stage, &e);
        let mut t = trace_of(&state, StageEnd::Forfeit);
        t.survivors = reduction.survivors_per_group.clone();
        return Ok(StageOutcome::Forfeited(t, f));
    }
    let mut t = trace_of(&state, ended_by);
    t.survivors = reduction.survivors_per_group.clone();
    Ok(StageOutcome::Finished(t, reduction))
}

/// Plays stages until the family dies, a player forfeits, or `max_stages` is hit.
pub fn play_multistage(
    setup: &GameSetup,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    seed: Option<u64>,
) -> Result<MatchTrace> {
    setup.validate()?;
    if maker.role() != Player::Maker || breaker.role() != Player::Breaker {
        return Err(Error::InvalidArgument(
            "strategies are seated in the wrong roles".into(),
        ));
    }
    let mut trace = MatchTrace {
        version: TRACE_VERSION,
        config: setup.trace_config(&maker.name(), &breaker.name(), seed),
        stages: Vec::new(),
        tau_observed: 0,
        truncated: false,
        forfeit: None,
    };
    if !setup.objective.is_alive_on(&setup.board)? {
        return Ok(trace);
    }
    let mut board = setup.board.clone();
    let mut objective = setup.objective.clone();
    for stage in 1.. {
        if stage > setup.max_stages {
            trace.truncated = true;
            break;
        }
        match play_stage(
            &board,
            &objective,
            setup.bias,
            stage,
            setup.variant,
            maker,
            breaker,
        )? {
            StageOutcome::Forfeited(t, f) => {
                trace.stages.push(t);
                trace.forfeit = Some(f);
                break;
            }
            StageOutcome::Finished(t, r) => {
                trace.stages.push(t);
                if !r.is_alive() {
                    break;
                }
                trace.tau_observed += 1;
                board = r.next_board;
                objective = r.next_objective;
            }
        }
    }
    Ok(trace)
}

/// Summary of a successful replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub stages: usize,
    pub tau: usize,
}

fn mismatch(
    stage: usize,
    what: &str,
    want: impl std::fmt::Debug,
    got: impl std::fmt::Debug,
) -> Error {
    Error::InvariantViolation(format!(
        "replay stage {stage}: {what} recorded {got:?}, recomputed {want:?}"
    ))
}

/// Re-validates every move and reduction of a trace through the core rules.
pub fn replay(trace: &MatchTrace, setup: &GameSetup) -> Result<ReplayReport> {
    setup.validate()?;
    if trace.config.b != setup.bias || trace.config.variant != setup.variant {
        return Err(Error::InvariantViolation(
            "trace bias or variant differs from the supplied setup".into(),
        ));
    }
    let mut board = setup.board.clone();
    let mut objective = setup.objective.clone();
    let mut tau = 0;
    let alive0 = setup.objective.is_alive_on(&board)?;
    if !alive0 && !trace.stages.is_empty() {
        return Err(Error::InvariantViolation(
            "stages recorded for an empty family".into(),
        ));
    }
    for (i, st) in trace.stages.iter().enumerate() {
        let stage = i + 1;
        if st.index != stage {
            return Err(mismatch(stage, "stage index", stage, st.index));
        }
        if st.board_size != board.len() {
            return Err(mismatch(stage, "board size", board.len(), st.board_size));
        }
        let mut state = GameState::new(board.clone(), setup.bias, stage)?;
        let mut won = false;
        for (j, mv) in st.moves.iter().enumerate() {
            let expected = if j % 2 == 0 {
                Player::Maker
            } else {
                Player::Breaker
            };
            if mv.player != expected {
                return Err(mismatch(stage, "mover", expected, mv.player));
            }
            if won {
                return Err(Error::InvariantViolation(format!(
                    "replay stage {stage}: moves after Maker completed a set in the stop variant"
                )));
            }
            state
                .apply_move_mut(mv.clone())
                .map_err(|e| Error::InvariantViolation(format!("replay stage {stage}: {e}")))?;
            if mv.player == Player::Maker
                && setup.variant == Variant::Stop
                && objective.is_won_by(&state.maker_set())?
            {
                won = true;
            }
        }
        if st.ended_by == StageEnd::Forfeit {
            if i + 1 != trace.stages.len() || trace.forfeit.is_none() {
                return Err(Error::InvariantViolation(
                    "forfeit stage is not last".into(),
                ));
            }
            break;
        }
        let want_end = if won {
            StageEnd::MakerWon
        } else {
            StageEnd::Exhausted
        };
        if st.ended_by != want_end {
            return Err(mismatch(stage, "stage end", want_end, st.ended_by));
        }
        let maker_count = state.maker_set().count_ones(..);
        if maker_count != st.maker_count {
            return Err(mismatch(stage, "maker count", maker_count, st.maker_count));
        }
        let r = reduce_stage(&state, &objective, setup.variant)
            .map_err(|e| Error::InvariantViolation(format!("replay stage {stage}: {e}")))?;
        if r.survivors_per_group != st.survivors {
            return Err(mismatch(
                stage,
                "survivors",
                &r.survivors_per_group,
                &st.survivors,
            ));
        }
        if r.is_alive() {
            tau += 1;
        } else if i + 1 != trace.stages.len() {
            return Err(Error::InvariantViolation(format!(
                "replay stage {stage}: play continued after the family died"
            )));
        }
        board = r.next_board;
        objective = r.next_objective;
    }
    if tau != trace.tau_observed {
        return Err(mismatch(trace.stages.len(), "tau", tau, trace.tau_observed));
    }
    Ok(ReplayReport {
        stages: trace.stages.len(),
        tau,
    })
}
