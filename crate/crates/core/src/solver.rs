//! Exact minimax for tiny boards.
//!
//! Positions are pairs of bitmasks over the local indices of the board (Maker's and
//! Breaker's elements) plus the side to move. Winning is monotone, so a position is
//! decided as soon as Maker owns a winning set or cannot complete one with every
//! free element.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::board::{Board, Element, GameState, Move, Objective, Owner, Player, Variant};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};

/// Hard limit from the packed transposition keys.
pub const MAX_SOLVER_ELEMENTS: usize = 24;
pub const DEFAULT_TAU_ELEMENTS: usize = 16;

/// Breaker candidate moves: subsets of exactly `min(b, free)` elements, or every
/// nonempty subset of at most `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branching {
    #[default]
    Maximal,
    AllUpToB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tau {
    Finite(usize),
    /// Maker can return to the same board forever.
    Unbounded,
}

impl std::fmt::Display for Tau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tau::Finite(t) => write!(f, "{t}"),
            Tau::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub branching: Branching,
    pub variant: Variant,
    pub max_elements: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            branching: Branching::Maximal,
            variant: Variant::Standard,
            max_elements: MAX_SOLVER_ELEMENTS,
        }
    }
}

const INF: u32 = u32::MAX;

fn tau_of(v: u32) -> Tau {
    if v == INF {
        Tau::Unbounded
    } else {
        Tau::Finite(v as usize)
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

#[derive(Clone, Debug)]
pub struct Solver {
    elements: Vec<Element>,
    local: Vec<Option<usize>>,
    ground: usize,
    objective: Objective,
    /// Winning sets as local masks, for explicit objectives.
    set_masks: Option<Vec<u32>>,
    b: usize,
    cfg: SolverConfig,
    pred_cache: HashMap<u32, bool>,
    win_memo: HashMap<u64, bool>,
    stage_memo: HashMap<u128, u32>,
    board_memo: HashMap<u32, u32>,
    nodes: u64,
}

impl Solver {
    pub fn new(
        board: &Board,
        objective: &Objective,
        b: usize,
        cfg: SolverConfig,
    ) -> Result<Solver> {
        let limit = cfg.max_elements.min(MAX_SOLVER_ELEMENTS);
        if board.len() > limit {
            return Err(Error::SizeLimit {
                what: "solver board elements",
                limit,
                got: board.len(),
            });
        }
        if b == 0 {
            return Err(Error::InvalidArgument("bias must be >= 1".into()));
        }
        objective.check_board(board)?;
        let mut local = vec![None; board.ground()];
        for (i, &e) in board.elements().iter().enumerate() {
            local[e] = Some(i);
        }
        let set_masks = objective.family().map(|f| {
            f.sets()
                .filter_map(|s| {
                    s.iter().try_fold(0u32, |acc, &e| {
                        local.get(e).copied().flatten().map(|i| acc | 1 << i)
                    })
                })
                .collect()
        });
        Ok(Solver {
            elements: board.elements().to_vec(),
            local,
            ground: board.ground(),
            objective: objective.clone(),
            set_masks,
            b,
            cfg,
            pred_cache: HashMap::new(),
            win_memo: HashMap::new(),
            stage_memo: HashMap::new(),
            board_memo: HashMap::new(),
            nodes: 0,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Positions expanded so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn all(&self) -> u32 {
        ((1u64 << self.elements.len()) - 1) as u32
    }

    pub fn to_mask(&self, elems: impl IntoIterator<Item = Element>) -> Result<u32> {
        elems
            .into_iter()
            .try_fold(0u32, |acc, e| match self.local.get(e).copied().flatten() {
                Some(i) => Ok(acc | 1 << i),
                None => Err(Error::InvalidArgument(format!(
                    "element {e} is not on the solver board"
                ))),
            })
    }

    pub fn to_elements(&self, mask: u32) -> Vec<Element> {
        bits(mask).map(|i| self.elements[i]).collect()
    }

    /// Whether `mask` contains a winning set.
    pub fn wins(&mut self, mask: u32) -> Result<bool> {
        if let Some(sets) = &self.set_masks {
            return Ok(sets.iter().any(|&s| s & !mask == 0));
        }
        if let Some(&v) = self.pred_cache.get(&mask) {
            return Ok(v);
        }
        let mut fb = FixedBitSet::with_capacity(self.ground);
        for i in bits(mask) {
            fb.insert(self.elements[i]);
        }
        let v = self.objective.is_won_by(&fb)?;
        self.pred_cache.insert(mask, v);
        Ok(v)
    }

    fn breaker_moves(&self, free: u32) -> Vec<u32> {
        let idx: Vec<usize> = bits(free).collect();
        let top = self.b.min(idx.len());
        let sizes = match self.cfg.branching {
            Branching::Maximal => top..=top,
            Branching::AllUpToB => 1..=top,
        };
        sizes
            .flat_map(|k| {
                idx.iter()
                    .copied()
                    .combinations(k)
                    .map(|c| c.into_iter().fold(0u32, |acc, i| acc | 1 << i))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Single-stage outcome from a position inside the full board.
    pub fn maker_wins(&mut self, maker: u32, breaker: u32, to_move: Player) -> Result<bool> {
        if self.wins(maker)? {
            return Ok(true);
        }
        let free = self.all() & !maker & !breaker;
        if free == 0 || !self.wins(maker | free)? {
            return Ok(false);
        }
        let key =
            maker as u64 | (breaker as u64) << 24 | ((to_move == Player::Breaker) as u64) << 48;
        if let Some(&v) = self.win_memo.get(&key) {
            return Ok(v);
        }
        self.nodes += 1;
        let v = match to_move {
            Player::Maker => {
                let mut any = false;
                for i in bits(free) {
                    if self.maker_wins(maker | 1 << i, breaker, Player::Breaker)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            Player::Breaker => {
                let mut all = true;
                for s in self.breaker_moves(free) {
                    if !self.maker_wins(maker, breaker | s, Player::Maker)? {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        self.win_memo.insert(key, v);
        Ok(v)
    }

    pub fn winner(&mut self) -> Result<Player> {
        Ok(if self.maker_wins(0, 0, Player::Maker)? {
            Player::Maker
        } else {
            Player::Breaker
        })
    }

    /// Payoff once a stage on board `x` ends with Maker owning `maker` and `free`
    /// still unclaimed.
    fn leaf(&mut self, x: u32, maker: u32, free: u32) -> Result<u32> {
        if !self.wins(maker)? {
            return Ok(0);
        }
        let next = match self.cfg.variant {
            Variant::Standard => maker,
            Variant::Stop => maker | free,
        };
        if next == x {
            return Ok(INF);
        }
        let v = self.board_value(next)?;
        Ok(if v == INF { INF } else { v + 1 })
    }

    /// Value after Maker claims local element `i`.
    fn after_maker(&mut self, x: u32, maker: u32, breaker: u32, i: usize) -> Result<u32> {
        let m = maker | 1 << i;
        let free = x & !m & !breaker;
        if free == 0 || (self.cfg.variant == Variant::Stop && self.wins(m)?) {
            return self.leaf(x, m, free);
        }
        self.stage_value(x, m, breaker, Player::Breaker)
    }

    fn stage_value(&mut self, x: u32, maker: u32, breaker: u32, to_move: Player) -> Result<u32> {
        let free = x & !maker & !breaker;
        if free == 0 {
            return self.leaf(x, maker, 0);
        }
        if !self.wins(maker | free)? {
            return Ok(0);
        }
        let key = (x as u128) << 64
            | (maker as u128) << 32
            | (breaker as u128) << 1
            | (to_move == Player::Breaker) as u128;
        if let Some(&v) = self.stage_memo.get(&key) {
            return Ok(v);
        }
        self.nodes += 1;
        let v = match to_move {
            Player::Maker => {
                let mut best = 0;
                for i in bits(free) {
                    best = best.max(self.after_maker(x, maker, breaker, i)?);
                    if best == INF {
                        break;
                    }
                }
                best
            }
            Player::Breaker => {
                let mut best = INF;
                for s in self.breaker_moves(free) {
                    best = best.min(self.stage_value(x, maker, breaker | s, Player::Maker)?);
                    if best == 0 {
                        break;
                    }
                }
                best
            }
        };
        self.stage_memo.insert(key, v);
        Ok(v)
    }

    fn board_value(&mut self, x: u32) -> Result<u32> {
        if let Some(&v) = self.board_memo.get(&x) {
            return Ok(v);
        }
        let v = if self.wins(x)? {
            self.stage_value(x, 0, 0, Player::Maker)?
        } else {
            0
        };
        self.board_memo.insert(x, v);
        Ok(v)
    }

    /// Exact multistage value from the full board.
    pub fn tau(&mut self) -> Result<Tau> {
        let all = self.all();
        self.board_value(all).map(tau_of)
    }

    /// Exact multistage value of a sub-board given as elements.
    pub fn tau_on(&mut self, board: &[Element]) -> Result<Tau> {
        let x = self.to_mask(board.iter().copied())?;
        self.board_value(x).map(tau_of)
    }

    fn masks_of(&self, state: &GameState) -> Result<(u32, u32, u32)> {
        let x = self.to_mask(state.board().elements().iter().copied())?;
        let m = self.to_mask(state.owned_by(Owner::Maker).ones())?;
        let br = self.to_mask(state.owned_by(Owner::Breaker).ones())?;
        Ok((x, m, br))
    }

    /// A Maker move optimal for `goal`; ties go to the smallest element.
    pub fn best_maker_move(&mut self, state: &GameState, goal: Goal) -> Result<Element> {
        let (x, m, br) = self.masks_of(state)?;
        let free = x & !m & !br;
        let mut best: Option<(usize, u32)> = None;
        for i in bits(free) {
            let v = match goal {
                Goal::Win => self.maker_wins(m | 1 << i, br, Player::Breaker)? as u32,
                Goal::Tau => self.after_maker(x, m, br, i)?,
            };
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| self.elements[i])
            .ok_or_else(|| Error::InvalidState("no free element".into()))
    }

    /// A Breaker move optimal for `goal`; ties go to the lexicographically first set.
    pub fn best_breaker_move(&mut self, state: &GameState, goal: Goal) -> Result<Vec<Element>> {
        let (x, m, br) = self.masks_of(state)?;
        let free = x & !m & !br;
        let mut best: Option<(u32, u32)> = None;
        for s in self.breaker_moves(free) {
            let v = match goal {
                Goal::Win => self.maker_wins(m, br | s, Player::Maker)? as u32,
                Goal::Tau => self.stage_value(x, m, br | s, Player::Maker)?,
            };
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((s, v));
            }
        }
        best.map(|(s, _)| self.to_elements(s))
            .ok_or_else(|| Error::InvalidState("no free element".into()))
    }
}

pub fn solve_single_stage(board: &Board, objective: &Objective, b: usize) -> Result<Player> {
    Solver::new(board, objective, b, SolverConfig::default())?.winner()
}

pub fn solve_tau_exact(
    board: &Board,
    objective: &Objective,
    b: usize,
    variant: Variant,
) -> Result<Tau> {
    let cfg = SolverConfig {
        variant,
        max_elements: DEFAULT_TAU_ELEMENTS,
        ..SolverConfig::default()
    };
    Solver::new(board, objective, b, cfg)?.tau()
}

/// What an [`OptimalPolicy`] optimises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Goal {
    /// The single-stage outcome.
    Win,
    /// The number of surviving stages.
    Tau,
}

/// Plays solver-optimal moves. Built on the first stage's board; later boards
/// must be sub-boards of it.
#[derive(Clone, Debug)]
pub struct OptimalPolicy {
    role: Player,
    goal: Goal,
    b: usize,
    cfg: SolverConfig,
    solver: Option<Solver>,
}

impl OptimalPolicy {
    pub fn new(role: Player, goal: Goal, cfg: SolverConfig) -> Self {
        OptimalPolicy {
            role,
            goal,
            b: 0,
            cfg,
            solver: None,
        }
    }

    pub fn solver(&self) -> Option<&Solver> {
        self.solver.as_ref()
    }
}

impl Strategy for OptimalPolicy {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn role(&self) -> Player {
        self.role
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        let fresh = self.solver.is_none()
            || self.b != view.bias
            || self.cfg.variant != view.variant
            || self.goal == Goal::Win;
        if fresh {
            self.b = view.bias;
            self.cfg.variant = view.variant;
            self.solver = Some(Solver::new(
                view.board,
                view.objective,
                view.bias,
                self.cfg,
            )?);
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let solver = self
            .solver
            .as_mut()
            .ok_or_else(|| Error::InvalidState("choose called outside a stage".into()))?;
        match self.role {
            Player::Maker => Ok(vec![solver.best_maker_move(state, self.goal)?]),
            Player::Breaker => solver.best_breaker_move(state, self.goal),
        }
    }
}

/// Result of playing a fixed policy against every line of the opponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExploreReport {
    pub lines: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<Move>>,
}

impl ExploreReport {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

/// Plays `policy` for one stage against every legal opponent line (Breaker lines
/// follow `branching`) and applies `check` to each final position. A forfeit by the
/// policy counts as a failure.
pub fn explore_replies<S: Strategy + Clone>(
    view: &StageView<'_>,
    mut policy: S,
    branching: Branching,
    check: &mut dyn FnMut(&GameState) -> Result<bool>,
) -> Result<ExploreReport> {
    policy.start_stage(view)?;
    let state = GameState::new(view.board.clone(), view.bias, view.stage)?;
    let mut report = ExploreReport::default();
    explore(
        view,
        &state,
        policy,
        Player::Maker,
        branching,
        check,
        &mut report,
    )?;
    Ok(report)
}

fn fail(report: &mut ExploreReport, state: &GameState) {
    report.lines += 1;
    report.failures += 1;
    if report.first_failure.is_none() {
        report.first_failure = Some(state.history().to_vec());
    }
}

fn explore<S: Strategy + Clone>(
    view: &StageView<'_>,
    state: &GameState,
    policy: S,
    to_move: Player,
    branching: Branching,
    check: &mut dyn FnMut(&GameState) -> Result<bool>,
    report: &mut ExploreReport,
) -> Result<()> {
    let over = state.free_count() == 0
        || (to_move == Player::Breaker
            && view.variant == Variant::Stop
            && view.objective.is_won_by(&state.maker_set())?);
    if over {
        report.lines += 1;
        if !check(state)? {
            report.failures += 1;
            if report.first_failure.is_none() {
                report.first_failure = Some(state.history().to_vec());
            }
        }
        return Ok(());
    }
    let moves: Vec<Move> = if to_move == policy.role() {
        let mut p = policy.clone();
        match p.choose(state) {
            Ok(elements) => vec![Move {
                player: to_move,
                elements,
            }],
            Err(_) => {
                fail(report, state);
                return Ok(());
            }
        }
    } else {
        let free: Vec<Element> = state.free_elements().collect();
        match to_move {
            Player::Maker => free.into_iter().map(Move::maker).collect(),
            Player::Breaker => {
                let top = state.bias().min(free.len());
                let sizes = match branching {
                    Branching::Maximal => top..=top,
                    Branching::AllUpToB => 1..=top,
                };
                sizes
                    .flat_map(|k| free.iter().copied().combinations(k).map(Move::breaker))
                    .collect()
            }
        }
    };
    for mv in moves {
        let mut p = policy.clone();
        let next = match state.apply_move(mv.clone()) {
            Ok(s) => s,
            Err(_) => {
                fail(report, state);
                continue;
            }
        };
        if p.observe(&next, &mv).is_err() {
            fail(report, &next);
            continue;
        }
        explore(view, &next, p, to_move.opponent(), branching, check, report)?;
    }
    Ok(())
}
