//! Potential Breaker for biased games.
//!
//! Every winning set without a Breaker element is alive and weighs
//! `(1+b)^(-u(F))`, `u(F)` being the number of its elements Maker does not own.
//! Breaker claims the free element with the largest weight sum, kills the sets
//! through it, and repeats for each of his `b` picks. Maker then ends the game with
//! at most `sum_F (1+b)^(-|F|+1)` completed sets.

use nalgebra::DMatrix;

use crate::board::{Element, GameState, GraphProperty, Move, Objective, Owner, Player};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::graph::{edge_endpoints, edge_id, enumerate_copies};
use crate::maker::potential::TIE_TOLERANCE;

#[derive(Clone, Debug)]
pub struct BeckState {
    base: f64,
    sets: Vec<Vec<Element>>,
    alive: Vec<bool>,
    /// Elements of each set not owned by Maker.
    open: Vec<usize>,
    weight: Vec<f64>,
    incidence: Vec<Vec<usize>>,
    score: Vec<f64>,
}

impl BeckState {
    pub fn new(sets: Vec<Vec<Element>>, ground: usize, b: usize) -> Result<Self> {
        let base = b as f64 + 1.0;
        let mut incidence = vec![Vec::new(); ground];
        for (i, s) in sets.iter().enumerate() {
            for &e in s {
                incidence
                    .get_mut(e)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("element {e} outside ground {ground}"))
                    })?
                    .push(i);
            }
        }
        let weight: Vec<f64> = sets.iter().map(|s| base.powi(-(s.len() as i32))).collect();
        let score = incidence
            .iter()
            .map(|ids| ids.iter().map(|&i| weight[i]).sum())
            .collect();
        Ok(BeckState {
            base,
            alive: vec![true; sets.len()],
            open: sets.iter().map(Vec::len).collect(),
            weight,
            incidence,
            score,
            sets,
        })
    }

    /// `sum_F (1+b)^(-|F|+1)`.
    pub fn completion_bound(sets: &[Vec<Element>], b: usize) -> f64 {
        let base = b as f64 + 1.0;
        sets.iter().map(|s| base.powi(1 - s.len() as i32)).sum()
    }

    pub fn potential(&self) -> f64 {
        self.weight.iter().sum()
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn completed_count(&self) -> usize {
        (0..self.sets.len())
            .filter(|&i| self.alive[i] && self.open[i] == 0)
            .count()
    }

    pub fn element_score(&self, e: Element) -> f64 {
        self.score.get(e).copied().unwrap_or(0.0)
    }

    fn shift(&mut self, set: usize, delta: f64) {
        for &f in &self.sets[set] {
            self.score[f] += delta;
        }
    }

    pub fn maker_claim(&mut self, e: Element) {
        let Some(ids) = self.incidence.get(e).cloned() else {
            return;
        };
        for i in ids {
            if self.alive[i] {
                let old = self.weight[i];
                self.weight[i] = old * self.base;
                self.open[i] -= 1;
                self.shift(i, old * (self.base - 1.0));
            }
        }
    }

    pub fn breaker_claim(&mut self, e: Element) {
        let Some(ids) = self.incidence.get(e).cloned() else {
            return;
        };
        for i in ids {
            if self.alive[i] {
                let old = self.weight[i];
                self.alive[i] = false;
                self.weight[i] = 0.0;
                self.shift(i, -old);
            }
        }
    }

    /// Weights recomputed from an ownership state; dead sets weigh 0.
    pub fn scratch_weights(&self, state: &GameState) -> Vec<f64> {
        self.sets
            .iter()
            .map(|s| {
                if s.iter().any(|&e| state.owner(e) == Some(Owner::Breaker)) {
                    0.0
                } else {
                    let open = s
                        .iter()
                        .filter(|&&e| state.owner(e) != Some(Owner::Maker))
                        .count();
                    self.base.powi(-(open as i32))
                }
            })
            .collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }
}

pub(crate) fn argmax_lowest(
    candidates: impl IntoIterator<Item = (Element, f64)>,
) -> Option<Element> {
    let mut best: Option<(Element, f64)> = None;
    for (e, s) in candidates {
        best = match best {
            None => Some((e, s)),
            Some((be, bs)) => {
                let tol = TIE_TOLERANCE * bs.abs().max(s.abs());
                if s > bs + tol || ((s - bs).abs() <= tol && e < be) {
                    Some((e, s))
                } else {
                    Some((be, bs))
                }
            }
        };
    }
    best.map(|(e, _)| e)
}

/// Greedy picks, updating `beck` after each one.
pub fn beck_breaker_move(beck: &mut BeckState, state: &GameState) -> Result<Vec<Element>> {
    let quota = state.bias().min(state.free_count());
    if quota == 0 {
        return Err(Error::InvalidState("no free element".into()));
    }
    let mut picks = Vec::with_capacity(quota);
    for _ in 0..quota {
        let e = argmax_lowest(
            state
                .free_elements()
                .filter(|e| !picks.contains(e))
                .map(|e| (e, beck.element_score(e))),
        )
        .ok_or_else(|| Error::InvalidState("no free element".into()))?;
        beck.breaker_claim(e);
        picks.push(e);
    }
    Ok(picks)
}

/// Spanning-tree scores `w_e R_eff(e)` on the graph of non-Breaker edges, with
/// weight 1 on Maker edges and `1/(1+b)` on free edges. Proportional to the total
/// weight of the alive spanning trees through each edge.
pub fn spanning_tree_scores(
    n: usize,
    state: &GameState,
    extra_dead: &[Element],
) -> Vec<(Element, f64)> {
    let free_w = 1.0 / (state.bias() as f64 + 1.0);
    let live: Vec<(Element, f64)> = state
        .board()
        .elements()
        .iter()
        .filter(|e| !extra_dead.contains(e))
        .filter_map(|&e| match state.owner(e) {
            Some(Owner::Maker) => Some((e, 1.0)),
            Some(Owner::Free) => Some((e, free_w)),
            _ => None,
        })
        .collect();
    let m = n - 1;
    let mut lap = DMatrix::<f64>::zeros(m, m);
    for &(e, w) in &live {
        let (u, v) = edge_endpoints(n, e);
        for x in [u, v] {
            if x < m {
                lap[(x, x)] += w;
            }
        }
        if u < m && v < m {
            lap[(u, v)] -= w;
            lap[(v, u)] -= w;
        }
    }
    let inv = lap.try_inverse();
    let free: Vec<(Element, f64)> = live
        .iter()
        .filter(|&&(e, _)| state.is_free(e) && !extra_dead.contains(&e))
        .copied()
        .collect();
    match inv {
        None => free.into_iter().map(|(e, _)| (e, 0.0)).collect(),
        Some(inv) => free
            .into_iter()
            .map(|(e, w)| {
                let (u, v) = edge_endpoints(n, e);
                let g = |a: usize, b: usize| {
                    if a < m && b < m {
                        inv[(a, b)]
                    } else {
                        0.0
                    }
                };
                let r = g(u, u) + g(v, v) - 2.0 * g(u, v);
                (e, w * r)
            })
            .collect(),
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Explicit(Box<BeckState>),
    SpanningTrees { n: usize },
}

#[derive(Clone, Debug, Default)]
pub struct BeckBreaker {
    backend: Option<Backend>,
}

impl BeckBreaker {
    pub fn new() -> Self {
        BeckBreaker { backend: None }
    }

    pub fn state(&self) -> Option<&BeckState> {
        match &self.backend {
            Some(Backend::Explicit(s)) => Some(s),
            _ => None,
        }
    }
}

impl Strategy for BeckBreaker {
    fn name(&self) -> String {
        "beck".into()
    }

    fn role(&self) -> Player {
        Player::Breaker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        self.backend = Some(match view.objective {
            Objective::Explicit { family } => Backend::Explicit(Box::new(BeckState::new(
                family.sets().map(<[_]>::to_vec).collect(),
                view.board.ground(),
                view.bias,
            )?)),
            Objective::Graph {
                n,
                property: GraphProperty::Connected,
            } => Backend::SpanningTrees { n: *n },
            Objective::Graph {
                n,
                property: GraphProperty::ContainsCopy { pattern },
            } => {
                let host = view.board.as_graph(&view.board.to_bitset())?;
                let sets = enumerate_copies(pattern, &host)?
                    .into_iter()
                    .map(|c| {
                        let mut ids: Vec<Element> =
                            c.edges.iter().map(|&(u, v)| edge_id(*n, u, v)).collect();
                        ids.sort_unstable();
                        ids
                    })
                    .collect();
                Backend::Explicit(Box::new(BeckState::new(
                    sets,
                    view.board.ground(),
                    view.bias,
                )?))
            }
            Objective::Graph { property, .. } => {
                return Err(Error::InvalidArgument(format!(
                    "beck Breaker cannot enumerate the {} family",
                    property.name()
                )))
            }
        });
        Ok(())
    }

    fn observe(&mut self, _state: &GameState, mv: &Move) -> Result<()> {
        if let (Some(Backend::Explicit(s)), Player::Maker) = (&mut self.backend, mv.player) {
            s.maker_claim(mv.elements[0]);
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        match self.backend.as_mut() {
            Some(Backend::Explicit(s)) => beck_breaker_move(s, state),
            Some(Backend::SpanningTrees { n }) => {
                let quota = state.bias().min(state.free_count());
                let mut picks = Vec::with_capacity(quota);
                for _ in 0..quota {
                    let e = argmax_lowest(spanning_tree_scores(*n, state, &picks))
                        .ok_or_else(|| Error::InvalidState("no free element".into()))?;
                    picks.push(e);
                }
                Ok(picks)
            }
            None => Err(Error::InvalidState("choose called outside a stage".into())),
        }
    }
}
