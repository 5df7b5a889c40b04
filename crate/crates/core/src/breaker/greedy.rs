//! Greedy Breaker: isolates a vertex on graph boards, otherwise takes the element
//! lying in the most alive winning sets.

use crate::board::{Element, GameState, Objective, Owner, Player};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::graph::edge_endpoints;

#[derive(Clone, Debug, Default)]
pub struct GreedyBreaker {
    sets: Option<Vec<Vec<Element>>>,
    n: usize,
}

impl GreedyBreaker {
    pub fn new() -> Self {
        GreedyBreaker::default()
    }

    /// Vertex with no Maker edge and the fewest (but at least one) free edges.
    fn isolation_target(&self, state: &GameState, taken: &[Element]) -> Option<usize> {
        let n = self.n;
        let mut maker_deg = vec![0usize; n];
        let mut free_deg = vec![0usize; n];
        for &e in state.board().elements() {
            let (u, v) = edge_endpoints(n, e);
            match state.owner(e) {
                Some(Owner::Maker) => {
                    maker_deg[u] += 1;
                    maker_deg[v] += 1;
                }
                Some(Owner::Free) if !taken.contains(&e) => {
                    free_deg[u] += 1;
                    free_deg[v] += 1;
                }
                _ => {}
            }
        }
        (0..n)
            .filter(|&v| maker_deg[v] == 0 && free_deg[v] > 0)
            .min_by_key(|&v| (free_deg[v], v))
    }

    fn graph_move(&self, state: &GameState, quota: usize) -> Vec<Element> {
        let mut picks = Vec::with_capacity(quota);
        while picks.len() < quota {
            let Some(v) = self.isolation_target(state, &picks) else {
                break;
            };
            let edges: Vec<Element> = state
                .free_elements()
                .filter(|e| !picks.contains(e))
                .filter(|&e| {
                    let (a, b) = edge_endpoints(self.n, e);
                    a == v || b == v
                })
                .collect();
            for e in edges {
                if picks.len() == quota {
                    break;
                }
                picks.push(e);
            }
        }
        picks
    }

    fn explicit_move(sets: &[Vec<Element>], state: &GameState, quota: usize) -> Vec<Element> {
        let mut alive: Vec<bool> = sets
            .iter()
            .map(|s| s.iter().all(|&e| state.owner(e) != Some(Owner::Breaker)))
            .collect();
        let mut picks = Vec::with_capacity(quota);
        for _ in 0..quota {
            let mut count = vec![0usize; state.board().ground()];
            for (s, _) in sets.iter().zip(&alive).filter(|(_, &a)| a) {
                for &e in s {
                    count[e] += 1;
                }
            }
            let best = state
                .free_elements()
                .filter(|e| !picks.contains(e))
                .max_by(|&a, &b| count[a].cmp(&count[b]).then(b.cmp(&a)));
            let Some(e) = best else { break };
            for (s, a) in sets.iter().zip(alive.iter_mut()) {
                if s.contains(&e) {
                    *a = false;
                }
            }
            picks.push(e);
        }
        picks
    }
}

impl Strategy for GreedyBreaker {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn role(&self) -> Player {
        Player::Breaker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        self.n = view.board.n();
        self.sets = match view.objective {
            Objective::Explicit { family } => Some(family.sets().map(<[_]>::to_vec).collect()),
            Objective::Graph { .. } => None,
        };
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let quota = state.bias().min(state.free_count());
        if quota == 0 {
            return Err(Error::InvalidState("no free element".into()));
        }
        let mut picks = match &self.sets {
            Some(sets) => Self::explicit_move(sets, state, quota),
            None => self.graph_move(state, quota),
        };
        let rest: Vec<Element> = state
            .free_elements()
            .filter(|e| !picks.contains(e))
            .take(quota - picks.len())
            .collect();
        picks.extend(rest);
        Ok(picks)
    }
}
