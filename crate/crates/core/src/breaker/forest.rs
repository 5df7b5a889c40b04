//! Forest-partition Breaker for the non-k-colorability game.
//!
//! The board is split into edge-disjoint forests, grouped `b+1` at a time. Inside a
//! group Breaker keeps Maker's edges acyclic: contracting Maker's components, the
//! free edges of every forest of the group must stay a forest. When Maker joins
//! `u` and `v` with an edge of forest `f`, each other forest of the group that
//! already connects the classes of `u` and `v` would close a cycle, so Breaker takes
//! the lowest edge of that path. A group has at most `b` other forests, so `b`
//! claims always suffice. Maker's edges in each group form one forest, so after the
//! stage the number of forests drops from `k` to `ceil(k/(b+1))`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::board::{Board, Element, GameState, Move, Owner, Player, StageReduction};
use crate::dsu::UnionFind;
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::graph::{edge_endpoints, initial_forest_partition, is_forest};

/// Groups of at most `size` consecutive forests.
pub fn group_forests(forests: Vec<Vec<Element>>, size: usize) -> Vec<Vec<Vec<Element>>> {
    let mut groups = Vec::new();
    let mut it = forests.into_iter().filter(|f| !f.is_empty()).peekable();
    while it.peek().is_some() {
        groups.push(it.by_ref().take(size).collect());
    }
    groups
}

/// First-fit decomposition of a board into forests, edges in id order.
pub fn greedy_forests(board: &Board) -> Vec<Vec<Element>> {
    let n = board.n();
    let mut forests: Vec<(UnionFind, Vec<Element>)> = Vec::new();
    for &e in board.elements() {
        let (u, v) = edge_endpoints(n, e);
        match forests.iter_mut().find(|(d, _)| d.root(u) != d.root(v)) {
            Some((d, f)) => {
                d.union(u, v);
                f.push(e);
            }
            None => {
                let mut d = UnionFind::new(n);
                d.union(u, v);
                forests.push((d, vec![e]));
            }
        }
    }
    forests.into_iter().map(|(_, f)| f).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestStageRecord {
    pub stage: usize,
    pub forests: usize,
    pub groups: usize,
    /// Most path edges Breaker had to take in one reply.
    pub max_forced: usize,
    pub invariant_checks: usize,
}

#[derive(Clone, Debug)]
pub struct ForestBreaker {
    n: usize,
    b: usize,
    forests: Option<Vec<Vec<Element>>>,
    groups: Vec<Vec<Vec<Element>>>,
    /// Edge -> (group, forest).
    slot: HashMap<Element, (usize, usize)>,
    maker: Vec<UnionFind>,
    pending: Vec<Element>,
    pending_group: Option<usize>,
    records: Vec<ForestStageRecord>,
}

impl ForestBreaker {
    pub fn new(n: usize) -> Self {
        ForestBreaker {
            n,
            b: 1,
            forests: None,
            groups: Vec::new(),
            slot: HashMap::new(),
            maker: Vec::new(),
            pending: Vec::new(),
            pending_group: None,
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[ForestStageRecord] {
        &self.records
    }

    pub fn groups(&self) -> &[Vec<Vec<Element>>] {
        &self.groups
    }

    /// Lowest free edge on the path between the classes of `u` and `v` in forest
    /// `f` of group `g`, over the contracted Maker classes.
    fn path_edge(
        &self,
        g: usize,
        f: usize,
        u: usize,
        v: usize,
        state: &GameState,
    ) -> Option<Element> {
        let dsu = &self.maker[g];
        let (su, sv) = (dsu.root(u), dsu.root(v));
        if su == sv {
            return None;
        }
        let mut adj: HashMap<usize, Vec<(usize, Element)>> = HashMap::new();
        for &e in &self.groups[g][f] {
            if state.is_free(e) {
                let (a, b) = edge_endpoints(self.n, e);
                let (ra, rb) = (dsu.root(a), dsu.root(b));
                adj.entry(ra).or_default().push((rb, e));
                adj.entry(rb).or_default().push((ra, e));
            }
        }
        let mut prev: HashMap<usize, (usize, Element)> = HashMap::new();
        let mut queue = VecDeque::from([su]);
        prev.insert(su, (su, usize::MAX));
        while let Some(x) = queue.pop_front() {
            if x == sv {
                break;
            }
            for &(y, e) in adj.get(&x).into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(slot) = prev.entry(y) {
                    slot.insert((x, e));
                    queue.push_back(y);
                }
            }
        }
        prev.get(&sv)?;
        let mut best = usize::MAX;
        let mut x = sv;
        while x != su {
            let (p, e) = prev[&x];
            best = best.min(e);
            x = p;
        }
        Some(best)
    }

    /// Locking invariant: no free group edge lies inside a Maker class, and the
    /// free edges of every forest stay acyclic over the classes.
    pub fn check_invariant(&self, state: &GameState) -> Result<()> {
        for (g, group) in self.groups.iter().enumerate() {
            let dsu = &self.maker[g];
            for (f, forest) in group.iter().enumerate() {
                let mut acyclic = UnionFind::new(self.n);
                for &e in forest {
                    if !state.is_free(e) {
                        continue;
                    }
                    let (a, b) = edge_endpoints(self.n, e);
                    let (ra, rb) = (dsu.root(a), dsu.root(b));
                    if ra == rb {
                        return Err(Error::InvariantViolation(format!(
                            "free edge {e} of group {g} lies inside a Maker component"
                        )));
                    }
                    if !acyclic.union(ra, rb) {
                        return Err(Error::InvariantViolation(format!(
                            "free edges of forest {f} in group {g} close a cycle at edge {e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Strategy for ForestBreaker {
    fn name(&self) -> String {
        "forest".into()
    }

    fn role(&self) -> Player {
        Player::Breaker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        if view.board.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "forest Breaker built for K_{} but board is on {} vertices",
                self.n,
                view.board.n()
            )));
        }
        self.b = view.bias;
        let mut forests = match self.forests.take() {
            Some(f) => f,
            None if view.board.len() == crate::graph::simple::edge_count_complete(self.n) => {
                initial_forest_partition(self.n)?
            }
            None => greedy_forests(view.board),
        };
        let covered: usize = forests.iter().map(Vec::len).sum();
        if covered != view.board.len() || forests.iter().flatten().any(|&e| !view.board.contains(e))
        {
            forests = greedy_forests(view.board);
        }
        self.groups = group_forests(forests, self.b + 1);
        self.slot = self
            .groups
            .iter()
            .enumerate()
            .flat_map(|(g, group)| {
                group
                    .iter()
                    .enumerate()
                    .flat_map(move |(f, forest)| forest.iter().map(move |&e| (e, (g, f))))
            })
            .collect();
        self.maker = vec![UnionFind::new(self.n); self.groups.len()];
        self.pending.clear();
        self.pending_group = None;
        self.records.push(ForestStageRecord {
            stage: view.stage,
            forests: self.groups.iter().map(Vec::len).sum(),
            groups: self.groups.len(),
            ..Default::default()
        });
        Ok(())
    }

    fn observe(&mut self, state: &GameState, mv: &Move) -> Result<()> {
        match mv.player {
            Player::Maker => {
                let e = mv.elements[0];
                let &(g, f) = self.slot.get(&e).ok_or_else(|| {
                    Error::InvariantViolation(format!("edge {e} is in no forest group"))
                })?;
                let (u, v) = edge_endpoints(self.n, e);
                let forced: Vec<Element> = (0..self.groups[g].len())
                    .filter(|&j| j != f)
                    .filter_map(|j| self.path_edge(g, j, u, v, state))
                    .collect();
                if forced.len() > self.b {
                    return Err(Error::InvariantViolation(format!(
                        "{} path edges to block in group {g} exceed b={}",
                        forced.len(),
                        self.b
                    )));
                }
                if !self.maker[g].union(u, v) {
                    return Err(Error::InvariantViolation(format!(
                        "Maker edge {e} closes a cycle in group {g}"
                    )));
                }
                if let Some(r) = self.records.last_mut() {
                    r.max_forced = r.max_forced.max(forced.len());
                }
                self.pending = forced;
                self.pending_group = Some(g);
            }
            Player::Breaker => {
                self.check_invariant(state)?;
                if let Some(r) = self.records.last_mut() {
                    r.invariant_checks += 1;
                }
            }
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let quota = state.bias().min(state.free_count());
        if quota == 0 {
            return Err(Error::InvalidState("no free element".into()));
        }
        let mut picks: Vec<Element> = std::mem::take(&mut self.pending);
        if let Some(g) = self.pending_group.take() {
            let mut same: Vec<Element> = self.groups[g]
                .iter()
                .flatten()
                .copied()
                .filter(|&e| state.is_free(e) && !picks.contains(&e))
                .collect();
            same.sort_unstable();
            picks.extend(same.into_iter().take(quota.saturating_sub(picks.len())));
        }
        let rest: Vec<Element> = state
            .free_elements()
            .filter(|e| !picks.contains(e))
            .take(quota.saturating_sub(picks.len()))
            .collect();
        picks.extend(rest);
        Ok(picks)
    }

    fn end_stage(&mut self, reduction: &StageReduction) -> Result<()> {
        let keep = reduction.next_board.to_bitset();
        let mut next = Vec::with_capacity(self.groups.len());
        for (g, group) in self.groups.iter().enumerate() {
            let mut mine: Vec<Element> = group
                .iter()
                .flatten()
                .copied()
                .filter(|&e| keep.contains(e))
                .collect();
            mine.sort_unstable();
            if !is_forest(self.n, mine.iter().map(|&e| edge_endpoints(self.n, e))) {
                return Err(Error::InvariantViolation(format!(
                    "Maker's edges in group {g} are not a forest"
                )));
            }
            next.push(mine);
        }
        self.forests = Some(next);
        Ok(())
    }
}

/// Ownership-free check used by tests: every forest of a group spans at most
/// `(b+1)(|S|-1)` edges inside any vertex set `S`.
pub fn group_edges_within(n: usize, group: &[Vec<Element>], mask: u64) -> usize {
    group
        .iter()
        .flatten()
        .filter(|&&e| {
            let (u, v) = edge_endpoints(n, e);
            mask >> u & 1 == 1 && mask >> v & 1 == 1
        })
        .count()
}

/// Whether `owner` gives Maker an acyclic graph inside every group.
pub fn maker_acyclic_in_groups(n: usize, groups: &[Vec<Vec<Element>>], state: &GameState) -> bool {
    groups.iter().all(|group| {
        is_forest(
            n,
            group
                .iter()
                .flatten()
                .filter(|&&e| state.owner(e) == Some(Owner::Maker))
                .map(|&e| edge_endpoints(n, e)),
        )
    })
}
