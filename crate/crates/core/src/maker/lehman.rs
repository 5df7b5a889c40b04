//! Connectivity Maker built on pairs of edge-disjoint spanning trees.
//!
//! Each pair keeps a union-find of the vertices Maker has already joined. When
//! Breaker takes an edge of one tree and the tree falls apart over the contracted
//! vertex set, Maker claims an edge of the partner tree across the cut and
//! contracts it. A pair is finished once its vertices are a single class; Maker's
//! contracted edges then form a spanning tree, and these trees seed the pairs of
//! the next stage.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::board::{Element, GameState, Move, Player, StageReduction};
use crate::dsu::UnionFind;
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::graph::{edge_endpoints, spanning_tree_packing};

#[derive(Clone, Debug)]
pub struct TreePair {
    pub trees: [Vec<Element>; 2],
    dsu: UnionFind,
    /// Maker edges that joined two classes of this pair, in claim order.
    pub contracted: Vec<Element>,
    abandoned: bool,
}

impl TreePair {
    fn new(n: usize, a: Vec<Element>, b: Vec<Element>) -> Self {
        TreePair {
            trees: [a, b],
            dsu: UnionFind::new(n),
            contracted: Vec::new(),
            abandoned: false,
        }
    }

    pub fn classes(&self) -> usize {
        self.dsu.set_count()
    }

    pub fn is_complete(&self) -> bool {
        self.dsu.set_count() == 1
    }

    /// Free, non-loop edges of tree `i`.
    fn live(&self, i: usize, n: usize, state: &GameState) -> Vec<(Element, usize, usize)> {
        self.trees[i]
            .iter()
            .filter(|&&e| state.is_free(e))
            .filter_map(|&e| {
                let (u, v) = edge_endpoints(n, e);
                let (ru, rv) = (self.dsu.root(u), self.dsu.root(v));
                (ru != rv).then_some((e, ru, rv))
            })
            .collect()
    }

    /// Component label (per vertex) of tree `i` over the contracted classes, or
    /// `None` when the tree still spans them.
    fn cut(&self, i: usize, n: usize, state: &GameState) -> Option<Vec<usize>> {
        let mut comp = UnionFind::new(n);
        for (_, ru, rv) in self.live(i, n, state) {
            comp.union(ru, rv);
        }
        let label: Vec<usize> = (0..n).map(|v| comp.find(self.dsu.root(v))).collect();
        let roots = (0..n).filter(|&v| self.dsu.root(v) == v);
        let mut first = None;
        for r in roots {
            match first {
                None => first = Some(label[r]),
                Some(l) if l != label[r] => return Some(label),
                _ => {}
            }
        }
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LehmanStageRecord {
    pub stage: usize,
    pub pairs: usize,
    pub completed: usize,
    /// Maker moves spent on each pair.
    pub moves_per_pair: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LehmanMaker {
    n: usize,
    bias: usize,
    pairs: Vec<TreePair>,
    owner_of: HashMap<Element, usize>,
    last_pair: Option<usize>,
    next_trees: Option<Vec<Vec<Element>>>,
    records: Vec<LehmanStageRecord>,
}

impl LehmanMaker {
    pub fn new(n: usize) -> Self {
        LehmanMaker {
            n,
            bias: 1,
            pairs: Vec::new(),
            owner_of: HashMap::new(),
            last_pair: None,
            next_trees: None,
            records: Vec::new(),
        }
    }

    pub fn pairs(&self) -> &[TreePair] {
        &self.pairs
    }

    pub fn records(&self) -> &[LehmanStageRecord] {
        &self.records
    }

    /// Repair move for the first broken tree, preferring the pair Breaker just hit.
    fn repair(&mut self, state: &GameState) -> Result<Option<Element>> {
        let order: Vec<usize> = self
            .last_pair
            .into_iter()
            .chain(0..self.pairs.len())
            .collect();
        for p in order {
            let pair = &self.pairs[p];
            if pair.abandoned || pair.is_complete() {
                continue;
            }
            for i in 0..2 {
                let Some(label) = pair.cut(i, self.n, state) else {
                    continue;
                };
                let fix = pair
                    .live(1 - i, self.n, state)
                    .into_iter()
                    .filter(|&(_, ru, rv)| label[ru] != label[rv])
                    .map(|(e, _, _)| e)
                    .min();
                match fix {
                    Some(e) => return Ok(Some(e)),
                    None if self.bias == 1 => {
                        return Err(Error::InvariantViolation(format!(
                            "pair {p}: no edge of tree {} crosses the cut of tree {i}",
                            1 - i
                        )))
                    }
                    None => {}
                }
            }
            if self.bias > 1
                && pair.cut(0, self.n, state).is_some()
                && pair.cut(1, self.n, state).is_some()
            {
                self.pairs[p].abandoned = true;
            }
        }
        Ok(None)
    }

    fn free_move(&self, state: &GameState) -> Option<Element> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.abandoned && !p.is_complete())
            .max_by(|(i, a), (j, b)| a.classes().cmp(&b.classes()).then(j.cmp(i)))
            .map(|(i, _)| i)?;
        let pair = &self.pairs[best];
        (0..2)
            .flat_map(|i| pair.live(i, self.n, state))
            .map(|(e, _, _)| e)
            .min()
    }
}

impl Strategy for LehmanMaker {
    fn name(&self) -> String {
        "lehman".into()
    }

    fn role(&self) -> Player {
        Player::Maker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        if view.board.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "lehman Maker built for K_{} but board is on {} vertices",
                self.n,
                view.board.n()
            )));
        }
        self.bias = view.bias;
        let trees = match self.next_trees.take() {
            Some(t) => t,
            None => spanning_tree_packing(self.n)?,
        };
        let trees: Vec<Vec<Element>> = trees
            .into_iter()
            .filter(|t| t.iter().all(|&e| view.board.contains(e)))
            .collect();
        self.pairs = trees
            .chunks_exact(2)
            .map(|c| TreePair::new(self.n, c[0].clone(), c[1].clone()))
            .collect();
        self.owner_of = self
            .pairs
            .iter()
            .enumerate()
            .flat_map(|(p, pair)| pair.trees.iter().flatten().map(move |&e| (e, p)))
            .collect();
        self.last_pair = None;
        self.records.push(LehmanStageRecord {
            stage: view.stage,
            pairs: self.pairs.len(),
            completed: 0,
            moves_per_pair: vec![0; self.pairs.len()],
        });
        Ok(())
    }

    fn observe(&mut self, _state: &GameState, mv: &Move) -> Result<()> {
        match mv.player {
            Player::Breaker => {
                self.last_pair = mv
                    .elements
                    .iter()
                    .find_map(|e| self.owner_of.get(e).copied());
            }
            Player::Maker => {
                let e = mv.elements[0];
                if let Some(&p) = self.owner_of.get(&e) {
                    let (u, v) = edge_endpoints(self.n, e);
                    let pair = &mut self.pairs[p];
                    if pair.dsu.union(u, v) {
                        pair.contracted.push(e);
                        if let Some(r) = self.records.last_mut() {
                            r.moves_per_pair[p] += 1;
                        }
                    }
                }
                self.last_pair = None;
            }
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        if let Some(e) = self.repair(state)? {
            return Ok(vec![e]);
        }
        if let Some(e) = self.free_move(state) {
            return Ok(vec![e]);
        }
        state
            .free_elements()
            .next()
            .map(|e| vec![e])
            .ok_or_else(|| Error::InvalidState("no free element".into()))
    }

    fn end_stage(&mut self, _reduction: &StageReduction) -> Result<()> {
        let done: Vec<Vec<Element>> = self
            .pairs
            .iter()
            .filter(|p| p.is_complete())
            .map(|p| {
                let mut t = p.contracted.clone();
                t.sort_unstable();
                t
            })
            .collect();
        if let Some(r) = self.records.last_mut() {
            r.completed = done.len();
        }
        self.next_trees = Some(done);
        Ok(())
    }
}
