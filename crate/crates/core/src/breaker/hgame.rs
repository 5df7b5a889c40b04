//! Two-phase Breaker for the H-game.
//!
//! Phase 1 runs the potential Breaker against the family of s-bunches of copies of
//! `K` (a densest subgraph of `H` in the 2-density sense) on `t v(K)` to
//! `(t+1) v(K)` vertices. Once Maker's board holds none of them, every remaining
//! K-collection is small. Phase 2 answers each Maker edge inside a collection with
//! up to `b` edges of the same collection, so each collection shrinks by a factor
//! `b+1` per stage.

use std::collections::HashMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::beck::{beck_breaker_move, BeckState};
use crate::board::{Element, GameState, Move, Player, StageReduction};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::graph::{
    choose_k_graph, density::two_density, edge_id, enumerate_copies, k_collections, max_2_density,
    SimpleGraph,
};

/// `delta` and `t` for the bunch family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BunchParameters {
    pub delta: f64,
    pub t: usize,
}

fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smallest `delta >= 0` with `(e(K) + m x)/(v(K) + x) >= m - delta` for all
/// `x >= t - 1`, where `m = m_2(K)`.
pub fn min_delta(k: &SimpleGraph, t: usize) -> Result<Rational64> {
    let m = max_2_density(k)?;
    let e = Rational64::from_integer(k.edge_count() as i64);
    let v = Rational64::from_integer(k.n() as i64);
    let x = Rational64::from_integer(t.saturating_sub(1) as i64);
    let at = (e + m * x) / (v + x);
    let floor = if at < m { at } else { m };
    Ok(m - floor)
}

/// Searches `delta` on a grid below `m - 1/(1/m + eps/4)` and returns the pair
/// with the smallest `t` meeting both inequalities that fix the bunch size.
pub fn derive_bunch_parameters(k: &SimpleGraph, eps: f64) -> Result<Option<BunchParameters>> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps={eps} must be positive"
        )));
    }
    let m = ratio_f64(max_2_density(k)?);
    let (e, v) = (k.edge_count() as f64, k.n() as f64);
    let sup = m - 1.0 / (1.0 / m + eps / 4.0);
    let mut best: Option<BunchParameters> = None;
    for i in 1..100 {
        let delta = sup * i as f64 / 100.0;
        let rhs = 1.0 / (m - delta) + eps / 4.0;
        for t in 1..=10_000usize {
            let x = (t - 1) as f64;
            let dense = ((e + m * x) / (v + x)).min(m) >= m - delta;
            let den = (m - delta) * t as f64 * v - 1.0;
            let sized = den > 0.0 && (t as f64 + 2.0) * v / den < rhs;
            if dense && sized {
                if best.is_none_or(|b| t < b.t) {
                    best = Some(BunchParameters { delta, t });
                }
                break;
            }
        }
    }
    Ok(best)
}

/// Enumerated bunches, as sorted edge-id sets of `K_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BunchFamily {
    pub n: usize,
    pub t: usize,
    pub sets: Vec<Vec<Element>>,
    /// Vertex count of each bunch.
    pub vertices: Vec<usize>,
}

impl BunchFamily {
    pub fn density(&self, i: usize) -> Rational64 {
        Rational64::new(self.sets[i].len() as i64, self.vertices[i] as i64)
    }

    pub fn min_density(&self) -> Option<Rational64> {
        (0..self.sets.len()).map(|i| self.density(i)).min()
    }
}

/// Which bunches [`enumerate_bunch_family`] lists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BunchScope {
    /// Every bunch in the vertex range.
    All,
    /// Bunches whose last copy is the first to bring the union to `t v(K)` or more
    /// vertices. Every bunch in the range has such a prefix, so a board without
    /// one has none at all.
    #[default]
    Entry,
}

/// s-bunches of copies of `K` in `K_n` with `s >= t` and
/// `t v(K) <= v(B) <= (t+1) v(K)`, deduplicated by edge set. Errors if any bunch
/// has density below `m_2(K) - delta`.
pub fn enumerate_bunch_family(
    n: usize,
    k: &SimpleGraph,
    t: usize,
    delta: Rational64,
    scope: BunchScope,
    cap: usize,
) -> Result<BunchFamily> {
    if n > 11 {
        return Err(Error::SizeLimit {
            what: "bunch enumeration vertices",
            limit: 11,
            got: n,
        });
    }
    if k.n() < 3 || !crate::graph::is_connected(k) {
        return Err(Error::InvalidArgument(
            "K must be connected with v(K) >= 3".into(),
        ));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("t must be >= 1".into()));
    }
    let host = SimpleGraph::complete(n)?;
    let copies: Vec<(u64, u64)> = enumerate_copies(k, &host)?
        .into_iter()
        .map(|c| {
            let mask = c
                .edges
                .iter()
                .fold(0u64, |acc, &(u, v)| acc | 1 << edge_id(n, u, v));
            (c.vertices, mask)
        })
        .collect();
    let vk = k.n();
    let (lo, hi) = (t * vk, (t + 1) * vk);
    // Edge mask -> (vertex mask, longest chain length reaching it).
    let mut seen: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut stack: Vec<(u64, u64, usize)> = Vec::new();
    for &(vm, em) in &copies {
        if seen.insert(em, (vm, 1)).is_none() {
            stack.push((vm, em, 1));
        }
    }
    while let Some((vm, em, s)) = stack.pop() {
        if seen.get(&em).is_some_and(|&(_, best)| best > s) {
            continue;
        }
        if scope == BunchScope::Entry && vm.count_ones() as usize >= lo {
            continue;
        }
        for &(cv, ce) in &copies {
            if (cv & vm).count_ones() < 2 || cv & !vm == 0 {
                continue;
            }
            let nv = vm | cv;
            if nv.count_ones() as usize > hi {
                continue;
            }
            let ne = em | ce;
            let better = match seen.get(&ne) {
                None => true,
                Some(&(_, best)) => s + 1 > best,
            };
            if better {
                seen.insert(ne, (nv, s + 1));
                stack.push((nv, ne, s + 1));
                if seen.len() > cap.saturating_mul(8) {
                    return Err(Error::FamilyTooLarge {
                        estimate: seen.len() as f64,
                        cap,
                    });
                }
            }
        }
    }
    let mut found: Vec<(Vec<Element>, usize)> = seen
        .into_iter()
        .filter(|&(_, (vm, s))| s >= t && (lo..=hi).contains(&(vm.count_ones() as usize)))
        .map(|(em, (vm, _))| {
            let edges = (0..64).filter(|i| em >> i & 1 == 1).collect();
            (edges, vm.count_ones() as usize)
        })
        .collect();
    if found.len() > cap {
        return Err(Error::FamilyTooLarge {
            estimate: found.len() as f64,
            cap,
        });
    }
    found.sort_unstable();
    let fam = BunchFamily {
        n,
        t,
        vertices: found.iter().map(|(_, v)| *v).collect(),
        sets: found.into_iter().map(|(s, _)| s).collect(),
    };
    let bound = max_2_density(k)? - delta;
    if let Some(d) = fam.min_density() {
        if d < bound {
            return Err(Error::InvariantViolation(format!(
                "bunch density {d} below m2(K) - delta = {bound}"
            )));
        }
    }
    Ok(fam)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HGameConfig {
    pub eps: f64,
    /// Used when the derived `t` does not fit on `n` vertices.
    pub t: usize,
    /// Overrides `ceil((1/m_2 + eps/2) log_{b+1} n)`.
    pub phase1_stages: Option<usize>,
    pub scope: BunchScope,
    pub cap: usize,
}

impl Default for HGameConfig {
    fn default() -> Self {
        HGameConfig {
            eps: 0.5,
            t: 2,
            phase1_stages: None,
            scope: BunchScope::Entry,
            cap: crate::maker::DEFAULT_FAMILY_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HGameReport {
    pub t: usize,
    pub delta: f64,
    pub derived: bool,
    pub phase1_stages: usize,
    pub bunch_count: usize,
    /// Surviving bunches after each phase-1 stage.
    pub bunches_after_stage: Vec<usize>,
    /// Largest K-collection (in vertices) on Maker's board when phase 1 ended.
    pub largest_collection_after_phase1: Option<usize>,
    pub phase2_from_stage: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct HGameBreaker {
    n: usize,
    k: SimpleGraph,
    phase1_len: usize,
    bunches: Vec<Vec<Element>>,
    beck: Option<BeckState>,
    collections: Vec<Vec<Element>>,
    collection_of: HashMap<Element, usize>,
    target: Option<usize>,
    stage: usize,
    report: HGameReport,
}

impl HGameBreaker {
    pub fn new(n: usize, h: &SimpleGraph, b: usize, cfg: &HGameConfig) -> Result<Self> {
        let k = choose_k_graph(h)?;
        let m2 = max_2_density(&k)?;
        if two_density(&k)? != m2 {
            return Err(Error::InvariantViolation(
                "chosen K is not 2-balanced".into(),
            ));
        }
        let derived = derive_bunch_parameters(&k, cfg.eps)?.filter(|p| p.t * k.n() <= n);
        let (t, delta, is_derived) = match derived {
            Some(p) => (
                p.t,
                Rational64::approximate_float(p.delta).unwrap_or_default(),
                true,
            ),
            None => (cfg.t, min_delta(&k, cfg.t)?, false),
        };
        let fam = enumerate_bunch_family(n, &k, t, delta, cfg.scope, cfg.cap)?;
        let phase1_len = cfg.phase1_stages.unwrap_or_else(|| {
            let x = (1.0 / ratio_f64(m2) + cfg.eps / 2.0) * (n as f64).ln() / (b as f64 + 1.0).ln();
            x.ceil() as usize
        });
        Ok(HGameBreaker {
            n,
            k,
            phase1_len,
            report: HGameReport {
                t,
                delta: ratio_f64(delta),
                derived: is_derived,
                phase1_stages: phase1_len,
                bunch_count: fam.sets.len(),
                ..Default::default()
            },
            bunches: fam.sets,
            beck: None,
            collections: Vec::new(),
            collection_of: HashMap::new(),
            target: None,
            stage: 0,
        })
    }

    pub fn report(&self) -> &HGameReport {
        &self.report
    }

    pub fn k(&self) -> &SimpleGraph {
        &self.k
    }

    fn in_phase1(&self, stage: usize) -> bool {
        stage <= self.phase1_len && !self.bunches.is_empty()
    }

    fn largest_collection(&self, board: &crate::board::Board) -> Result<usize> {
        let g = board.as_graph(&board.to_bitset())?;
        Ok(k_collections(&g, &self.k)?.largest_vertex_count())
    }
}

impl Strategy for HGameBreaker {
    fn name(&self) -> String {
        "hgame".into()
    }

    fn role(&self) -> Player {
        Player::Breaker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        if view.board.n() != self.n {
            return Err(Error::InvalidArgument(
                "board does not match the H-game n".into(),
            ));
        }
        self.stage = view.stage;
        self.target = None;
        if self.in_phase1(view.stage) {
            self.beck = Some(BeckState::new(
                self.bunches.clone(),
                view.board.ground(),
                view.bias,
            )?);
            return Ok(());
        }
        self.beck = None;
        if self.report.phase2_from_stage.is_none() {
            self.report.phase2_from_stage = Some(view.stage);
            if self.report.largest_collection_after_phase1.is_none() {
                self.report.largest_collection_after_phase1 =
                    Some(self.largest_collection(view.board)?);
            }
        }
        let g = view.board.as_graph(&view.board.to_bitset())?;
        self.collections = k_collections(&g, &self.k)?
            .collections
            .into_iter()
            .map(|c| {
                c.edges
                    .iter()
                    .map(|&(u, v)| edge_id(self.n, u, v))
                    .collect()
            })
            .collect();
        self.collection_of = self
            .collections
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&e| (e, i)))
            .collect();
        Ok(())
    }

    fn observe(&mut self, _state: &GameState, mv: &Move) -> Result<()> {
        if mv.player == Player::Maker {
            let e = mv.elements[0];
            match self.beck.as_mut() {
                Some(beck) => beck.maker_claim(e),
                None => self.target = self.collection_of.get(&e).copied(),
            }
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        if let Some(beck) = self.beck.as_mut() {
            return beck_breaker_move(beck, state);
        }
        let quota = state.bias().min(state.free_count());
        if quota == 0 {
            return Err(Error::InvalidState("no free element".into()));
        }
        let mut picks: Vec<Element> = Vec::with_capacity(quota);
        if let Some(c) = self.target.take() {
            picks.extend(
                self.collections[c]
                    .iter()
                    .copied()
                    .filter(|&e| state.is_free(e))
                    .take(quota),
            );
        }
        let mut others: Vec<Element> = self
            .collections
            .iter()
            .flatten()
            .copied()
            .filter(|&e| state.is_free(e) && !picks.contains(&e))
            .collect();
        others.sort_unstable();
        picks.extend(others.into_iter().take(quota - picks.len()));
        let rest: Vec<Element> = state
            .free_elements()
            .filter(|e| !picks.contains(e))
            .take(quota - picks.len())
            .collect();
        picks.extend(rest);
        Ok(picks)
    }

    fn end_stage(&mut self, reduction: &StageReduction) -> Result<()> {
        if self.beck.take().is_some() {
            let keep = reduction.next_board.to_bitset();
            self.bunches.retain(|s| s.iter().all(|&e| keep.contains(e)));
            self.report.bunches_after_stage.push(self.bunches.len());
            if !self.in_phase1(self.stage + 1) {
                self.report.largest_collection_after_phase1 =
                    Some(self.largest_collection(&reduction.next_board)?);
            }
        }
        Ok(())
    }
}
