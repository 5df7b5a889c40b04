//! Subgraph-isomorphism search for small pattern graphs.

use std::collections::BTreeSet;

use super::simple::{bits, SimpleGraph};
use crate::error::{Error, Result};

/// Default largest pattern size accepted by the copy search.
pub const PATTERN_LIMIT: usize = 8;

/// One copy of a pattern inside a host graph, identified by its vertex and edge sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Copy {
    pub vertices: u64,
    pub edges: Vec<(usize, usize)>,
}

impl Copy {
    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones() as usize
    }
}

fn check_pattern(h: &SimpleGraph) -> Result<()> {
    if h.n() > PATTERN_LIMIT {
        return Err(Error::SizeLimit {
            what: "pattern vertices",
            limit: PATTERN_LIMIT,
            got: h.n(),
        });
    }
    Ok(())
}

/// Order pattern vertices so each one (after the first in its component) has an
/// already-placed neighbour when possible; highest degree first.
fn search_order(h: &SimpleGraph) -> Vec<usize> {
    let mut order = Vec::with_capacity(h.n());
    let mut placed = 0u64;
    while order.len() < h.n() {
        let next = (0..h.n())
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                (
                    (h.neighbors(v) & placed).count_ones(),
                    h.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    order
}

/// Walks every injective map `V(h) -> V(g)` preserving adjacency; the callback
/// returns `false` to stop early.
fn for_each_embedding(
    h: &SimpleGraph,
    g: &SimpleGraph,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<()> {
    check_pattern(h)?;
    if h.n() > g.n() {
        return Ok(());
    }
    let order = search_order(h);
    let mut map = vec![usize::MAX; h.n()];
    fn go(
        h: &SimpleGraph,
        g: &SimpleGraph,
        order: &[usize],
        i: usize,
        used: u64,
        map: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == order.len() {
            return visit(map);
        }
        let hv = order[i];
        let mut candidates = g.vertex_mask() & !used;
        for hw in bits(h.neighbors(hv)) {
            if map[hw] != usize::MAX {
                candidates &= g.neighbors(map[hw]);
            }
        }
        for gv in bits(candidates) {
            if g.degree(gv) < h.degree(hv) {
                continue;
            }
            map[hv] = gv;
            if !go(h, g, order, i + 1, used | 1 << gv, map, visit) {
                map[hv] = usize::MAX;
                return false;
            }
        }
        map[hv] = usize::MAX;
        true
    }
    go(h, g, &order, 0, 0, &mut map, &mut visit);
    Ok(())
}

/// A vertex map witnessing a copy of `h` in `g`, if any.
pub fn contains_copy(h: &SimpleGraph, g: &SimpleGraph) -> Result<Option<Vec<usize>>> {
    let mut witness = None;
    for_each_embedding(h, g, |m| {
        witness = Some(m.to_vec());
        false
    })?;
    Ok(witness)
}

/// Number of injective adjacency-preserving maps (labelled embeddings).
pub fn count_embeddings(h: &SimpleGraph, g: &SimpleGraph) -> Result<u64> {
    let mut count = 0;
    for_each_embedding(h, g, |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// All distinct copies of `h` in `g`, sorted.
pub fn enumerate_copies(h: &SimpleGraph, g: &SimpleGraph) -> Result<Vec<Copy>> {
    let mut seen = BTreeSet::new();
    let h_edges = h.edges();
    for_each_embedding(h, g, |m| {
        let vertices = m.iter().fold(0u64, |acc, &v| acc | 1 << v);
        let mut edges: Vec<(usize, usize)> = h_edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (m[a], m[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        seen.insert(Copy { vertices, edges });
        true
    })?;
    Ok(seen.into_iter().collect())
}
