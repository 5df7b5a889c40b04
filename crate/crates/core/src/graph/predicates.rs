//! Exact graph predicates with hard size limits. They double as oracles for
//! the game objectives, so none of them are heuristic.

use std::collections::VecDeque;

use super::simple::{bits, full_mask, SimpleGraph};
use crate::error::{Error, Result};

pub const HAMILTON_LIMIT: usize = 20;
pub const COLORING_LIMIT: usize = 20;
pub const PANCYCLIC_LIMIT: usize = 14;

fn limit(what: &'static str, limit: usize, got: usize) -> Result<()> {
    if got > limit {
        Err(Error::SizeLimit { what, limit, got })
    } else {
        Ok(())
    }
}

/// Vertex mask of the component containing `start`.
pub fn component_of(g: &SimpleGraph, start: usize) -> u64 {
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= g.neighbors(v);
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

pub fn is_connected(g: &SimpleGraph) -> bool {
    g.n() <= 1 || component_of(g, 0) == g.vertex_mask()
}

/// Component masks, ordered by smallest vertex.
pub fn components(g: &SimpleGraph) -> Vec<u64> {
    let mut left = g.vertex_mask();
    let mut out = Vec::new();
    while left != 0 {
        let c = component_of(g, left.trailing_zeros() as usize);
        out.push(c);
        left &= !c;
    }
    out
}

/// Bitmask of cycle lengths present in `g` (bit `L` set iff a cycle of length `L` exists).
///
/// Dynamic programme over vertex subsets: `ends[S]` holds the endpoints of paths that
/// start at `min(S)` and visit exactly `S`.
pub fn cycle_lengths(g: &SimpleGraph) -> Result<u64> {
    let n = g.n();
    limit("cycle search vertices", HAMILTON_LIMIT, n)?;
    if n < 3 {
        return Ok(0);
    }
    let mut ends = vec![0u32; 1 << n];
    for s in 0..n {
        ends[1 << s] = 1 << s;
    }
    let mut lengths = 0u64;
    for mask in 1usize..(1 << n) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let s = mask.trailing_zeros() as usize;
        let size = mask.count_ones() as usize;
        if size >= 3 && (e as u64) & g.neighbors(s) != 0 {
            lengths |= 1 << size;
        }
        // Extend only with vertices above the start so each path has a unique start.
        let mut candidates = full_mask(n) & !(mask as u64) & !((2u64 << s) - 1);
        while candidates != 0 {
            let w = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if g.neighbors(w) & e as u64 != 0 {
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    Ok(lengths)
}

pub fn is_hamiltonian(g: &SimpleGraph) -> Result<bool> {
    let n = g.n();
    limit("hamiltonicity vertices", HAMILTON_LIMIT, n)?;
    if n < 3 {
        return Ok(false);
    }
    // Paths from vertex 0 only; enough for a spanning cycle.
    let mut ends = vec![0u32; 1 << n];
    ends[1] = 1;
    for mask in (1usize..(1 << n)).step_by(2) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let mut candidates = full_mask(n) & !(mask as u64);
        while candidates != 0 {
            let w = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if g.neighbors(w) & e as u64 != 0 {
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    Ok(ends[(1 << n) - 1] as u64 & g.neighbors(0) != 0)
}

pub fn is_pancyclic(g: &SimpleGraph) -> Result<bool> {
    let n = g.n();
    limit("pancyclicity vertices", PANCYCLIC_LIMIT, n)?;
    if n < 3 {
        return Ok(false);
    }
    let want = full_mask(n + 1) & !0b111;
    Ok(cycle_lengths(g)? & want == want)
}

/// Whether `g` admits a proper colouring with at most `k` colours.
pub fn chromatic_number_at_most(g: &SimpleGraph, k: usize) -> Result<bool> {
    let n = g.n();
    limit("colouring vertices", COLORING_LIMIT, n)?;
    if n == 0 {
        return Ok(true);
    }
    if k == 0 {
        return Ok(false);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colour = vec![usize::MAX; n];
    Ok(colour_from(g, &order, 0, k, 0, &mut colour))
}

fn colour_from(
    g: &SimpleGraph,
    order: &[usize],
    i: usize,
    k: usize,
    used: usize,
    colour: &mut [usize],
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    // A fresh colour is interchangeable with any other fresh one.
    for c in 0..k.min(used + 1) {
        if bits(g.neighbors(v)).any(|w| colour[w] == c) {
            continue;
        }
        colour[v] = c;
        if colour_from(g, order, i + 1, k, used.max(c + 1), colour) {
            return true;
        }
    }
    colour[v] = usize::MAX;
    false
}

/// Size of a maximum independent set.
pub fn independence_number(g: &SimpleGraph) -> usize {
    fn best(g: &SimpleGraph, candidates: u64) -> usize {
        if candidates == 0 {
            return 0;
        }
        let v = bits(candidates)
            .max_by_key(|&v| (g.neighbors(v) & candidates).count_ones())
            .unwrap_or(0);
        if (g.neighbors(v) & candidates).count_ones() == 0 {
            // Every candidate is isolated among the candidates.
            return candidates.count_ones() as usize;
        }
        let without = best(g, candidates & !(1 << v));
        let with = 1 + best(g, candidates & !(1 << v) & !g.neighbors(v));
        without.max(with)
    }
    best(g, g.vertex_mask())
}

/// Vertex connectivity `κ(G)` via Menger: the minimum over non-adjacent pairs of
/// the number of internally vertex-disjoint paths, or `n - 1` for complete graphs.
pub fn vertex_connectivity(g: &SimpleGraph) -> usize {
    let n = g.n();
    if n <= 1 {
        return 0;
    }
    let mut best = n - 1;
    for s in 0..n {
        for t in s + 1..n {
            if !g.has_edge(s, t) {
                best = best.min(vertex_disjoint_paths(g, s, t));
            }
        }
    }
    best
}

/// Max flow on the vertex-split network (`v_in = 2v`, `v_out = 2v + 1`, unit capacities).
pub fn vertex_disjoint_paths(g: &SimpleGraph, s: usize, t: usize) -> usize {
    let n = g.n();
    let size = 2 * n;
    let mut cap = vec![vec![0i32; size]; size];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = if v == s || v == t { n as i32 } else { 1 };
        for w in bits(g.neighbors(v)) {
            cap[2 * v + 1][2 * w] = n as i32;
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..size {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return flow;
        }
        let mut v = sink;
        while v != source {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Whether the edges form a forest (no cycles), given as endpoint pairs on `n` vertices.
pub fn is_forest(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut dsu = crate::dsu::UnionFind::new(n);
    edges.into_iter().all(|(u, v)| dsu.union(u, v))
}

pub fn is_bipartite(g: &SimpleGraph) -> bool {
    let mut side = vec![u8::MAX; g.n()];
    for start in 0..g.n() {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in bits(g.neighbors(u)) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}
