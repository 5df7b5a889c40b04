#![allow(dead_code)]

use itertools::Itertools;
use msgame::graph::SimpleGraph;
use msgame::sweep::rng_from_seed;
use msgame::{Element, Family};
use num_rational::Rational64;
use rand::Rng;

/// m2 by listing every subgraph as an edge subset plus any number of isolated
/// vertices.
pub fn brute_m2(h: &SimpleGraph) -> Rational64 {
    let edges = h.edges();
    let n = h.n() as i64;
    let mut best: Option<Rational64> = None;
    for mask in 0u32..(1 << edges.len()) {
        let e = mask.count_ones() as i64;
        let touched = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .fold(0u64, |acc, i| acc | 1 << edges[i].0 | 1 << edges[i].1)
            .count_ones() as i64;
        for v in touched.max(3)..=n {
            let d = Rational64::new(e - 1, v - 2);
            best = Some(best.map_or(d, |b| b.max(d)));
        }
    }
    best.expect("at least three vertices")
}

/// m by the same listing.
pub fn brute_m(h: &SimpleGraph) -> Rational64 {
    let edges = h.edges();
    let mut best = Rational64::from_integer(0);
    for mask in 1u32..(1 << edges.len()) {
        let touched = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .fold(0u64, |acc, i| acc | 1 << edges[i].0 | 1 << edges[i].1)
            .count_ones() as i64;
        best = best.max(Rational64::new(mask.count_ones() as i64, touched));
    }
    best
}

/// One graph per isomorphism class on `n` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let index = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = vec![];
    for mask in 0u32..(1 << pairs.len()) {
        let canon = images
            .iter()
            .map(|img| {
                (0..pairs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << img[i])
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|i| canon >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            out.push(SimpleGraph::from_edges(n, &edges).unwrap());
        }
    }
    out
}

/// Random family of `count` distinct sets on `ground` elements with sizes in
/// `sizes`.
pub fn random_sets(
    seed: u64,
    ground: usize,
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
) -> Vec<Vec<Element>> {
    let mut rng = rng_from_seed(seed);
    let mut sets: Vec<Vec<Element>> = Vec::new();
    let mut guard = 0;
    while sets.len() < count && guard < 100 * count {
        guard += 1;
        let k = rng.random_range(sizes.clone()).min(ground);
        let mut s = rand::seq::index::sample(&mut rng, ground, k).into_vec();
        s.sort_unstable();
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    sets
}

pub fn family(sets: Vec<Vec<Element>>) -> Family {
    Family::single("F", sets).unwrap()
}
