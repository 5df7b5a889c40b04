//! K-collections and s-bunches.
//!
//! The auxiliary graph `G_K` has one node per copy of `K` in `G`, with two copies
//! adjacent when they share at least two vertices. A K-collection is the union of
//! the copies in one component of `G_K`. An s-bunch is a sequence of copies where
//! each copy after the first shares at least two vertices with the union so far and
//! brings at least one new vertex.

use std::collections::BTreeSet;

use num_rational::Rational64;

use super::copies::{enumerate_copies, Copy};
use super::simple::SimpleGraph;
use crate::dsu::UnionFind;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCollection {
    pub vertices: u64,
    pub copies: Vec<Copy>,
    /// Union of the member copies' edges, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl KCollection {
    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones() as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CollectionReport {
    pub collections: Vec<KCollection>,
}

impl CollectionReport {
    pub fn largest_vertex_count(&self) -> usize {
        self.collections
            .iter()
            .map(KCollection::vertex_count)
            .max()
            .unwrap_or(0)
    }
}

fn shares_two(a: u64, b: u64) -> bool {
    (a & b).count_ones() >= 2
}

pub fn k_collections(g: &SimpleGraph, k: &SimpleGraph) -> Result<CollectionReport> {
    let copies = enumerate_copies(k, g)?;
    let mut dsu = UnionFind::new(copies.len());
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            if shares_two(copies[i].vertices, copies[j].vertices) {
                dsu.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); copies.len()];
    for i in 0..copies.len() {
        groups[dsu.find(i)].push(i);
    }
    let mut collections: Vec<KCollection> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|members| {
            let copies: Vec<Copy> = members.iter().map(|&i| copies[i].clone()).collect();
            let vertices = copies.iter().fold(0u64, |acc, c| acc | c.vertices);
            let edges: BTreeSet<(usize, usize)> = copies
                .iter()
                .flat_map(|c| c.edges.iter().copied())
                .collect();
            KCollection {
                vertices,
                copies,
                edges: edges.into_iter().collect(),
            }
        })
        .collect();
    collections.sort_by(|a, b| a.copies[0].cmp(&b.copies[0]));
    Ok(CollectionReport { collections })
}

/// Ordered copies witnessing an s-bunch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BunchCertificate {
    pub copies: Vec<Copy>,
}

impl BunchCertificate {
    pub fn s(&self) -> usize {
        self.copies.len()
    }

    pub fn vertices(&self) -> u64 {
        self.copies.iter().fold(0, |acc, c| acc | c.vertices)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<_> = self
            .copies
            .iter()
            .flat_map(|c| c.edges.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// Checks the bunch definition step by step.
    pub fn is_valid(&self) -> bool {
        let Some(first) = self.copies.first() else {
            return false;
        };
        let mut seen = first.vertices;
        for c in &self.copies[1..] {
            if c.vertices & !seen == 0 || !shares_two(c.vertices, seen) {
                return false;
            }
            seen |= c.vertices;
        }
        true
    }

    pub fn density(&self) -> Rational64 {
        bunch_density(&self.edges(), self.vertex_count())
    }
}

/// Greedy chain inside `collection` until the union reaches `t * v(K)` vertices.
pub fn extract_bunch(
    collection: &KCollection,
    k: &SimpleGraph,
    t: usize,
) -> Result<BunchCertificate> {
    let target = t * k.n();
    if collection.vertex_count() < target {
        return Err(Error::NoBunch(format!(
            "collection has {} vertices, need {target}",
            collection.vertex_count()
        )));
    }
    let mut chain = vec![collection.copies[0].clone()];
    let mut seen = chain[0].vertices;
    while (seen.count_ones() as usize) < target {
        let next = collection
            .copies
            .iter()
            .find(|c| c.vertices & !seen != 0 && shares_two(c.vertices, seen))
            .ok_or_else(|| Error::InvariantViolation("collection copies do not chain".into()))?;
        seen |= next.vertices;
        chain.push(next.clone());
    }
    Ok(BunchCertificate { copies: chain })
}

/// `d(B) = e(B) / v(B)`.
pub fn bunch_density(edges: &[(usize, usize)], vertex_count: usize) -> Rational64 {
    Rational64::new(edges.len() as i64, vertex_count as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SimpleGraph {
        SimpleGraph::complete(3).unwrap()
    }

    #[test]
    fn edge_sharing_triangles_form_one_collection() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = k_collections(&g, &k3()).unwrap();
        assert_eq!(r.collections.len(), 1);
        assert_eq!(r.collections[0].vertex_count(), 4);
        assert_eq!(r.collections[0].edges.len(), 5);
    }

    #[test]
    fn disjoint_triangles_form_two_collections() {
        let g =
            SimpleGraph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let r = k_collections(&g, &k3()).unwrap();
        assert_eq!(r.collections.len(), 2);
        assert_eq!(r.largest_vertex_count(), 3);
    }

    #[test]
    fn chain_of_three_triangles_yields_bunch() {
        // Triangles 012, 123, 234 share consecutive edges.
        let g =
            SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
                .unwrap();
        let r = k_collections(&g, &k3()).unwrap();
        assert_eq!(r.collections.len(), 1);
        let col = &r.collections[0];
        assert!(extract_bunch(col, &k3(), 2).is_err());
        let b = extract_bunch(col, &k3(), 1).unwrap();
        assert_eq!(b.s(), 1);
        assert!(b.is_valid());
        assert_eq!(b.density(), Rational64::from_integer(1));
    }

    #[test]
    fn two_glued_triangles_density() {
        let b = BunchCertificate {
            copies: vec![
                Copy {
                    vertices: 0b0111,
                    edges: vec![(0, 1), (0, 2), (1, 2)],
                },
                Copy {
                    vertices: 0b1110,
                    edges: vec![(1, 2), (1, 3), (2, 3)],
                },
            ],
        };
        assert!(b.is_valid());
        assert_eq!(b.density(), Rational64::new(5, 4));
    }
}
