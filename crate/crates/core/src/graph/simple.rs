use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count a [`SimpleGraph`] can hold; adjacency rows are `u64` masks.
pub const MAX_VERTICES: usize = 64;

/// Id of the edge `{u, v}` of `K_n` in lexicographic pair order.
pub fn edge_id(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(v < n && u != v);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`edge_id`].
pub fn edge_endpoints(n: usize, mut id: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - u - 1;
        if id < row {
            return (u, u + 1 + id);
        }
        id -= row;
        u += 1;
    }
}

pub fn edge_count_complete(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Loopless simple graph on vertices `0..n` stored as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

/// Canonical wire form: `{"n": int, "edges": [[u, v], ...]}` with `u < v`, sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for SimpleGraph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        SimpleGraph::from_edges(g.n, &edges)
    }
}

impl From<SimpleGraph> for GraphJson {
    fn from(g: SimpleGraph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::SizeLimit {
                what: "graph vertices",
                limit: MAX_VERTICES,
                got: n,
            });
        }
        Ok(SimpleGraph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n)?;
        for &(u, v) in edges {
            if g.has_edge_checked(u, v)? {
                return Err(Error::InvalidArgument(format!("multi-edge {{{u},{v}}}")));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = SimpleGraph::empty(n)?;
        for u in 0..n {
            g.adj[u] = full_mask(n) & !(1u64 << u);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("cycle needs n >= 3".into()));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    /// Graph on `n` vertices whose edges are the given element ids of `E(K_n)`.
    pub fn from_edge_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut g = SimpleGraph::empty(n)?;
        for id in ids {
            let (u, v) = edge_endpoints(n, id);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn has_edge_checked(&self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge {{{u},{v}}} out of range for n={}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("loop at {u}")));
        }
        Ok(self.has_edge(u, v))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.has_edge_checked(u, v)?;
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in bits(self.adj[u] >> (u + 1)) {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Element ids of the edges when this graph is read as a subset of `E(K_n)`.
    pub fn edge_ids(&self) -> Vec<usize> {
        self.edges()
            .into_iter()
            .map(|(u, v)| edge_id(self.n, u, v))
            .collect()
    }

    /// Number of edges with both ends in `mask`.
    pub fn edges_within(&self, mask: u64) -> usize {
        bits(mask)
            .map(|v| (self.adj[v] & mask).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Induced subgraph on `mask`, relabelled to `0..popcount(mask)` in increasing order.
    pub fn induced(&self, mask: u64) -> SimpleGraph {
        let verts: Vec<usize> = bits(mask).collect();
        let mut g = SimpleGraph {
            n: verts.len(),
            adj: vec![0; verts.len()],
        };
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                }
            }
        }
        g
    }

    /// External neighbourhood of the vertex set `mask`.
    pub fn neighborhood(&self, mask: u64) -> u64 {
        bits(mask).fold(0u64, |acc, v| acc | self.adj[v]) & !mask
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the set bit positions of `mask`, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
