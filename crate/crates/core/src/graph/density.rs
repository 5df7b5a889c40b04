//! Maximum density `m(H) = max e/v` and maximum 2-density
//! `m2(H) = max (e - 1)/(v - 2)` over subgraphs on at least three vertices.
//!
//! For a fixed vertex set the induced subgraph has the most edges, so both maxima
//! range over vertex subsets only. Values are exact rationals.

use num_rational::Rational64;

use super::simple::SimpleGraph;
use crate::error::{Error, Result};

pub const DENSITY_LIMIT: usize = 12;

fn check(h: &SimpleGraph) -> Result<()> {
    if h.n() > DENSITY_LIMIT {
        return Err(Error::SizeLimit {
            what: "density vertices",
            limit: DENSITY_LIMIT,
            got: h.n(),
        });
    }
    Ok(())
}

pub fn density(g: &SimpleGraph) -> Rational64 {
    if g.n() == 0 {
        return Rational64::from_integer(0);
    }
    Rational64::new(g.edge_count() as i64, g.n() as i64)
}

/// `d2(G) = (e - 1)/(v - 2)`; requires `v >= 3`.
pub fn two_density(g: &SimpleGraph) -> Result<Rational64> {
    if g.n() < 3 {
        return Err(Error::InvalidArgument("2-density needs v >= 3".into()));
    }
    Ok(Rational64::new(g.edge_count() as i64 - 1, g.n() as i64 - 2))
}

pub fn max_density(h: &SimpleGraph) -> Result<Rational64> {
    check(h)?;
    let mut best = Rational64::from_integer(0);
    for mask in 1u64..(1 << h.n()) {
        let d = Rational64::new(h.edges_within(mask) as i64, mask.count_ones() as i64);
        best = best.max(d);
    }
    Ok(best)
}

pub fn max_2_density(h: &SimpleGraph) -> Result<Rational64> {
    Ok(choose_k(h)?.1)
}

/// Vertex set of an induced subgraph `K` with `d2(K) = m2(H)`; the smallest such
/// set wins, ties broken by lowest mask. Also returns `m2(H)`.
pub fn choose_k(h: &SimpleGraph) -> Result<(u64, Rational64)> {
    check(h)?;
    if h.n() < 3 {
        return Err(Error::InvalidArgument(
            "maximum 2-density needs at least 3 vertices".into(),
        ));
    }
    let mut best: Option<(Rational64, std::cmp::Reverse<u32>, std::cmp::Reverse<u64>)> = None;
    for mask in 1u64..(1 << h.n()) {
        let v = mask.count_ones();
        if v < 3 {
            continue;
        }
        let d2 = Rational64::new(h.edges_within(mask) as i64 - 1, v as i64 - 2);
        let key = (d2, std::cmp::Reverse(v), std::cmp::Reverse(mask));
        if best.is_none_or(|b| key > b) {
            best = Some(key);
        }
    }
    let (d2, _, std::cmp::Reverse(mask)) = best.expect("n >= 3");
    Ok((mask, d2))
}

/// The subgraph picked by [`choose_k`], relabelled.
pub fn choose_k_graph(h: &SimpleGraph) -> Result<SimpleGraph> {
    let (mask, _) = choose_k(h)?;
    Ok(h.induced(mask))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_ratio(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let k3 = SimpleGraph::complete(3).unwrap();
        assert_eq!(max_2_density(&k3).unwrap(), Rational64::from_integer(2));
        let k4 = SimpleGraph::complete(4).unwrap();
        assert_eq!(max_2_density(&k4).unwrap(), Rational64::new(5, 2));
        assert_eq!(max_density(&k4).unwrap(), Rational64::new(3, 2));
        let p3 = SimpleGraph::path(3).unwrap();
        assert_eq!(max_2_density(&p3).unwrap(), Rational64::from_integer(1));
        assert_eq!(max_density(&p3).unwrap(), Rational64::new(2, 3));
    }

    #[test]
    fn choose_k_prefers_smallest_maximiser() {
        // K4 minus an edge: the whole graph and its triangles both have d2 = 2.
        let h = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (mask, m2) = choose_k(&h).unwrap();
        assert_eq!(m2, Rational64::from_integer(2));
        assert_eq!(mask.count_ones(), 3);
        assert_eq!(two_density(&h.induced(mask)).unwrap(), m2);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_ratio(Rational64::new(5, 2)), "5/2");
        assert_eq!(format_ratio(Rational64::new(4, 2)), "2");
    }

    #[test]
    fn small_graphs_rejected() {
        assert!(max_2_density(&SimpleGraph::path(2).unwrap()).is_err());
        assert!(max_density(&SimpleGraph::empty(13).unwrap()).is_err());
    }
}
