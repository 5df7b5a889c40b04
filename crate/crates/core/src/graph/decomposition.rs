//! Edge-disjoint spanning trees and forest partitions of `K_n` from the zig-zag
//! Hamiltonian path decomposition.

use super::simple::edge_id;
use crate::error::{Error, Result};

/// Zig-zag Hamiltonian path of `K_{2m}` starting at `i`: `i, i+1, i-1, i+2, i-2, ...` (mod 2m).
/// For `i = 0..m` these paths partition `E(K_{2m})`; path `i` ends at `i + m`.
pub fn zigzag_path(two_m: usize, i: usize) -> Vec<usize> {
    debug_assert!(two_m.is_multiple_of(2) && two_m >= 2);
    let m = two_m / 2;
    let mut out = Vec::with_capacity(two_m);
    out.push(i % two_m);
    for j in 1..=m {
        out.push((i + j) % two_m);
        if out.len() < two_m {
            out.push((i + two_m - j) % two_m);
        }
    }
    out
}

fn path_edges(n: usize, vertices: &[usize]) -> Vec<usize> {
    vertices
        .windows(2)
        .map(|w| edge_id(n, w[0], w[1]))
        .collect()
}

/// `floor(n/2)` pairwise edge-disjoint spanning trees of `K_n`, as sorted edge-id lists.
///
/// Even `n`: the `n/2` zig-zag Hamiltonian paths. Odd `n = 2m + 1`: the Walecki
/// cycles through the extra vertex `2m`, each with one edge at `2m` dropped.
pub fn spanning_tree_packing(n: usize) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "spanning tree packing needs n >= 2".into(),
        ));
    }
    let m = n / 2;
    let trees = if n.is_multiple_of(2) {
        (0..m).map(|i| path_edges(n, &zigzag_path(n, i))).collect()
    } else {
        let hub = 2 * m;
        (0..m)
            .map(|i| {
                let mut vs = vec![hub];
                vs.extend(zigzag_path(2 * m, i));
                path_edges(n, &vs)
            })
            .collect::<Vec<_>>()
    };
    Ok(trees
        .into_iter()
        .map(|mut t: Vec<usize>| {
            t.sort_unstable();
            t
        })
        .collect())
}

/// `ceil(n/2)` edge-disjoint forests covering `E(K_n)`.
///
/// Even `n`: the zig-zag paths. Odd `n`: the zig-zag paths of `K_{n+1}` with the
/// extra vertex deleted, each splitting into at most two paths.
pub fn initial_forest_partition(n: usize) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "forest partition needs n >= 2".into(),
        ));
    }
    let even = n + n % 2;
    let forests = (0..even / 2)
        .map(|i| {
            let p = zigzag_path(even, i);
            let mut f: Vec<usize> = p
                .windows(2)
                .filter(|w| w[0] < n && w[1] < n)
                .map(|w| edge_id(n, w[0], w[1]))
                .collect();
            f.sort_unstable();
            f
        })
        .collect();
    Ok(forests)
}
