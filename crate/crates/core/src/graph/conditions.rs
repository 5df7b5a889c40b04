//! Exact checkers for the expansion/connectivity style sufficient conditions used
//! by the Hamiltonicity and pancyclicity arguments.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::predicates::{independence_number, vertex_connectivity};
use super::simple::{bits, SimpleGraph};
use crate::error::{Error, Result};

pub const CONDITION_LIMIT: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub p1: bool,
    pub p2: bool,
    /// A counterexample for the first failing property, as sorted vertex lists.
    pub witness: Option<Vec<Vec<usize>>>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.p1 && self.p2
    }
}

fn mask_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// (P1) every `S` with `1 <= |S| <= cut_size` has `|N(S)| >= exp_factor * |S|`;
/// (P2) any two disjoint sets of size `cut_size` are joined by an edge.
pub fn check_hamilton_conditions(
    g: &SimpleGraph,
    exp_factor: f64,
    cut_size: usize,
) -> Result<ConditionReport> {
    let n = g.n();
    if n > CONDITION_LIMIT {
        return Err(Error::SizeLimit {
            what: "condition check vertices",
            limit: CONDITION_LIMIT,
            got: n,
        });
    }
    let mut witness = None;
    let mut p1 = true;
    'p1: for size in 1..=cut_size.min(n) {
        for s in (0..n).combinations(size) {
            let nb = g.neighborhood(mask_of(&s)).count_ones() as f64;
            if nb < exp_factor * size as f64 {
                p1 = false;
                witness = Some(vec![s]);
                break 'p1;
            }
        }
    }
    let mut p2 = true;
    if cut_size >= 1 && 2 * cut_size <= n {
        for a in (0..n).combinations(cut_size) {
            let am = mask_of(&a);
            let room = g.vertex_mask() & !am & !g.neighborhood(am);
            if room.count_ones() as usize >= cut_size {
                p2 = false;
                if witness.is_none() {
                    witness = Some(vec![a, bits(room).take(cut_size).collect()]);
                }
                break;
            }
        }
    }
    Ok(ConditionReport { p1, p2, witness })
}

/// (P1) `alpha(G) <= floor(sqrt n)`; (P2) `G` is `ceil(c * sqrt n)`-vertex-connected.
pub fn check_pancyclicity_conditions(g: &SimpleGraph, c: f64) -> Result<ConditionReport> {
    let n = g.n();
    if n > CONDITION_LIMIT {
        return Err(Error::SizeLimit {
            what: "condition check vertices",
            limit: CONDITION_LIMIT,
            got: n,
        });
    }
    let root = (n as f64).sqrt();
    let alpha = independence_number(g);
    let p1 = alpha as f64 <= root.floor();
    let need = (c * root).ceil() as usize;
    let kappa = vertex_connectivity(g);
    let p2 = n > need && kappa >= need;
    Ok(ConditionReport {
        p1,
        p2,
        witness: None,
    })
}
