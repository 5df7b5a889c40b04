//! Explicit winning families for the Hamiltonicity, non-k-colorability and
//! pancyclicity Makers. Real-valued set sizes are rounded to the nearest integer
//! (at least 1); every builder estimates its size first and refuses to enumerate
//! past the cap.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::board::{Element, Family, Group};
use crate::error::{Error, Result};
use crate::graph::edge_id;

pub const DEFAULT_FAMILY_CAP: usize = 2_000_000;

pub fn round_size(x: f64) -> usize {
    (x.round().max(1.0)) as usize
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sizes `(|A|, |B|)` of a group of cross-edge sets `E(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossShape {
    pub a: usize,
    pub b: usize,
}

impl CrossShape {
    pub fn set_size(&self) -> usize {
        self.a * self.b
    }

    /// Number of distinct sets `E(A, B)` on `n` vertices.
    pub fn count(&self, n: usize) -> f64 {
        let ordered = binomial(n, self.b) * binomial(n - self.b.min(n), self.a);
        if self.a == self.b {
            ordered / 2.0
        } else {
            ordered
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.a == 0 || self.b == 0 || self.a + self.b > n {
            return Err(Error::InvalidArgument(format!(
                "cross shape |A|={}, |B|={} does not fit n={n}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

fn check_cap(estimate: f64, cap: usize) -> Result<()> {
    if estimate > cap as f64 {
        Err(Error::FamilyTooLarge { estimate, cap })
    } else {
        Ok(())
    }
}

fn clique_edges(n: usize, a: &[usize]) -> Vec<Element> {
    a.iter()
        .tuple_combinations()
        .map(|(&u, &v)| edge_id(n, u, v))
        .sorted_unstable()
        .collect()
}

fn cross_edges(n: usize, a: &[usize], b: &[usize]) -> Vec<Element> {
    a.iter()
        .cartesian_product(b)
        .map(|(&u, &v)| edge_id(n, u.min(v), u.max(v)))
        .sorted_unstable()
        .collect()
}

/// All `E(A, B)` with the given shape; unordered when `|A| = |B|`.
pub fn cross_group(n: usize, shape: CrossShape, name: &str) -> Group {
    let mut sets = Vec::new();
    for b in (0..n).combinations(shape.b) {
        let rest: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
        for a in rest.iter().copied().combinations(shape.a) {
            if shape.a == shape.b && a[0] > b[0] {
                continue;
            }
            sets.push(cross_edges(n, &a, &b));
        }
    }
    Group {
        name: name.to_string(),
        sets,
    }
}

/// All `E(A)` with `|A| = size`.
pub fn clique_group(n: usize, size: usize, name: &str) -> Group {
    Group {
        name: name.to_string(),
        sets: (0..n)
            .combinations(size)
            .map(|a| clique_edges(n, &a))
            .collect(),
    }
}

/// Shapes of the groups `F_1..F_s`, `s = round(2/eps)`:
/// `|A| = n^((j-1)eps/2)`, `|B| = n - n^((j+1)eps/2)/2` for `j < s`, and
/// `|A| = |B| = n/ln n` for `F_s`.
pub fn hamilton_shapes(n: usize, eps: f64) -> Result<Vec<CrossShape>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps={eps} not in (0,1)")));
    }
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "hamilton families need n >= 4, got {n}"
        )));
    }
    let nf = n as f64;
    let s = (2.0 / eps).round() as usize;
    let mut shapes = Vec::with_capacity(s);
    for j in 1..s {
        let a = round_size(nf.powf((j as f64 - 1.0) * eps / 2.0));
        let b_real = nf - 0.5 * nf.powf((j as f64 + 1.0) * eps / 2.0);
        if b_real < 0.5 {
            return Err(Error::InvalidArgument(format!(
                "group {j}: |B| = {b_real:.3} rounds below 1"
            )));
        }
        shapes.push(CrossShape {
            a,
            b: round_size(b_real),
        });
    }
    let half = round_size(nf / nf.ln());
    shapes.push(CrossShape { a: half, b: half });
    for sh in &shapes {
        sh.check(n)?;
    }
    Ok(shapes)
}

pub fn hamilton_families(n: usize, eps: f64, cap: usize) -> Result<Family> {
    let shapes = hamilton_shapes(n, eps)?;
    check_cap(shapes.iter().map(|s| s.count(n)).sum(), cap)?;
    Family::new(
        shapes
            .iter()
            .enumerate()
            .map(|(j, &sh)| cross_group(n, sh, &format!("F{}", j + 1)))
            .collect(),
    )
}

/// All `E(A)` with `|A| = ceil(n/k)`.
pub fn coloring_family(n: usize, k: usize, cap: usize) -> Result<Family> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "coloring family needs k >= 2, got {k}"
        )));
    }
    let a = n.div_ceil(k);
    if a < 2 || n > crate::graph::simple::MAX_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "coloring family needs 2 <= ceil(n/k) (n={n}, k={k})"
        )));
    }
    check_cap(binomial(n, a), cap)?;
    Family::new(vec![clique_group(n, a, "F1")])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PancyclicityShapes {
    /// `|A|` of the clique group `F_1`.
    pub clique: usize,
    pub cross_star: CrossShape,
    pub cross_balanced: CrossShape,
    pub c_requested: f64,
    pub c_used: f64,
    pub c_lowered: bool,
}

/// `F_1 = {E(A) : |A| = sqrt n}`, `F_2 = {E(A, B) : |A| = 1, |B| = n - c sqrt n}`,
/// `F_3 = {E(A, B) : |A| = |B| = sqrt n}`. When `c sqrt n` leaves no room for `B`,
/// `c` is lowered to `(n-1)/sqrt n` and flagged.
pub fn pancyclicity_shapes(n: usize, c: f64) -> Result<PancyclicityShapes> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "pancyclicity families need n >= 4, got {n}"
        )));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!("c={c} must be positive")));
    }
    let root = (n as f64).sqrt();
    let mut c_used = c;
    let mut c_lowered = false;
    if round_size(c * root) + 1 > n {
        c_used = (n as f64 - 1.0) / root;
        c_lowered = true;
    }
    let removed = round_size(c_used * root).min(n - 1);
    let r = round_size(root);
    let shapes = PancyclicityShapes {
        clique: r,
        cross_star: CrossShape {
            a: 1,
            b: n - removed,
        },
        cross_balanced: CrossShape { a: r, b: r },
        c_requested: c,
        c_used,
        c_lowered,
    };
    if r < 2 {
        return Err(Error::InvalidArgument("sqrt n rounds below 2".into()));
    }
    shapes.cross_star.check(n)?;
    shapes.cross_balanced.check(n)?;
    Ok(shapes)
}

pub fn pancyclicity_families(n: usize, c: f64, cap: usize) -> Result<(Family, PancyclicityShapes)> {
    let sh = pancyclicity_shapes(n, c)?;
    check_cap(
        binomial(n, sh.clique) + sh.cross_star.count(n) + sh.cross_balanced.count(n),
        cap,
    )?;
    let fam = Family::new(vec![
        clique_group(n, sh.clique, "F1"),
        cross_group(n, sh.cross_star, "F2"),
        cross_group(n, sh.cross_balanced, "F3"),
    ])?;
    Ok((fam, sh))
}
