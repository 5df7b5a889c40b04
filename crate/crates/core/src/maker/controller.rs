//! Multistage discrepancy controller: the potential Maker restarted every stage on
//! the leftovers `F ∩ X^i` of a fixed guidance family.

use serde::{Deserialize, Serialize};

use super::params::{biased_discrepancy_config, stage_precondition, DiscrepancyConfig};
use super::potential::{PotentialMaker, SetSource};
use crate::board::{family_stats, Element, Family, GameState, Move, Player, StageReduction};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    pub gamma: Option<f64>,
    /// Target stage count `(1-gamma) min_j log_{b+1}(k_j / ln|F_j|)`.
    pub t: Option<f64>,
    pub delta: f64,
    pub discrepancy: DiscrepancyConfig,
    /// `(k_j, |F_j|)` per group.
    pub groups: Vec<(usize, usize)>,
    /// Advisory `|F_j| > s` per group.
    pub cond_a: Vec<bool>,
    /// Advisory `(k_j/ln|F_j|)^(gamma/2) >= 20b max(1, log_{b+1}(k_j/ln|F_j|))` per group.
    pub cond_b: Vec<bool>,
}

impl ControllerParams {
    pub fn conditions_hold(&self) -> bool {
        self.cond_a.iter().chain(&self.cond_b).all(|&c| c)
    }
}

fn group_pairs(family: &Family) -> Result<Vec<(usize, usize)>> {
    Ok(family_stats(family)?
        .into_iter()
        .map(|g| (g.k, g.count))
        .collect())
}

fn log_base(x: f64, base: f64) -> f64 {
    x.ln() / base.ln()
}

fn conditions(groups: &[(usize, usize)], gamma: f64, b: usize) -> (Vec<bool>, Vec<bool>) {
    let s = groups.len();
    let base = b as f64 + 1.0;
    let a = groups.iter().map(|&(_, c)| c > s).collect();
    let bb = groups
        .iter()
        .map(|&(k, c)| {
            let r = k as f64 / (c as f64).ln();
            r.powf(gamma / 2.0) >= 20.0 * b as f64 * log_base(r, base).max(1.0)
        })
        .collect();
    (a, bb)
}

/// `t` and `delta` from `gamma`; errors when `t <= 0` or `delta` is outside `(0, 1)`.
pub fn multistage_parameters(family: &Family, gamma: f64, b: usize) -> Result<ControllerParams> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma={gamma} not in (0,1)"
        )));
    }
    let groups = group_pairs(family)?;
    let base = b as f64 + 1.0;
    let ratios: Vec<f64> = groups
        .iter()
        .map(|&(k, c)| k as f64 / (c as f64).ln())
        .collect();
    let t = (1.0 - gamma)
        * ratios
            .iter()
            .map(|&r| log_base(r, base))
            .fold(f64::INFINITY, f64::min);
    let delta = 4.0
        * ratios
            .iter()
            .map(|&r| r.recip().powf(gamma / 2.0))
            .fold(0.0, f64::max);
    let diag = format!("t={t:.4}, delta={delta:.4}, (k_j, |F_j|)={groups:?}");
    if t.is_nan() || t <= 0.0 || !t.is_finite() {
        return Err(Error::DegenerateParameters(format!("t <= 0: {diag}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DegenerateParameters(format!(
            "delta not in (0,1): {diag}"
        )));
    }
    let discrepancy = biased_discrepancy_config(delta, b)
        .map_err(|e| Error::DegenerateParameters(format!("{e}: {diag}")))?;
    let (cond_a, cond_b) = conditions(&groups, gamma, b);
    Ok(ControllerParams {
        gamma: Some(gamma),
        t: Some(t),
        delta,
        discrepancy,
        groups,
        cond_a,
        cond_b,
    })
}

/// Per-stage diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    /// `k_{i-1,j} > 4 delta^-2 ln(s|F_j|)` held for every group at stage start.
    pub precondition_held: bool,
    /// `k_{i-1,j}` per group.
    pub k_before: Vec<usize>,
    /// `k_{i,j} = min |F ∩ X^i|` per group after the stage.
    pub k_after: Vec<usize>,
}

impl StageRecord {
    /// `k_{i,j} >= k_{i-1,j} (1/(b+1) - delta)` for every group.
    pub fn retained(&self, b: usize, delta: f64) -> bool {
        let f = 1.0 / (b as f64 + 1.0) - delta;
        self.k_before
            .iter()
            .zip(&self.k_after)
            .all(|(&before, &after)| after as f64 >= before as f64 * f)
    }
}

#[derive(Clone, Debug)]
pub struct DiscrepancyController {
    params: ControllerParams,
    family: Family,
    inner: PotentialMaker,
    k_current: Vec<usize>,
    pending: Option<(bool, Vec<usize>)>,
    stage: usize,
    records: Vec<StageRecord>,
}

fn min_leftovers(family: &Family, keep: impl Fn(Element) -> bool) -> Vec<usize> {
    family
        .groups()
        .iter()
        .map(|g| {
            g.sets
                .iter()
                .map(|s| s.iter().filter(|&&e| keep(e)).count())
                .min()
                .unwrap_or(0)
        })
        .collect()
}

impl DiscrepancyController {
    pub fn new(family: Family, gamma: f64, b: usize) -> Result<Self> {
        let params = multistage_parameters(&family, gamma, b)?;
        Ok(Self::with_params(family, params))
    }

    /// Skips the `gamma` formulas and plays with a given `delta`.
    pub fn from_delta(family: Family, delta: f64, b: usize) -> Result<Self> {
        let groups = group_pairs(&family)?;
        let discrepancy = biased_discrepancy_config(delta, b)?;
        let s = groups.len();
        let params = ControllerParams {
            gamma: None,
            t: None,
            delta,
            discrepancy,
            cond_a: groups.iter().map(|&(_, c)| c > s).collect(),
            cond_b: vec![false; s],
            groups,
        };
        Ok(Self::with_params(family, params))
    }

    fn with_params(family: Family, params: ControllerParams) -> Self {
        let inner = PotentialMaker::new(
            params.discrepancy.potential(),
            SetSource::Leftovers(family.clone()),
        );
        DiscrepancyController {
            k_current: params.groups.iter().map(|&(k, _)| k).collect(),
            params,
            family,
            inner,
            pending: None,
            stage: 0,
            records: Vec::new(),
        }
    }

    pub fn params(&self) -> &ControllerParams {
        &self.params
    }

    pub fn records(&self) -> &[StageRecord] {
        &self.records
    }

    pub fn inner(&self) -> &PotentialMaker {
        &self.inner
    }
}

impl Strategy for DiscrepancyController {
    fn name(&self) -> String {
        format!("discrepancy(delta={:.4})", self.params.delta)
    }

    fn role(&self) -> Player {
        Player::Maker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        let board = view.board.to_bitset();
        self.k_current = min_leftovers(&self.family, |e| board.contains(e));
        let pairs: Vec<(usize, usize)> = self
            .k_current
            .iter()
            .zip(&self.params.groups)
            .map(|(&k, &(_, c))| (k, c))
            .collect();
        let held = stage_precondition(&pairs, self.params.delta);
        self.pending = Some((held, self.k_current.clone()));
        self.stage = view.stage;
        self.inner.start_stage(view)
    }

    fn observe(&mut self, state: &GameState, mv: &Move) -> Result<()> {
        self.inner.observe(state, mv)
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        self.inner.choose(state)
    }

    fn end_stage(&mut self, reduction: &StageReduction) -> Result<()> {
        let keep = reduction.next_board.to_bitset();
        let k_after = min_leftovers(&self.family, |e| keep.contains(e));
        if let Some((held, k_before)) = self.pending.take() {
            self.records.push(StageRecord {
                stage: self.stage,
                precondition_held: held,
                k_before,
                k_after,
            });
        }
        Ok(())
    }
}
