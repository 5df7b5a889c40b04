//! Potential-function Maker.
//!
//! For a winning set `F` with `x = |F ∩ X|` Maker elements and `y = |F ∩ Y|`
//! Breaker elements the potential is
//! `phi(F) = (1+mu)^((y - (1-alpha)|F|)/b) * (1-mu)^(x - alpha|F|)`.
//! Maker always claims the free element with the largest sum of potentials over
//! the sets containing it. If `sum_F lambda^(-|F|) < 1` with
//! `lambda = (1+mu)^((1-alpha)/b) (1-mu)^alpha`, this keeps the total potential
//! below 1, so Breaker never owns a `(1-alpha)` share of any set.

use serde::{Deserialize, Serialize};

use crate::board::{Element, Family, GameState, Move, Objective, Owner, Player};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};

/// Relative tolerance under which two element scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialConfig {
    pub alpha: f64,
    pub mu: f64,
    pub b: usize,
}

impl PotentialConfig {
    pub fn new(alpha: f64, mu: f64, b: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!(
                "alpha={alpha} not in [0,1]"
            )));
        }
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidArgument(format!("mu={mu} not in (0,1)")));
        }
        if b == 0 {
            return Err(Error::InvalidArgument("bias must be >= 1".into()));
        }
        Ok(PotentialConfig { alpha, mu, b })
    }

    pub fn lambda(&self) -> f64 {
        self.ln_lambda().exp()
    }

    pub fn ln_lambda(&self) -> f64 {
        (1.0 - self.alpha) / self.b as f64 * self.mu.ln_1p() + self.alpha * (-self.mu).ln_1p()
    }

    /// `ln phi(F)` for a set of size `size` with `x` Maker and `y` Breaker elements.
    pub fn ln_phi(&self, size: usize, x: usize, y: usize) -> f64 {
        let s = size as f64;
        (y as f64 - (1.0 - self.alpha) * s) / self.b as f64 * self.mu.ln_1p()
            + (x as f64 - self.alpha * s) * (-self.mu).ln_1p()
    }
}

/// Incremental potentials of a list of sets (a multiset: repeats are allowed).
#[derive(Clone, Debug)]
pub struct PotentialState {
    cfg: PotentialConfig,
    sets: Vec<Vec<Element>>,
    x: Vec<usize>,
    y: Vec<usize>,
    phi: Vec<f64>,
    /// Indexed by element id: the sets containing it.
    incidence: Vec<Vec<usize>>,
    /// Indexed by element id: sum of `phi` over the sets containing it.
    score: Vec<f64>,
    maker_factor: f64,
    breaker_factor: f64,
}

impl PotentialState {
    pub fn new(cfg: PotentialConfig, sets: Vec<Vec<Element>>, ground: usize) -> Result<Self> {
        let mut incidence = vec![Vec::new(); ground];
        for (i, s) in sets.iter().enumerate() {
            for &e in s {
                incidence
                    .get_mut(e)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("element {e} outside ground {ground}"))
                    })?
                    .push(i);
            }
        }
        let phi: Vec<f64> = sets
            .iter()
            .map(|s| cfg.ln_phi(s.len(), 0, 0).exp())
            .collect();
        let score = incidence
            .iter()
            .map(|ids| ids.iter().map(|&i| phi[i]).sum())
            .collect();
        Ok(PotentialState {
            x: vec![0; sets.len()],
            y: vec![0; sets.len()],
            phi,
            incidence,
            score,
            maker_factor: 1.0 - cfg.mu,
            breaker_factor: (cfg.mu.ln_1p() / cfg.b as f64).exp(),
            sets,
            cfg,
        })
    }

    pub fn config(&self) -> PotentialConfig {
        self.cfg
    }

    pub fn sets(&self) -> &[Vec<Element>] {
        &self.sets
    }

    pub fn phi(&self, set: usize) -> f64 {
        self.phi[set]
    }

    /// `(|F ∩ X|, |F ∩ Y|)` for one set.
    pub fn counts(&self, set: usize) -> (usize, usize) {
        (self.x[set], self.y[set])
    }

    pub fn element_score(&self, e: Element) -> f64 {
        self.score.get(e).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.phi.iter().sum()
    }

    fn scale(&mut self, e: Element, factor: f64, maker: bool) {
        let Some(ids) = self.incidence.get(e) else {
            return;
        };
        for &i in ids {
            let old = self.phi[i];
            let new = old * factor;
            self.phi[i] = new;
            if maker {
                self.x[i] += 1;
            } else {
                self.y[i] += 1;
            }
            let delta = new - old;
            for &f in &self.sets[i] {
                self.score[f] += delta;
            }
        }
    }

    pub fn maker_claim(&mut self, e: Element) {
        self.scale(e, self.maker_factor, true);
    }

    pub fn breaker_claim(&mut self, e: Element) {
        self.scale(e, self.breaker_factor, false);
    }

    /// Potential of a set recomputed from its counters.
    pub fn scratch_phi(&self, set: usize) -> f64 {
        self.cfg
            .ln_phi(self.sets[set].len(), self.x[set], self.y[set])
            .exp()
    }

    /// Potential of every set recomputed from an ownership state, ignoring the
    /// incremental counters.
    pub fn scratch_from_state(&self, state: &GameState) -> Vec<f64> {
        self.sets
            .iter()
            .map(|s| {
                let x = s
                    .iter()
                    .filter(|&&e| state.owner(e) == Some(Owner::Maker))
                    .count();
                let y = s
                    .iter()
                    .filter(|&&e| state.owner(e) == Some(Owner::Breaker))
                    .count();
                self.cfg.ln_phi(s.len(), x, y).exp()
            })
            .collect()
    }

    /// Largest relative gap between incremental and recomputed values, over set
    /// potentials and element scores.
    pub fn max_relative_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.sets.len() {
            let s = self.scratch_phi(i);
            worst = worst.max((self.phi[i] - s).abs() / s.abs().max(f64::MIN_POSITIVE));
        }
        for (e, ids) in self.incidence.iter().enumerate() {
            let s: f64 = ids.iter().map(|&i| self.scratch_phi(i)).sum();
            if s > 0.0 {
                worst = worst.max((self.score[e] - s).abs() / s);
            }
        }
        worst
    }

    /// Free element of maximum score; near-ties go to the smallest id.
    pub fn best(&self, free: impl IntoIterator<Item = Element>) -> Result<Element> {
        let mut best: Option<(Element, f64)> = None;
        for e in free {
            let s = self.element_score(e);
            best = match best {
                None => Some((e, s)),
                Some((be, bs)) => {
                    let tol = TIE_TOLERANCE * bs.abs().max(s.abs());
                    if s > bs + tol || ((s - bs).abs() <= tol && e < be) {
                        Some((e, s))
                    } else {
                        Some((be, bs))
                    }
                }
            };
        }
        best.map(|(e, _)| e)
            .ok_or_else(|| Error::InvalidState("no free element".into()))
    }
}

/// `potential_maker_move`: the element the potential rule picks in `state`.
pub fn potential_maker_move(ps: &PotentialState, state: &GameState) -> Result<Element> {
    ps.best(state.free_elements())
}

/// Where the Maker takes its sets from at the start of each stage.
#[derive(Clone, Debug)]
pub enum SetSource {
    /// The stage's own explicit winning family.
    StageFamily,
    /// A fixed guidance family; each stage uses the leftovers `F ∩ X` of every
    /// set with the stage board `X`, keeping multiplicity and dropping empties.
    Leftovers(Family),
}

/// Maker playing the potential rule with a fixed configuration.
#[derive(Clone, Debug)]
pub struct PotentialMaker {
    cfg: PotentialConfig,
    source: SetSource,
    state: Option<PotentialState>,
}

impl PotentialMaker {
    pub fn new(cfg: PotentialConfig, source: SetSource) -> Self {
        PotentialMaker {
            cfg,
            source,
            state: None,
        }
    }

    pub fn config(&self) -> PotentialConfig {
        self.cfg
    }

    pub fn potential(&self) -> Option<&PotentialState> {
        self.state.as_ref()
    }

    pub(crate) fn stage_sets(&self, view: &StageView<'_>) -> Result<Vec<Vec<Element>>> {
        match &self.source {
            SetSource::StageFamily => match view.objective {
                Objective::Explicit { family } => Ok(family.sets().map(<[_]>::to_vec).collect()),
                Objective::Graph { .. } => Err(Error::InvalidArgument(
                    "potential Maker needs an explicit family or a guidance family".into(),
                )),
            },
            SetSource::Leftovers(family) => {
                let board = view.board.to_bitset();
                Ok(family
                    .sets()
                    .map(|s| {
                        s.iter()
                            .copied()
                            .filter(|&e| board.contains(e))
                            .collect::<Vec<_>>()
                    })
                    .filter(|s| !s.is_empty())
                    .collect())
            }
        }
    }
}

impl Strategy for PotentialMaker {
    fn name(&self) -> String {
        format!(
            "potential(alpha={:.4},mu={:.4})",
            self.cfg.alpha, self.cfg.mu
        )
    }

    fn role(&self) -> Player {
        Player::Maker
    }

    fn start_stage(&mut self, view: &StageView<'_>) -> Result<()> {
        if view.bias != self.cfg.b {
            return Err(Error::InvalidArgument(format!(
                "potential configured for b={} but game has b={}",
                self.cfg.b, view.bias
            )));
        }
        let sets = self.stage_sets(view)?;
        self.state = Some(PotentialState::new(self.cfg, sets, view.board.ground())?);
        Ok(())
    }

    fn observe(&mut self, _state: &GameState, mv: &Move) -> Result<()> {
        let ps = self
            .state
            .as_mut()
            .ok_or_else(|| Error::InvalidState("move observed outside a stage".into()))?;
        for &e in &mv.elements {
            match mv.player {
                Player::Maker => ps.maker_claim(e),
                Player::Breaker => ps.breaker_claim(e),
            }
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let ps = self
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidState("choose called outside a stage".into()))?;
        Ok(vec![potential_maker_move(ps, state)?])
    }
}
