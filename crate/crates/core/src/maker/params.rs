//! Parameter calculators for the potential Maker and the multistage controller.

use serde::{Deserialize, Serialize};

use super::potential::PotentialConfig;
use crate::error::{Error, Result};

/// `eps` solving `e^(mu^2) = (1+mu)^(1/(b+1) + eps/b) (1-mu)^(1/(b+1) - eps)`.
pub fn epsilon_from_mu(mu: f64, b: usize) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidArgument(format!("mu={mu} not in (0,1)")));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("bias must be >= 1".into()));
    }
    let b = b as f64;
    let num = mu * mu - (-mu * mu).ln_1p() / (b + 1.0);
    let den = mu.ln_1p() / b - (-mu).ln_1p();
    Ok(num / den)
}

/// `ln` of the right-hand side minus `mu^2`; zero at the exact `eps`.
pub fn discrepancy_residual(mu: f64, b: usize, eps: f64) -> f64 {
    let bf = b as f64;
    let e = 1.0 / (bf + 1.0);
    (e + eps / bf) * mu.ln_1p() + (e - eps) * (-mu).ln_1p() - mu * mu
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyConfig {
    pub delta: f64,
    pub mu: f64,
    pub eps: f64,
    pub alpha: f64,
    pub b: usize,
}

impl DiscrepancyConfig {
    pub fn potential(&self) -> PotentialConfig {
        PotentialConfig {
            alpha: self.alpha,
            mu: self.mu,
            b: self.b,
        }
    }
}

/// `mu = delta/2`, `alpha = 1/(b+1) - eps(mu, b)`.
pub fn biased_discrepancy_config(delta: f64, b: usize) -> Result<DiscrepancyConfig> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta={delta} not in (0,1)"
        )));
    }
    let mu = delta / 2.0;
    let eps = epsilon_from_mu(mu, b)?;
    let alpha = 1.0 / (b as f64 + 1.0) - eps;
    if alpha <= 0.0 {
        return Err(Error::Infeasible(format!(
            "alpha = 1/(b+1) - eps = {alpha:.6} <= 0 for delta={delta}, b={b}"
        )));
    }
    Ok(DiscrepancyConfig {
        delta,
        mu,
        eps,
        alpha,
        b,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub holds: bool,
    pub sum: f64,
}

/// `sum_F lambda^(-|F|) < 1` over the given set sizes.
pub fn check_share_criterion(
    sizes: impl IntoIterator<Item = usize>,
    cfg: &PotentialConfig,
) -> CriterionReport {
    let ll = cfg.ln_lambda();
    let sum: f64 = sizes.into_iter().map(|s| (-(s as f64) * ll).exp()).sum();
    CriterionReport {
        holds: sum < 1.0,
        sum,
    }
}

/// `k_i > 4 delta^-2 ln(s |F_i|)` for every group `(k_i, |F_i|)`.
pub fn stage_precondition(groups: &[(usize, usize)], delta: f64) -> bool {
    let s = groups.len() as f64;
    groups
        .iter()
        .all(|&(k, count)| k as f64 > 4.0 / (delta * delta) * (s * count as f64).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GammaGame {
    Hamilton { eps: f64 },
    Coloring { k: usize },
    Hgame { m2: f64 },
    Pancyclicity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub valid: bool,
}

/// The per-game `gamma` expression; `valid` says whether it lies in `(0, 1)`.
pub fn gamma_calculator(game: &GammaGame, n: f64, b: usize) -> GammaReport {
    let bf = b as f64;
    let ln = n.ln();
    let lnln = ln.ln();
    let head = bf.ln() + (ln / (bf + 1.0).ln()).ln() + 5.0;
    let gamma = match game {
        GammaGame::Hamilton { eps } => 2.0 * head / ((1.0 - eps) * ln - 2.0 * lnln - 2f64.ln()),
        GammaGame::Coloring { k } => {
            let kf = *k as f64;
            2.0 * head / (ln - 2.0 * kf.ln() - 4f64.ln() - 2f64.ln().ln())
        }
        GammaGame::Hgame { m2 } => 2.0 * m2 * head / (ln - 2.0 * m2 * lnln),
        GammaGame::Pancyclicity => 2.0 * head / (n.sqrt().ln() - lnln - 3000f64.ln()),
    };
    GammaReport {
        gamma,
        valid: gamma.is_finite() && gamma > 0.0 && gamma < 1.0,
    }
}
