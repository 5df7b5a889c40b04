//! Game and strategy configuration shared by the subcommands.

use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use msgame::baseline::{FirstFree, RandomPlayer};
use msgame::breaker::{BeckBreaker, ForestBreaker, GreedyBreaker, HGameBreaker, HGameConfig};
use msgame::graph::{edge_id, enumerate_copies, SimpleGraph};
use msgame::io::FamilyFile;
use msgame::maker::{
    biased_discrepancy_config, coloring_family, hamilton_families, pancyclicity_families,
    DiscrepancyController, LehmanMaker, PotentialConfig, PotentialMaker, SetSource,
    DEFAULT_FAMILY_CAP,
};
use msgame::solver::{Goal, OptimalPolicy, SolverConfig};
use msgame::{
    complete_graph_board, Family, GameSetup, GraphProperty, Objective, Player, Strategy, Variant,
};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Connectivity,
    Hamilton,
    Coloring,
    Hgame,
    Pancyclicity,
    /// Explicit family read from `--family`.
    Custom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[default]
    Standard,
    Stop,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Stop => Variant::Stop,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MakerKind {
    Lehman,
    Potential,
    Discrepancy,
    Random,
    First,
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BreakerKind {
    Random,
    Greedy,
    Beck,
    Forest,
    Hgame,
    First,
    Optimal,
}

#[derive(Args, Clone, Debug)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    pub game: GameKind,
    /// Vertices of K_n for graph games.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub b: usize,
    /// Colour count for the coloring game.
    #[arg(long)]
    pub k: Option<usize>,
    /// Target graph H for the H-game: a JSON file `{"n":..,"edges":[[u,v],..]}` or
    /// a name such as K3, C4, P4, K4-e.
    #[arg(long = "graph-h")]
    pub graph_h: Option<String>,
    /// Family JSON for `--game custom`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = msgame::engine::DEFAULT_MAX_STAGES)]
    pub max_stages: usize,
    /// Enumeration cap for explicit families.
    #[arg(long, default_value_t = DEFAULT_FAMILY_CAP)]
    pub cap: usize,
    /// Hamilton family parameter, also the H-game Breaker's eps.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Pancyclicity constant replacing 700.
    #[arg(long, default_value_t = 700.0)]
    pub c: f64,
}

#[derive(Args, Clone, Debug)]
pub struct StrategyArgs {
    #[arg(long, value_enum)]
    pub maker: MakerKind,
    #[arg(long, value_enum)]
    pub breaker: BreakerKind,
    /// Controller gamma; without it the controller uses `--delta` directly.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Potential Maker share; with `--mu` overrides the values derived from `--delta`.
    #[arg(long, requires = "mu")]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub mu: Option<f64>,
    /// Bunch size used by the H-game Breaker when the derived one does not fit.
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Phase-1 length of the H-game Breaker.
    #[arg(long)]
    pub phase1_stages: Option<usize>,
}

/// Everything needed to rebuild a game; stored in traces for replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub game: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<SimpleGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyFile>,
    pub variant: Variant,
    pub max_stages: usize,
    pub cap: usize,
    pub eps: f64,
    pub c: f64,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// `K<r>`, `K<r>-e`, `C<r>`, `P<r>`, or a graph JSON file.
pub fn parse_graph(arg: &str, field: &str) -> Result<SimpleGraph, CliError> {
    if Path::new(arg).is_file() {
        let text =
            std::fs::read_to_string(arg).map_err(|e| config(format!("{field}: {arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| config(format!("{field}: {arg}: {e}")));
    }
    let bad = || {
        config(format!(
            "{field}: '{arg}' is neither a file nor a graph name like K4, K4-e, C5, P3"
        ))
    };
    let (head, minus_edge) = match arg.strip_suffix("-e") {
        Some(h) => (h, true),
        None => (arg, false),
    };
    let mut chars = head.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let r: usize = chars.as_str().parse().map_err(|_| bad())?;
    let built = match kind.to_ascii_uppercase() {
        'K' => SimpleGraph::complete(r),
        'C' => SimpleGraph::cycle(r),
        'P' => SimpleGraph::path(r),
        _ => return Err(bad()),
    };
    let mut g = built.map_err(|e| config(format!("{field}: {e}")))?;
    if minus_edge {
        let (u, v) = *g.edges().first().ok_or_else(bad)?;
        g.remove_edge(u, v);
    }
    Ok(g)
}

impl GameSpec {
    pub fn from_args(a: &GameArgs) -> Result<GameSpec, CliError> {
        if a.b == 0 {
            return Err(config("--b: bias must be >= 1"));
        }
        if a.max_stages == 0 {
            return Err(config("--max-stages: must be >= 1"));
        }
        let needs_n = a.game != GameKind::Custom;
        let n = match (a.n, needs_n) {
            (Some(n), true) if n < 2 => {
                return Err(config(format!("--n: K_n needs n >= 2 (got {n})")))
            }
            (Some(n), true) if n > 64 => {
                return Err(config(format!("--n: at most 64 vertices (got {n})")))
            }
            (None, true) => {
                return Err(config(
                    format!("--n: required for --game {:?}", a.game).to_lowercase(),
                ))
            }
            (n, _) => n,
        };
        let k = match a.game {
            GameKind::Coloring => match a.k {
                Some(k) if k >= 1 => Some(k),
                Some(_) => return Err(config("--k: must be >= 1")),
                None => return Err(config("--k: required for --game coloring")),
            },
            _ => a.k,
        };
        let h = match (a.game, &a.graph_h) {
            (GameKind::Hgame, Some(s)) => Some(parse_graph(s, "--graph-h")?),
            (GameKind::Hgame, None) => Some(SimpleGraph::complete(3).map_err(CliError::Core)?),
            _ => None,
        };
        let family = match (a.game, &a.family) {
            (GameKind::Custom, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config(format!("--family: {path}: {e}")))?;
                let file: FamilyFile = serde_json::from_str(&text)
                    .map_err(|e| config(format!("--family: {path}: {e}")))?;
                file.clone()
                    .into_game()
                    .map_err(|e| config(format!("--family: {path}: {}", strip_kind(&e))))?;
                Some(file)
            }
            (GameKind::Custom, None) => return Err(config("--family: required for --game custom")),
            _ => None,
        };
        if a.eps.is_nan() || a.eps <= 0.0 || a.eps >= 1.0 {
            return Err(config(format!("--eps: {} not in (0,1)", a.eps)));
        }
        if a.c.is_nan() || a.c <= 0.0 {
            return Err(config(format!("--c: {} must be positive", a.c)));
        }
        Ok(GameSpec {
            game: a.game,
            n,
            b: a.b,
            k,
            h,
            family,
            variant: a.variant.into(),
            max_stages: a.max_stages,
            cap: a.cap,
            eps: a.eps,
            c: a.c,
        })
    }

    fn n(&self) -> Result<usize, CliError> {
        self.n
            .ok_or_else(|| config("--n: required for graph games"))
    }

    pub fn setup(&self) -> Result<GameSetup, CliError> {
        let (board, objective) = match self.game {
            GameKind::Custom => {
                let file = self
                    .family
                    .clone()
                    .ok_or_else(|| config("--family: missing"))?;
                file.into_game()
                    .map_err(|e| config(format!("--family: {}", strip_kind(&e))))?
            }
            kind => {
                let n = self.n()?;
                let property = match kind {
                    GameKind::Connectivity => GraphProperty::Connected,
                    GameKind::Hamilton => GraphProperty::Hamiltonian,
                    GameKind::Coloring => GraphProperty::NonColorable {
                        k: self.k.unwrap_or(2),
                    },
                    GameKind::Pancyclicity => GraphProperty::Pancyclic,
                    GameKind::Hgame => GraphProperty::ContainsCopy {
                        pattern: self.h.clone().ok_or_else(|| config("--graph-h: missing"))?,
                    },
                    GameKind::Custom => unreachable!(),
                };
                (complete_graph_board(n)?, Objective::graph(n, property))
            }
        };
        Ok(GameSetup::new(board, objective, self.b)
            .variant(self.variant)
            .max_stages(self.max_stages))
    }

    /// Explicit family for this game: the custom family, or the family whose
    /// sets a Maker must keep a share of in the graph games.
    pub fn explicit_family(&self) -> Result<Family, CliError> {
        let n = self.n;
        Ok(match self.game {
            GameKind::Custom => {
                let setup = self.setup()?;
                setup
                    .objective
                    .family()
                    .cloned()
                    .ok_or_else(|| config("--family: not explicit"))?
            }
            GameKind::Coloring => coloring_family(self.n()?, self.k.unwrap_or(2), self.cap)?,
            GameKind::Hamilton => hamilton_families(self.n()?, self.eps, self.cap)?,
            GameKind::Pancyclicity => pancyclicity_families(self.n()?, self.c, self.cap)?.0,
            GameKind::Hgame => {
                let n = self.n()?;
                let h = self
                    .h
                    .as_ref()
                    .ok_or_else(|| config("--graph-h: missing"))?;
                let sets = enumerate_copies(h, &SimpleGraph::complete(n)?)?
                    .into_iter()
                    .map(|c| {
                        let mut s: Vec<usize> =
                            c.edges.iter().map(|&(u, v)| edge_id(n, u, v)).collect();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                Family::single("copies", sets)?
            }
            GameKind::Connectivity => {
                return Err(config(format!(
                    "--game: connectivity on K_{} has no explicit family; use --maker lehman",
                    n.unwrap_or(0)
                )))
            }
        })
    }

    fn labeled_n(&self, who: &str) -> Result<usize, CliError> {
        match (self.game, self.n) {
            (GameKind::Custom, _) | (_, None) => Err(config(format!(
                "{who}: needs a graph game on K_n, not --game custom"
            ))),
            (_, Some(n)) => Ok(n),
        }
    }
}

enum MakerPlan {
    Lehman(usize),
    Potential(PotentialConfig, Option<Family>),
    Discrepancy(Box<DiscrepancyController>),
    Random,
    First,
    Optimal,
}

enum BreakerPlan {
    Random,
    Greedy,
    Beck,
    Forest(usize),
    HGame(Box<HGameBreaker>),
    First,
    Optimal,
}

/// Validated strategy choices; expensive pieces are built once and cloned per game.
pub struct Roster {
    maker: MakerPlan,
    breaker: BreakerPlan,
}

impl Roster {
    pub fn new(spec: &GameSpec, s: &StrategyArgs) -> Result<Roster, CliError> {
        let maker = match s.maker {
            MakerKind::Lehman => {
                if spec.game != GameKind::Connectivity {
                    return Err(config("--maker: lehman plays the connectivity game only"));
                }
                if spec.b != 1 {
                    return Err(config("--maker: lehman needs --b 1"));
                }
                MakerPlan::Lehman(spec.labeled_n("--maker lehman")?)
            }
            MakerKind::Potential => {
                let cfg = match (s.alpha, s.mu) {
                    (Some(alpha), Some(mu)) => PotentialConfig::new(alpha, mu, spec.b)
                        .map_err(|e| config(format!("--alpha/--mu: {}", strip_kind(&e))))?,
                    _ => biased_discrepancy_config(s.delta, spec.b)
                        .map_err(|e| config(format!("--delta: {}", strip_kind(&e))))?
                        .potential(),
                };
                let guide = match spec.game {
                    GameKind::Custom => None,
                    _ => Some(spec.explicit_family()?),
                };
                MakerPlan::Potential(cfg, guide)
            }
            MakerKind::Discrepancy => {
                let fam = spec.explicit_family()?;
                MakerPlan::Discrepancy(Box::new(match s.gamma {
                    Some(g) => DiscrepancyController::new(fam, g, spec.b)
                        .map_err(|e| param_error(e, "--gamma"))?,
                    None => DiscrepancyController::from_delta(fam, s.delta, spec.b)
                        .map_err(|e| param_error(e, "--delta"))?,
                }))
            }
            MakerKind::Random => MakerPlan::Random,
            MakerKind::First => MakerPlan::First,
            MakerKind::Optimal => MakerPlan::Optimal,
        };
        let breaker = match s.breaker {
            BreakerKind::Random => BreakerPlan::Random,
            BreakerKind::Greedy => BreakerPlan::Greedy,
            BreakerKind::Beck => BreakerPlan::Beck,
            BreakerKind::Forest => BreakerPlan::Forest(spec.labeled_n("--breaker forest")?),
            BreakerKind::Hgame => {
                let n = spec.labeled_n("--breaker hgame")?;
                let h = spec
                    .h
                    .as_ref()
                    .ok_or_else(|| config("--breaker: hgame needs --game hgame"))?;
                let cfg = HGameConfig {
                    eps: spec.eps,
                    t: s.t,
                    phase1_stages: s.phase1_stages,
                    cap: spec.cap,
                    ..HGameConfig::default()
                };
                let br = HGameBreaker::new(n, h, spec.b, &cfg)
                    .map_err(|e| param_error(e, "--graph-h"))?;
                BreakerPlan::HGame(Box::new(br))
            }
            BreakerKind::First => BreakerPlan::First,
            BreakerKind::Optimal => BreakerPlan::Optimal,
        };
        Ok(Roster { maker, breaker })
    }

    pub fn maker(&self, seed: u64) -> Box<dyn Strategy> {
        match &self.maker {
            MakerPlan::Lehman(n) => Box::new(LehmanMaker::new(*n)),
            MakerPlan::Potential(cfg, guide) => {
                let source = match guide {
                    Some(f) => SetSource::Leftovers(f.clone()),
                    None => SetSource::StageFamily,
                };
                Box::new(PotentialMaker::new(*cfg, source))
            }
            MakerPlan::Discrepancy(c) => Box::new((**c).clone()),
            MakerPlan::Random => Box::new(RandomPlayer::maker(seed)),
            MakerPlan::First => Box::new(FirstFree::new(Player::Maker)),
            MakerPlan::Optimal => Box::new(OptimalPolicy::new(
                Player::Maker,
                Goal::Tau,
                SolverConfig::default(),
            )),
        }
    }

    pub fn breaker(&self, seed: u64) -> Box<dyn Strategy> {
        match &self.breaker {
            BreakerPlan::Random => Box::new(RandomPlayer::breaker(seed)),
            BreakerPlan::Greedy => Box::new(GreedyBreaker::new()),
            BreakerPlan::Beck => Box::new(BeckBreaker::new()),
            BreakerPlan::Forest(n) => Box::new(ForestBreaker::new(*n)),
            BreakerPlan::HGame(h) => Box::new((**h).clone()),
            BreakerPlan::First => Box::new(FirstFree::new(Player::Breaker)),
            BreakerPlan::Optimal => Box::new(OptimalPolicy::new(
                Player::Breaker,
                Goal::Tau,
                SolverConfig::default(),
            )),
        }
    }
}

/// Parameter problems are config errors; size caps keep their own exit code.
fn param_error(e: msgame::Error, field: &str) -> CliError {
    match e {
        msgame::Error::FamilyTooLarge { .. } | msgame::Error::SizeLimit { .. } => CliError::Core(e),
        other => config(format!("{field}: {}", strip_kind(&other))),
    }
}

/// Error text without the kind prefix, for field-path messages.
pub fn strip_kind(e: &msgame::Error) -> String {
    let s = e.to_string();
    match s.split_once(": ") {
        Some((_, rest)) => rest.to_string(),
        None => s,
    }
}
