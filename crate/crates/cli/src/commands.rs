use std::fs;
use std::path::Path;

use clap::ValueEnum;
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use msgame::breaker::{enumerate_bunch_family, BunchScope};
use msgame::graph::{
    check_hamilton_conditions, check_pancyclicity_conditions, choose_k_graph,
    chromatic_number_at_most, contains_copy, format_ratio, is_bipartite, is_connected, is_forest,
    is_hamiltonian, is_pancyclic, max_2_density, max_density, SimpleGraph,
};
use msgame::io::FamilyFile;
use msgame::solver::{Branching, Solver, SolverConfig};
use msgame::sweep::{game_seed, run_batch, ExecMode};
use msgame::{family_stats, play_multistage, Family, Group, MatchTrace, StageView};

use crate::game::{parse_graph, strip_kind, GameArgs, GameKind, GameSpec, Roster, StrategyArgs};
use crate::CliError;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn print_json(v: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow {
    index: usize,
    seed: u64,
    game: String,
    n: usize,
    b: usize,
    variant: String,
    maker: String,
    breaker: String,
    tau_observed: usize,
    truncated: bool,
    forfeit: String,
    stage_lengths: String,
}

fn game_name(kind: GameKind) -> String {
    kind.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

pub fn simulate(
    args: &GameArgs,
    strategies: &StrategyArgs,
    seed: u64,
    reps: usize,
    out: Option<&Path>,
    sequential: bool,
) -> Result<(), CliError> {
    if reps == 0 {
        return Err(config("--reps: must be >= 1"));
    }
    let spec = GameSpec::from_args(args)?;
    let setup = spec.setup()?;
    setup
        .validate()
        .map_err(|e| config(format!("--game: {e}")))?;
    let roster = Roster::new(&spec, strategies)?;
    let view = StageView {
        board: &setup.board,
        objective: &setup.objective,
        bias: setup.bias,
        stage: 1,
        variant: setup.variant,
    };
    for (field, mut s) in [
        ("--maker", roster.maker(seed)),
        ("--breaker", roster.breaker(seed)),
    ] {
        s.start_stage(&view).map_err(|e| match e {
            msgame::Error::FamilyTooLarge { .. } | msgame::Error::SizeLimit { .. } => {
                CliError::Core(e)
            }
            other => config(format!(
                "{field}: {} cannot play this game: {}",
                s.name(),
                strip_kind(&other)
            )),
        })?;
    }
    let spec_json = serde_json::to_value(&spec).map_err(|e| CliError::Io(e.to_string()))?;
    let mode = if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::best()
    };

    let results: Vec<Result<MatchTrace, msgame::Error>> = run_batch(mode, reps, |i| {
        let s = game_seed(seed, i as u64);
        let mut maker = roster.maker(s);
        let mut breaker = roster.breaker(s);
        let mut trace = play_multistage(&setup, &mut maker, &mut breaker, Some(s))?;
        trace.config.game = Some(spec_json.clone());
        msgame::replay(&trace, &setup)?;
        Ok(trace)
    });
    let traces = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    if let Some(dir) = out {
        fs::create_dir_all(dir.join("traces"))?;
        for (i, t) in traces.iter().enumerate() {
            let text = serde_json::to_string_pretty(t).map_err(|e| CliError::Io(e.to_string()))?;
            fs::write(
                dir.join("traces").join(format!("game_{i:05}.json")),
                text + "\n",
            )?;
        }
    }
    let sink: Box<dyn std::io::Write> = match out {
        Some(dir) => Box::new(fs::File::create(dir.join("summary.csv"))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for (i, t) in traces.iter().enumerate() {
        w.serialize(SummaryRow {
            index: i,
            seed: t.config.seed.unwrap_or_default(),
            game: game_name(spec.game),
            n: t.config.n,
            b: t.config.b,
            variant: format!("{:?}", t.config.variant).to_lowercase(),
            maker: t.config.maker.clone(),
            breaker: t.config.breaker.clone(),
            tau_observed: t.tau_observed,
            truncated: t.truncated,
            forfeit: t
                .forfeit
                .as_ref()
                .map(|f| f.reason.clone())
                .unwrap_or_default(),
            stage_lengths: t
                .stage_lengths()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        })
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;

    if let Some((i, f)) = traces.iter().enumerate().find_map(|(i, t)| {
        t.forfeit
            .as_ref()
            .filter(|f| f.invariant_violation)
            .map(|f| (i, f))
    }) {
        return Err(CliError::Core(msgame::Error::InvariantViolation(format!(
            "game {i}, stage {}: {}",
            f.stage, f.reason
        ))));
    }
    Ok(())
}

pub fn solve(args: &GameArgs, all_subsets: bool) -> Result<(), CliError> {
    let spec = GameSpec::from_args(args)?;
    let setup = spec.setup()?;
    let cfg = SolverConfig {
        branching: if all_subsets {
            Branching::AllUpToB
        } else {
            Branching::Maximal
        },
        variant: spec.variant,
        ..SolverConfig::default()
    };
    let mut solver = Solver::new(&setup.board, &setup.objective, spec.b, cfg)?;
    let winner = solver.winner()?;
    let tau = solver.tau()?;
    print_json(&json!({
        "game": game_name(spec.game),
        "ground": setup.board.ground(),
        "b": spec.b,
        "variant": spec.variant,
        "winner": winner,
        "tau": match tau {
            msgame::solver::Tau::Finite(t) => json!(t),
            msgame::solver::Tau::Unbounded => json!("unbounded"),
        },
    }))
}

fn parse_ratio(s: &str, field: &str) -> Result<Rational64, CliError> {
    let bad = || config(format!("--{field}: '{s}' is not a ratio like 3/4 or 0.75"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    Rational64::approximate_float(x).ok_or_else(bad)
}

pub fn families(
    args: &GameArgs,
    stats: bool,
    bunches: Option<usize>,
    delta: &str,
) -> Result<(), CliError> {
    let spec = GameSpec::from_args(args)?;
    let setup = spec.setup()?;
    let family = match bunches {
        Some(t) => {
            if spec.game != GameKind::Hgame {
                return Err(config("--bunches: only for --game hgame"));
            }
            let n = spec.n.unwrap_or_default();
            let h = spec
                .h
                .as_ref()
                .ok_or_else(|| config("--graph-h: missing"))?;
            let k = choose_k_graph(h)?;
            let delta = parse_ratio(delta, "delta")?;
            let bf = enumerate_bunch_family(n, &k, t, delta, BunchScope::Entry, spec.cap)?;
            Family::new(vec![Group {
                name: format!("bunches_t{t}"),
                sets: bf.sets,
            }])?
        }
        None => spec.explicit_family()?,
    };
    if stats {
        let rows: Vec<Value> = family
            .groups()
            .iter()
            .zip(family_stats(&family)?)
            .map(|(g, s)| json!({"name": g.name, "k": s.k, "count": s.count}))
            .collect();
        print_json(&json!({
            "game": game_name(spec.game),
            "ground": setup.board.ground(),
            "total": family.set_count(),
            "groups": rows,
        }))
    } else {
        print_json(&FamilyFile::new(&setup.board, &family))
    }
}

pub fn density(graph_h: &str) -> Result<(), CliError> {
    let h = parse_graph(graph_h, "--graph-h")?;
    let m = max_density(&h)?;
    let m2 = max_2_density(&h)?;
    let k = choose_k_graph(&h)?;
    print_json(&json!({
        "graph": h,
        "m": format_ratio(m),
        "m2": format_ratio(m2),
        "k": k,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Expansion (P1) and cut (P2) conditions for Hamiltonicity.
    HamiltonConditions,
    /// Independence (P1) and connectivity (P2) conditions for pancyclicity.
    PancyclicityConditions,
    Connected,
    Forest,
    Bipartite,
    /// Chromatic number at most `--k`.
    Colorable,
    Hamiltonian,
    Pancyclic,
    /// Contains a copy of `--graph-h`.
    Contains,
}

pub struct VerifyArgs {
    pub graph: String,
    pub check: Check,
    pub exp_factor: Option<f64>,
    pub cut_size: Option<usize>,
    pub c: f64,
    pub k: Option<usize>,
    pub graph_h: Option<String>,
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let g: SimpleGraph = parse_graph(&a.graph, "--graph")?;
    let name = a
        .check
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let report = match a.check {
        Check::HamiltonConditions => {
            let n = g.n().max(3) as f64;
            let factor = a.exp_factor.unwrap_or(n.ln().ln());
            let cut = a.cut_size.unwrap_or((n / n.ln()).ceil() as usize);
            let r = check_hamilton_conditions(&g, factor, cut)?;
            json!({
                "check": name, "exp_factor": factor, "cut_size": cut,
                "pass": r.holds(), "p1": r.p1, "p2": r.p2, "witness": r.witness,
            })
        }
        Check::PancyclicityConditions => {
            let r = check_pancyclicity_conditions(&g, a.c)?;
            json!({"check": name, "pass": r.holds(), "p1": r.p1, "p2": r.p2, "witness": r.witness})
        }
        Check::Connected => json!({"check": name, "pass": is_connected(&g)}),
        Check::Forest => json!({"check": name, "pass": is_forest(g.n(), g.edges())}),
        Check::Bipartite => json!({"check": name, "pass": is_bipartite(&g)}),
        Check::Colorable => {
            let k =
                a.k.ok_or_else(|| config("--k: required for --check colorable"))?;
            json!({"check": name, "k": k, "pass": chromatic_number_at_most(&g, k)?})
        }
        Check::Hamiltonian => json!({"check": name, "pass": is_hamiltonian(&g)?}),
        Check::Pancyclic => json!({"check": name, "pass": is_pancyclic(&g)?}),
        Check::Contains => {
            let h = parse_graph(
                a.graph_h
                    .as_deref()
                    .ok_or_else(|| config("--graph-h: required for --check contains"))?,
                "--graph-h",
            )?;
            let found = contains_copy(&h, &g)?;
            json!({"check": name, "pass": found.is_some(), "embedding": found})
        }
    };
    print_json(&report)?;
    if report["pass"] == json!(true) {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}

pub fn replay(path: &Path) -> Result<(), CliError> {
    let field = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| config(format!("{field}: {e}")))?;
    let trace: MatchTrace =
        serde_json::from_str(&text).map_err(|e| config(format!("{field}: {e}")))?;
    let game = trace.config.game.clone().ok_or_else(|| {
        config(format!(
            "{field}: config.game: missing, cannot rebuild the game"
        ))
    })?;
    let spec: GameSpec =
        serde_json::from_value(game).map_err(|e| config(format!("{field}: config.game: {e}")))?;
    let setup = spec.setup()?;
    if setup.board.ground() != trace.config.ground {
        return Err(CliError::Core(msgame::Error::InvariantViolation(format!(
            "config.ground: trace says {}, game has {}",
            trace.config.ground,
            setup.board.ground()
        ))));
    }
    let report = msgame::replay(&trace, &setup)?;
    print_json(&json!({"ok": true, "stages": report.stages, "tau": report.tau}))
}
