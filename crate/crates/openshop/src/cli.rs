//! Command-line front end.
//!
//! Subcommands: `solve`, `value`, `game`, `alloc`, `core`, `examples`,
//! `gen`, `gantt`. Every command accepts `--format json|table`; JSON is the
//! stable machine interface, tables are human-facing. Exit codes: 0 success,
//! 2 invalid input, 3 assertion failure in the bundled examples, 4 search
//! node budget exhausted. The environment variable `OPENSHOP_NODE_LIMIT`
//! overrides the default node budget (`0` removes the budget entirely);
//! an explicit `--node-limit` flag wins over the environment.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::admissibility::Regime;
use crate::error::Error;
use crate::fixtures::{run_examples, ExampleId, ExampleReport};
use crate::game::{
    averaged_machine_allocation, build_game, core_nonempty, core_violation, machine_allocation,
    Allocation, TUGame,
};
use crate::gantt::{parse_gantt, render_gantt};
use crate::gen::{gen_instance, GenStyle};
use crate::optimal::{adiri_amit, j_based_optimal};
use crate::search::{min_coalition_cost, SearchConfig, DEFAULT_NODE_LIMIT};
use crate::shop::{Coalition, Instance, Schedule};
use crate::Result;

#[derive(Parser, Debug)]
#[command(
    name = "openshop",
    version,
    about = "Exact solver for unit-time open shop scheduling games",
    propagate_version = true
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct an optimal schedule: block-built for a bare (n, m), or
    /// anchored to one machine's initial order for an instance.
    Solve {
        /// Number of jobs (with --m; mutually exclusive with --instance).
        #[arg(long)]
        n: Option<usize>,
        /// Number of machines (with --n; mutually exclusive with --instance).
        #[arg(long)]
        m: Option<usize>,
        /// Instance JSON file.
        #[arg(long, conflicts_with_all = ["n", "m"])]
        instance: Option<PathBuf>,
        /// 1-based machine whose initial order the optimal schedule must keep,
        /// processing that machine continuously (requires --instance).
        #[arg(long)]
        j: Option<usize>,
    },
    /// Exact value of one coalition under one admissibility regime.
    Value {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated 1-based job numbers, e.g. `1,3,5`.
        #[arg(long)]
        coalition: String,
        /// One of as1..as4, as2p..as4p, bar2..bar4, as1p, bar1.
        #[arg(long)]
        regime: String,
        /// Scheduling horizon override (exclusive bound on start slots).
        #[arg(long)]
        horizon: Option<u32>,
        /// Search node budget override (0 = unlimited).
        #[arg(long)]
        node_limit: Option<u64>,
        /// Also emit a minimizing admissible schedule.
        #[arg(long)]
        witness: bool,
    },
    /// Full characteristic function of the induced coalition-savings game.
    Game {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// One of as1..as4, as2p..as4p, bar2..bar4, as1p, bar1.
        #[arg(long)]
        regime: String,
        /// Scheduling horizon override.
        #[arg(long)]
        horizon: Option<u32>,
        /// Per-coalition search node budget override (0 = unlimited).
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Machine-based allocation rules for the grand coalition's savings.
    Alloc {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// Allocation rule.
        #[arg(long, value_enum)]
        rule: Rule,
        /// 1-based machine for --rule mu-j.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Core membership of an allocation, or core emptiness of a game.
    Core {
        /// Game JSON file (as produced by `game`).
        #[arg(long)]
        game: PathBuf,
        /// Allocation JSON file; when given, test membership instead of
        /// deciding emptiness.
        #[arg(long)]
        allocation: Option<PathBuf>,
    },
    /// Run the bundled reference examples and report each assertion.
    Examples {
        /// Run a single example: ex1..ex6 or ex7_nonbalanced.
        #[arg(long)]
        filter: Option<String>,
        /// Search node budget override (0 = unlimited).
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Generate a deterministic pseudo-random instance.
    Gen {
        /// Number of jobs.
        #[arg(long)]
        n: usize,
        /// Number of machines.
        #[arg(long)]
        m: usize,
        /// RNG seed; the instance is a pure function of (n, m, seed, style).
        #[arg(long)]
        seed: u64,
        /// `semiactive-random` or `permuted-blocks`.
        #[arg(long, default_value = "semiactive-random")]
        style: String,
    },
    /// Convert between schedule representations: JSON in, ASCII Gantt out
    /// (or, with --text, ASCII in and JSON out).
    Gantt {
        /// Instance JSON file (renders its initial schedule).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Schedule JSON file.
        #[arg(long, conflicts_with = "instance")]
        schedule: Option<PathBuf>,
        /// ASCII Gantt table file (as printed by this command).
        #[arg(long, conflicts_with_all = ["instance", "schedule"])]
        text: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Average of the per-machine allocations (a core element).
    #[value(name = "mu_bar", alias = "mu-bar")]
    MuBar,
    /// Allocation anchored at one machine (requires --j).
    #[value(name = "mu_j", alias = "mu-j")]
    MuJ,
}

/// Entry point used by the binary: parse, dispatch, map errors to exit codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NodeLimit { .. } => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { n, m, instance, j } => cmd_solve(cli.format, *n, *m, instance.as_deref(), *j),
        Command::Value {
            instance,
            coalition,
            regime,
            horizon,
            node_limit,
            witness,
        } => cmd_value(cli.format, instance, coalition, regime, *horizon, *node_limit, *witness),
        Command::Game {
            instance,
            regime,
            horizon,
            node_limit,
        } => cmd_game(cli.format, instance, regime, *horizon, *node_limit),
        Command::Alloc { instance, rule, j } => cmd_alloc(cli.format, instance, *rule, *j),
        Command::Core { game, allocation } => cmd_core(cli.format, game, allocation.as_deref()),
        Command::Examples { filter, node_limit } => cmd_examples(cli.format, filter.as_deref(), *node_limit),
        Command::Gen { n, m, seed, style } => cmd_gen(cli.format, *n, *m, *seed, style),
        Command::Gantt {
            instance,
            schedule,
            text,
        } => cmd_gantt(cli.format, instance.as_deref(), schedule.as_deref(), text.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!("cannot read {what} file `{}`: {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        Error::InvalidInput(format!("invalid {what} JSON in `{}`: {e}", path.display()))
    })
}

/// Node budget precedence: flag, then `OPENSHOP_NODE_LIMIT`, then the
/// default. A value of 0 disables the budget.
fn resolve_node_limit(flag: Option<u64>) -> Result<Option<u64>> {
    let raw = match flag {
        Some(v) => v,
        None => match std::env::var("OPENSHOP_NODE_LIMIT") {
            Ok(s) => s.trim().parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "OPENSHOP_NODE_LIMIT must be a non-negative integer, got `{s}`"
                ))
            })?,
            Err(_) => DEFAULT_NODE_LIMIT,
        },
    };
    Ok((raw != 0).then_some(raw))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn schedule_json(s: &Schedule) -> serde_json::Value {
    serde_json::to_value(s).expect("schedules serialize")
}

fn parse_regime(s: &str) -> Result<Regime> {
    s.parse()
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

fn cmd_solve(
    format: Format,
    n: Option<usize>,
    m: Option<usize>,
    instance: Option<&Path>,
    j: Option<usize>,
) -> Result<u8> {
    let schedule = match (instance, n, m) {
        (Some(path), None, None) => {
            let inst: Instance = read_json(path, "instance")?;
            match j {
                Some(j) => {
                    if j == 0 || j > inst.m() {
                        return Err(Error::InvalidInput(format!(
                            "--j must name a machine between 1 and {}, got {j}",
                            inst.m()
                        )));
                    }
                    j_based_optimal(&inst, j - 1)
                }
                None => adiri_amit(inst.n(), inst.m()),
            }
        }
        (None, Some(n), Some(m)) => {
            if j.is_some() {
                return Err(Error::InvalidInput(
                    "--j anchors the schedule to an initial order, so it requires --instance".into(),
                ));
            }
            if n == 0 || m == 0 {
                return Err(Error::InvalidInput("--n and --m must be at least 1".into()));
            }
            adiri_amit(n, m)
        }
        _ => {
            return Err(Error::InvalidInput(
                "solve needs either --instance or both --n and --m".into(),
            ))
        }
    };
    match format {
        Format::Json => print_json(&json!({
            "schedule": schedule_json(&schedule),
            "total_cost": schedule.total_cost(),
        })),
        Format::Table => {
            print!("{}", render_gantt(&schedule));
            println!("total cost: {}", schedule.total_cost());
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// value
// ---------------------------------------------------------------------------

fn cmd_value(
    format: Format,
    instance: &Path,
    coalition: &str,
    regime: &str,
    horizon: Option<u32>,
    node_limit: Option<u64>,
    witness: bool,
) -> Result<u8> {
    let inst: Instance = read_json(instance, "instance")?;
    let t: Coalition = coalition.parse()?;
    let regime = parse_regime(regime)?;
    let config = SearchConfig {
        horizon,
        node_limit: resolve_node_limit(node_limit)?,
        record_witness: witness,
    };
    let res = min_coalition_cost(&inst, t, regime, &config)?;
    let initial_cost = inst.s0().coalition_cost(t);
    match format {
        Format::Json => {
            let mut out = json!({
                "coalition": t.to_string(),
                "regime": regime.name(),
                "initial_cost": initial_cost,
                "min_cost": res.min_cost,
                "value": res.value,
                "nodes": res.nodes,
            });
            if let Some(w) = &res.witness {
                out["witness"] = schedule_json(w);
            }
            print_json(&out);
        }
        Format::Table => {
            println!(
                "coalition {{{t}}} under {}: initial cost {initial_cost}, \
                 minimal admissible cost {}, value {}",
                regime.name(),
                res.min_cost,
                res.value
            );
            println!("search nodes expanded: {}", res.nodes);
            if let Some(w) = &res.witness {
                println!("minimizing schedule:");
                print!("{}", render_gantt(w));
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// game
// ---------------------------------------------------------------------------

fn cmd_game(
    format: Format,
    instance: &Path,
    regime: &str,
    horizon: Option<u32>,
    node_limit: Option<u64>,
) -> Result<u8> {
    let inst: Instance = read_json(instance, "instance")?;
    let regime = parse_regime(regime)?;
    if inst.n() > crate::game::MAX_GAME_JOBS {
        return Err(Error::InvalidInput(format!(
            "building a full game is supported up to {} jobs, got {}",
            crate::game::MAX_GAME_JOBS,
            inst.n()
        )));
    }
    if let Some(h) = horizon {
        if h < inst.s0().makespan() {
            return Err(Error::InvalidInput(format!(
                "horizon {h} is below the initial schedule's makespan {}",
                inst.s0().makespan()
            )));
        }
    }
    let config = SearchConfig {
        horizon,
        node_limit: resolve_node_limit(node_limit)?,
        record_witness: false,
    };
    match build_game(&inst, regime, &config) {
        Ok(game) => {
            match format {
                Format::Json => print_json(&serde_json::to_value(&game).expect("games serialize")),
                Format::Table => {
                    println!("game under {} with {} players:", regime.name(), game.n());
                    for t in game.coalitions() {
                        println!("  v({{{t}}}) = {}", game.value(t));
                    }
                }
            }
            Ok(0)
        }
        Err(partial) => {
            eprintln!(
                "error: node budget exhausted on {} of {} coalitions; \
                 unresolved values are reported as lower bounds only",
                partial.unresolved.len(),
                partial.exact.len() + partial.unresolved.len()
            );
            let key = |items: &[(Coalition, i64)]| -> serde_json::Map<String, serde_json::Value> {
                items
                    .iter()
                    .map(|(t, v)| (t.to_string(), json!(v)))
                    .collect()
            };
            match format {
                Format::Json => print_json(&json!({
                    "n": partial.n,
                    "regime": partial.regime.name(),
                    "partial": true,
                    "exact": key(&partial.exact),
                    "lower_bounds": key(&partial.unresolved),
                })),
                Format::Table => {
                    println!(
                        "partial game under {} with {} players:",
                        partial.regime.name(),
                        partial.n
                    );
                    for (t, v) in &partial.exact {
                        println!("  v({{{t}}}) = {v}");
                    }
                    for (t, lb) in &partial.unresolved {
                        println!("  v({{{t}}}) >= {lb} (budget exhausted)");
                    }
                }
            }
            Ok(4)
        }
    }
}

// ---------------------------------------------------------------------------
// alloc
// ---------------------------------------------------------------------------

fn cmd_alloc(format: Format, instance: &Path, rule: Rule, j: Option<usize>) -> Result<u8> {
    let inst: Instance = read_json(instance, "instance")?;
    let alloc = match rule {
        Rule::MuBar => {
            if j.is_some() {
                return Err(Error::InvalidInput("--j only applies to --rule mu_j".into()));
            }
            averaged_machine_allocation(&inst)
        }
        Rule::MuJ => {
            let j = j.ok_or_else(|| Error::InvalidInput("--rule mu_j requires --j".into()))?;
            if j == 0 || j > inst.m() {
                return Err(Error::InvalidInput(format!(
                    "--j must name a machine between 1 and {}, got {j}",
                    inst.m()
                )));
            }
            Allocation::from_integers(&machine_allocation(&inst, j - 1))
        }
    };
    match format {
        Format::Json => print_json(&serde_json::to_value(&alloc).expect("allocations serialize")),
        Format::Table => {
            for (i, x) in alloc.x.iter().enumerate() {
                println!("player {}: {x}", i + 1);
            }
            println!("total: {}", alloc.total());
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// core
// ---------------------------------------------------------------------------

fn cmd_core(format: Format, game_path: &Path, allocation: Option<&Path>) -> Result<u8> {
    let game: TUGame = read_json(game_path, "game")?;
    match allocation {
        Some(path) => {
            let alloc: Allocation = read_json(path, "allocation")?;
            if alloc.x.len() != game.n() {
                return Err(Error::InvalidInput(format!(
                    "allocation has {} entries but the game has {} players",
                    alloc.x.len(),
                    game.n()
                )));
            }
            let violation = core_violation(&game, &alloc);
            match format {
                Format::Json => print_json(&json!({
                    "member": violation.is_none(),
                    "violation": violation.as_ref().map(|v| v.to_string()),
                })),
                Format::Table => match &violation {
                    None => println!("the allocation is in the core"),
                    Some(v) => println!("the allocation is not in the core: {v}"),
                },
            }
        }
        None => {
            let outcome = core_nonempty(&game)?;
            match format {
                Format::Json => print_json(&json!({
                    "nonempty": outcome.nonempty,
                    "certificate": outcome
                        .certificate
                        .as_ref()
                        .map(|c| serde_json::to_value(c).expect("allocations serialize")),
                })),
                Format::Table => match &outcome.certificate {
                    Some(cert) => {
                        println!("the core is nonempty; one core element:");
                        for (i, x) in cert.x.iter().enumerate() {
                            println!("  player {}: {x}", i + 1);
                        }
                    }
                    None => println!("the core is empty"),
                },
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// examples
// ---------------------------------------------------------------------------

fn cmd_examples(format: Format, filter: Option<&str>, node_limit: Option<u64>) -> Result<u8> {
    let filter = filter.map(|s| s.parse::<ExampleId>()).transpose()?;
    let budget = resolve_node_limit(node_limit)?;
    let reports = run_examples(filter, budget);
    let all_passed = reports.iter().all(ExampleReport::passed);
    match format {
        Format::Json => {
            let out: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id.name(),
                        "passed": r.passed(),
                        "assertions": r.assertions.iter().map(|a| json!({
                            "name": a.name,
                            "expected": a.expected,
                            "actual": a.actual,
                            "pass": a.pass,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!({ "all_passed": all_passed, "examples": out }));
        }
        Format::Table => {
            for r in &reports {
                for a in &r.assertions {
                    if a.pass {
                        println!("[{}]   ok: {}", r.id, a.name);
                    } else {
                        println!("[{}] FAIL: {}", r.id, a.name);
                        for line in a.expected.lines() {
                            println!("          expected: {line}");
                        }
                        for line in a.actual.lines() {
                            println!("          actual:   {line}");
                        }
                    }
                }
                let passed = r.assertions.iter().filter(|a| a.pass).count();
                println!("[{}] {passed}/{} assertions passed", r.id, r.assertions.len());
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            println!("examples: {passed}/{} passed", reports.len());
        }
    }
    Ok(if all_passed { 0 } else { 3 })
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen(format: Format, n: usize, m: usize, seed: u64, style: &str) -> Result<u8> {
    let style: GenStyle = style.parse()?;
    let inst = gen_instance(n, m, seed, style)?;
    match format {
        Format::Json => print_json(&serde_json::to_value(&inst).expect("instances serialize")),
        Format::Table => {
            print!("{}", render_gantt(inst.s0()));
            println!(
                "{} jobs x {} machines (seed {seed}, style {style}), total cost {}",
                inst.n(),
                inst.m(),
                inst.s0().total_cost()
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// gantt
// ---------------------------------------------------------------------------

fn cmd_gantt(
    format: Format,
    instance: Option<&Path>,
    schedule: Option<&Path>,
    text: Option<&Path>,
) -> Result<u8> {
    let s: Schedule = match (instance, schedule, text) {
        (Some(path), None, None) => {
            let inst: Instance = read_json(path, "instance")?;
            inst.s0().clone()
        }
        (None, Some(path), None) => read_json(path, "schedule")?,
        (None, None, Some(path)) => {
            let body = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("cannot read gantt file `{}`: {e}", path.display()))
            })?;
            parse_gantt(&body)?
        }
        _ => {
            return Err(Error::InvalidInput(
                "gantt needs exactly one of --instance, --schedule, --text".into(),
            ))
        }
    };
    match format {
        Format::Json => print_json(&schedule_json(&s)),
        Format::Table => print!("{}", render_gantt(&s)),
    }
    Ok(0)
}
