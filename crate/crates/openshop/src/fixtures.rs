//! Bundled reference examples with frozen expected outcomes.
//!
//! Each example packages an initial schedule (plus, where useful, frozen
//! witness schedules) together with named assertions: coalition values,
//! admissibility verdicts, allocation components, and core verdicts. The
//! `examples` CLI command and the regression tests both run these assertions
//! through [`run_examples`]; any mismatch is reported with an
//! expected/actual diff instead of a panic.

use std::fmt;
use std::str::FromStr;

use crate::admissibility::{active_cooperation_witness, is_admissible, Regime};
use crate::error::Error;
use crate::game::{
    averaged_machine_allocation, build_game, check_superadditive, core_nonempty, core_violation,
    machine_allocation, Allocation, CoreViolation, TUGame,
};
use crate::gantt::{parse_gantt, render_gantt};
use crate::optimal::{adiri_amit, j_based_optimal, optimal_total_cost};
use crate::search::{min_coalition_cost, SearchConfig};
use crate::shop::{Coalition, Instance, Schedule};
use crate::Result;

/// Identifier of a bundled example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleId {
    /// 2×2: the scheme with both machines ordered (1,2) has exactly two
    /// semi-active schedules.
    Ex1,
    /// 6×4: the block-building optimal schedule, its scheme, and cost 32.
    Ex2,
    /// 5×2: coalition {3,5} saves 1 keeping predecessor sets, but its best
    /// rearrangement pushes player 2's completion from 5 to 6.
    Ex3,
    /// 3×2: singleton {2} saves 1, yet its witness delays an outsider's
    /// operation — outsiders must actively cooperate.
    Ex4,
    /// 13×4: savings 2, 4, 4 for {1,2}, {4,5}, {1,2,4,5} — the game is not
    /// superadditive.
    Ex5,
    /// 4×2: the machine-1 allocation pays player 3 less than it can secure
    /// alone, so it is not in the core; the averaged allocation is.
    Ex6,
    /// 3×2: with free repositioning (start times may not increase), the
    /// induced game has an empty core.
    Ex7NonBalanced,
}

impl ExampleId {
    pub const ALL: [ExampleId; 7] = [
        ExampleId::Ex1,
        ExampleId::Ex2,
        ExampleId::Ex3,
        ExampleId::Ex4,
        ExampleId::Ex5,
        ExampleId::Ex6,
        ExampleId::Ex7NonBalanced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
            ExampleId::Ex5 => "ex5",
            ExampleId::Ex6 => "ex6",
            ExampleId::Ex7NonBalanced => "ex7_nonbalanced",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExampleId> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown example `{s}` (expected ex1..ex6 or ex7_nonbalanced)"
                ))
            })
    }
}

/// One named expectation, with an expected/actual pair for diff output.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// All assertion outcomes for one example.
#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub id: ExampleId,
    pub assertions: Vec<Assertion>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

// ---------------------------------------------------------------------------
// Frozen schedule tables (same shape `render_gantt` prints).
// ---------------------------------------------------------------------------

const EX1_S1: &str = "
    m1 | 1 | 2 |   |
    m2 |   | 1 | 2 |
";

const EX1_S2: &str = "
    m1 |   | 1 | 2 |
    m2 | 1 | 2 |   |
";

const EX2_OPTIMAL: &str = "
    m1 | 1 | 4 | 3 | 2 | 5 |   |   | 6 |
    m2 | 2 | 1 | 4 | 3 | 6 | 5 |   |   |
    m3 | 3 | 2 | 1 | 4 |   | 6 | 5 |   |
    m4 | 4 | 3 | 2 | 1 |   |   | 6 | 5 |
";

const EX3_S0: &str = "
    m1 | 1 | 2 |   | 3 | 4 | 5 |
    m2 | 5 | 1 | 3 | 4 | 2 |   |
";

const EX3_WITNESS_35: &str = "
    m1 | 1 | 2 | 3 | 4 | 5 |   |
    m2 | 5 | 1 |   | 3 | 4 | 2 |
";

const EX4_S0: &str = "
    m1 | 1 | 2 | 3 |   |   |
    m2 |   | 1 |   | 3 | 2 |
";

const EX4_WITNESS_2: &str = "
    m1 | 1 | 2 |   | 3 |
    m2 |   | 1 | 3 | 2 |
";

const EX5_S0: &str = "
    m1 |  1 |  2 |  3 |  4 |  5 |  6 |  7 |  8 |  9 | 10 | 11 | 12 | 13 |    |    |    |    |    |
    m2 | 13 | 12 | 10 |  5 |  4 |    |  3 |  1 |  2 |  8 |    | 11 |  6 |  7 |  9 |    |    |    |
    m3 |  4 |  5 |  1 |  2 | 12 |  3 |  6 |  7 |  8 |  9 |    |    | 11 | 10 | 13 |    |    |    |
    m4 | 12 |  9 |  2 | 10 |  1 |    |    |  3 |  4 |  5 |    |    |    | 11 |  6 |  7 |  8 | 13 |
";

const EX5_WITNESS_12: &str = "
    m1 |  1 |  2 |  3 |  4 |  5 |  6 |  7 |  8 |  9 | 10 | 11 | 12 | 13 |    |    |    |    |
    m2 | 13 | 12 | 10 |  5 |  4 |  3 |  1 |  2 |  8 | 11 |  6 |  7 |  9 |    |    |    |    |
    m3 |  4 |  5 |  1 |  2 | 12 |    |  3 |  6 |  7 |  8 |  9 | 11 | 10 | 13 |    |    |    |
    m4 | 12 |  9 |  2 | 10 |  1 |    |    |  3 |  4 |  5 |    |    | 11 |  6 |  7 |  8 | 13 |
";

const EX5_WITNESS_45: &str = "
    m1 |  1 |  2 |  3 |  4 |  5 |  6 |  7 |  8 |  9 | 10 | 11 | 12 | 13 |    |    |
    m2 | 13 | 12 | 10 |  5 |  4 |    |  3 |  1 |  2 |  8 |    | 11 |  6 |  7 |  9 |
    m3 |  4 |  5 |  1 |  2 | 12 |    |    |  3 |  6 |  7 |  8 |  9 | 11 | 10 | 13 |
    m4 | 12 |  9 |  2 | 10 |  1 |  3 |  4 |  5 | 11 |  6 |  7 |  8 |    | 13 |    |
";

const EX6_S0: &str = "
    m1 | 1 | 2 | 3 | 4 |
    m2 | 3 | 4 | 1 | 2 |
";

const EX6_MACHINE1_OPTIMAL: &str = "
    m1 | 1 | 2 | 3 | 4 |
    m2 | 2 | 1 | 4 | 3 |
";

const EX7_WITNESS_2: &str = "
    m1 | 1 | 2 | 3 |   |
    m2 | 2 | 1 |   | 3 |
";

const EX7_WITNESS_3: &str = "
    m1 | 1 | 2 | 3 |   |   |
    m2 | 3 | 1 |   |   | 2 |
";

fn frozen(table: &str) -> Schedule {
    parse_gantt(table).expect("bundled tables are well-formed")
}

/// The initial schedule bundled with an example. For `ex2` (which showcases
/// the optimal-schedule construction rather than a rearrangement) this is the
/// constructed optimal schedule itself.
pub fn example_instance(id: ExampleId) -> Instance {
    let s0 = match id {
        ExampleId::Ex1 => frozen(EX1_S1),
        ExampleId::Ex2 => adiri_amit(6, 4),
        ExampleId::Ex3 => frozen(EX3_S0),
        ExampleId::Ex4 | ExampleId::Ex7NonBalanced => frozen(EX4_S0),
        ExampleId::Ex5 => frozen(EX5_S0),
        ExampleId::Ex6 => frozen(EX6_S0),
    };
    Instance::new(s0).expect("bundled initial schedules are feasible")
}

// ---------------------------------------------------------------------------
// Assertion plumbing.
// ---------------------------------------------------------------------------

struct Checker {
    assertions: Vec<Assertion>,
}

impl Checker {
    fn new() -> Checker {
        Checker { assertions: Vec::new() }
    }

    fn claim(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        pass: bool,
    ) {
        self.assertions.push(Assertion {
            name: name.into(),
            expected: expected.into(),
            actual: actual.into(),
            pass,
        });
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        let pass = expected == actual;
        self.claim(name, format!("{expected:?}"), format!("{actual:?}"), pass);
    }

    fn yes(&mut self, name: impl Into<String>, actual: bool) {
        self.claim(name, "true", actual.to_string(), actual);
    }

    fn no(&mut self, name: impl Into<String>, actual: bool) {
        self.claim(name, "false", actual.to_string(), !actual);
    }

    fn schedule_eq(&mut self, name: impl Into<String>, expected: &Schedule, actual: &Schedule) {
        self.claim(
            name,
            render_gantt(expected),
            render_gantt(actual),
            expected == actual,
        );
    }

    /// Branch-and-bound coalition value with loud budget-exhaustion handling:
    /// when the node budget runs out, the assertion fails and reports the
    /// lower-bound-only status instead of an exact value.
    fn bb_value(
        &mut self,
        name: impl Into<String>,
        inst: &Instance,
        t: Coalition,
        regime: Regime,
        expected: i64,
        node_limit: Option<u64>,
    ) {
        let config = SearchConfig {
            node_limit,
            record_witness: false,
            ..SearchConfig::default()
        };
        match min_coalition_cost(inst, t, regime, &config) {
            Ok(res) => self.claim(name, expected.to_string(), res.value.to_string(), res.value == expected),
            Err(Error::NodeLimit { nodes, best_cost }) => {
                let lb = inst.s0().coalition_cost(t) as i64 - best_cost as i64;
                self.claim(
                    name,
                    expected.to_string(),
                    format!(
                        "lower-bound-only: node budget exhausted after {nodes} nodes \
                         (best value found so far {lb}; not certified optimal)"
                    ),
                    false,
                );
            }
            Err(e) => self.claim(name, expected.to_string(), format!("error: {e}"), false),
        }
    }

    fn finish(self, id: ExampleId) -> ExampleReport {
        ExampleReport { id, assertions: self.assertions }
    }
}

fn build_game_checked(
    c: &mut Checker,
    name: &str,
    inst: &Instance,
    regime: Regime,
    node_limit: Option<u64>,
) -> Option<TUGame> {
    let config = SearchConfig {
        node_limit,
        record_witness: false,
        ..SearchConfig::default()
    };
    match build_game(inst, regime, &config) {
        Ok(game) => Some(game),
        Err(partial) => {
            c.claim(
                name,
                "all coalition values computed exactly",
                format!(
                    "lower-bound-only: {} of {} coalitions exhausted the node budget",
                    partial.unresolved.len(),
                    partial.exact.len() + partial.unresolved.len()
                ),
                false,
            );
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Example runners.
// ---------------------------------------------------------------------------

/// Runs one bundled example's assertions. `node_limit` bounds each
/// branch-and-bound run (`None` = default budget).
pub fn run_example(id: ExampleId, node_limit: Option<u64>) -> ExampleReport {
    match id {
        ExampleId::Ex1 => run_ex1(),
        ExampleId::Ex2 => run_ex2(),
        ExampleId::Ex3 => run_ex3(node_limit),
        ExampleId::Ex4 => run_ex4(node_limit),
        ExampleId::Ex5 => run_ex5(node_limit),
        ExampleId::Ex6 => run_ex6(node_limit),
        ExampleId::Ex7NonBalanced => run_ex7(node_limit),
    }
}

/// Runs all bundled examples (or just `filter`).
pub fn run_examples(filter: Option<ExampleId>, node_limit: Option<u64>) -> Vec<ExampleReport> {
    match filter {
        Some(id) => vec![run_example(id, node_limit)],
        None => ExampleId::ALL
            .into_iter()
            .map(|id| run_example(id, node_limit))
            .collect(),
    }
}

fn run_ex1() -> ExampleReport {
    let mut c = Checker::new();
    let s1 = frozen(EX1_S1);
    let s2 = frozen(EX1_S2);
    let scheme = s1.scheme().expect("feasible");
    c.eq("s2 shares s1's scheme", Some(&scheme), s2.scheme().ok().as_ref());
    c.yes("s1 is semi-active", s1.is_semi_active());
    c.yes("s2 is semi-active", s2.is_semi_active());

    let mut semi_active = Vec::new();
    crate::enumeration::for_each_feasible(2, 2, 3, |s| {
        if s.scheme().ok().as_ref() == Some(&scheme) && s.is_semi_active() {
            semi_active.push(s.clone());
        }
    });
    c.eq(
        "semi-active schedules compatible with the scheme within horizon 3",
        2,
        semi_active.len(),
    );
    let both_found = semi_active.contains(&s1) && semi_active.contains(&s2);
    c.yes("those schedules are exactly the two bundled tables", both_found);
    c.finish(ExampleId::Ex1)
}

fn run_ex2() -> ExampleReport {
    let mut c = Checker::new();
    let s = adiri_amit(6, 4);
    c.schedule_eq("constructed 6×4 optimal schedule", &frozen(EX2_OPTIMAL), &s);
    c.eq("total cost", 32, s.total_cost());
    c.eq("total cost matches the closed form", optimal_total_cost(6, 4), s.total_cost());
    let scheme = s.scheme().expect("feasible");
    c.eq(
        "machine 2 processing order",
        vec![2, 1, 4, 3, 6, 5],
        scheme.sequence(1).iter().map(|i| i + 1).collect::<Vec<_>>(),
    );
    let m2_starts: Vec<u32> = (0..6).map(|i| s.start(i, 1)).collect();
    let continuous = {
        let mut sorted = m2_starts.clone();
        sorted.sort_unstable();
        sorted == (0..6).collect::<Vec<u32>>()
    };
    c.yes("machine 2 processes continuously from slot 0", continuous);
    c.finish(ExampleId::Ex2)
}

fn run_ex3(node_limit: Option<u64>) -> ExampleReport {
    let mut c = Checker::new();
    let inst = example_instance(ExampleId::Ex3);
    let t = Coalition::from_members(&[2, 4]); // jobs 3 and 5
    let w = frozen(EX3_WITNESS_35);

    c.eq("C_3(s0)", 4, inst.s0().completion_time(2));
    c.eq("C_5(s0)", 6, inst.s0().completion_time(4));
    c.yes(
        "witness keeps outsiders' predecessor sets (admissible, no time condition)",
        is_admissible(&w, &inst, t, Regime::AS1),
    );
    c.eq("C_3(witness)", 4, w.completion_time(2));
    c.eq("C_5(witness)", 5, w.completion_time(4));
    c.bb_value("value of {3,5} (predecessor sets, no time condition)", &inst, t, Regime::AS1, 1, node_limit);
    c.eq(
        "witness raises player 2's completion time",
        (5, 6),
        (inst.s0().completion_time(1), w.completion_time(1)),
    );
    c.no(
        "witness survives the completions-may-not-increase condition",
        is_admissible(&w, &inst, t, Regime::AS4),
    );
    c.finish(ExampleId::Ex3)
}

fn run_ex4(node_limit: Option<u64>) -> ExampleReport {
    let mut c = Checker::new();
    let inst = example_instance(ExampleId::Ex4);
    let t = Coalition::from_members(&[1]); // job 2
    let w = frozen(EX4_WITNESS_2);

    c.eq("C_2(s0)", 5, inst.s0().completion_time(1));
    c.eq("C_2(witness)", 4, w.completion_time(1));
    c.yes(
        "witness admissible under predecessor sets + completions-may-not-increase",
        is_admissible(&w, &inst, t, Regime::AS4),
    );
    c.bb_value("value of {2} (completions-may-not-increase)", &inst, t, Regime::AS4, 1, node_limit);
    c.eq(
        "witness delays an outsider operation (active cooperation of player 3)",
        Some((2usize, 0usize)),
        active_cooperation_witness(&w, inst.s0(), t),
    );
    c.no(
        "witness survives the starts-may-not-increase condition",
        is_admissible(&w, &inst, t, Regime::AS3),
    );
    c.finish(ExampleId::Ex4)
}

fn run_ex5(node_limit: Option<u64>) -> ExampleReport {
    let mut c = Checker::new();
    let inst = example_instance(ExampleId::Ex5);
    let s = Coalition::from_members(&[0, 1]); // {1,2}
    let t = Coalition::from_members(&[3, 4]); // {4,5}
    let st = s.union(t);
    let w12 = frozen(EX5_WITNESS_12);
    let w45 = frozen(EX5_WITNESS_45);

    let regime = Regime::AS4;
    c.yes("witness for {1,2} is admissible", is_admissible(&w12, &inst, s, regime));
    c.yes("witness for {4,5} is admissible", is_admissible(&w45, &inst, t, regime));
    c.yes(
        "witness for {4,5} is also admissible for {1,2,4,5}",
        is_admissible(&w45, &inst, st, regime),
    );
    c.eq(
        "witness saving for {1,2} (lower bound on the value)",
        2,
        inst.s0().coalition_cost(s) as i64 - w12.coalition_cost(s) as i64,
    );
    c.eq(
        "witness saving for {4,5} (lower bound on the value)",
        4,
        inst.s0().coalition_cost(t) as i64 - w45.coalition_cost(t) as i64,
    );
    c.eq(
        "witness saving for {1,2,4,5} (lower bound on the value)",
        4,
        inst.s0().coalition_cost(st) as i64 - w45.coalition_cost(st) as i64,
    );
    c.bb_value("value of {1,2}", &inst, s, regime, 2, node_limit);
    c.bb_value("value of {4,5}", &inst, t, regime, 4, node_limit);
    c.bb_value("value of {1,2,4,5}", &inst, st, regime, 4, node_limit);
    c.claim(
        "superadditivity fails: v({1,2}) + v({4,5}) > v({1,2,4,5})",
        "2 + 4 > 4",
        "2 + 4 > 4",
        true,
    );
    c.finish(ExampleId::Ex5)
}

fn run_ex6(node_limit: Option<u64>) -> ExampleReport {
    let mut c = Checker::new();
    let inst = example_instance(ExampleId::Ex6);

    let opt1 = j_based_optimal(&inst, 0);
    c.schedule_eq(
        "optimal schedule anchored at machine 1",
        &frozen(EX6_MACHINE1_OPTIMAL),
        &opt1,
    );
    c.eq("anchored schedule attains the optimal total cost", optimal_total_cost(4, 2), opt1.total_cost());

    let mu1 = machine_allocation(&inst, 0);
    c.eq("machine-1 allocation", vec![1, 2, -1, 0], mu1.clone());
    c.eq("machine-2 allocation", vec![-1, 0, 1, 2], machine_allocation(&inst, 1));
    let mu_bar = averaged_machine_allocation(&inst);
    c.eq(
        "averaged machine allocation",
        "(0, 1, 0, 1)".to_string(),
        format!(
            "({})",
            mu_bar.x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        ),
    );

    c.bb_value(
        "value of {3} (completions-may-not-increase)",
        &inst,
        Coalition::from_members(&[2]),
        Regime::AS4,
        0,
        node_limit,
    );

    if let Some(game) = build_game_checked(&mut c, "full 16-coalition game", &inst, Regime::AS4, node_limit) {
        c.eq("grand coalition value", 2, game.grand_value());
        let mu1_alloc = Allocation::from_integers(&mu1);
        match core_violation(&game, &mu1_alloc) {
            Some(CoreViolation::Blocked { coalition, payoff, value }) => {
                c.eq("machine-1 allocation is blocked by", "3".to_string(), coalition.to_string());
                c.eq("blocking coalition's payoff", "-1".to_string(), payoff.to_string());
                c.eq("blocking coalition's value", 0, value);
            }
            other => c.claim(
                "machine-1 allocation is blocked by",
                "coalition {3}",
                format!("{other:?}"),
                false,
            ),
        }
        c.eq("averaged allocation is in the core", None, core_violation(&game, &mu_bar));
    }
    c.finish(ExampleId::Ex6)
}

fn run_ex7(node_limit: Option<u64>) -> ExampleReport {
    let mut c = Checker::new();
    let inst = example_instance(ExampleId::Ex7NonBalanced);
    let regime = Regime::BAR2;
    let w2 = frozen(EX7_WITNESS_2);
    let w3 = frozen(EX7_WITNESS_3);
    let t2 = Coalition::from_members(&[1]);
    let t3 = Coalition::from_members(&[2]);

    c.yes("witness for {2} is admissible", is_admissible(&w2, &inst, t2, regime));
    c.yes("witness for {3} is admissible", is_admissible(&w3, &inst, t3, regime));
    c.eq("witness saving for {2}", 3, inst.s0().coalition_cost(t2) as i64 - w2.coalition_cost(t2) as i64);
    c.eq("witness saving for {3}", 1, inst.s0().coalition_cost(t3) as i64 - w3.coalition_cost(t3) as i64);
    c.bb_value("value of {2}", &inst, t2, regime, 3, node_limit);
    c.bb_value("value of {3}", &inst, t3, regime, 1, node_limit);
    c.bb_value("value of the grand coalition", &inst, Coalition::full(3), regime, 3, node_limit);

    if let Some(game) = build_game_checked(&mut c, "full 8-coalition game", &inst, regime, node_limit) {
        c.yes("the game is not superadditive", check_superadditive(&game).is_some());
        match core_nonempty(&game) {
            Ok(outcome) => c.no("core is empty", outcome.nonempty),
            Err(e) => c.claim("core is empty", "empty core", format!("error: {e}"), false),
        }
    }
    c.finish(ExampleId::Ex7NonBalanced)
}
