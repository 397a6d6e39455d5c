//! Acceptance gate: ten end-to-end criteria, each printing one PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use openshop::admissibility::{active_cooperation_witness, is_admissible, Regime};
use openshop::enumeration::oracle_min_costs;
use openshop::fixtures::{example_instance, run_example, ExampleId};
use openshop::game::{
    averaged_machine_allocation, build_game, core_nonempty, core_violation, machine_allocation,
    Allocation, CoreViolation,
};
use openshop::gantt::parse_gantt;
use openshop::gen::{gen_instance, GenStyle};
use openshop::optimal::adiri_amit;
use openshop::search::{min_coalition_cost, SearchConfig};
use openshop::shop::{Coalition, Instance, Schedule};

type Check = Result<(), String>;

fn report(criterion: usize, desc: &str, outcome: Check) {
    match outcome {
        Ok(()) => println!("[criterion {criterion}] PASS — {desc}"),
        Err(msg) => {
            println!("[criterion {criterion}] FAIL — {desc}: {msg}");
            panic!("criterion {criterion} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, bound: Duration) -> Check {
    ensure(
        elapsed <= bound,
        format!("took {elapsed:?}, bound is {bound:?}"),
    )
}

fn exact_value(inst: &Instance, t: Coalition, regime: Regime) -> Result<i64, String> {
    min_coalition_cost(inst, t, regime, &SearchConfig::default())
        .map(|r| r.value)
        .map_err(|e| format!("search failed for {{{t}}} under {}: {e}", regime.name()))
}

fn witness_for(inst: &Instance, t: Coalition, regime: Regime) -> Result<Schedule, String> {
    let res = min_coalition_cost(inst, t, regime, &SearchConfig::default())
        .map_err(|e| format!("search failed for {{{t}}} under {}: {e}", regime.name()))?;
    res.witness
        .ok_or_else(|| "witness recording was requested but missing".into())
}

fn report_failures(id: ExampleId) -> Check {
    let r = run_example(id, None);
    let failures: Vec<String> = r
        .assertions
        .iter()
        .filter(|a| !a.pass)
        .map(|a| format!("`{}` expected {} got {}", a.name, a.expected, a.actual))
        .collect();
    ensure(failures.is_empty(), failures.join("; "))
}

/// The shared pool of 50 deterministic random instances (n ≤ 4, m ≤ 3) used
/// by criteria 7–9.
fn random_instances() -> Vec<Instance> {
    let sizes = [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (2, 3)];
    let mut out = Vec::new();
    let mut k = 0usize;
    for seed in 0..25u64 {
        for style in GenStyle::ALL {
            let (n, m) = sizes[k % sizes.len()];
            k += 1;
            out.push(gen_instance(n, m, seed, style).expect("generator sizes are valid"));
        }
    }
    assert!(out.len() >= 50);
    out
}

#[test]
fn criterion_01_optimal_schedule_construction() {
    let desc = "6x4 block-built schedule matches the frozen table and scheme, total cost 32";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        let s = adiri_amit(6, 4);
        let elapsed = t0.elapsed();
        let frozen = parse_gantt(
            "
            m1 | 1 | 4 | 3 | 2 | 5 |   |   | 6 |
            m2 | 2 | 1 | 4 | 3 | 6 | 5 |   |   |
            m3 | 3 | 2 | 1 | 4 |   | 6 | 5 |   |
            m4 | 4 | 3 | 2 | 1 |   |   | 6 | 5 |
            ",
        )
        .map_err(|e| e.to_string())?;
        ensure(s == frozen, "slot table differs from the frozen expectation")?;
        let scheme = s.scheme().map_err(|e| e.to_string())?;
        let expected_orders = [
            vec![0, 3, 2, 1, 4, 5],
            vec![1, 0, 3, 2, 5, 4],
            vec![2, 1, 0, 3, 5, 4],
            vec![3, 2, 1, 0, 5, 4],
        ];
        for (j, want) in expected_orders.iter().enumerate() {
            ensure(
                &scheme.sequence(j) == want,
                format!("machine {} order differs", j + 1),
            )?;
        }
        ensure(s.total_cost() == 32, format!("total cost {} != 32", s.total_cost()))?;
        ensure(
            32 == 4 * (1 + 1 + 1 + 1 + 2 + 2),
            "closed-form cross-check",
        )?;
        within(elapsed, Duration::from_millis(1))
    })();
    report(1, desc, outcome);
}

#[test]
fn criterion_02_hurting_outsiders() {
    let desc = "5x2: v({3,5}) = 1 keeping predecessor sets; the witness raises C_2 from 5 to 6";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        let inst = example_instance(ExampleId::Ex3);
        let t = Coalition::from_members(&[2, 4]);
        let res = min_coalition_cost(&inst, t, Regime::AS1, &SearchConfig::default())
            .map_err(|e| e.to_string())?;
        ensure(res.value == 1, format!("value {} != 1", res.value))?;
        ensure(res.min_cost == 9, format!("min cost {} != 9", res.min_cost))?;
        let w = parse_gantt(
            "
            m1 | 1 | 2 | 3 | 4 | 5 |   |
            m2 | 5 | 1 |   | 3 | 4 | 2 |
            ",
        )
        .map_err(|e| e.to_string())?;
        ensure(
            is_admissible(&w, &inst, t, Regime::AS1),
            "frozen witness must satisfy the predecessor-set condition",
        )?;
        ensure(
            w.coalition_cost(t) == 9,
            "frozen witness must attain the minimum",
        )?;
        ensure(
            inst.s0().completion_time(1) == 5 && w.completion_time(1) == 6,
            "player 2's completion must rise from 5 to 6",
        )?;
        ensure(
            !is_admissible(&w, &inst, t, Regime::AS4),
            "the completions-may-not-increase checker must flag the witness",
        )?;
        report_failures(ExampleId::Ex3)?;
        within(t0.elapsed(), Duration::from_secs(1))
    })();
    report(2, desc, outcome);
}

#[test]
fn criterion_03_active_cooperation() {
    let desc = "3x2: v4({2}) = 1; the witness delays operation (3,1), failing the starts condition";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        let inst = example_instance(ExampleId::Ex4);
        let t = Coalition::from_members(&[1]);
        let v4 = exact_value(&inst, t, Regime::AS4)?;
        ensure(v4 == 1, format!("v4({{2}}) = {v4} != 1"))?;
        let w = parse_gantt(
            "
            m1 | 1 | 2 |   | 3 |
            m2 |   | 1 | 3 | 2 |
            ",
        )
        .map_err(|e| e.to_string())?;
        ensure(
            is_admissible(&w, &inst, t, Regime::AS4),
            "frozen witness must be admissible when completions may not increase",
        )?;
        ensure(
            active_cooperation_witness(&w, inst.s0(), t) == Some((2, 0)),
            "operation (3,1) must be the delayed outsider operation",
        )?;
        ensure(
            !is_admissible(&w, &inst, t, Regime::AS3),
            "the witness must fail once outsider starts may not increase",
        )?;
        report_failures(ExampleId::Ex4)?;
        within(t0.elapsed(), Duration::from_secs(1))
    })();
    report(3, desc, outcome);
}

#[test]
fn criterion_04_machine_allocation_vs_core() {
    let desc = "4x2: machine-1 allocation pays player 3 below its value; the average is in the core";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        let inst = example_instance(ExampleId::Ex6);
        let mu1 = machine_allocation(&inst, 0);
        ensure(mu1[2] == -1, format!("mu1_3 = {} != -1", mu1[2]))?;
        let v3 = exact_value(&inst, Coalition::from_members(&[2]), Regime::AS4)?;
        ensure(v3 == 0, format!("v4({{3}}) = {v3} != 0"))?;
        let game = build_game(&inst, Regime::AS4, &SearchConfig::default())
            .map_err(|_| "node budget exhausted on a 4-player game".to_string())?;
        ensure(
            game.values().len() == 16,
            "the 4-player game must cover all 16 coalitions",
        )?;
        match core_violation(&game, &Allocation::from_integers(&mu1)) {
            Some(CoreViolation::Blocked { coalition, .. }) => ensure(
                coalition == Coalition::from_members(&[2]),
                format!("blocking coalition {{{coalition}}} != {{3}}"),
            )?,
            other => return Err(format!("expected a blocking coalition, got {other:?}")),
        }
        ensure(
            core_violation(&game, &averaged_machine_allocation(&inst)).is_none(),
            "the averaged machine allocation must be a core element",
        )?;
        report_failures(ExampleId::Ex6)?;
        within(t0.elapsed(), Duration::from_secs(60))
    })();
    report(4, desc, outcome);
}

#[test]
fn criterion_05_non_balanced_relaxation() {
    let desc = "3x2 with free repositioning: values 3, 1, 3 force an empty core";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        let inst = example_instance(ExampleId::Ex7NonBalanced);
        let v2 = exact_value(&inst, Coalition::from_members(&[1]), Regime::BAR2)?;
        let v3 = exact_value(&inst, Coalition::from_members(&[2]), Regime::BAR2)?;
        let vn = exact_value(&inst, Coalition::full(3), Regime::BAR2)?;
        ensure(v2 == 3, format!("value of {{2}} = {v2} != 3"))?;
        ensure(v3 == 1, format!("value of {{3}} = {v3} != 1"))?;
        ensure(vn == 3, format!("value of N = {vn} != 3"))?;
        let game = build_game(&inst, Regime::BAR2, &SearchConfig::default())
            .map_err(|_| "node budget exhausted on a 3-player game".to_string())?;
        let outcome = core_nonempty(&game).map_err(|e| e.to_string())?;
        ensure(!outcome.nonempty, "the core must be empty")?;
        report_failures(ExampleId::Ex7NonBalanced)?;
        within(t0.elapsed(), Duration::from_secs(10))
    })();
    report(5, desc, outcome);
}

#[test]
fn criterion_06_superadditivity_failure() {
    let desc = "13x4: savings 2, 4, 4 for {1,2}, {4,5}, {1,2,4,5} break superadditivity";
    let outcome = (|| -> Check {
        let inst = example_instance(ExampleId::Ex5);
        let s = Coalition::from_members(&[0, 1]);
        let t = Coalition::from_members(&[3, 4]);
        let st = s.union(t);
        // The bundled report first certifies the frozen witness schedules as
        // admissible lower bounds, then runs the branch and bound for the
        // matching upper bounds.
        report_failures(ExampleId::Ex5)?;
        let vs = exact_value(&inst, s, Regime::AS4)?;
        let vt = exact_value(&inst, t, Regime::AS4)?;
        let vst = exact_value(&inst, st, Regime::AS4)?;
        ensure(
            (vs, vt, vst) == (2, 4, 4),
            format!("values ({vs}, {vt}, {vst}) != (2, 4, 4)"),
        )?;
        ensure(vs + vt > vst, "superadditivity must fail for this pair")?;
        // Exhausting the budget must be reported loudly, not silently.
        let starved = run_example(ExampleId::Ex5, Some(10));
        ensure(!starved.passed(), "a starved run must not report success")?;
        ensure(
            starved
                .assertions
                .iter()
                .any(|a| !a.pass && a.actual.contains("lower-bound-only")),
            "a starved run must state lower-bound-only status",
        )
    })();
    report(6, desc, outcome);
}

#[test]
fn criterion_07_average_allocation_in_core() {
    let desc = "50 random instances: the averaged allocation is in the core under both position regimes";
    let outcome = (|| -> Check {
        let t0 = Instant::now();
        for (k, inst) in random_instances().iter().enumerate() {
            let mu_bar = averaged_machine_allocation(inst);
            for regime in [Regime::AS4, Regime::AS4P] {
                let game = build_game(inst, regime, &SearchConfig::default())
                    .map_err(|_| format!("instance {k}: node budget exhausted"))?;
                if let Some(v) = core_violation(&game, &mu_bar) {
                    return Err(format!(
                        "instance {k} ({}x{}) under {}: {v}",
                        inst.n(),
                        inst.m(),
                        regime.name()
                    ));
                }
            }
        }
        within(t0.elapsed(), Duration::from_secs(600))
    })();
    report(7, desc, outcome);
}

#[test]
fn criterion_08_regime_monotonicity() {
    let desc = "50 random instances: values grow with weaker conditions, and all regimes agree at T=N";
    let outcome = (|| -> Check {
        for (k, inst) in random_instances().iter().enumerate() {
            let game_for = |regime: Regime| {
                build_game(inst, regime, &SearchConfig::default())
                    .map_err(|_| format!("instance {k}: node budget exhausted"))
            };
            // Within each scheme family, later (weaker) time conditions
            // dominate: start-equal <= start-leq <= completion-leq.
            let families = [
                [Regime::AS2, Regime::AS3, Regime::AS4],
                [Regime::AS2P, Regime::AS3P, Regime::AS4P],
                [Regime::BAR2, Regime::BAR3, Regime::BAR4],
            ];
            for family in families {
                let games = [game_for(family[0])?, game_for(family[1])?, game_for(family[2])?];
                for t in games[0].coalitions() {
                    let (a, b, c) = (games[0].value(t), games[1].value(t), games[2].value(t));
                    if !(a <= b && b <= c) {
                        return Err(format!(
                            "instance {k}: family {} has values ({a}, {b}, {c}) at {{{t}}}",
                            family[2].name()
                        ));
                    }
                }
            }
            // Across scheme families with the time condition fixed, weaker
            // position conditions dominate: predecessor-set <= exact-position
            // <= unrestricted.
            let columns = [
                [Regime::AS2, Regime::AS2P, Regime::BAR2],
                [Regime::AS3, Regime::AS3P, Regime::BAR3],
                [Regime::AS4, Regime::AS4P, Regime::BAR4],
            ];
            for column in columns {
                let games = [game_for(column[0])?, game_for(column[1])?, game_for(column[2])?];
                for t in games[0].coalitions() {
                    let (a, b, c) = (games[0].value(t), games[1].value(t), games[2].value(t));
                    if !(a <= b && b <= c) {
                        return Err(format!(
                            "instance {k}: column {} has values ({a}, {b}, {c}) at {{{t}}}",
                            column[0].name()
                        ));
                    }
                }
            }
            // At T = N every named regime admits every feasible schedule, so
            // the grand value is regime-independent.
            let n = Coalition::full(inst.n());
            let grand: Vec<i64> = Regime::ALL_NAMED
                .iter()
                .map(|&r| exact_value(inst, n, r))
                .collect::<Result<_, _>>()?;
            if grand.iter().any(|&v| v != grand[0]) {
                return Err(format!("instance {k}: grand values differ: {grand:?}"));
            }
        }
        Ok(())
    })();
    report(8, desc, outcome);
}

#[test]
fn criterion_09_block_rounding_inequality() {
    let desc = "every optimal witness satisfies the averaged block-rounding inequality";
    let outcome = (|| -> Check {
        for (k, inst) in random_instances().iter().enumerate() {
            let m = inst.m() as u32;
            let full = Coalition::full(inst.n()).0;
            for regime in [Regime::AS4, Regime::AS4P] {
                // Proper nonempty coalitions only: the inequality concerns
                // rearrangements relative to outsiders.
                for mask in 1..full {
                    let t = Coalition(mask);
                    let w = witness_for(inst, t, regime)?;
                    for i in t.members() {
                        let c0 = inst.s0().completion_time(i);
                        let ci = w.completion_time(i);
                        // sum over machines of (C_i(s0) - ceil(C_i^j/m) * m),
                        // scaled by m on the right-hand side to stay integral.
                        let lhs: i64 = (0..inst.m())
                            .map(|j| {
                                let cij = w.start(i, j) + 1;
                                c0 as i64 - (cij.div_ceil(m) * m) as i64
                            })
                            .sum();
                        let rhs = m as i64 * (c0 as i64 - ci as i64);
                        if lhs < rhs {
                            return Err(format!(
                                "instance {k}, {{{t}}} under {}, member {}: {lhs} < {rhs}",
                                regime.name(),
                                i + 1
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    report(9, desc, outcome);
}

#[test]
fn criterion_10_search_equals_exhaustive_enumeration() {
    let desc = "pruned search equals unpruned enumeration on every small instance, coalition, regime";
    let outcome = (|| -> Check {
        let h = 8u32;
        let mut corpus: Vec<Instance> = Vec::new();
        // Every feasible 2x2 initial schedule with starts below 4.
        openshop::enumeration::for_each_feasible(2, 2, 4, |s| {
            corpus.push(Instance::new(s.clone()).expect("enumerated schedules are feasible"));
        });
        ensure(!corpus.is_empty(), "2x2 corpus must be nonempty")?;
        // The bundled 3x2 instance plus seeded random 3x2 instances.
        corpus.push(example_instance(ExampleId::Ex4));
        for seed in 0..5u64 {
            for style in GenStyle::ALL {
                corpus.push(gen_instance(3, 2, seed, style).expect("valid sizes"));
            }
        }
        let mut checked = 0u64;
        for (k, inst) in corpus.iter().enumerate() {
            let full = Coalition::full(inst.n()).0;
            let mut targets = Vec::new();
            for mask in 1..=full {
                for regime in Regime::ALL {
                    targets.push((Coalition(mask), regime));
                }
            }
            let expected = oracle_min_costs(inst, &targets, h);
            for ((t, regime), want) in targets.into_iter().zip(expected) {
                let config = SearchConfig {
                    horizon: Some(h),
                    record_witness: false,
                    ..SearchConfig::default()
                };
                let got = min_coalition_cost(inst, t, regime, &config)
                    .map_err(|e| format!("instance {k}: {e}"))?
                    .min_cost;
                if got != want {
                    return Err(format!(
                        "instance {k} ({:?}), coalition {{{t}}}, regime {}: search {got} != oracle {want}",
                        inst.s0().rows(),
                        regime.name()
                    ));
                }
                checked += 1;
            }
        }
        ensure(checked > 1000, format!("only {checked} combinations checked"))
    })();
    report(10, desc, outcome);
}
