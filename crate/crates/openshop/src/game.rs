//! Cooperative games induced by coalition savings, machine-based allocation
//! rules, and exact core analysis.
//!
//! The characteristic value of a coalition is its cost under the initial
//! schedule minus its minimal admissible cost ([`crate::search`]); the grand
//! coalition's value is therefore the full saving the shop can realize.
//! Allocations divide that saving; the core holds the allocations no
//! coalition can improve on by itself. Core emptiness is decided exactly by
//! a rational linear program ([`crate::simplex`]).

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::admissibility::Regime;
use crate::error::Error;
use crate::optimal::j_based_optimal;
use crate::search::{min_coalition_cost, SearchConfig};
use crate::shop::{Coalition, Instance};
use crate::{Rat, Result};

/// Largest player count for which a full characteristic function (2^n
/// coalitions) is built.
pub const MAX_GAME_JOBS: usize = 16;

/// A transferable-utility game on `n` players with integer values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TUGame {
    n: usize,
    regime: Regime,
    /// `values[mask]` is the value of the coalition with that member bitmask;
    /// `values[0] == 0`.
    values: Vec<i64>,
}

impl TUGame {
    pub fn new(n: usize, regime: Regime, values: Vec<i64>) -> Result<TUGame> {
        if n == 0 || n > MAX_GAME_JOBS {
            return Err(Error::InvalidInput(format!(
                "a game needs 1..={MAX_GAME_JOBS} players, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "expected {} coalition values for {n} players, got {}",
                1u64 << n,
                values.len()
            )));
        }
        if values[0] != 0 {
            return Err(Error::InvalidInput(
                "the empty coalition must have value 0".into(),
            ));
        }
        Ok(TUGame { n, regime, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn value(&self, t: Coalition) -> i64 {
        self.values[t.0 as usize]
    }

    pub fn grand_value(&self) -> i64 {
        self.values[Coalition::full(self.n).0 as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// All coalitions in ascending bitmask order, the empty one included.
    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        (0..1u32 << self.n).map(Coalition)
    }
}

impl Serialize for TUGame {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            regime: Regime,
            values: BTreeMap<String, i64>,
        }
        let mut values = BTreeMap::new();
        for mask in 1..(1u32 << self.n) {
            values.insert(Coalition(mask).to_string(), self.values[mask as usize]);
        }
        Repr {
            n: self.n,
            regime: self.regime,
            values,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TUGame {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<TUGame, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            regime: Regime,
            values: BTreeMap<String, i64>,
        }
        let repr = Repr::deserialize(de)?;
        if repr.n == 0 || repr.n > MAX_GAME_JOBS {
            return Err(D::Error::custom(format!(
                "a game needs 1..={MAX_GAME_JOBS} players, got {}",
                repr.n
            )));
        }
        let full = (1u32 << repr.n) - 1;
        let mut values = vec![0i64; (full + 1) as usize];
        let mut seen = vec![false; (full + 1) as usize];
        for (key, value) in &repr.values {
            let t: Coalition = key
                .parse()
                .map_err(|e: Error| D::Error::custom(e.to_string()))?;
            if t.is_empty() || t.0 > full {
                return Err(D::Error::custom(format!(
                    "coalition key `{key}` is not a nonempty subset of 1..={}",
                    repr.n
                )));
            }
            if seen[t.0 as usize] {
                return Err(D::Error::custom(format!("duplicate coalition key `{key}`")));
            }
            seen[t.0 as usize] = true;
            values[t.0 as usize] = *value;
        }
        if let Some(missing) = (1..=full).find(|&mask| !seen[mask as usize]) {
            return Err(D::Error::custom(format!(
                "missing value for coalition {}",
                Coalition(missing)
            )));
        }
        TUGame::new(repr.n, repr.regime, values).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A characteristic function whose computation ran out of node budget on
/// some coalitions. Exact values are kept; each unresolved coalition carries
/// the best admissible saving found before the cutoff, which is a valid
/// lower bound on its true value.
#[derive(Clone, Debug)]
pub struct PartialGame {
    pub n: usize,
    pub regime: Regime,
    pub exact: Vec<(Coalition, i64)>,
    pub unresolved: Vec<(Coalition, i64)>,
}

/// Compute the full characteristic function of the coalition-savings game.
///
/// Coalitions are solved independently (in parallel); witnesses are not
/// recorded. If any coalition exhausts the node budget the result is a
/// [`PartialGame`] carrying exact values where available and lower bounds
/// elsewhere.
///
/// Panics if the instance has more than [`MAX_GAME_JOBS`] jobs or if the
/// configured horizon is below the initial schedule's makespan; callers
/// validate user input before building games.
pub fn build_game(
    inst: &Instance,
    regime: Regime,
    config: &SearchConfig,
) -> std::result::Result<TUGame, PartialGame> {
    let n = inst.n();
    assert!(
        n <= MAX_GAME_JOBS,
        "building a game needs at most {MAX_GAME_JOBS} jobs, got {n}"
    );
    if let Some(h) = config.horizon {
        assert!(
            h >= inst.s0().makespan(),
            "horizon {h} is below the initial schedule's makespan"
        );
    }
    let config = SearchConfig {
        record_witness: false,
        ..config.clone()
    };
    // The search recurses once per machine decision, so give the workers
    // roomy stacks instead of rayon's small default.
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(64 * 1024 * 1024)
        .build()
        .expect("thread pool construction does not fail");
    let full = Coalition::full(n).0;
    let outcomes: Vec<(Coalition, std::result::Result<i64, i64>)> = pool.install(|| {
        (1..=full)
            .into_par_iter()
            .map(|mask| {
                let t = Coalition(mask);
                let entry = match min_coalition_cost(inst, t, regime, &config) {
                    Ok(res) => Ok(res.value),
                    Err(Error::NodeLimit { best_cost, .. }) => {
                        Err(inst.s0().coalition_cost(t) as i64 - best_cost as i64)
                    }
                    Err(e) => unreachable!("validated inputs cannot fail: {e}"),
                };
                (t, entry)
            })
            .collect()
    });
    if outcomes.iter().all(|(_, e)| e.is_ok()) {
        let mut values = vec![0i64; (full + 1) as usize];
        for (t, entry) in outcomes {
            values[t.0 as usize] = entry.unwrap();
        }
        Ok(TUGame { n, regime, values })
    } else {
        let mut partial = PartialGame {
            n,
            regime,
            exact: Vec::new(),
            unresolved: Vec::new(),
        };
        for (t, entry) in outcomes {
            match entry {
                Ok(v) => partial.exact.push((t, v)),
                Err(lb) => partial.unresolved.push((t, lb)),
            }
        }
        Err(partial)
    }
}

/// The machine-`j` allocation: each job is paid the completion time it gains
/// when the shop switches from the initial schedule to the optimal schedule
/// anchored at machine `j`. Entries can be negative; the total is always the
/// grand coalition's saving.
pub fn machine_allocation(inst: &Instance, j: usize) -> Vec<i64> {
    let s0 = inst.s0();
    let opt = j_based_optimal(inst, j);
    (0..inst.n())
        .map(|i| s0.completion_time(i) as i64 - opt.completion_time(i) as i64)
        .collect()
}

/// The average of the machine allocations over all `m` machines, as exact
/// rationals. Inherits the total-saving efficiency of each summand.
pub fn averaged_machine_allocation(inst: &Instance) -> Allocation {
    let m = inst.m();
    let mut sums = vec![0i64; inst.n()];
    for j in 0..m {
        for (acc, v) in sums.iter_mut().zip(machine_allocation(inst, j)) {
            *acc += v;
        }
    }
    Allocation {
        x: sums
            .into_iter()
            .map(|s| Rat::new(s.into(), (m as i64).into()))
            .collect(),
    }
}

/// A payoff vector over the players, with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Allocation {
    pub x: Vec<Rat>,
}

impl Allocation {
    pub fn from_integers(values: &[i64]) -> Allocation {
        Allocation {
            x: values.iter().map(|&v| Rat::from_integer(v.into())).collect(),
        }
    }

    pub fn total(&self) -> Rat {
        self.x.iter().sum()
    }

    pub fn payoff(&self, t: Coalition) -> Rat {
        t.members().map(|i| self.x[i].clone()).sum()
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.x.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Allocation {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            x: Vec<String>,
        }
        Repr {
            x: self.x.iter().map(|v| v.to_string()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Allocation {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Allocation, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            x: Vec<String>,
        }
        let repr = Repr::deserialize(de)?;
        let x = repr
            .x
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<Rat>()
                    .map_err(|e| D::Error::custom(format!("bad rational `{s}`: {e}")))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Allocation { x })
    }
}

/// Why an allocation fails to be in the core.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoreViolation {
    /// The payoffs do not sum to the grand coalition's value.
    Inefficient { total: Rat, grand_value: i64 },
    /// Some coalition is paid less than it can secure on its own.
    Blocked {
        coalition: Coalition,
        payoff: Rat,
        value: i64,
    },
}

impl fmt::Display for CoreViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreViolation::Inefficient { total, grand_value } => write!(
                f,
                "payoffs total {total} but the grand coalition's value is {grand_value}"
            ),
            CoreViolation::Blocked {
                coalition,
                payoff,
                value,
            } => write!(
                f,
                "coalition {coalition} receives {payoff} but can secure {value}"
            ),
        }
    }
}

/// Exact core membership: `None` means `x` is in the core; otherwise the
/// first violation in coalition-mask order is returned.
pub fn core_violation(game: &TUGame, x: &Allocation) -> Option<CoreViolation> {
    assert_eq!(x.x.len(), game.n, "allocation width must match the game");
    let total = x.total();
    if total != Rat::from_integer(game.grand_value().into()) {
        return Some(CoreViolation::Inefficient {
            total,
            grand_value: game.grand_value(),
        });
    }
    for mask in 1..(1u32 << game.n) - 1 {
        let t = Coalition(mask);
        let payoff = x.payoff(t);
        let value = game.value(t);
        if payoff < Rat::from_integer(value.into()) {
            return Some(CoreViolation::Blocked {
                coalition: t,
                payoff,
                value,
            });
        }
    }
    None
}

/// Largest player count for which the core-emptiness linear program (one
/// constraint per coalition) is built.
pub const MAX_CORE_LP_JOBS: usize = 12;

/// Outcome of the exact core-emptiness decision.
#[derive(Clone, Debug)]
pub struct CoreOutcome {
    pub nonempty: bool,
    /// A core member when the core is nonempty.
    pub certificate: Option<Allocation>,
}

/// Decide core emptiness exactly.
///
/// With payoffs shifted by the singleton values, the core is nonempty iff
/// the cheapest nonnegative vector covering every intermediate coalition's
/// excess demand still fits under the grand coalition's excess. The shifted
/// program is solved by the exact simplex; its optimal point, padded back up
/// to efficiency, is returned as a certificate.
pub fn core_nonempty(game: &TUGame) -> Result<CoreOutcome> {
    use crate::simplex::{minimize, Constraint, LpOutcome, Relation};
    let n = game.n;
    if n > MAX_CORE_LP_JOBS {
        return Err(Error::InvalidInput(format!(
            "core emptiness solves a linear program with 2^n constraints; \
             n = {n} exceeds the supported maximum of {MAX_CORE_LP_JOBS}"
        )));
    }
    let singles: Vec<i64> = (0..n)
        .map(|i| game.value(Coalition::from_members(&[i])))
        .collect();
    let singles_sum: i64 = singles.iter().sum();
    let budget = game.grand_value() - singles_sum;
    if n == 1 {
        // The single player takes everything; the core is that one point.
        return Ok(CoreOutcome {
            nonempty: true,
            certificate: Some(Allocation::from_integers(&[game.grand_value()])),
        });
    }
    if budget < 0 {
        // Even the singletons together demand more than the grand value.
        return Ok(CoreOutcome {
            nonempty: false,
            certificate: None,
        });
    }
    let mut constraints = Vec::new();
    for mask in 1..(1u32 << n) - 1 {
        let t = Coalition(mask);
        if t.len() < 2 {
            continue;
        }
        let excess = game.value(t) - t.members().map(|i| singles[i]).sum::<i64>();
        if excess <= 0 {
            continue; // satisfied by nonnegativity of the shifted payoffs
        }
        let mut coeffs = vec![Rat::zero(); n];
        for i in t.members() {
            coeffs[i] = Rat::from_integer(1.into());
        }
        constraints.push(Constraint::new(
            coeffs,
            Relation::Ge,
            Rat::from_integer(excess.into()),
        ));
    }
    let objective = vec![Rat::from_integer(1.into()); n];
    let LpOutcome::Optimal { x: shifted, objective: needed } =
        minimize(&objective, &constraints)
    else {
        unreachable!("the covering program is feasible and bounded below by zero");
    };
    if needed > Rat::from_integer(budget.into()) {
        return Ok(CoreOutcome {
            nonempty: false,
            certificate: None,
        });
    }
    // Shift back and hand the slack to player 1: raising a single payoff
    // cannot break any lower-bound constraint.
    let mut x: Vec<Rat> = shifted
        .iter()
        .zip(&singles)
        .map(|(s, &v)| s + Rat::from_integer(v.into()))
        .collect();
    let slack = Rat::from_integer(game.grand_value().into()) - x.iter().sum::<Rat>();
    debug_assert!(!slack.is_negative());
    x[0] += slack;
    let certificate = Allocation { x };
    debug_assert!(core_violation(game, &certificate).is_none());
    Ok(CoreOutcome {
        nonempty: true,
        certificate: Some(certificate),
    })
}

/// First violation of superadditivity over disjoint coalition pairs, if any:
/// a pair `(s, t)` with `v(s ∪ t) < v(s) + v(t)`.
pub fn check_superadditive(game: &TUGame) -> Option<(Coalition, Coalition)> {
    let full = (1u32 << game.n) - 1;
    for s in 1..=full {
        // Enumerate nonempty subsets of the complement of s.
        let comp = full & !s;
        let mut t = comp;
        while t != 0 {
            if game.values[(s | t) as usize]
                < game.values[s as usize] + game.values[t as usize]
            {
                return Some((Coalition(s), Coalition(t)));
            }
            t = (t - 1) & comp;
        }
    }
    None
}

/// First violation of convexity, if any: a coalition `s` and players
/// `i, j ∉ s` whose marginal contributions cross, i.e.
/// `v(s+i+j) - v(s+j) < v(s+i) - v(s)`.
pub fn check_convex(game: &TUGame) -> Option<(Coalition, usize, usize)> {
    let full = (1u32 << game.n) - 1;
    for s in 0..=full {
        for i in 0..game.n {
            if s & (1 << i) != 0 {
                continue;
            }
            for j in 0..game.n {
                if i == j || s & (1 << j) != 0 {
                    continue;
                }
                let si = s | 1 << i;
                let sj = s | 1 << j;
                let sij = si | 1 << j;
                if game.values[sij as usize] - game.values[sj as usize]
                    < game.values[si as usize] - game.values[s as usize]
                {
                    return Some((Coalition(s), i, j));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchConfig;
    use crate::shop::Instance;

    fn four_by_two() -> Instance {
        Instance::from_rows(&[vec![0, 2], vec![1, 3], vec![2, 0], vec![3, 1]]).unwrap()
    }

    fn three_by_two() -> Instance {
        Instance::from_rows(&[vec![0, 1], vec![1, 4], vec![2, 3]]).unwrap()
    }

    fn c(members: &[usize]) -> Coalition {
        Coalition::from_members(members)
    }

    /// When the initial schedule is already optimal and block-tight, no
    /// coalition can save anything under any named regime: outsiders fill
    /// their blocks exactly, so every rearrangement a member could profit
    /// from either breaks an outsider protection or runs into capacity.
    #[test]
    fn optimal_initial_schedule_induces_the_zero_game() {
        use crate::admissibility::Regime;
        use crate::optimal::adiri_amit;

        let config = SearchConfig::default();
        for (n, m, regimes) in [
            (3usize, 2usize, &Regime::ALL_NAMED[..]),
            (4, 2, &[Regime::AS1, Regime::AS4, Regime::BAR2, Regime::BAR4][..]),
            (5, 3, &[Regime::AS4][..]),
        ] {
            let inst = Instance::new(adiri_amit(n, m)).unwrap();
            for &regime in regimes {
                let game = build_game(&inst, regime, &config).unwrap();
                assert!(
                    game.values().iter().all(|&v| v == 0),
                    "{n}x{m} under {}: {:?}",
                    regime.name(),
                    game.values()
                );
            }
        }
    }

    fn ri(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    /// The full completion-deadline game on the 4×2 reference instance.
    fn four_by_two_game() -> TUGame {
        build_game(&four_by_two(), Regime::AS4, &SearchConfig::default()).unwrap()
    }

    /// The frozen-start game on the 3×2 reference instance.
    fn three_by_two_game() -> TUGame {
        build_game(&three_by_two(), Regime::BAR2, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn four_by_two_completion_deadline_game_values() {
        let game = four_by_two_game();
        for i in 0..4 {
            assert_eq!(game.value(c(&[i])), 0, "singleton {i}");
        }
        assert_eq!(game.value(c(&[0, 3])), 1);
        assert_eq!(game.value(c(&[1, 2])), 1);
        for pair in [[0usize, 1], [0, 2], [1, 3], [2, 3]] {
            assert_eq!(game.value(c(&pair)), 0, "{pair:?}");
        }
        for triple in [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            assert_eq!(game.value(c(&triple)), 1, "{triple:?}");
        }
        assert_eq!(game.grand_value(), 2);
        assert!(check_superadditive(&game).is_none());
    }

    #[test]
    fn machine_allocations_on_the_four_by_two_instance() {
        let inst = four_by_two();
        assert_eq!(machine_allocation(&inst, 0), vec![1, 2, -1, 0]);
        assert_eq!(machine_allocation(&inst, 1), vec![-1, 0, 1, 2]);
        let avg = averaged_machine_allocation(&inst);
        assert_eq!(avg.x, vec![ri(0), ri(1), ri(0), ri(1)]);
        assert_eq!(avg.total(), ri(2));
    }

    #[test]
    fn averaged_allocation_is_in_the_core_but_machine_one_is_not() {
        let inst = four_by_two();
        let game = four_by_two_game();
        let avg = averaged_machine_allocation(&inst);
        assert_eq!(core_violation(&game, &avg), None);
        let m1 = Allocation::from_integers(&machine_allocation(&inst, 0));
        match core_violation(&game, &m1) {
            Some(CoreViolation::Blocked { coalition, payoff, value }) => {
                assert_eq!(coalition, c(&[2]));
                assert_eq!(payoff, ri(-1));
                assert_eq!(value, 0);
            }
            other => panic!("expected a blocking coalition, got {other:?}"),
        }
        let outcome = core_nonempty(&game).unwrap();
        assert!(outcome.nonempty);
        assert_eq!(core_violation(&game, &outcome.certificate.unwrap()), None);
    }

    #[test]
    fn frozen_start_game_has_an_empty_core() {
        let game = three_by_two_game();
        let expect = [
            (vec![0], 0),
            (vec![1], 3),
            (vec![2], 1),
            (vec![0, 1], 3),
            (vec![0, 2], 1),
            (vec![1, 2], 3),
            (vec![0, 1, 2], 3),
        ];
        for (members, v) in expect {
            assert_eq!(game.value(c(&members)), v, "{members:?}");
        }
        let outcome = core_nonempty(&game).unwrap();
        assert!(!outcome.nonempty);
        assert!(outcome.certificate.is_none());
        // And indeed the game is not superadditive: for instance players 2
        // and 3 together save less than separately.
        assert!(game.value(c(&[1])) + game.value(c(&[2])) > game.value(c(&[1, 2])));
        let (s, t) = check_superadditive(&game).unwrap();
        assert_eq!(s.0 & t.0, 0, "witness coalitions must be disjoint");
        assert!(game.value(s) + game.value(t) > game.value(Coalition(s.0 | t.0)));
    }

    /// For three players the minimal balanced collections are known, so core
    /// nonemptiness has a direct arithmetic characterization to test the
    /// linear program against.
    fn three_player_core_oracle(game: &TUGame) -> bool {
        assert_eq!(game.n(), 3);
        let v = |members: &[usize]| game.value(c(members));
        let grand = game.grand_value();
        let partitions_ok = v(&[0]) + v(&[1]) + v(&[2]) <= grand
            && v(&[0]) + v(&[1, 2]) <= grand
            && v(&[1]) + v(&[0, 2]) <= grand
            && v(&[2]) + v(&[0, 1]) <= grand;
        let half_pairs_ok =
            Rat::new((v(&[0, 1]) + v(&[0, 2]) + v(&[1, 2])).into(), 2.into())
                <= ri(grand);
        partitions_ok && half_pairs_ok
    }

    #[test]
    fn lp_matches_the_three_player_balancedness_oracle() {
        // Sweep a family of three-player games with varied pair values.
        for a in 0..4 {
            for b in 0..4 {
                for d in 0..4 {
                    for grand in 0..6 {
                        let mut values = vec![0i64; 8];
                        values[0b011] = a;
                        values[0b101] = b;
                        values[0b110] = d;
                        values[0b111] = grand;
                        let game = TUGame::new(3, Regime::AS4, values).unwrap();
                        let got = core_nonempty(&game).unwrap();
                        assert_eq!(
                            got.nonempty,
                            three_player_core_oracle(&game),
                            "pairs ({a},{b},{d}), grand {grand}"
                        );
                        if let Some(cert) = got.certificate {
                            assert_eq!(core_violation(&game, &cert), None);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_demands_can_exceed_the_grand_value() {
        let mut values = vec![0i64; 4];
        values[0b01] = 3;
        values[0b10] = 3;
        values[0b11] = 5;
        let game = TUGame::new(2, Regime::AS1, values).unwrap();
        let outcome = core_nonempty(&game).unwrap();
        assert!(!outcome.nonempty);
    }

    #[test]
    fn zero_and_additive_games_are_convex_with_nonempty_cores() {
        let zero = TUGame::new(3, Regime::AS2, vec![0; 8]).unwrap();
        assert!(check_convex(&zero).is_none());
        assert!(check_superadditive(&zero).is_none());
        assert!(core_nonempty(&zero).unwrap().nonempty);

        let weights = [2i64, 5, 7];
        let values: Vec<i64> = (0..8u32)
            .map(|mask| Coalition(mask).members().map(|i| weights[i]).sum())
            .collect();
        let additive = TUGame::new(3, Regime::AS3, values).unwrap();
        assert!(check_convex(&additive).is_none());
        let outcome = core_nonempty(&additive).unwrap();
        assert!(outcome.nonempty);
        let cert = outcome.certificate.unwrap();
        assert_eq!(cert.x, vec![ri(2), ri(5), ri(7)]);
    }

    #[test]
    fn convexity_violation_is_witnessed() {
        let game = three_by_two_game();
        // v({2,3}) - v({3}) = 2 < 3 = v({2}) - v(∅): adding player 2 helps
        // the empty coalition more than it helps {3}.
        let witness = check_convex(&game);
        assert!(witness.is_some());
        let (s, i, j) = witness.unwrap();
        let si = Coalition(s.0 | 1 << i);
        let sj = Coalition(s.0 | 1 << j);
        let sij = Coalition(si.0 | 1 << j);
        assert!(game.value(sij) - game.value(sj) < game.value(si) - game.value(s));
    }

    #[test]
    fn game_json_round_trip_and_validation() {
        let game = four_by_two_game();
        let json = serde_json::to_string_pretty(&game).unwrap();
        assert!(json.contains("\"1,4\": 1"));
        assert!(json.contains("\"regime\": \"as4\""));
        let back: TUGame = serde_json::from_str(&json).unwrap();
        assert_eq!(back, game);

        let missing = r#"{"n": 2, "regime": "as1", "values": {"1": 0, "2": 0}}"#;
        let err = serde_json::from_str::<TUGame>(missing).unwrap_err();
        assert!(err.to_string().contains("missing value for coalition 1,2"));

        let stray = r#"{"n": 2, "regime": "as1",
                        "values": {"1": 0, "2": 0, "1,2": 1, "3": 0}}"#;
        assert!(serde_json::from_str::<TUGame>(stray).is_err());
    }

    #[test]
    fn allocation_json_round_trip() {
        let alloc = Allocation {
            x: vec![ri(0), Rat::new(1.into(), 2.into()), ri(-1)],
        };
        let json = serde_json::to_string(&alloc).unwrap();
        assert_eq!(json, r#"{"x":["0","1/2","-1"]}"#);
        let back: Allocation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, alloc);
        assert!(serde_json::from_str::<Allocation>(r#"{"x":["half"]}"#).is_err());
        assert_eq!(alloc.to_string(), "(0, 1/2, -1)");
    }

    #[test]
    fn node_starved_build_reports_partial_game() {
        let config = SearchConfig {
            node_limit: Some(1),
            ..SearchConfig::default()
        };
        let err = build_game(&three_by_two(), Regime::AS4, &config).unwrap_err();
        assert_eq!(err.n, 3);
        assert!(!err.unresolved.is_empty());
        // The grand coalition resolves via the closed form without search.
        assert!(err
            .exact
            .iter()
            .any(|&(t, v)| t == Coalition::full(3) && v == 3));
        // Reported bounds are genuine lower bounds (here: of known values).
        let game = build_game(&three_by_two(), Regime::AS4, &SearchConfig::default()).unwrap();
        for (t, lb) in err.unresolved {
            assert!(lb <= game.value(t));
            assert!(lb >= 0);
        }
    }

    #[test]
    fn allocation_totals_match_grand_value_for_every_machine() {
        let inst = four_by_two();
        let game = four_by_two_game();
        for j in 0..inst.m() {
            let total: i64 = machine_allocation(&inst, j).iter().sum();
            assert_eq!(total, game.grand_value(), "machine {j}");
        }
        assert_eq!(
            averaged_machine_allocation(&inst).total(),
            ri(game.grand_value())
        );
    }
}
