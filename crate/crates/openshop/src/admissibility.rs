//! Admissibility regimes: which rearrangements a coalition may impose on the
//! shop without the outsiders' consent.
//!
//! A regime is the product of a *scheme condition* (what must be preserved of
//! the outsiders' machine-order situation) and a *time condition* (what must
//! be preserved of their timing). Ten combinations carry canonical names
//! (`as1..as4`, `as2p..as4p`, `bar2..bar4`); the remaining two representable
//! products (`as1p`, `bar1`) are exposed for completeness.
//!
//! For the grand coalition there are no outsiders, so every feasible schedule
//! is admissible under every regime.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::shop::{Coalition, Instance, Schedule};
use crate::Result;

/// What a rearrangement must preserve about each outsider's machine orders.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum SchemeCondition {
    /// Every outsider keeps, on every machine, exactly its original set of
    /// predecessor jobs (hence also its rank).
    PredecessorSet,
    /// Every outsider keeps, on every machine, its original rank; who precedes
    /// it may change.
    ExactPosition,
    /// Machine orders are unconstrained.
    Unrestricted,
}

/// What a rearrangement must preserve about each outsider's timing.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum TimeCondition {
    /// Outsider operations keep their exact start slots.
    StartEqual,
    /// Outsider operations start no later than originally.
    StartLeq,
    /// Outsider jobs complete no later than originally.
    CompletionLeq,
    /// Timing is unconstrained.
    Unrestricted,
}

/// An admissibility regime: a scheme condition crossed with a time condition.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Regime {
    pub scheme: SchemeCondition,
    pub time: TimeCondition,
}

impl Regime {
    pub const AS1: Regime = Regime::new(SchemeCondition::PredecessorSet, TimeCondition::Unrestricted);
    pub const AS2: Regime = Regime::new(SchemeCondition::PredecessorSet, TimeCondition::StartEqual);
    pub const AS3: Regime = Regime::new(SchemeCondition::PredecessorSet, TimeCondition::StartLeq);
    pub const AS4: Regime = Regime::new(SchemeCondition::PredecessorSet, TimeCondition::CompletionLeq);
    pub const AS2P: Regime = Regime::new(SchemeCondition::ExactPosition, TimeCondition::StartEqual);
    pub const AS3P: Regime = Regime::new(SchemeCondition::ExactPosition, TimeCondition::StartLeq);
    pub const AS4P: Regime = Regime::new(SchemeCondition::ExactPosition, TimeCondition::CompletionLeq);
    pub const BAR2: Regime = Regime::new(SchemeCondition::Unrestricted, TimeCondition::StartEqual);
    pub const BAR3: Regime = Regime::new(SchemeCondition::Unrestricted, TimeCondition::StartLeq);
    pub const BAR4: Regime = Regime::new(SchemeCondition::Unrestricted, TimeCondition::CompletionLeq);
    /// Position-preserving with free timing (unnamed in the canonical list).
    pub const AS1P: Regime = Regime::new(SchemeCondition::ExactPosition, TimeCondition::Unrestricted);
    /// Fully unconstrained rearrangement (unnamed in the canonical list).
    pub const BAR1: Regime = Regime::new(SchemeCondition::Unrestricted, TimeCondition::Unrestricted);

    /// The ten canonically named regimes, in monotonicity-friendly order.
    pub const ALL_NAMED: [Regime; 10] = [
        Regime::AS1,
        Regime::AS2,
        Regime::AS3,
        Regime::AS4,
        Regime::AS2P,
        Regime::AS3P,
        Regime::AS4P,
        Regime::BAR2,
        Regime::BAR3,
        Regime::BAR4,
    ];

    /// All twelve representable regimes.
    pub const ALL: [Regime; 12] = [
        Regime::AS1,
        Regime::AS2,
        Regime::AS3,
        Regime::AS4,
        Regime::AS1P,
        Regime::AS2P,
        Regime::AS3P,
        Regime::AS4P,
        Regime::BAR1,
        Regime::BAR2,
        Regime::BAR3,
        Regime::BAR4,
    ];

    pub const fn new(scheme: SchemeCondition, time: TimeCondition) -> Regime {
        Regime { scheme, time }
    }

    /// Canonical CLI/JSON name.
    pub fn name(self) -> &'static str {
        match (self.scheme, self.time) {
            (SchemeCondition::PredecessorSet, TimeCondition::Unrestricted) => "as1",
            (SchemeCondition::PredecessorSet, TimeCondition::StartEqual) => "as2",
            (SchemeCondition::PredecessorSet, TimeCondition::StartLeq) => "as3",
            (SchemeCondition::PredecessorSet, TimeCondition::CompletionLeq) => "as4",
            (SchemeCondition::ExactPosition, TimeCondition::Unrestricted) => "as1p",
            (SchemeCondition::ExactPosition, TimeCondition::StartEqual) => "as2p",
            (SchemeCondition::ExactPosition, TimeCondition::StartLeq) => "as3p",
            (SchemeCondition::ExactPosition, TimeCondition::CompletionLeq) => "as4p",
            (SchemeCondition::Unrestricted, TimeCondition::Unrestricted) => "bar1",
            (SchemeCondition::Unrestricted, TimeCondition::StartEqual) => "bar2",
            (SchemeCondition::Unrestricted, TimeCondition::StartLeq) => "bar3",
            (SchemeCondition::Unrestricted, TimeCondition::CompletionLeq) => "bar4",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Regime> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown regime `{s}` (expected one of as1..as4, as2p..as4p, bar2..bar4, as1p, bar1)"
                ))
            })
    }
}

impl Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Regime {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Regime, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Jobs preceding `job` on machine `j` under `s`, as a bitmask.
fn predecessor_mask(s: &Schedule, job: usize, j: usize) -> u32 {
    let t = s.start(job, j);
    let mut mask = 0u32;
    for k in 0..s.n() {
        if k != job && s.start(k, j) < t {
            mask |= 1 << k;
        }
    }
    mask
}

/// Does `s` preserve the outsiders' machine-order situation relative to `s0`?
/// Both schedules must be feasible.
pub fn satisfies_scheme_condition(
    s: &Schedule,
    s0: &Schedule,
    t: Coalition,
    cond: SchemeCondition,
) -> bool {
    assert!(s.is_feasible() && s0.is_feasible(), "scheme conditions require feasible schedules");
    assert_eq!((s.n(), s.m()), (s0.n(), s0.m()), "shape mismatch");
    match cond {
        SchemeCondition::Unrestricted => true,
        SchemeCondition::PredecessorSet => {
            for j in 0..s.m() {
                for i in (0..s.n()).filter(|&i| !t.contains(i)) {
                    if predecessor_mask(s, i, j) != predecessor_mask(s0, i, j) {
                        return false;
                    }
                }
            }
            true
        }
        SchemeCondition::ExactPosition => {
            // Same rank = same number of predecessors.
            for j in 0..s.m() {
                for i in (0..s.n()).filter(|&i| !t.contains(i)) {
                    if predecessor_mask(s, i, j).count_ones()
                        != predecessor_mask(s0, i, j).count_ones()
                    {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Does `s` preserve the outsiders' timing relative to `s0`?
pub fn satisfies_time_condition(
    s: &Schedule,
    s0: &Schedule,
    t: Coalition,
    cond: TimeCondition,
) -> bool {
    assert_eq!((s.n(), s.m()), (s0.n(), s0.m()), "shape mismatch");
    let mut outsiders = (0..s.n()).filter(|&i| !t.contains(i));
    match cond {
        TimeCondition::Unrestricted => true,
        TimeCondition::StartEqual => {
            outsiders.all(|i| (0..s.m()).all(|j| s.start(i, j) == s0.start(i, j)))
        }
        TimeCondition::StartLeq => {
            outsiders.all(|i| (0..s.m()).all(|j| s.start(i, j) <= s0.start(i, j)))
        }
        TimeCondition::CompletionLeq => {
            outsiders.all(|i| s.completion_time(i) <= s0.completion_time(i))
        }
    }
}

/// Full admissibility of a rearrangement `s` for coalition `t`: `s` must be
/// feasible and satisfy both halves of the regime against the instance's
/// initial schedule. Infeasible schedules are inadmissible, not an error.
pub fn is_admissible(s: &Schedule, inst: &Instance, t: Coalition, regime: Regime) -> bool {
    if s.n() != inst.n() || s.m() != inst.m() || !s.is_feasible() {
        return false;
    }
    satisfies_scheme_condition(s, inst.s0(), t, regime.scheme)
        && satisfies_time_condition(s, inst.s0(), t, regime.time)
}

/// Diagnostic: an outsider operation that starts strictly *later* in `s` than
/// in `s0`, i.e. a point where the coalition relies on an outsider actively
/// waiting rather than merely permitting a reshuffle. Returns 0-based
/// `(job, machine)`.
pub fn active_cooperation_witness(
    s: &Schedule,
    s0: &Schedule,
    t: Coalition,
) -> Option<(usize, usize)> {
    for i in (0..s.n()).filter(|&i| !t.contains(i)) {
        for j in 0..s.m() {
            if s.start(i, j) > s0.start(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}
