//! Seeded pseudo-random instance generation.
//!
//! Both styles are deterministic in `(n, m, seed, style)` and always produce a
//! feasible, semi-active initial schedule:
//!
//! - `semiactive-random` draws an independent random job order for every
//!   machine, list-schedules those orders greedily slot by slot, and
//!   left-compacts the result.
//! - `permuted-blocks` takes the block-optimal schedule for `(n, m)` and
//!   relabels the jobs by a random permutation, preserving the block texture
//!   while randomizing which job sits where.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::optimal::adiri_amit;
use crate::shop::{Instance, Schedule, MAX_JOBS};
use crate::{Error, Result};

/// Instance generation style.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenStyle {
    /// Random scheme per machine, greedy list schedule, then left-compaction.
    SemiactiveRandom,
    /// Block-optimal schedule with job labels shuffled.
    PermutedBlocks,
}

impl GenStyle {
    pub const ALL: [GenStyle; 2] = [GenStyle::SemiactiveRandom, GenStyle::PermutedBlocks];

    pub fn name(self) -> &'static str {
        match self {
            GenStyle::SemiactiveRandom => "semiactive-random",
            GenStyle::PermutedBlocks => "permuted-blocks",
        }
    }
}

impl fmt::Display for GenStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenStyle> {
        match s {
            "semiactive-random" => Ok(GenStyle::SemiactiveRandom),
            "permuted-blocks" => Ok(GenStyle::PermutedBlocks),
            other => Err(Error::InvalidInput(format!(
                "unknown generation style '{other}' (expected 'semiactive-random' or 'permuted-blocks')"
            ))),
        }
    }
}

/// Generates a deterministic pseudo-random instance.
///
/// The same `(n, m, seed, style)` always yields the identical instance. The
/// initial schedule is feasible and semi-active by construction.
pub fn gen_instance(n: usize, m: usize, seed: u64, style: GenStyle) -> Result<Instance> {
    if n == 0 || n > MAX_JOBS {
        return Err(Error::InvalidInput(format!(
            "job count must be between 1 and {MAX_JOBS}, got {n}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("machine count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule = match style {
        GenStyle::SemiactiveRandom => random_semi_active(n, m, &mut rng),
        GenStyle::PermutedBlocks => permuted_blocks(n, m, &mut rng),
    };
    Instance::new(schedule)
}

/// Draws a random job order per machine and list-schedules it greedily: at
/// each slot every machine (in index order) starts the next job of its order
/// unless that job is already running on another machine in the same slot.
/// The first machine with remaining work always places an operation, so every
/// slot makes progress and the loop terminates within `n * m` slots.
fn random_semi_active(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Schedule {
    let mut orders: Vec<Vec<usize>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        orders.push(order);
    }

    let mut starts = vec![0u32; n * m];
    let mut next = vec![0usize; m];
    let mut remaining = n * m;
    let mut slot: u32 = 0;
    while remaining > 0 {
        let mut jobs_this_slot: u32 = 0;
        for machine in 0..m {
            if next[machine] == n {
                continue;
            }
            let job = orders[machine][next[machine]];
            if jobs_this_slot & (1 << job) != 0 {
                continue;
            }
            jobs_this_slot |= 1 << job;
            starts[job * m + machine] = slot;
            next[machine] += 1;
            remaining -= 1;
        }
        slot += 1;
    }

    let schedule = Schedule::new(n, m, starts).expect("greedy list schedule is feasible");
    schedule.left_compact()
}

/// Relabels the jobs of the block-optimal schedule by a random permutation.
fn permuted_blocks(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Schedule {
    let base = adiri_amit(n, m);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut starts = vec![0u32; n * m];
    for job in 0..n {
        for machine in 0..m {
            starts[perm[job] * m + machine] = base.start(job, machine);
        }
    }
    Schedule::new(n, m, starts).expect("job relabeling preserves feasibility")
}
