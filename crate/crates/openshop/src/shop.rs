//! Core data model: instances, schedules, machine orders, coalitions.
//!
//! Conventions: jobs and machines are 0-indexed `usize` everywhere in the
//! library; all I/O (JSON, CLI, Gantt cells, coalition strings) is 1-indexed.
//! Time is measured in integer slots; an operation started at `t` occupies
//! `[t, t+1)`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::Result;

/// Maximum number of jobs: coalitions are `u32` bitmasks.
pub const MAX_JOBS: usize = 31;

// ---------------------------------------------------------------------------
// Coalition
// ---------------------------------------------------------------------------

/// A set of jobs, stored as a bitmask (bit `i` = job `i`).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    /// The grand coalition of `n` jobs.
    pub fn full(n: usize) -> Coalition {
        debug_assert!(n <= MAX_JOBS);
        Coalition(if n == 0 { 0 } else { (1u32 << n) - 1 })
    }

    pub fn from_members(members: &[usize]) -> Coalition {
        let mut mask = 0;
        for &i in members {
            debug_assert!(i < MAX_JOBS);
            mask |= 1 << i;
        }
        Coalition(mask)
    }

    pub fn contains(self, job: usize) -> bool {
        job < MAX_JOBS && self.0 & (1 << job) != 0
    }

    pub fn insert(&mut self, job: usize) {
        debug_assert!(job < MAX_JOBS);
        self.0 |= 1 << job;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    /// Members in increasing job order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i)
            }
        })
    }
}

/// 1-indexed comma-joined member list, e.g. `1,3,5`; empty set renders as `-`.
impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for i in self.members() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Coalition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coalition> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Coalition::EMPTY);
        }
        let mut c = Coalition::EMPTY;
        for part in s.split(',') {
            let v: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad job index `{part}` in coalition")))?;
            if v == 0 || v > MAX_JOBS {
                return Err(Error::InvalidInput(format!(
                    "job index {v} out of range 1..={MAX_JOBS}"
                )));
            }
            c.insert(v - 1);
        }
        Ok(c)
    }
}

// ---------------------------------------------------------------------------
// Schedule
// ---------------------------------------------------------------------------

/// An `n × m` matrix of integer start slots: `start(i, j)` is when job `i`'s
/// operation on machine `j` begins.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    n: usize,
    m: usize,
    /// Row-major: `starts[i * m + j]`.
    starts: Vec<u32>,
}

impl Schedule {
    pub fn new(n: usize, m: usize, starts: Vec<u32>) -> Result<Schedule> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput("n and m must be positive".into()));
        }
        if n > MAX_JOBS {
            return Err(Error::InvalidInput(format!("at most {MAX_JOBS} jobs supported")));
        }
        if starts.len() != n * m {
            return Err(Error::InvalidInput(format!(
                "start matrix has {} entries, expected n*m = {}",
                starts.len(),
                n * m
            )));
        }
        Ok(Schedule { n, m, starts })
    }

    /// Build from job rows (`rows[i][j]` = start of job `i` on machine `j`).
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Schedule> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("ragged start matrix".into()));
        }
        Schedule::new(n, m, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn start(&self, job: usize, machine: usize) -> u32 {
        self.starts[job * self.m + machine]
    }

    pub(crate) fn set_start(&mut self, job: usize, machine: usize, t: u32) {
        self.starts[job * self.m + machine] = t;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.starts.chunks(self.m).map(<[u32]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.starts
    }

    /// Feasibility: on every machine all starts are pairwise distinct, and for
    /// every job all starts are pairwise distinct (a job is on one machine at
    /// a time; a machine runs one operation at a time).
    pub fn is_feasible(&self) -> bool {
        let mut seen = Vec::new();
        for j in 0..self.m {
            seen.clear();
            seen.extend((0..self.n).map(|i| self.start(i, j)));
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        for i in 0..self.n {
            seen.clear();
            seen.extend((0..self.m).map(|j| self.start(i, j)));
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        true
    }

    /// Completion time of a job: latest operation start + 1.
    pub fn completion_time(&self, job: usize) -> u32 {
        (0..self.m).map(|j| self.start(job, j)).max().unwrap() + 1
    }

    pub fn completions(&self) -> Vec<u32> {
        (0..self.n).map(|i| self.completion_time(i)).collect()
    }

    /// Latest completion over all jobs.
    pub fn makespan(&self) -> u32 {
        (0..self.n).map(|i| self.completion_time(i)).max().unwrap()
    }

    /// Sum of completion times over coalition members.
    pub fn coalition_cost(&self, t: Coalition) -> u64 {
        t.members()
            .filter(|&i| i < self.n)
            .map(|i| u64::from(self.completion_time(i)))
            .sum()
    }

    /// Total cost of the grand coalition.
    pub fn total_cost(&self) -> u64 {
        self.coalition_cost(Coalition::full(self.n))
    }

    /// Machine orders induced by ranking starts. Errors on infeasible
    /// schedules, where ranks are undefined under ties.
    pub fn scheme(&self) -> Result<Scheme> {
        if !self.is_feasible() {
            return Err(Error::Infeasible(
                "machine orders are undefined when starts collide".into(),
            ));
        }
        let mut positions = vec![vec![0usize; self.n]; self.m];
        let mut order: Vec<usize> = (0..self.n).collect();
        for j in 0..self.m {
            order.sort_unstable_by_key(|&i| self.start(i, j));
            for (pos, &i) in order.iter().enumerate() {
                positions[j][i] = pos;
            }
        }
        Ok(Scheme { positions })
    }

    /// A feasible schedule is semi-active when no single operation can start
    /// earlier while keeping feasibility and the machine orders unchanged.
    /// Checked by brute force straight from that definition.
    pub fn is_semi_active(&self) -> bool {
        debug_assert!(self.is_feasible());
        let scheme = self.scheme().expect("semi-activity requires a feasible schedule");
        let mut probe = self.clone();
        for i in 0..self.n {
            for j in 0..self.m {
                let orig = self.start(i, j);
                for t in 0..orig {
                    probe.set_start(i, j, t);
                    if probe.is_feasible() && probe.scheme().unwrap() == scheme {
                        return false;
                    }
                }
                probe.set_start(i, j, orig);
            }
        }
        true
    }

    /// Left-compact to the semi-active fixpoint: repeatedly move single
    /// operations to their earliest start that preserves feasibility and the
    /// machine orders, until nothing moves.
    pub fn left_compact(&self) -> Schedule {
        self.left_compact_filtered(|_, _| true)
    }

    /// Like [`Schedule::left_compact`], but only operations with
    /// `movable(job, machine)` may move (the rest stay pinned).
    pub(crate) fn left_compact_filtered(
        &self,
        movable: impl Fn(usize, usize) -> bool,
    ) -> Schedule {
        debug_assert!(self.is_feasible());
        let mut s = self.clone();
        loop {
            let mut moved = false;
            for i in 0..self.n {
                for j in 0..self.m {
                    if !movable(i, j) {
                        continue;
                    }
                    let cur = s.start(i, j);
                    // Earliest slot after every operation that precedes (i, j)
                    // on machine j; operations later in the order start after
                    // `cur`, so they cannot collide with a leftward move.
                    let floor = (0..self.n)
                        .filter(|&k| k != i && s.start(k, j) < cur)
                        .map(|k| s.start(k, j) + 1)
                        .max()
                        .unwrap_or(0);
                    let mut cand = floor;
                    while cand < cur {
                        let job_busy = (0..self.m).any(|l| l != j && s.start(i, l) == cand);
                        if job_busy {
                            cand += 1;
                        } else {
                            break;
                        }
                    }
                    if cand < cur {
                        s.set_start(i, j, cand);
                        moved = true;
                    }
                }
            }
            if !moved {
                return s;
            }
        }
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Schedule({}x{}; rows = {:?})", self.n, self.m, self.rows())
    }
}

/// JSON form: `{"n": .., "m": .., "schedule": [[..], ..]}`.
impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            n: usize,
            m: usize,
            schedule: &'a Vec<Vec<u32>>,
        }
        Raw { n: self.n, m: self.m, schedule: &self.rows() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Schedule, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            m: usize,
            schedule: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(de)?;
        let s = Schedule::from_rows(&raw.schedule).map_err(serde::de::Error::custom)?;
        if s.n() != raw.n || s.m() != raw.m {
            return Err(serde::de::Error::custom("n/m fields disagree with matrix shape"));
        }
        Ok(s)
    }
}

// ---------------------------------------------------------------------------
// Scheme
// ---------------------------------------------------------------------------

/// One processing order per machine: `position(j, i)` is job `i`'s 0-based
/// rank on machine `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scheme {
    /// `positions[j][i]` = rank of job `i` on machine `j`.
    positions: Vec<Vec<usize>>,
}

impl Scheme {
    pub fn from_positions(positions: Vec<Vec<usize>>) -> Result<Scheme> {
        let n = positions.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidInput("scheme must cover at least one job".into()));
        }
        for row in &positions {
            let mut seen = vec![false; n];
            if row.len() != n {
                return Err(Error::InvalidInput("ragged scheme".into()));
            }
            for &p in row {
                if p >= n || seen[p] {
                    return Err(Error::InvalidInput("machine order is not a permutation".into()));
                }
                seen[p] = true;
            }
        }
        Ok(Scheme { positions })
    }

    /// Build from per-machine job sequences (`sequences[j][p]` = job at rank `p`).
    pub fn from_sequences(sequences: &[Vec<usize>]) -> Result<Scheme> {
        let n = sequences.first().map_or(0, Vec::len);
        let mut positions = vec![vec![usize::MAX; n]; sequences.len()];
        for (j, seq) in sequences.iter().enumerate() {
            if seq.len() != n {
                return Err(Error::InvalidInput("ragged scheme".into()));
            }
            for (p, &i) in seq.iter().enumerate() {
                if i >= n || positions[j][i] != usize::MAX {
                    return Err(Error::InvalidInput("machine order is not a permutation".into()));
                }
                positions[j][i] = p;
            }
        }
        Scheme::from_positions(positions)
    }

    pub fn n(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn m(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, machine: usize, job: usize) -> usize {
        self.positions[machine][job]
    }

    /// Jobs of machine `j` in processing order.
    pub fn sequence(&self, machine: usize) -> Vec<usize> {
        let n = self.n();
        let mut seq = vec![0usize; n];
        for i in 0..n {
            seq[self.positions[machine][i]] = i;
        }
        seq
    }
}

// ---------------------------------------------------------------------------
// Connected components
// ---------------------------------------------------------------------------

/// Maximal subsets of a coalition occupying consecutive ranks of one machine
/// order, with no outsider rank in between. `positions[i]` is job `i`'s rank
/// on the machine in question. Components are returned in order of their
/// leftmost rank.
pub fn connected_components(t: Coalition, positions: &[usize]) -> Vec<Coalition> {
    let mut ranked: Vec<(usize, usize)> =
        t.members().filter(|&i| i < positions.len()).map(|i| (positions[i], i)).collect();
    ranked.sort_unstable();
    let mut out = Vec::new();
    let mut current = Coalition::EMPTY;
    let mut prev_rank = usize::MAX;
    for (rank, job) in ranked {
        if !current.is_empty() && rank != prev_rank + 1 {
            out.push(current);
            current = Coalition::EMPTY;
        }
        current.insert(job);
        prev_rank = rank;
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

/// A unit-time open shop instance: the shop size plus the agreed initial
/// schedule `s0` that coalition bargaining starts from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    n: usize,
    m: usize,
    s0: Schedule,
}

impl Instance {
    /// Validates shape and feasibility of the initial schedule eagerly, so
    /// every downstream algorithm may assume a well-formed instance.
    pub fn new(s0: Schedule) -> Result<Instance> {
        if !s0.is_feasible() {
            return Err(Error::InvalidInput(
                "initial schedule is infeasible (colliding starts)".into(),
            ));
        }
        Ok(Instance { n: s0.n(), m: s0.m(), s0 })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Instance> {
        Instance::new(Schedule::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s0(&self) -> &Schedule {
        &self.s0
    }

    pub fn jobs(&self) -> Coalition {
        Coalition::full(self.n)
    }
}

/// JSON form: `{"n": .., "m": .., "s0": [[..], ..]}`.
impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            n: usize,
            m: usize,
            s0: &'a Vec<Vec<u32>>,
        }
        Raw { n: self.n, m: self.m, s0: &self.s0.rows() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Instance, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            m: usize,
            s0: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(de)?;
        let inst = Instance::from_rows(&raw.s0).map_err(serde::de::Error::custom)?;
        if inst.n() != raw.n || inst.m() != raw.m {
            return Err(serde::de::Error::custom("n/m fields disagree with matrix shape"));
        }
        Ok(inst)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
