//! Exact engine for unit-time open shop scheduling games.
//!
//! Each of `n` jobs needs one unit-length operation on each of `m` machines;
//! a machine runs one operation per integer slot and a job is on at most one
//! machine per slot. Starting from an agreed initial schedule, a coalition of
//! jobs may rearrange the timetable subject to an *admissibility regime* that
//! protects the jobs outside the coalition (their machine-order positions
//! and/or their timing). The savings a coalition can guarantee define a
//! transferable-utility cooperative game.
//!
//! The crate computes, with exact integer/rational arithmetic throughout:
//!
//! * optimal schedules for the whole shop ([`optimal::adiri_amit`],
//!   [`optimal::j_based_optimal`]) and the optimal total completion time;
//! * minimal coalition costs under ten admissibility regimes via
//!   branch-and-bound over integer timetables ([`search::min_coalition_cost`]),
//!   plus an unpruned enumeration oracle for cross-checking
//!   ([`enumeration`]);
//! * the induced TU games ([`game::build_game`]), machine-based allocation
//!   rules ([`game::mu_j`], [`game::mu_bar`]), core membership and core
//!   non-emptiness via an exact rational simplex ([`game::core_nonempty`]);
//! * deterministic instance generators, an ASCII Gantt renderer/parser, and a
//!   CLI (`openshop`) exposing all of the above.

pub mod admissibility;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod gantt;
pub mod gen;
pub mod optimal;
pub mod search;
pub mod shop;
pub mod simplex;

pub use error::Error;
pub use shop::{Coalition, Instance, Schedule, Scheme};

/// Exact rational scalar used for allocations and the core LP.
pub type Rat = num::BigRational;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
