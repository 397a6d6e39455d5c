//! Optimal schedules for the whole shop.
//!
//! With unit operations and equal weights, the minimal total completion time
//! has a closed form: jobs complete in blocks of `m`, the jobs of block `r`
//! (1-based) all finishing at `r * m`. [`adiri_amit`] constructs such an
//! optimum directly; [`j_based_optimal`] produces, for any machine `j`, an
//! optimum that keeps machine `j` busy over `0..n` *in the initial schedule's
//! machine-`j` order* — the anchor for the machine-based allocation rules.

use crate::shop::{Instance, Schedule};

/// How an optimal schedule groups jobs into completion blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    /// Number of full blocks of `m` jobs (`n div m`).
    pub full_blocks: usize,
    /// Jobs in the final partial block (`n mod m`; 0 means no partial block).
    pub remainder: usize,
    /// Job indices per block, in construction order; all jobs of
    /// `blocks[r]` complete at `(r + 1) * m`.
    pub blocks: Vec<Vec<usize>>,
}

/// Block layout of the [`adiri_amit`] schedule for an `n × m` shop.
pub fn block_structure(n: usize, m: usize) -> BlockStructure {
    assert!(n > 0 && m > 0);
    let blocks: Vec<Vec<usize>> =
        (0..n).collect::<Vec<_>>().chunks(m).map(<[usize]>::to_vec).collect();
    BlockStructure { full_blocks: n / m, remainder: n % m, blocks }
}

/// Minimal total completion time of an `n × m` unit-time open shop:
/// `m * Σ_{k=1..n} ceil(k / m)`.
pub fn optimal_total_cost(n: usize, m: usize) -> u64 {
    assert!(n > 0 && m > 0);
    let m64 = m as u64;
    (1..=n as u64).map(|k| m64 * k.div_ceil(m64)).sum()
}

/// Construct an optimal schedule by the two-run insertion rule: job `i`
/// (0-based) starts on machine `i mod m`, first placing the machine run
/// `i mod m .. m-1` as one continuous band at the earliest feasible offset,
/// then the wrap-around run `0 .. i mod m - 1` likewise.
pub fn adiri_amit(n: usize, m: usize) -> Schedule {
    assert!(n > 0 && m > 0, "shop must be non-empty");
    // Every operation lands strictly below (n/m + 2) * m ≤ n + 2m slots.
    let h = n + 2 * m;
    let mut machine_busy = vec![vec![false; h]; m];
    let mut job_busy = vec![vec![false; h]; n];
    let mut sched = Schedule::new(n, m, vec![0; n * m]).expect("valid shape");

    for i in 0..n {
        let f = i % m;
        let runs: [Vec<usize>; 2] = [(f..m).collect(), (0..f).collect()];
        for run in &runs {
            if run.is_empty() {
                continue;
            }
            let mut t = 0usize;
            'scan: loop {
                for (d, &j) in run.iter().enumerate() {
                    if machine_busy[j][t + d] || job_busy[i][t + d] {
                        t += 1;
                        continue 'scan;
                    }
                }
                break;
            }
            for (d, &j) in run.iter().enumerate() {
                machine_busy[j][t + d] = true;
                job_busy[i][t + d] = true;
                sched.set_start(i, j, (t + d) as u32);
            }
        }
    }
    debug_assert!(sched.is_feasible());
    debug_assert_eq!(sched.total_cost(), optimal_total_cost(n, m));
    sched
}

/// Machines whose slots `0..n` are all occupied (no idle time at all).
fn continuous_machines(s: &Schedule) -> Vec<usize> {
    let n = s.n() as u32;
    (0..s.m())
        .filter(|&j| {
            let mut slots: Vec<u32> = (0..s.n()).map(|i| s.start(i, j)).collect();
            slots.sort_unstable();
            slots.iter().copied().eq(0..n)
        })
        .collect()
}

/// An optimal schedule tailored to machine `j`: machine `j` runs continuously
/// over slots `0..n` and processes jobs in the same order as the instance's
/// initial schedule. Consequently the job at rank `p` (0-based) of that order
/// completes exactly at `ceil((p+1)/m) * m`.
///
/// Built by relabeling [`adiri_amit`]: jobs are renamed so the construction's
/// continuous machine runs the initial machine-`j` sequence, and machine
/// indices are rotated to move the continuous machine onto `j`. Rotation
/// preserves feasibility and all completion times because every job's
/// operation *set* of start slots is untouched.
pub fn j_based_optimal(inst: &Instance, j: usize) -> Schedule {
    let (n, m) = (inst.n(), inst.m());
    assert!(j < m, "machine index out of range");
    let aa = adiri_amit(n, m);
    let continuous = continuous_machines(&aa);
    // With n divisible by m every machine is continuous; otherwise exactly the
    // construction's anchor machine is. Either way we can anchor on request.
    let jstar = if continuous.contains(&j) { j } else { continuous[0] };
    let rot = (j + m - jstar) % m;

    // aa job at rank p of machine jstar  →  real job at rank p of s0's machine j.
    let aa_order = aa.scheme().expect("construction is feasible").sequence(jstar);
    let s0_order = inst.s0().scheme().expect("instances are feasible").sequence(j);

    let mut out = Schedule::new(n, m, vec![0; n * m]).expect("valid shape");
    for p in 0..n {
        for q in 0..m {
            out.set_start(s0_order[p], (q + rot) % m, aa.start(aa_order[p], q));
        }
    }

    // Contract checks: optimal total, machine j continuous over 0..n, and
    // machine j's order agreeing with the initial schedule.
    assert!(out.is_feasible());
    assert_eq!(out.total_cost(), optimal_total_cost(n, m));
    assert!(continuous_machines(&out).contains(&j));
    assert_eq!(machine_order(&out, j), s0_order);
    out
}

fn machine_order(s: &Schedule, j: usize) -> Vec<usize> {
    s.scheme().expect("feasible").sequence(j)
}
