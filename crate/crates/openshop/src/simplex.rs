//! Dense two-phase simplex over exact rational arithmetic.
//!
//! Minimizes a linear objective over `x >= 0` subject to mixed `<=`, `>=`,
//! and `==` constraints. Everything is computed in [`crate::Rat`]
//! (arbitrary-precision rationals), so there is no tolerance tuning and no
//! rounding: answers are exact. Bland's rule guards against cycling, which
//! matters because the linear programs built from cooperative games are
//! highly degenerate.
//!
//! The tableaus involved here are small (tens of columns), so a dense
//! representation is the simple and adequate choice.

use crate::Rat;
use num::{One, Signed, Zero};

/// Direction of a linear constraint `coeffs . x REL rhs`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// One linear constraint over the decision variables.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Constraint {
        Constraint { coeffs, rel, rhs }
    }
}

/// Result of an exact minimization.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, objective: Rat },
    Infeasible,
    Unbounded,
}

/// Minimize `objective . x` subject to `constraints` and `x >= 0`.
///
/// Panics if a constraint's width disagrees with the objective's.
pub fn minimize(objective: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    let nv = objective.len();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nv, "constraint width must match the objective");
    }

    // Column layout: [variables][slacks/surpluses][artificials][rhs].
    let nslack = constraints
        .iter()
        .filter(|c| c.rel != Relation::Eq)
        .count();
    // Artificials are allocated pessimistically (one per row); unused ones
    // simply keep zero columns and never enter the basis.
    let nart = constraints.len();
    let cols = nv + nslack + nart;
    let real_cols = nv + nslack;

    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(constraints.len());
    let mut basis: Vec<usize> = Vec::with_capacity(constraints.len());
    let mut next_slack = nv;
    for (r, con) in constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); cols + 1];
        // Normalize to rhs >= 0, flipping the relation if needed.
        let flip = con.rhs.is_negative();
        let sign = if flip { -Rat::one() } else { Rat::one() };
        for (j, a) in con.coeffs.iter().enumerate() {
            row[j] = a * &sign;
        }
        row[cols] = &con.rhs * &sign;
        let rel = match (con.rel, flip) {
            (Relation::Eq, _) => Relation::Eq,
            (rel, false) => rel,
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
        };
        match rel {
            Relation::Le => {
                row[next_slack] = Rat::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rat::one();
                next_slack += 1;
                let art = nv + nslack + r;
                row[art] = Rat::one();
                basis.push(art);
            }
            Relation::Eq => {
                let art = nv + nslack + r;
                row[art] = Rat::one();
                basis.push(art);
            }
        }
        tab.push(row);
    }

    // Phase 1: minimize the sum of artificial variables.
    let art_start = nv + nslack;
    if basis.iter().any(|&b| b >= art_start) {
        let mut cost = vec![Rat::zero(); cols];
        for c in cost.iter_mut().skip(art_start) {
            *c = Rat::one();
        }
        price_out(&mut cost, &tab, &basis);
        if !run(&mut tab, &mut basis, &mut cost, real_cols) {
            unreachable!("phase 1 is bounded below by zero");
        }
        let infeasibility: Rat = tab
            .iter()
            .enumerate()
            .filter(|(r, _)| basis[*r] >= art_start)
            .map(|(_, row)| row[cols].clone())
            .sum();
        if !infeasibility.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive degenerate artificials out of the basis; rows that cannot
        // pivot are redundant and get dropped.
        let mut r = 0;
        while r < tab.len() {
            if basis[r] >= art_start {
                match (0..real_cols).find(|&c| !tab[r][c].is_zero()) {
                    Some(c) => pivot(&mut tab, &mut basis, None, r, c),
                    None => {
                        tab.swap_remove(r);
                        basis.swap_remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: minimize the real objective from the feasible basis.
    let mut cost = vec![Rat::zero(); cols];
    cost[..nv].clone_from_slice(objective);
    price_out(&mut cost, &tab, &basis);
    if !run(&mut tab, &mut basis, &mut cost, real_cols) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rat::zero(); nv];
    for (r, &b) in basis.iter().enumerate() {
        if b < nv {
            x[b] = tab[r][cols].clone();
        }
    }
    let objective_value = objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    LpOutcome::Optimal {
        x,
        objective: objective_value,
    }
}

/// Subtract basic-variable contributions so `cost` holds reduced costs.
fn price_out(cost: &mut [Rat], tab: &[Vec<Rat>], basis: &[usize]) {
    for (r, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            let factor = cost[b].clone();
            for (c, entry) in cost.iter_mut().enumerate() {
                *entry -= &factor * &tab[r][c];
            }
        }
    }
}

/// Bland-rule simplex iterations; `true` on optimality, `false` on
/// unboundedness. Entering columns are restricted to `< enter_cols`.
fn run(
    tab: &mut Vec<Vec<Rat>>,
    basis: &mut [usize],
    cost: &mut [Rat],
    enter_cols: usize,
) -> bool {
    let cols = cost.len();
    loop {
        let Some(c) = (0..enter_cols).find(|&c| cost[c].is_negative()) else {
            return true;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..tab.len() {
            if tab[r][c].is_positive() {
                let ratio = &tab[r][cols] / &tab[r][c];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot(tab, basis, Some(cost), r, c);
    }
}

/// Gaussian pivot on `(r, c)`: row `r` is scaled to a unit pivot and `c` is
/// eliminated from every other row (and the cost row, when present).
fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], cost: Option<&mut [Rat]>, r: usize, c: usize) {
    let inv = tab[r][c].clone();
    debug_assert!(!inv.is_zero());
    for entry in tab[r].iter_mut() {
        *entry /= &inv;
    }
    let pivot_row = tab[r].clone();
    for (rr, row) in tab.iter_mut().enumerate() {
        if rr != r && !row[c].is_zero() {
            let factor = row[c].clone();
            for (j, entry) in row.iter_mut().enumerate() {
                *entry -= &factor * &pivot_row[j];
            }
        }
    }
    if let Some(cost) = cost {
        if !cost[c].is_zero() {
            let factor = cost[c].clone();
            for (j, entry) in cost.iter_mut().enumerate() {
                *entry -= &factor * &pivot_row[j];
            }
        }
    }
    basis[r] = c;
}
