//! Exact rational linear feasibility: Phase I of the tableau simplex method
//! with Bland's rule, so it terminates without tolerances or cycling.

use num_traits::{One, Signed, Zero};

use crate::num::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn flip(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coefs: Vec<(usize, Q)>,
    pub rel: Relation,
    pub rhs: Q,
}

/// `{ x ≥ 0 : every constraint holds }`.
#[derive(Debug, Clone, Default)]
pub struct Problem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

impl Problem {
    pub fn new(num_vars: usize) -> Self {
        Problem {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coefs: Vec<(usize, Q)>, rel: Relation, rhs: Q) {
        self.constraints.push(Constraint { coefs, rel, rhs });
    }

    /// Exact check of a candidate point.
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = c
                    .coefs
                    .iter()
                    .fold(Q::zero(), |acc, (j, a)| acc + a * &x[*j]);
                c.rel.holds(&lhs, &c.rhs)
            })
    }
}

/// Returns a feasible point, or `None` when the system is infeasible.
pub fn feasible_point(problem: &Problem) -> Option<Vec<Q>> {
    let n = problem.num_vars;
    let m = problem.constraints.len();
    if m == 0 {
        return Some(vec![Q::zero(); n]);
    }

    // Column layout: structural | one slack per inequality | one artificial
    // per row that has no slack usable as an initial basis.
    let mut rows: Vec<(Vec<Q>, Relation, Q)> = Vec::with_capacity(m);
    for c in &problem.constraints {
        let mut dense = vec![Q::zero(); n];
        for (j, a) in &c.coefs {
            dense[*j] += a;
        }
        let (dense, rel, rhs) = if c.rhs.is_negative() {
            (dense.into_iter().map(|v| -v).collect(), c.rel.flip(), -c.rhs.clone())
        } else {
            (dense, c.rel, c.rhs.clone())
        };
        rows.push((dense, rel, rhs));
    }
    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let arts = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = n + slacks + arts;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut is_art = vec![false; width];
    let (mut next_slack, mut next_art) = (n, n + slacks);
    for (dense, rel, rhs) in rows {
        let mut row = dense;
        row.resize(width + 1, Q::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = Q::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Q::one();
                next_slack += 1;
                row[next_art] = Q::one();
                is_art[next_art] = true;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Q::one();
                is_art[next_art] = true;
                basis.push(next_art);
                next_art += 1;
            }
        }
        row[width] = rhs;
        tab.push(row);
    }

    // Reduced costs of min Σ artificials; the last entry holds -objective.
    let mut cost = vec![Q::zero(); width + 1];
    for (r, row) in tab.iter().enumerate() {
        if is_art[basis[r]] {
            for (j, v) in row.iter().enumerate() {
                if (j == width || !is_art[j]) && !v.is_zero() {
                    cost[j] -= v;
                }
            }
        }
    }

    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase I is bounded below by zero, so an entering column always has
        // a positive entry.
        let (pr, _) = leave.expect("phase I objective is bounded");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[r][width].clone();
        }
    }
    debug_assert!(problem.satisfied_by(&x));
    Some(x)
}

fn pivot(tab: &mut [Vec<Q>], cost: &mut [Q], pr: usize, pc: usize) {
    let inv = Q::one() / &tab[pr][pc];
    for v in tab[pr].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = tab[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for &j in &nz {
            cost[j] -= &f * &prow[j];
        }
    }
}
