//! Brute-force cross-check for the pattern search: enumerate every grid
//! conditional with denominator at most `D` at each conditioning event, filter
//! by mandates, clauses and continuation optimality, then glue events
//! together under the chain rule by backtracking.

use std::collections::HashSet;

use num_traits::Zero;

use super::{is_valid_cps, Clause, ConditionalBeliefSystem, PlayerView, Query};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::num::{ratio, Q};

type Dist = Vec<(usize, Q)>;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub witness: Option<ConditionalBeliefSystem>,
    /// Grid conditionals that passed the per-event filters, summed over events.
    pub grid_points: usize,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn expected(view: &PlayerView, s: usize, dist: &Dist) -> Q {
    dist.iter().fold(Q::zero(), |acc, (k, p)| acc + &view.utility[s][*k] * p)
}

/// Exhaustive search over grid CPSs. `budget` caps the number of grid
/// conditionals generated per event.
pub fn oracle_cps_search(
    game: &Game,
    view: &PlayerView,
    query: &Query<'_>,
    denominator: usize,
    budget: usize,
) -> Result<OracleResult> {
    let mut clauses: Vec<&Clause> = Vec::new();
    for r in query.restrictions {
        match r.clauses() {
            Some(cs) => clauses.extend(cs.iter()),
            None => {
                return Err(Error::Unsupported(
                    "the grid oracle only handles explicit polytope restrictions".into(),
                ))
            }
        }
    }
    let allowed = query.mandate.allowed(game, view);
    let ne = view.events.len();
    let mut options: Vec<Vec<Dist>> = Vec::with_capacity(ne);
    let mut lookup: Vec<HashSet<Dist>> = Vec::with_capacity(ne);
    let mut grid_points = 0;
    for e in 0..ne {
        let support: Vec<usize> = view.events[e].iter().copied().filter(|&k| allowed[e][k]).collect();
        if support.is_empty() {
            return Ok(OracleResult { witness: None, grid_points });
        }
        let n = support.len();
        let estimate: f64 = (1..=denominator).map(|d| binomial(d + n - 1, n - 1)).sum();
        if estimate > budget as f64 {
            return Err(Error::SearchBudgetExceeded(format!(
                "about {estimate:.0} grid conditionals on an event of {n} profiles"
            )));
        }
        let positions: Vec<usize> = (0..view.infosets.len()).filter(|&p| view.infoset_event[p] == e).collect();
        let mut seen: HashSet<Dist> = HashSet::new();
        let mut keep = Vec::new();
        for d in 1..=denominator {
            let mut all = Vec::new();
            compositions(d, n, &mut Vec::with_capacity(n), &mut all);
            for parts in all {
                let dist: Dist = support
                    .iter()
                    .zip(&parts)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&k, &c)| (k, ratio(c as i64, d as i64)))
                    .collect();
                if !seen.insert(dist.clone()) {
                    continue;
                }
                let clauses_ok = clauses
                    .iter()
                    .filter(|c| view.event_of(c.infoset) == e)
                    .all(|c| c.holds(&dist));
                if !clauses_ok {
                    continue;
                }
                let optimal = match query.candidate {
                    None => true,
                    Some(s) => positions.iter().filter(|&&p| view.own_reach[p][s]).all(|&p| {
                        let mine = expected(view, s, &dist);
                        view.own_reaching(p).into_iter().all(|t| expected(view, t, &dist) <= mine)
                    }),
                };
                if optimal {
                    keep.push(dist);
                }
            }
        }
        grid_points += keep.len();
        lookup.push(keep.iter().cloned().collect());
        options.push(keep);
    }

    let mut order: Vec<usize> = (0..ne).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(view.events[e].len()), e));
    let mut assigned: Vec<Option<Dist>> = vec![None; ne];
    let found = backtrack(view, &order, 0, &options, &lookup, &mut assigned);
    if !found {
        return Ok(OracleResult { witness: None, grid_points });
    }
    let cps = ConditionalBeliefSystem {
        owner: view.player,
        beliefs: view
            .infoset_event
            .iter()
            .map(|&e| assigned[e].clone().expect("assigned"))
            .collect(),
    };
    if !is_valid_cps(game, view, &cps)? {
        return Err(Error::Unsupported("grid oracle produced an invalid CPS".into()));
    }
    Ok(OracleResult { witness: Some(cps), grid_points })
}

fn backtrack(
    view: &PlayerView,
    order: &[usize],
    depth: usize,
    options: &[Vec<Dist>],
    lookup: &[HashSet<Dist>],
    assigned: &mut Vec<Option<Dist>>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let e = order[depth];
    let mut forced: Option<Dist> = None;
    for &f in &view.supersets[e] {
        let Some(df) = &assigned[f] else { continue };
        let inside: Dist = df.iter().filter(|(k, _)| view.event_masks[e][*k]).cloned().collect();
        let mass = inside.iter().fold(Q::zero(), |acc, (_, p)| acc + p);
        if mass.is_zero() {
            continue;
        }
        let cond: Dist = inside.into_iter().map(|(k, p)| (k, p / &mass)).collect();
        match &forced {
            Some(prev) if *prev != cond => return false,
            _ => forced = Some(cond),
        }
    }
    let candidates: Vec<Dist> = match forced {
        Some(d) => {
            if lookup[e].contains(&d) {
                vec![d]
            } else {
                return false;
            }
        }
        None => options[e].clone(),
    };
    for d in candidates {
        assigned[e] = Some(d);
        if backtrack(view, order, depth + 1, options, lookup, assigned) {
            return true;
        }
    }
    assigned[e] = None;
    false
}
