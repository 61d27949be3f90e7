use num_traits::{One, Signed, Zero};

use super::PlayerView;
use crate::error::{Error, Result};
use crate::game::{Game, PlayerId, StrategyId};
use crate::num::Q;

/// One conditional distribution per own information set, each a sparse list
/// of `(opponent profile, probability)` pairs in increasing profile order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalBeliefSystem {
    pub owner: PlayerId,
    pub beliefs: Vec<Vec<(usize, Q)>>,
}

impl ConditionalBeliefSystem {
    /// Conditional at the information set in position `pos` of `H_i`.
    pub fn at(&self, pos: usize) -> &[(usize, Q)] {
        &self.beliefs[pos]
    }

    pub fn prob(&self, pos: usize, k: usize) -> Q {
        self.beliefs[pos]
            .iter()
            .find(|(j, _)| *j == k)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn mass(&self, pos: usize, mask: &[bool]) -> Q {
        self.beliefs[pos]
            .iter()
            .filter(|(k, _)| mask[*k])
            .fold(Q::zero(), |acc, (_, p)| acc + p)
    }

    /// Builds a CPS from point beliefs given as one opponent profile per
    /// information set.
    pub fn point(owner: PlayerId, profiles: &[usize]) -> Self {
        ConditionalBeliefSystem {
            owner,
            beliefs: profiles.iter().map(|&k| vec![(k, Q::one())]).collect(),
        }
    }
}

/// CPS-1..3 checked exactly. Mass outside `S_{-i}(h)` is a domain error.
pub fn is_valid_cps(game: &Game, view: &PlayerView, cps: &ConditionalBeliefSystem) -> Result<bool> {
    if cps.beliefs.len() != view.infosets.len() {
        return Ok(false);
    }
    for (pos, dist) in cps.beliefs.iter().enumerate() {
        let ev = &view.event_masks[view.infoset_event[pos]];
        for (k, p) in dist {
            if *k >= view.size || (!ev[*k] && !p.is_zero()) {
                return Err(Error::DomainMismatch {
                    infoset: game.infoset(view.infosets[pos]).name.clone(),
                });
            }
            if p.is_negative() {
                return Ok(false);
            }
        }
        let total = dist.iter().fold(Q::zero(), |acc, (_, p)| acc + p);
        if !total.is_one() {
            return Ok(false);
        }
    }
    // Chain rule, pointwise: μ(s|h')·μ(C_h'|h) = μ(s|h) whenever C_h' ⊆ C_h.
    for a in 0..view.infosets.len() {
        for b in 0..view.infosets.len() {
            let (ea, eb) = (view.infoset_event[a], view.infoset_event[b]);
            if ea != eb && !view.supersets[eb].contains(&ea) {
                continue;
            }
            // C_b ⊆ C_a.
            let scale = cps.mass(a, &view.event_masks[eb]);
            for &k in &view.events[eb] {
                if cps.prob(b, k) * &scale != cps.prob(a, k) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Strong belief in `set` (a mask over `S_j`) for a single opponent `j`.
pub fn strongly_believes(
    game: &Game,
    view: &PlayerView,
    cps: &ConditionalBeliefSystem,
    j: PlayerId,
    set: &[bool],
) -> bool {
    view.infosets.iter().enumerate().all(|(pos, &h)| {
        let active = game.reach_mask(h, j).iter().zip(set).any(|(&r, &m)| r && m);
        if !active {
            return true;
        }
        let mass = cps.beliefs[pos]
            .iter()
            .filter(|(k, _)| set[view.strategy_of(*k, j)])
            .fold(Q::zero(), |acc, (_, p)| acc + p);
        mass.is_one()
    })
}

fn expected(view: &PlayerView, s: StrategyId, dist: &[(usize, Q)]) -> Q {
    dist.iter()
        .fold(Q::zero(), |acc, (k, p)| acc + &view.utility[s][*k] * p)
}

/// `s` is a continuation best reply at every own information set it
/// allows, against all strategies allowing that information set.
pub fn sequential_best_reply(view: &PlayerView, s: StrategyId, cps: &ConditionalBeliefSystem) -> bool {
    view.reached_by(s).into_iter().all(|pos| {
        let dist = cps.at(pos);
        let mine = expected(view, s, dist);
        view.own_reaching(pos)
            .into_iter()
            .all(|t| expected(view, t, dist) <= mine)
    })
}

/// `ρ(μ)`: every sequential best reply.
pub fn best_replies(view: &PlayerView, cps: &ConditionalBeliefSystem) -> Vec<StrategyId> {
    (0..view.utility.len())
        .filter(|&s| sequential_best_reply(view, s, cps))
        .collect()
}
