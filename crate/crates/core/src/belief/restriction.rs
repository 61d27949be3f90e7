use std::fmt::Debug;
use std::sync::Arc;

use num_traits::Zero;

use super::{CopyId, PlayerView, Program};
use crate::error::Result;
use crate::game::{Game, InfosetId, PlayerId, ProfileSet};
use crate::lp::Relation;
use crate::num::Q;

/// A restriction on a player's CPS that can express itself as linear
/// constraints on one belief copy of a [`Program`].
pub trait BeliefRestriction: Send + Sync + Debug {
    fn attach(&self, program: &mut Program<'_>, base: CopyId) -> Result<()>;

    /// The clauses, when the restriction is an explicit polytope per
    /// information set.
    fn clauses(&self) -> Option<&[Clause]> {
        None
    }

    /// Sufficient test for rationalizability with respect to `S^∞`: no
    /// active clause sits at an information set outside `H_i(S^∞)`.
    fn is_rationalizable(&self, game: &Game, view: &PlayerView, s_inf: &ProfileSet) -> bool {
        match self.clauses() {
            Some(clauses) => clauses_rationalizable(game, view, clauses, s_inf),
            None => false,
        }
    }
}

pub(crate) fn clauses_rationalizable(game: &Game, view: &PlayerView, clauses: &[Clause], s_inf: &ProfileSet) -> bool {
    let compatible = game.compatible_with_profile(view.player, s_inf);
    clauses
        .iter()
        .all(|c| compatible.contains(&c.infoset) || !c.is_active(view))
}

/// `Σ_k coef(k)·μ(k|h) rel rhs` for one information set `h` of the owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub infoset: InfosetId,
    pub coefs: Vec<(usize, Q)>,
    pub rel: Relation,
    pub rhs: Q,
    pub text: String,
}

impl Clause {
    pub fn coef(&self, k: usize) -> Q {
        self.coefs
            .iter()
            .find(|(j, _)| *j == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn holds(&self, dist: &[(usize, Q)]) -> bool {
        let lhs = dist.iter().fold(Q::zero(), |acc, (k, p)| acc + self.coef(*k) * p);
        self.rel.holds(&lhs, &self.rhs)
    }

    fn range(&self, view: &PlayerView) -> (Q, Q) {
        let ev = &view.events[view.event_of(self.infoset)];
        let vals: Vec<Q> = ev.iter().map(|&k| self.coef(k)).collect();
        let lo = vals.iter().min().cloned().unwrap_or_else(Q::zero);
        let hi = vals.iter().max().cloned().unwrap_or_else(Q::zero);
        (lo, hi)
    }

    /// Some distribution on the conditioning event satisfies the clause. The
    /// left side is linear, so checking the vertices of the simplex suffices.
    pub fn satisfiable(&self, view: &PlayerView) -> bool {
        let (lo, hi) = self.range(view);
        match self.rel {
            Relation::Eq => lo <= self.rhs && self.rhs <= hi,
            Relation::Ge => hi >= self.rhs,
            Relation::Le => lo <= self.rhs,
        }
    }

    /// The clause excludes some distribution on the conditioning event.
    pub fn is_active(&self, view: &PlayerView) -> bool {
        let (lo, hi) = self.range(view);
        match self.rel {
            Relation::Eq => !(lo == self.rhs && hi == self.rhs),
            Relation::Ge => lo < self.rhs,
            Relation::Le => hi > self.rhs,
        }
    }
}

/// Δ_i as a polytope per own information set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlayerRestriction {
    pub player: PlayerId,
    pub clauses: Vec<Clause>,
}

impl BeliefRestriction for PlayerRestriction {
    fn attach(&self, program: &mut Program<'_>, base: CopyId) -> Result<()> {
        for c in &self.clauses {
            program.add_clause(base, c);
        }
        Ok(())
    }

    fn clauses(&self) -> Option<&[Clause]> {
        Some(&self.clauses)
    }
}

/// Δ for every player. Players without clauses are unrestricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionProfile {
    pub players: Vec<PlayerRestriction>,
}

impl RestrictionProfile {
    pub fn unrestricted(game: &Game) -> Self {
        RestrictionProfile {
            players: (0..game.num_players())
                .map(|i| PlayerRestriction {
                    player: i,
                    clauses: Vec::new(),
                })
                .collect(),
        }
    }

    pub fn clauses(&self, i: PlayerId) -> &[Clause] {
        &self.players[i].clauses
    }

    pub fn is_unrestricted(&self) -> bool {
        self.players.iter().all(|p| p.clauses.is_empty())
    }

    pub fn push(&mut self, i: PlayerId, clause: Clause) {
        self.players[i].clauses.push(clause);
    }

    /// One shared handle per player, the form the solvers consume.
    pub fn as_dyn(&self) -> Vec<Vec<Arc<dyn BeliefRestriction>>> {
        self.players
            .iter()
            .map(|p| {
                if p.clauses.is_empty() {
                    Vec::new()
                } else {
                    vec![Arc::new(p.clone()) as Arc<dyn BeliefRestriction>]
                }
            })
            .collect()
    }
}
