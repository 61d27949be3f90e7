use std::sync::Arc;

use super::kernel::{Restrictions, SolveTrace};
use super::procedures::{rationalizability, selective_after};
use crate::belief::{
    solve_program, BeliefRestriction, ConditionalBeliefSystem, CopyId, MandateItem, PlayerView, Program,
    SupportMandate,
};
use crate::error::{Error, Result};
use crate::game::{Game, InfosetId, PlayerId, ProfileSet};

/// `Δ*_i`: the CPSs that agree on `H_i(S^∞)` with some CPS in `Δ_i` strongly
/// believing every selective round and every rationalizability round.
///
/// Represented implicitly: attaching it to a program adds an auxiliary belief
/// copy carrying `Δ_i` and the strong-belief ladder, tied to the base copy on
/// the conditioning events of `H_i(S^∞)`.
#[derive(Debug)]
pub struct RationalizedRestriction {
    pub player: PlayerId,
    base: Vec<Arc<dyn BeliefRestriction>>,
    mandate: SupportMandate,
    tied: Vec<InfosetId>,
}

impl BeliefRestriction for RationalizedRestriction {
    fn attach(&self, program: &mut Program<'_>, base: CopyId) -> Result<()> {
        let aux = program.add_copy();
        program.restrict_support(aux, &self.mandate);
        for r in &self.base {
            program.restrict(aux, r.as_ref())?;
        }
        let view = program.view();
        let mut events: Vec<usize> = self.tied.iter().map(|&h| view.event_of(h)).collect();
        events.sort_unstable();
        events.dedup();
        for e in events {
            program.tie(base, aux, e);
        }
        Ok(())
    }

    fn is_rationalizable(&self, _game: &Game, _view: &PlayerView, _s_inf: &ProfileSet) -> bool {
        true
    }
}

impl RationalizedRestriction {
    /// Membership test `μ ∈ Δ*_i`.
    pub fn contains(&self, game: &Game, view: &PlayerView, cps: &ConditionalBeliefSystem) -> Result<bool> {
        let mut program = Program::new(game, view);
        for e in 0..view.events.len() {
            let pos = view.infoset_event.iter().position(|&x| x == e).expect("event has an infoset");
            program.fix_conditional(0, e, cps.at(pos));
        }
        self.attach(&mut program, 0)?;
        Ok(solve_program(&program)?.witness.is_some())
    }

    /// Information sets on which membership is decided.
    pub fn tied_infosets(&self) -> &[InfosetId] {
        &self.tied
    }
}

#[derive(Debug, Clone)]
pub struct RationalizedProfile {
    pub players: Vec<Arc<RationalizedRestriction>>,
    pub rationalizability: SolveTrace,
    pub selective: SolveTrace,
}

impl RationalizedProfile {
    pub fn restrictions(&self) -> Restrictions {
        self.players
            .iter()
            .map(|r| vec![r.clone() as Arc<dyn BeliefRestriction>])
            .collect()
    }
}

/// Builds `Δ*` from `Δ`. Requires a nonempty selective solution.
pub fn rationalize_restrictions(game: &Game, restrictions: &Restrictions) -> Result<RationalizedProfile> {
    let rat = rationalizability(game)?;
    let selective = selective_after(game, restrictions, &rat)?;
    if selective.is_empty() {
        return Err(Error::PreconditionViolated(
            "selective rationalizability is empty under these restrictions".into(),
        ));
    }
    let s_inf = rat.final_set();
    let players = (0..game.num_players())
        .map(|i| {
            let mut mandate = SupportMandate::new();
            for (tag, ladder) in [("selective", &selective.rounds), ("rationalizable", &rat.rounds)] {
                for (q, sets) in ladder.iter().enumerate() {
                    for j in (0..game.num_players()).filter(|&j| j != i) {
                        let item = MandateItem::Independent {
                            opponent: j,
                            set: sets.sets[j].clone(),
                            label: format!("{tag} {q}({})", game.player_name(j)),
                        };
                        let duplicate = mandate.items.iter().any(|m| match (m, &item) {
                            (
                                MandateItem::Independent { opponent: a, set: s, .. },
                                MandateItem::Independent { opponent: b, set: t, .. },
                            ) => a == b && s == t,
                            _ => false,
                        });
                        if !duplicate && !sets.sets[j].iter().all(|&b| b) {
                            mandate.push(item);
                        }
                    }
                }
            }
            Arc::new(RationalizedRestriction {
                player: i,
                base: restrictions[i].clone(),
                mandate,
                tied: game.compatible_with_profile(i, s_inf),
            })
        })
        .collect();
    Ok(RationalizedProfile { players, rationalizability: rat, selective })
}
