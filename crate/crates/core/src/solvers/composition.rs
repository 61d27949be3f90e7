use super::kernel::SolveTrace;
use crate::game::{Game, InfosetId, PlayerId, ProfileSet, StrategyId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionViolation {
    pub round: usize,
    pub player: PlayerId,
    pub infoset: InfosetId,
    pub strategy: StrategyId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompositionReport {
    /// Number of `(round, player, infoset, strategy)` instances examined.
    pub checked: usize,
    pub violations: Vec<CompositionViolation>,
}

impl CompositionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the continuation-splicing property of a selective run: for every
/// round `n`, every `h ∈ H_i(S^n_i) ∖ H_i(S^∞)` whose immediate predecessor is
/// in `H_i(S^∞)`, and every `s_i ∈ S^∞_i(h)`, some survivor of round `n`
/// agrees with `s_i` at `h` and at every own information set after it.
pub fn verify_composition(game: &Game, selective: &SolveTrace, s_inf: &ProfileSet) -> CompositionReport {
    let mut report = CompositionReport::default();
    for (n, round) in selective.rounds.iter().enumerate() {
        for i in 0..game.num_players() {
            let reachable = game.compatible_infosets(i, round, &[i]);
            let rational = game.compatible_with_profile(i, s_inf);
            for &h in game.infosets_of(i) {
                let qualifies = reachable.contains(&h)
                    && !rational.contains(&h)
                    && game.immediate_predecessor(h).is_some_and(|p| rational.contains(&p));
                if !qualifies {
                    continue;
                }
                let after: Vec<InfosetId> = game
                    .infosets_of(i)
                    .iter()
                    .copied()
                    .filter(|&g| g == h || game.precedes(h, g))
                    .collect();
                for s in (0..game.num_strategies(i)).filter(|&s| s_inf.sets[i][s] && game.reach_mask(h, i)[s]) {
                    report.checked += 1;
                    let spliced = (0..game.num_strategies(i)).any(|t| {
                        round.sets[i][t] && after.iter().all(|&g| game.action_at(t, g) == game.action_at(s, g))
                    });
                    if !spliced {
                        report.violations.push(CompositionViolation { round: n, player: i, infoset: h, strategy: s });
                    }
                }
            }
        }
    }
    report
}
