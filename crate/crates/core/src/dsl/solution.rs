use serde::Serialize;

use crate::belief::PlayerView;
use crate::game::{Game, ProfileSet};
use crate::num::format_q;
use crate::solvers::{EliminationReason, SolveTrace};

/// Version tag of the solution document.
pub const SCHEMA: &str = "forwind.solution/1";

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SolutionDocument {
    pub schema: &'static str,
    pub game: String,
    pub procedure: String,
    pub players: Vec<PlayerEntry>,
    pub rounds: Vec<RoundEntry>,
    pub fixed_point: usize,
    pub empty: bool,
    pub outcomes: Vec<OutcomeEntry>,
    pub eliminations: Vec<EliminationEntry>,
    pub witnesses: Vec<WitnessEntry>,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PlayerEntry {
    pub name: String,
    pub strategies: Vec<String>,
    /// Outcome-equivalent strategies grouped together.
    pub equivalence_classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RoundEntry {
    pub round: usize,
    pub survivors: Vec<Survivors>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Survivors {
    pub player: String,
    pub strategies: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OutcomeEntry {
    pub node: String,
    pub payoffs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EliminationEntry {
    pub round: usize,
    pub player: String,
    pub strategy: String,
    pub reason: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binding: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WitnessEntry {
    pub player: String,
    pub strategy: String,
    pub beliefs: Vec<ConditionalEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ConditionalEntry {
    pub infoset: String,
    pub distribution: Vec<MassEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MassEntry {
    pub profile: Vec<String>,
    pub probability: String,
}

fn survivors(game: &Game, set: &ProfileSet) -> Vec<Survivors> {
    (0..game.num_players())
        .map(|i| Survivors {
            player: game.player_name(i).to_string(),
            strategies: set.members(i).into_iter().map(|s| game.strategy_name(i, s).to_string()).collect(),
        })
        .collect()
}

/// Builds the solution document for `trace`. Everything is listed in
/// declaration order, so equal inputs give byte-identical output.
pub fn solution_document(game: &Game, trace: &SolveTrace) -> SolutionDocument {
    let views: Vec<PlayerView> = (0..game.num_players()).map(|i| PlayerView::new(game, i)).collect();
    let players = (0..game.num_players())
        .map(|i| PlayerEntry {
            name: game.player_name(i).to_string(),
            strategies: (0..game.num_strategies(i)).map(|s| game.strategy_name(i, s).to_string()).collect(),
            equivalence_classes: game
                .equivalence_classes(i)
                .into_iter()
                .map(|c| c.into_iter().map(|s| game.strategy_name(i, s).to_string()).collect())
                .collect(),
        })
        .collect();
    let rounds = trace
        .rounds
        .iter()
        .enumerate()
        .map(|(round, set)| RoundEntry { round, survivors: survivors(game, set) })
        .collect();
    let outcomes = trace
        .outcomes
        .iter()
        .map(|&z| OutcomeEntry {
            node: game.node(z).name.clone(),
            payoffs: game.payoffs(z).iter().map(format_q).collect(),
        })
        .collect();
    let eliminations = trace
        .eliminations
        .iter()
        .map(|e| {
            let (reason, binding) = match &e.reason {
                EliminationReason::EmptyPolytope => ("empty-polytope", None),
                EliminationReason::Filtered => ("not-rationalizable", None),
                EliminationReason::NoAdmissibleBelief { binding } => ("no-admissible-belief", binding.clone()),
            };
            EliminationEntry {
                round: e.round,
                player: game.player_name(e.player).to_string(),
                strategy: game.strategy_name(e.player, e.strategy).to_string(),
                reason,
                binding,
            }
        })
        .collect();
    let mut sorted: Vec<_> = trace.witnesses.iter().collect();
    sorted.sort_by_key(|w| (w.player, w.strategy));
    let witnesses = sorted
        .into_iter()
        .map(|w| {
            let view = &views[w.player];
            WitnessEntry {
                player: game.player_name(w.player).to_string(),
                strategy: game.strategy_name(w.player, w.strategy).to_string(),
                beliefs: view
                    .infosets
                    .iter()
                    .enumerate()
                    .map(|(pos, &h)| ConditionalEntry {
                        infoset: game.infoset(h).name.clone(),
                        distribution: w
                            .cps
                            .at(pos)
                            .iter()
                            .map(|(k, p)| MassEntry {
                                profile: view
                                    .others
                                    .iter()
                                    .zip(view.opponents_of(*k))
                                    .map(|(&j, &s)| game.strategy_name(j, s).to_string())
                                    .collect(),
                                probability: format_q(p),
                            })
                            .collect(),
                    })
                    .collect(),
            }
        })
        .collect();
    SolutionDocument {
        schema: SCHEMA,
        game: game.name().to_string(),
        procedure: trace.procedure.clone(),
        players,
        rounds,
        fixed_point: trace.fixed_point,
        empty: trace.is_empty(),
        outcomes,
        eliminations,
        witnesses,
        exact: trace.exact,
    }
}

pub fn serialize_solution(game: &Game, trace: &SolveTrace) -> String {
    serde_json::to_string_pretty(&solution_document(game, trace)).expect("document serializes")
}
