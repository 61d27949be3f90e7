use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::belief::engine::search;
use crate::belief::{
    restrictions_are_empty, BeliefRestriction, ConditionalBeliefSystem, MandateItem, PlayerView, Query,
    SupportMandate,
};
use crate::error::Result;
use crate::game::{Game, NodeId, PlayerId, ProfileSet, StrategyId};

/// Belief restrictions per player. An empty list leaves the player free.
pub type Restrictions = Vec<Vec<Arc<dyn BeliefRestriction>>>;

/// Extra strong-belief requirements beyond the procedure's own rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    All,
    /// Strong belief in every set of the ladder, for every opponent.
    Ladder(Vec<ProfileSet>),
}

#[derive(Debug, Clone)]
pub struct ProcedureSpec {
    pub name: String,
    pub start: ProfileSet,
    pub restrictions: Restrictions,
    pub gate: Gate,
    /// Only these strategies may survive, at every round.
    pub membership: Option<ProfileSet>,
    /// Correlated strong belief instead of independent rationalization.
    pub correlated: bool,
    /// Re-test every strategy each round instead of only the survivors.
    pub reevaluate_all: bool,
    /// Find the first mandate responsible for each elimination.
    pub explain: bool,
}

impl ProcedureSpec {
    pub fn new(game: &Game, name: impl Into<String>) -> Self {
        ProcedureSpec {
            name: name.into(),
            start: ProfileSet::full(game),
            restrictions: vec![Vec::new(); game.num_players()],
            gate: Gate::All,
            membership: None,
            correlated: false,
            reevaluate_all: false,
            explain: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminationReason {
    /// The player's restrictions admit no CPS at all.
    EmptyPolytope,
    /// Outside the membership filter.
    Filtered,
    /// No admissible CPS makes the strategy a sequential best reply. `binding`
    /// names the first strong-belief requirement that rules it out; `None`
    /// means the restrictions alone do.
    NoAdmissibleBelief { binding: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub round: usize,
    pub player: PlayerId,
    pub strategy: StrategyId,
    pub reason: EliminationReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub player: PlayerId,
    pub strategy: StrategyId,
    pub cps: ConditionalBeliefSystem,
}

#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub procedure: String,
    /// `S^0, S^1, …, S^N` with `S^{N+1} = S^N`.
    pub rounds: Vec<ProfileSet>,
    pub eliminations: Vec<Elimination>,
    /// One witness per survivor, taken from the confirming round.
    pub witnesses: Vec<Witness>,
    pub fixed_point: usize,
    pub outcomes: Vec<NodeId>,
    /// False when some negative answer came from an inexact search.
    pub exact: bool,
}

impl SolveTrace {
    pub fn final_set(&self) -> &ProfileSet {
        self.rounds.last().expect("at least the start round")
    }

    pub fn is_empty(&self) -> bool {
        self.final_set().is_empty()
    }

    /// `S^n`, holding at `S^N` past the fixed point.
    pub fn round(&self, n: usize) -> &ProfileSet {
        &self.rounds[n.min(self.rounds.len() - 1)]
    }

    pub fn witness(&self, player: PlayerId, strategy: StrategyId) -> Option<&ConditionalBeliefSystem> {
        self.witnesses
            .iter()
            .find(|w| w.player == player && w.strategy == strategy)
            .map(|w| &w.cps)
    }
}

/// Thread pool for per-strategy feasibility checks. `FORWIND_WORKERS` sets
/// its size; unset or 0 means one worker per core.
pub fn worker_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("FORWIND_WORKERS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
    })
}

pub(crate) fn mandate_for(game: &Game, i: PlayerId, spec: &ProcedureSpec, history: &[ProfileSet]) -> SupportMandate {
    let mut mandate = SupportMandate::new();
    let others: Vec<PlayerId> = (0..game.num_players()).filter(|&j| j != i).collect();
    let add = |sets: &ProfileSet, label: String, mandate: &mut SupportMandate| {
        if spec.correlated {
            let joint: Vec<(PlayerId, Vec<bool>)> = others
                .iter()
                .filter(|&&j| !sets.sets[j].iter().all(|&b| b))
                .map(|&j| (j, sets.sets[j].clone()))
                .collect();
            if joint.is_empty() {
                return;
            }
            let item = MandateItem::Joint { sets: joint, label };
            if !mandate.items.iter().any(|m| same_item(m, &item)) {
                mandate.push(item);
            }
        } else {
            for &j in &others {
                let set = &sets.sets[j];
                if set.iter().all(|&b| b) {
                    continue;
                }
                let item = MandateItem::Independent {
                    opponent: j,
                    set: set.clone(),
                    label: format!("{label}({})", game.player_name(j)),
                };
                if !mandate.items.iter().any(|m| same_item(m, &item)) {
                    mandate.push(item);
                }
            }
        }
    };
    for (q, sets) in history.iter().enumerate() {
        add(sets, format!("round {q}"), &mut mandate);
    }
    if let Gate::Ladder(ladder) = &spec.gate {
        for (q, sets) in ladder.iter().enumerate() {
            add(sets, format!("gate {q}"), &mut mandate);
        }
    }
    mandate
}

fn same_item(a: &MandateItem, b: &MandateItem) -> bool {
    match (a, b) {
        (
            MandateItem::Independent { opponent: x, set: s, .. },
            MandateItem::Independent { opponent: y, set: t, .. },
        ) => x == y && s == t,
        (MandateItem::Joint { sets: s, .. }, MandateItem::Joint { sets: t, .. }) => s == t,
        _ => false,
    }
}

struct Verdict {
    player: PlayerId,
    strategy: StrategyId,
    witness: Option<ConditionalBeliefSystem>,
    exact: bool,
    binding: Option<String>,
}

/// Runs the generalized elimination procedure to its fixed point.
///
/// At round `n` a strategy survives iff some CPS in the player's restrictions
/// strongly believes every opponent's `S^q` for `q < n` and every gate set,
/// and makes the strategy a sequential best reply.
pub fn generalized_solve(game: &Game, spec: &ProcedureSpec) -> Result<SolveTrace> {
    let n = game.num_players();
    let views: Vec<PlayerView> = (0..n).map(|i| PlayerView::new(game, i)).collect();
    let mut empty = vec![false; n];
    for i in 0..n {
        empty[i] = restrictions_are_empty(game, &views[i], &spec.restrictions[i])?;
    }
    let allowed = |i: PlayerId, s: StrategyId| spec.membership.as_ref().is_none_or(|m| m.sets[i][s]);

    let mut rounds = vec![spec.start.clone()];
    let mut eliminations = Vec::new();
    let mut exact = true;
    let max_rounds = 2 + (0..n).map(|i| game.num_strategies(i)).sum::<usize>();

    for round in 1..=max_rounds {
        let prev = rounds.last().expect("nonempty").clone();
        let mandates: Vec<SupportMandate> = (0..n).map(|i| mandate_for(game, i, spec, &rounds)).collect();
        let mut jobs: Vec<(PlayerId, StrategyId)> = Vec::new();
        for i in 0..n {
            if empty[i] {
                continue;
            }
            for s in 0..game.num_strategies(i) {
                let candidate = if round == 1 || spec.reevaluate_all { allowed(i, s) } else { prev.sets[i][s] };
                if candidate {
                    jobs.push((i, s));
                }
            }
        }
        let verdicts: Vec<Verdict> = worker_pool().install(|| {
            jobs.par_iter()
                .map(|&(i, s)| -> Result<Verdict> {
                    let query = Query {
                        candidate: Some(s),
                        mandate: &mandates[i],
                        restrictions: &spec.restrictions[i],
                    };
                    let found = search(game, &views[i], &query)?;
                    let binding = if found.witness.is_none() && spec.explain {
                        explain(game, &views[i], &query)?
                    } else {
                        None
                    };
                    Ok(Verdict { player: i, strategy: s, exact: found.exact, witness: found.witness, binding })
                })
                .collect::<Result<Vec<_>>>()
        })?;

        let mut next = ProfileSet {
            sets: (0..n).map(|i| vec![false; game.num_strategies(i)]).collect(),
        };
        let mut witnesses = Vec::new();
        let mut reasons = std::collections::HashMap::new();
        for v in verdicts {
            match v.witness {
                Some(cps) => {
                    next.sets[v.player][v.strategy] = true;
                    witnesses.push(Witness { player: v.player, strategy: v.strategy, cps });
                }
                None => {
                    exact &= v.exact;
                    reasons.insert((v.player, v.strategy), v.binding);
                }
            }
        }

        if next == prev {
            let outcomes = game.outcome_set(&prev);
            return Ok(SolveTrace {
                procedure: spec.name.clone(),
                fixed_point: rounds.len() - 1,
                rounds,
                eliminations,
                witnesses,
                outcomes,
                exact,
            });
        }
        for i in 0..n {
            for s in 0..game.num_strategies(i) {
                if prev.sets[i][s] && !next.sets[i][s] {
                    let reason = if empty[i] {
                        EliminationReason::EmptyPolytope
                    } else if !allowed(i, s) {
                        EliminationReason::Filtered
                    } else {
                        EliminationReason::NoAdmissibleBelief {
                            binding: reasons.remove(&(i, s)).flatten(),
                        }
                    };
                    eliminations.push(Elimination { round, player: i, strategy: s, reason });
                }
            }
        }
        rounds.push(next);
    }
    Err(crate::Error::PreconditionViolated(format!(
        "`{}` did not reach a fixed point within {max_rounds} rounds",
        spec.name
    )))
}

/// Label of the first mandate item whose prefix already makes the query
/// infeasible; mandates only shrink the feasible set, so bisection works.
fn explain(game: &Game, view: &PlayerView, query: &Query<'_>) -> Result<Option<String>> {
    let feasible = |m: usize| -> Result<bool> {
        let mandate = query.mandate.prefix(m);
        let q = Query { mandate: &mandate, ..*query };
        Ok(search(game, view, &q)?.witness.is_some())
    };
    if !feasible(0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0, query.mandate.items.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(query.mandate.items[hi - 1].label().to_string()))
}
