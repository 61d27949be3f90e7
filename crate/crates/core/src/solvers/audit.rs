use super::kernel::{mandate_for, ProcedureSpec, SolveTrace};
use crate::belief::{exists_admissible_cps, oracle_cps_search, PlayerView, Query};
use crate::error::{Error, Result};
use crate::game::{Game, PlayerId, StrategyId};

/// Grid conditionals the oracle may generate per conditioning event.
const ORACLE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMismatch {
    pub round: usize,
    pub player: PlayerId,
    pub strategy: StrategyId,
}

/// Outcome of re-deciding every admissibility query of a run with the grid
/// oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleAudit {
    pub denominator: usize,
    pub checks: usize,
    /// The engine found no CPS but the oracle did: a soundness failure.
    pub unsound: Vec<OracleMismatch>,
    /// The engine found a CPS the grid misses (advisory, grid too coarse).
    pub coarse: Vec<OracleMismatch>,
}

impl OracleAudit {
    pub fn agrees(&self) -> bool {
        self.unsound.is_empty() && self.coarse.is_empty()
    }
}

/// Replays each round of `trace` (including the confirming round) for every
/// strategy of every player and compares the engine with the oracle.
pub fn oracle_audit(game: &Game, spec: &ProcedureSpec, trace: &SolveTrace, denominator: usize) -> Result<OracleAudit> {
    let views: Vec<PlayerView> = (0..game.num_players()).map(|i| PlayerView::new(game, i)).collect();
    let mut audit = OracleAudit { denominator, ..OracleAudit::default() };
    for round in 1..=trace.rounds.len() {
        let history = &trace.rounds[..round];
        for (i, view) in views.iter().enumerate() {
            let mandate = mandate_for(game, i, spec, history);
            for s in 0..game.num_strategies(i) {
                let query = Query { candidate: Some(s), mandate: &mandate, restrictions: &spec.restrictions[i] };
                let engine = match exists_admissible_cps(game, view, &query) {
                    Ok(found) => found.witness.is_some(),
                    Err(Error::EmptyPolytope { .. }) => false,
                    Err(e) => return Err(e),
                };
                let oracle = oracle_cps_search(game, view, &query, denominator, ORACLE_BUDGET)?.witness.is_some();
                audit.checks += 1;
                let m = OracleMismatch { round, player: i, strategy: s };
                match (engine, oracle) {
                    (false, true) => audit.unsound.push(m),
                    (true, false) => audit.coarse.push(m),
                    _ => {}
                }
            }
        }
    }
    Ok(audit)
}
