use super::kernel::{generalized_solve, Gate, ProcedureSpec, Restrictions, SolveTrace};
use crate::belief::{PlayerRestriction, PlayerView};
use crate::error::{Error, Result};
use crate::game::{Game, ProfileSet};

/// The named procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Procedure {
    Rationalizability,
    Selective,
    StrongDelta,
    NoS3,
}

impl Procedure {
    pub fn name(self) -> &'static str {
        match self {
            Procedure::Rationalizability => "rationalizability",
            Procedure::Selective => "selective",
            Procedure::StrongDelta => "strong-delta",
            Procedure::NoS3 => "no-s3",
        }
    }

    pub fn parse(name: &str) -> Option<Procedure> {
        [Procedure::Rationalizability, Procedure::Selective, Procedure::StrongDelta, Procedure::NoS3]
            .into_iter()
            .find(|p| p.name() == name)
    }

    pub fn needs_restrictions(self) -> bool {
        self != Procedure::Rationalizability
    }

    /// The kernel configuration of this procedure. Selective and no-s3 run
    /// rationalizability first.
    pub fn spec(self, game: &Game, restrictions: &Restrictions) -> Result<ProcedureSpec> {
        match self {
            Procedure::Rationalizability => Ok(ProcedureSpec::new(game, self.name())),
            Procedure::Selective => Ok(selective_spec(game, restrictions, &rationalizability(game)?)),
            Procedure::StrongDelta => {
                let mut spec = ProcedureSpec::new(game, self.name());
                spec.restrictions = restrictions.clone();
                Ok(spec)
            }
            Procedure::NoS3 => without_s3_spec(game, restrictions, &rationalizability(game)?),
        }
    }

    pub fn run(self, game: &Game, restrictions: &Restrictions) -> Result<SolveTrace> {
        generalized_solve(game, &self.spec(game, restrictions)?)
    }
}

/// Where the generalized procedure starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartSet {
    Full,
    Rationalizable,
}

pub fn rationalizability(game: &Game) -> Result<SolveTrace> {
    Procedure::Rationalizability.run(game, &Vec::new())
}

/// Starts from `S^∞` and adds strong belief in every rationalizability round
/// to the restrictions.
pub fn selective_rationalizability(game: &Game, restrictions: &Restrictions) -> Result<SolveTrace> {
    let rat = rationalizability(game)?;
    selective_after(game, restrictions, &rat)
}

pub(crate) fn selective_after(game: &Game, restrictions: &Restrictions, rat: &SolveTrace) -> Result<SolveTrace> {
    generalized_solve(game, &selective_spec(game, restrictions, rat))
}

fn selective_spec(game: &Game, restrictions: &Restrictions, rat: &SolveTrace) -> ProcedureSpec {
    let mut spec = ProcedureSpec::new(game, Procedure::Selective.name());
    spec.start = rat.final_set().clone();
    spec.restrictions = restrictions.clone();
    spec.gate = Gate::Ladder(rat.rounds.clone());
    spec
}

pub fn strong_delta_rationalizability(game: &Game, restrictions: &Restrictions) -> Result<SolveTrace> {
    Procedure::StrongDelta.run(game, restrictions)
}

/// Sufficient syntactic test that `Δ_i` is rationalizable: every active clause
/// sits at an information set in `H_i(S^∞)`.
pub fn is_rationalizable_restriction(game: &Game, restriction: &PlayerRestriction, s_inf: &ProfileSet) -> bool {
    let view = PlayerView::new(game, restriction.player);
    crate::belief::restriction::clauses_rationalizable(game, &view, &restriction.clauses, s_inf)
}

/// Selective rationalizability with the rationalizability ladder replaced by
/// membership in `S^∞`.
/// Requires every restriction to be rationalizable.
pub fn solve_without_s3(game: &Game, restrictions: &Restrictions) -> Result<SolveTrace> {
    let rat = rationalizability(game)?;
    without_s3_after(game, restrictions, &rat)
}

pub(crate) fn without_s3_after(game: &Game, restrictions: &Restrictions, rat: &SolveTrace) -> Result<SolveTrace> {
    generalized_solve(game, &without_s3_spec(game, restrictions, rat)?)
}

fn without_s3_spec(game: &Game, restrictions: &Restrictions, rat: &SolveTrace) -> Result<ProcedureSpec> {
    let s_inf = rat.final_set();
    for (i, rs) in restrictions.iter().enumerate() {
        let view = PlayerView::new(game, i);
        if let Some(r) = rs.iter().find(|r| !r.is_rationalizable(game, &view, s_inf)) {
            let what = r
                .clauses()
                .and_then(|cs| {
                    let compatible = game.compatible_with_profile(i, s_inf);
                    cs.iter()
                        .find(|c| !compatible.contains(&c.infoset) && c.is_active(&view))
                        .map(|c| format!("clause `{}`", c.text))
                })
                .unwrap_or_else(|| "an implicit restriction".to_string());
            return Err(Error::PreconditionViolated(format!(
                "the restriction of {} is not rationalizable: {what} binds outside H_{}(S^∞)",
                game.player_name(i),
                game.player_name(i)
            )));
        }
    }
    let mut spec = ProcedureSpec::new(game, Procedure::NoS3.name());
    spec.start = s_inf.clone();
    spec.restrictions = restrictions.clone();
    spec.membership = Some(s_inf.clone());
    Ok(spec)
}

/// The generalized procedure with a chosen start and gate.
pub fn generalized(game: &Game, restrictions: &Restrictions, start: StartSet, rationalizability_gate: bool) -> Result<SolveTrace> {
    generalized_solve(game, &generalized_spec(game, restrictions, start, rationalizability_gate)?)
}

pub fn generalized_spec(
    game: &Game,
    restrictions: &Restrictions,
    start: StartSet,
    rationalizability_gate: bool,
) -> Result<ProcedureSpec> {
    let mut spec = ProcedureSpec::new(game, "generalized");
    spec.restrictions = restrictions.clone();
    if start == StartSet::Rationalizable || rationalizability_gate {
        let rat = rationalizability(game)?;
        if start == StartSet::Rationalizable {
            spec.start = rat.final_set().clone();
        }
        if rationalizability_gate {
            spec.gate = Gate::Ladder(rat.rounds.clone());
        }
    }
    Ok(spec)
}
