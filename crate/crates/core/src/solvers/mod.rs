//! Iterated elimination: the generalized kernel and the procedures built on it.

mod audit;
mod compare;
mod composition;
mod kernel;
mod procedures;
mod transform;

pub use audit::{oracle_audit, OracleAudit, OracleMismatch};
pub use compare::{compare, Comparison, Inclusion, RoundDiff};
pub use composition::{verify_composition, CompositionReport, CompositionViolation};
pub use kernel::{
    generalized_solve, worker_pool, Elimination, EliminationReason, Gate, ProcedureSpec, Restrictions,
    SolveTrace, Witness,
};
pub use procedures::{
    generalized, generalized_spec, is_rationalizable_restriction, rationalizability, selective_rationalizability,
    solve_without_s3, strong_delta_rationalizability, Procedure, StartSet,
};
pub use transform::{rationalize_restrictions, RationalizedProfile, RationalizedRestriction};
