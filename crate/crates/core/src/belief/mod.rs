//! Conditional probability systems over opponents' strategy profiles, strong
//! belief, sequential best replies, and the search for an admissible CPS.

mod cps;
pub(crate) mod engine;
mod mandate;
mod oracle;
pub(crate) mod restriction;
mod view;

pub use cps::{best_replies, is_valid_cps, sequential_best_reply, strongly_believes, ConditionalBeliefSystem};
pub use engine::{exists_admissible_cps, restrictions_are_empty, solve_program, CopyId, Program, Query, Search};
pub use mandate::{MandateItem, SupportMandate};
pub use oracle::{oracle_cps_search, OracleResult};
pub use restriction::{BeliefRestriction, Clause, PlayerRestriction, RestrictionProfile};
pub use view::PlayerView;
