//! Mixed strategies, Nash checks and Kohlberg-Mertens perturbations, in
//! floating point. Spot checks only: a scenario evaluates given perturbation
//! families, it does not decide stability.

mod normal_form;
mod perturb;
mod scenario;
mod search;

pub use normal_form::{check_profile, expected_utility, is_nash, MixedProfile, NashReport, NormalForm};
pub use perturb::{perturb_game, PerturbationSpec};
pub use scenario::{parse_scenario, run_scenario, Scenario, ScenarioReport, Verdict};
pub use search::{distance, find_equilibrium_near, NearEquilibrium, SearchOptions, TargetSet};
