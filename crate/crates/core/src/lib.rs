//! Forward-induction solution concepts for finite dynamic games with perfect
//! recall: extensive-form rationalizability, selective rationalizability and
//! strong-Δ-rationalizability under first-order belief restrictions, together
//! with a small Kohlberg-Mertens perturbation lab.
//!
//! Every belief computation is carried out in exact rational arithmetic. Only
//! the [`stability`] module uses floating point.

pub mod belief;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod game;
pub mod lp;
pub mod num;
pub mod solvers;
pub mod stability;

pub use error::{Error, Result};
pub use game::{Game, GameTree};
pub use num::Q;
