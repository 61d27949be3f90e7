#![allow(dead_code)]

use std::path::PathBuf;

use forwind::belief::RestrictionProfile;
use forwind::dsl::{parse_game, parse_restrictions};
use forwind::Game;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn game(name: &str) -> Game {
    parse_game(&fixture(name)).expect("fixture parses")
}

pub fn restrictions(game: &Game, name: &str) -> RestrictionProfile {
    parse_restrictions(&fixture(name), game).expect("fixture parses")
}

/// Strategy names per player in a final set.
pub fn names(game: &Game, set: &forwind::game::ProfileSet) -> Vec<Vec<String>> {
    (0..game.num_players())
        .map(|i| set.members(i).into_iter().map(|s| game.strategy_name(i, s).to_string()).collect())
        .collect()
}

pub fn outcome_names(game: &Game, outcomes: &[usize]) -> Vec<String> {
    outcomes.iter().map(|&z| game.node(z).name.clone()).collect()
}
pub mod random;
