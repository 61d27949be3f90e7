//! Text formats: `.game` files, `.restrict` files and the JSON solution
//! document.

mod game_text;
mod restrict;
mod solution;

pub use game_text::{parse_game, parse_game_tree, serialize_game};
pub use restrict::parse_restrictions;
pub use solution::{serialize_solution, solution_document, SolutionDocument, SCHEMA};

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Drops a trailing `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// 1-based column of `needle` in `line`, or of the first non-blank character.
pub(crate) fn column_of(line: &str, needle: &str) -> usize {
    match line.find(needle) {
        Some(k) if !needle.is_empty() => k + 1,
        _ => line.len() - line.trim_start().len() + 1,
    }
}
