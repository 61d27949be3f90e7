//! Random small games with perfect recall, and random point restrictions.

use forwind::belief::RestrictionProfile;
use forwind::dsl::{parse_game, parse_restrictions};
use forwind::game::ProfileSet;
use forwind::Game;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["P0", "P1", "P2"];

struct Builder<'a> {
    rng: &'a mut ChaCha8Rng,
    players: usize,
    max_depth: usize,
    infosets: Vec<(usize, usize)>,
    nodes: Vec<String>,
    terminals: Vec<String>,
}

impl Builder<'_> {
    fn new_infoset(&mut self, player: usize) -> usize {
        let actions = if self.rng.random_bool(0.2) { 3 } else { 2 };
        self.infosets.push((player, actions));
        self.infosets.len() - 1
    }

    /// Builds a subtree and returns its root name. `preset` places the root in
    /// an existing information set.
    fn node(&mut self, depth: usize, preset: Option<usize>) -> String {
        let leaf_p = [0.0, 0.25, 0.45, 0.7, 1.0].get(depth).copied().unwrap_or(1.0);
        if preset.is_none() && (depth >= self.max_depth || self.rng.random_bool(leaf_p)) {
            let name = format!("z{}", self.terminals.len());
            let pay: Vec<String> = (0..self.players).map(|_| self.rng.random_range(0..=4).to_string()).collect();
            self.terminals.push(format!("{name} : {}", pay.join(", ")));
            return name;
        }
        let h = match preset {
            Some(h) => h,
            None => {
                let p = self.rng.random_range(0..self.players);
                self.new_infoset(p)
            }
        };
        let (owner, actions) = self.infosets[h];
        let name = format!("x{}", self.nodes.len());
        self.nodes.push(String::new());
        let slot = self.nodes.len() - 1;
        // Children that all open with one move of another player who has not
        // observed this one: a shared information set keeps perfect recall.
        let shared = if depth + 1 < self.max_depth && self.rng.random_bool(0.35) {
            let others: Vec<usize> = (0..self.players).filter(|&k| k != owner).collect();
            let k = *others.choose(self.rng).expect("two or more players");
            Some(self.new_infoset(k))
        } else {
            None
        };
        let mut moves = Vec::new();
        for a in 0..actions {
            let child = self.node(depth + 1, shared);
            moves.push(format!("a{a} -> {child}"));
        }
        self.nodes[slot] = format!("{name} h{h} : {}", moves.join(", "));
        name
    }
}

/// A random game, or `None` when the draw breaks the size limits.
pub fn random_game(rng: &mut ChaCha8Rng, id: usize) -> Option<(Game, String)> {
    let players = rng.random_range(2..=3);
    let max_depth = rng.random_range(2..=4);
    let mut b = Builder { rng, players, max_depth, infosets: Vec::new(), nodes: Vec::new(), terminals: Vec::new() };
    b.node(0, None);
    let mut text = format!("[game]\nname = random{id}\n\n[players]\n");
    for n in NAMES.iter().take(players) {
        text += &format!("{n}\n");
    }
    text += "\n[infosets]\n";
    for (h, (p, k)) in b.infosets.iter().enumerate() {
        let acts: Vec<String> = (0..*k).map(|a| format!("a{a}")).collect();
        text += &format!("h{h} {} : {}\n", NAMES[*p], acts.join(" "));
    }
    text += "\n[nodes]\n";
    // The root comes first.
    text += &format!("root{}\n", &b.nodes[0][2..]);
    for line in &b.nodes[1..] {
        text += &format!("{line}\n");
    }
    text += "\n[terminals]\n";
    for line in &b.terminals {
        text += &format!("{line}\n");
    }
    let game = parse_game(&text).ok()?;
    let sizes_ok = (0..game.num_players()).all(|i| !game.infosets_of(i).is_empty() && game.num_strategies(i) <= 12);
    sizes_ok.then_some((game, text))
}

/// Point restrictions `P(opponent action) = 1` or `P(opponent = strategy) = 1`
/// attached only to information sets in `H_i(S^∞)`.
pub fn random_point_restrictions(
    rng: &mut ChaCha8Rng,
    game: &Game,
    s_inf: &ProfileSet,
) -> Option<(RestrictionProfile, String)> {
    let mut text = String::from("[restrictions]\n");
    for i in 0..game.num_players() {
        if !rng.random_bool(0.75) {
            continue;
        }
        let hs = game.compatible_with_profile(i, s_inf);
        let Some(&h) = hs.choose(rng) else { continue };
        let opponents: Vec<usize> = (0..game.num_players()).filter(|&j| j != i).collect();
        for _ in 0..8 {
            let j = *opponents.choose(rng).expect("opponents");
            let event = if rng.random_bool(0.5) {
                let g = *game.infosets_of(j).choose(rng).expect("infosets");
                let a = rng.random_range(0..game.infoset(g).actions.len());
                format!("{}@{} = {}", game.player_name(j), game.infoset(g).name, game.infoset(g).actions[a])
            } else {
                let s = rng.random_range(0..game.num_strategies(j));
                format!("{} in [{}]", game.player_name(j), game.strategy_name(j, s))
            };
            let line = format!("{} @ {} : P({event}) = 1\n", game.player_name(i), game.infoset(h).name);
            if parse_restrictions(&format!("[restrictions]\n{line}"), game).is_ok() {
                text += &line;
                break;
            }
        }
    }
    let profile = parse_restrictions(&text, game).ok()?;
    Some((profile, text))
}
