use std::collections::HashMap;

use super::{column_of, is_ident, strip_comment};
use crate::error::{Error, Pos, Result};
use crate::game::{Game, GameTree, InfoSet, Node, NodeKind};
use crate::num::{format_q_decimal, parse_rational, Q};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Game,
    Players,
    Infosets,
    Nodes,
    Terminals,
}

struct PendingNode {
    line: usize,
    text: String,
    name: String,
    infoset: usize,
    edges: Vec<(String, String)>,
}

/// Parses and validates a game file.
pub fn parse_game(text: &str) -> Result<Game> {
    Game::new(parse_game_tree(text)?)
}

/// Parses a game file without checking the tree invariants.
pub fn parse_game_tree(text: &str) -> Result<GameTree> {
    let mut section = Section::None;
    let mut name = String::new();
    let mut root_name: Option<(usize, String)> = None;
    let mut players: Vec<String> = Vec::new();
    let mut infosets: Vec<InfoSet> = Vec::new();
    let mut pending: Vec<PendingNode> = Vec::new();
    let mut terminals: Vec<(String, Vec<Q>)> = Vec::new();
    let mut node_ids: HashMap<String, usize> = HashMap::new();
    let mut saw_content = false;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        saw_content = true;
        if t.starts_with('[') {
            let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(Error::syntax(line_no, column_of(line, "["), "unterminated section header"));
            };
            section = match inner.trim() {
                "game" => Section::Game,
                "players" => Section::Players,
                "infosets" => Section::Infosets,
                "nodes" => Section::Nodes,
                "terminals" => Section::Terminals,
                other => {
                    return Err(Error::syntax(
                        line_no,
                        column_of(line, other),
                        format!("unknown section `{other}`"),
                    ))
                }
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(Error::syntax(line_no, column_of(line, t), "content before the first section header"))
            }
            Section::Game => {
                let Some((key, value)) = t.split_once('=') else {
                    return Err(Error::syntax(line_no, column_of(line, t), "expected `key = value`"));
                };
                match key.trim() {
                    "name" => name = value.trim().to_string(),
                    "root" => root_name = Some((line_no, value.trim().to_string())),
                    other => {
                        return Err(Error::syntax(line_no, column_of(line, other), format!("unknown key `{other}`")))
                    }
                }
            }
            Section::Players => {
                for p in t.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                    if p == "chance" {
                        return Err(Error::syntax(line_no, column_of(line, p), "chance moves are not supported"));
                    }
                    if !is_ident(p) {
                        return Err(Error::syntax(line_no, column_of(line, p), format!("bad player name `{p}`")));
                    }
                    if players.iter().any(|q| q == p) {
                        return Err(Error::syntax(line_no, column_of(line, p), format!("player `{p}` declared twice")));
                    }
                    players.push(p.to_string());
                }
            }
            Section::Infosets => {
                let (head, actions) = split_colon(line_no, line, t)?;
                let words: Vec<&str> = head.split_whitespace().collect();
                if words.len() != 2 {
                    return Err(Error::syntax(line_no, column_of(line, t), "expected `<name> <owner> : <actions>`"));
                }
                let (hname, owner) = (words[0], words[1]);
                if !is_ident(hname) {
                    return Err(Error::syntax(line_no, column_of(line, hname), format!("bad information set name `{hname}`")));
                }
                if owner == "chance" {
                    return Err(Error::syntax(line_no, column_of(line, owner), "chance moves are not supported"));
                }
                let Some(owner_id) = players.iter().position(|p| p == owner) else {
                    return Err(Error::UnknownIdentifier {
                        pos: Pos { line: line_no, column: column_of(line, owner) },
                        name: owner.to_string(),
                    });
                };
                if infosets.iter().any(|h| h.name == hname) {
                    return Err(Error::syntax(line_no, column_of(line, hname), format!("information set `{hname}` declared twice")));
                }
                let acts: Vec<String> = actions
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                if acts.is_empty() {
                    return Err(Error::syntax(line_no, column_of(line, ":"), "an information set needs at least one action"));
                }
                for a in &acts {
                    if !is_ident(a) {
                        return Err(Error::syntax(line_no, column_of(line, a), format!("bad action label `{a}`")));
                    }
                }
                infosets.push(InfoSet { name: hname.to_string(), owner: owner_id, actions: acts });
            }
            Section::Nodes => {
                let (head, body) = split_colon(line_no, line, t)?;
                let words: Vec<&str> = head.split_whitespace().collect();
                if words.len() != 2 {
                    return Err(Error::syntax(line_no, column_of(line, t), "expected `<node> <infoset> : <action> -> <child>, ...`"));
                }
                let (xname, hname) = (words[0], words[1]);
                check_node_name(line_no, line, xname, &mut node_ids, pending.len() + terminals.len())?;
                let Some(h) = infosets.iter().position(|i| i.name == hname) else {
                    return Err(Error::UnknownInfoset {
                        pos: Pos { line: line_no, column: column_of(line, hname) },
                        name: hname.to_string(),
                    });
                };
                let mut edges = Vec::new();
                for part in body.split(',') {
                    let part = part.trim();
                    let Some((a, c)) = part.split_once("->") else {
                        return Err(Error::syntax(line_no, column_of(line, part), "expected `<action> -> <child>`"));
                    };
                    edges.push((a.trim().to_string(), c.trim().to_string()));
                }
                pending.push(PendingNode { line: line_no, text: line.to_string(), name: xname.to_string(), infoset: h, edges });
            }
            Section::Terminals => {
                let (head, body) = split_colon(line_no, line, t)?;
                let xname = head.trim();
                check_node_name(line_no, line, xname, &mut node_ids, pending.len() + terminals.len())?;
                let mut payoffs = Vec::new();
                for v in body.split(',') {
                    let v = v.trim();
                    let Some(q) = parse_rational(v) else {
                        return Err(Error::syntax(line_no, column_of(line, v), format!("bad payoff `{v}`")));
                    };
                    payoffs.push(q);
                }
                if payoffs.len() != players.len() {
                    return Err(Error::ArityMismatch {
                        pos: Pos { line: line_no, column: column_of(line, ":") + 1 },
                        expected: players.len(),
                        found: payoffs.len(),
                    });
                }
                terminals.push((xname.to_string(), payoffs));
            }
        }
    }
    if !saw_content {
        return Err(Error::syntax(1, 1, "empty game description"));
    }
    if players.is_empty() {
        return Err(Error::syntax(1, 1, "missing [players] section"));
    }
    if pending.is_empty() && terminals.is_empty() {
        return Err(Error::syntax(1, 1, "the game has no nodes"));
    }

    // Decision nodes take the first ids, terminals the rest, both in file order.
    let mut ids = HashMap::new();
    for (k, p) in pending.iter().enumerate() {
        ids.insert(p.name.clone(), k);
    }
    for (k, (n, _)) in terminals.iter().enumerate() {
        ids.insert(n.clone(), pending.len() + k);
    }
    let mut nodes = Vec::with_capacity(ids.len());
    for p in &pending {
        let info = &infosets[p.infoset];
        let mut children = vec![None; info.actions.len()];
        for (a, c) in &p.edges {
            let Some(slot) = info.actions.iter().position(|x| x == a) else {
                return Err(Error::UnknownIdentifier {
                    pos: Pos { line: p.line, column: column_of(&p.text, a) },
                    name: a.clone(),
                });
            };
            if children[slot].is_some() {
                return Err(Error::syntax(p.line, column_of(&p.text, a), format!("action `{a}` used twice")));
            }
            let Some(&cid) = ids.get(c) else {
                return Err(Error::UnknownIdentifier {
                    pos: Pos { line: p.line, column: column_of(&p.text, c) },
                    name: c.clone(),
                });
            };
            children[slot] = Some(cid);
        }
        if let Some(missing) = children.iter().position(Option::is_none) {
            return Err(Error::syntax(
                p.line,
                column_of(&p.text, &p.name),
                format!("node `{}` has no child for action `{}`", p.name, info.actions[missing]),
            ));
        }
        nodes.push(Node {
            name: p.name.clone(),
            kind: NodeKind::Decision { infoset: p.infoset, children: children.into_iter().flatten().collect() },
        });
    }
    for (n, payoffs) in terminals {
        nodes.push(Node { name: n, kind: NodeKind::Terminal { payoffs } });
    }
    let root = match root_name {
        Some((line, r)) => *ids.get(&r).ok_or(Error::UnknownIdentifier {
            pos: Pos { line, column: 1 },
            name: r.clone(),
        })?,
        None => 0,
    };
    Ok(GameTree { name, players, infosets, nodes, root })
}

fn split_colon<'a>(line_no: usize, line: &str, t: &'a str) -> Result<(&'a str, &'a str)> {
    t.split_once(':')
        .ok_or_else(|| Error::syntax(line_no, column_of(line, t), "missing `:`"))
}

fn check_node_name(
    line_no: usize,
    line: &str,
    name: &str,
    seen: &mut HashMap<String, usize>,
    next: usize,
) -> Result<()> {
    if !is_ident(name) {
        return Err(Error::syntax(line_no, column_of(line, name), format!("bad node name `{name}`")));
    }
    if seen.insert(name.to_string(), next).is_some() {
        return Err(Error::syntax(line_no, column_of(line, name), format!("node `{name}` declared twice")));
    }
    Ok(())
}

/// Writes a game in the format read by [`parse_game_tree`].
pub fn serialize_game(tree: &GameTree) -> String {
    let mut out = String::new();
    out.push_str("[game]\n");
    if !tree.name.is_empty() {
        out.push_str(&format!("name = {}\n", tree.name));
    }
    out.push_str(&format!("root = {}\n", tree.nodes[tree.root].name));
    out.push_str("\n[players]\n");
    for p in &tree.players {
        out.push_str(p);
        out.push('\n');
    }
    out.push_str("\n[infosets]\n");
    for h in &tree.infosets {
        out.push_str(&format!("{} {} : {}\n", h.name, tree.players[h.owner], h.actions.join(" ")));
    }
    out.push_str("\n[nodes]\n");
    for n in &tree.nodes {
        if let NodeKind::Decision { infoset, children } = &n.kind {
            let h = &tree.infosets[*infoset];
            let edges: Vec<String> = h
                .actions
                .iter()
                .zip(children)
                .map(|(a, &c)| format!("{a} -> {}", tree.nodes[c].name))
                .collect();
            out.push_str(&format!("{} {} : {}\n", n.name, h.name, edges.join(", ")));
        }
    }
    out.push_str("\n[terminals]\n");
    for n in &tree.nodes {
        if let NodeKind::Terminal { payoffs } = &n.kind {
            let vals: Vec<String> = payoffs.iter().map(format_q_decimal).collect();
            out.push_str(&format!("{} : {}\n", n.name, vals.join(", ")));
        }
    }
    out
}
