use std::fmt;

use super::{GameTree, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PerfectRecall { infoset: String, nodes: Vec<String> },
    MalformedInfoSet { infoset: String, detail: String },
    DanglingNode { node: String, detail: String },
    Malformed { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PerfectRecall { infoset, nodes } => write!(
                f,
                "PerfectRecallViolation: information set `{infoset}` pools nodes with different own histories ({})",
                nodes.join(", ")
            ),
            Violation::MalformedInfoSet { infoset, detail } => {
                write!(f, "MalformedInfoSet: `{infoset}`: {detail}")
            }
            Violation::DanglingNode { node, detail } => {
                write!(f, "DanglingNode: `{node}`: {detail}")
            }
            Violation::Malformed { detail } => write!(f, "Malformed: {detail}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a game tree and, when the structure is
/// sound, perfect recall.
pub fn validate(tree: &GameTree) -> ValidationReport {
    let mut out = Vec::new();
    let n = tree.nodes.len();
    if tree.players.is_empty() {
        out.push(Violation::Malformed {
            detail: "the game has no players".into(),
        });
    }
    if tree.root >= n {
        out.push(Violation::Malformed {
            detail: "the root node does not exist".into(),
        });
        return ValidationReport { violations: out };
    }

    for h in &tree.infosets {
        if h.owner >= tree.players.len() {
            out.push(Violation::MalformedInfoSet {
                infoset: h.name.clone(),
                detail: "owner is not a player".into(),
            });
        }
        if h.actions.is_empty() {
            out.push(Violation::MalformedInfoSet {
                infoset: h.name.clone(),
                detail: "no actions".into(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for a in &h.actions {
            if !seen.insert(a) {
                out.push(Violation::MalformedInfoSet {
                    infoset: h.name.clone(),
                    detail: format!("action `{a}` listed twice"),
                });
            }
        }
    }

    let mut parents = vec![0usize; n];
    let mut members = vec![0usize; tree.infosets.len()];
    for node in &tree.nodes {
        match &node.kind {
            NodeKind::Decision { infoset, children } => {
                let Some(h) = tree.infosets.get(*infoset) else {
                    out.push(Violation::DanglingNode {
                        node: node.name.clone(),
                        detail: "refers to a missing information set".into(),
                    });
                    continue;
                };
                members[*infoset] += 1;
                if children.len() != h.actions.len() {
                    out.push(Violation::MalformedInfoSet {
                        infoset: h.name.clone(),
                        detail: format!(
                            "node `{}` has {} children for {} actions",
                            node.name,
                            children.len(),
                            h.actions.len()
                        ),
                    });
                }
                for &c in children {
                    if c >= n {
                        out.push(Violation::DanglingNode {
                            node: node.name.clone(),
                            detail: "child does not exist".into(),
                        });
                    } else {
                        parents[c] += 1;
                    }
                }
            }
            NodeKind::Terminal { payoffs } => {
                if payoffs.len() != tree.players.len() {
                    out.push(Violation::Malformed {
                        detail: format!(
                            "terminal `{}` has {} payoffs for {} players",
                            node.name,
                            payoffs.len(),
                            tree.players.len()
                        ),
                    });
                }
            }
        }
    }
    for (k, h) in tree.infosets.iter().enumerate() {
        if members[k] == 0 {
            out.push(Violation::MalformedInfoSet {
                infoset: h.name.clone(),
                detail: "contains no nodes".into(),
            });
        }
    }
    if parents[tree.root] > 0 {
        out.push(Violation::DanglingNode {
            node: tree.nodes[tree.root].name.clone(),
            detail: "the root has a parent".into(),
        });
    }
    for (k, &p) in parents.iter().enumerate() {
        if p > 1 {
            out.push(Violation::DanglingNode {
                node: tree.nodes[k].name.clone(),
                detail: format!("has {p} parents"),
            });
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }

    // Walk from the root, carrying every player's own move sequence.
    type History = Vec<(usize, usize)>;
    let mut seen = vec![false; n];
    let mut history: Vec<Option<Vec<History>>> = vec![None; n];
    let mut stack: Vec<(NodeId, Vec<History>)> =
        vec![(tree.root, vec![Vec::new(); tree.players.len()])];
    while let Some((x, hist)) = stack.pop() {
        seen[x] = true;
        if let NodeKind::Decision { infoset, children } = &tree.nodes[x].kind {
            let owner = tree.infosets[*infoset].owner;
            if hist[owner].iter().any(|&(g, _)| g == *infoset) {
                out.push(Violation::PerfectRecall {
                    infoset: tree.infosets[*infoset].name.clone(),
                    nodes: vec![tree.nodes[x].name.clone()],
                });
            }
            for (a, &c) in children.iter().enumerate() {
                let mut next = hist.clone();
                next[owner].push((*infoset, a));
                stack.push((c, next));
            }
        }
        history[x] = Some(hist);
    }
    for (k, s) in seen.iter().enumerate() {
        if !s {
            out.push(Violation::DanglingNode {
                node: tree.nodes[k].name.clone(),
                detail: "not reachable from the root".into(),
            });
        }
    }

    let mut first: Vec<Option<NodeId>> = vec![None; tree.infosets.len()];
    let mut bad: Vec<Vec<NodeId>> = vec![Vec::new(); tree.infosets.len()];
    for (x, node) in tree.nodes.iter().enumerate() {
        let NodeKind::Decision { infoset, .. } = &node.kind else {
            continue;
        };
        let Some(hist) = &history[x] else { continue };
        let owner = tree.infosets[*infoset].owner;
        match first[*infoset] {
            None => first[*infoset] = Some(x),
            Some(y) => {
                let other = history[y].as_ref().expect("visited");
                if other[owner] != hist[owner] {
                    if bad[*infoset].is_empty() {
                        bad[*infoset].push(y);
                    }
                    bad[*infoset].push(x);
                }
            }
        }
    }
    for (k, nodes) in bad.into_iter().enumerate() {
        if !nodes.is_empty() {
            out.push(Violation::PerfectRecall {
                infoset: tree.infosets[k].name.clone(),
                nodes: nodes.iter().map(|&x| tree.nodes[x].name.clone()).collect(),
            });
        }
    }
    ValidationReport { violations: out }
}
