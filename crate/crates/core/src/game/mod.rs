//! Finite extensive-form games with perfect recall and no chance moves, and
//! the combinatorial queries the solvers need: strategies, reachability,
//! precedence and outcomes.

mod validate;

pub use validate::{validate, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::num::Q;

pub type PlayerId = usize;
pub type NodeId = usize;
pub type InfosetId = usize;
pub type StrategyId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoSet {
    pub name: String,
    pub owner: PlayerId,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Decision {
        infoset: InfosetId,
        children: Vec<NodeId>,
    },
    Terminal {
        payoffs: Vec<Q>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
}

/// Raw tree as written in a game file. [`Game::new`] validates and indexes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    pub name: String,
    pub players: Vec<String>,
    pub infosets: Vec<InfoSet>,
    pub nodes: Vec<Node>,
    pub root: NodeId,
}

/// A subset of strategies for every player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProfileSet {
    pub sets: Vec<Vec<bool>>,
}

impl ProfileSet {
    pub fn full(game: &Game) -> Self {
        ProfileSet {
            sets: (0..game.num_players())
                .map(|i| vec![true; game.num_strategies(i)])
                .collect(),
        }
    }

    pub fn from_members(game: &Game, members: &[Vec<StrategyId>]) -> Self {
        let mut out = ProfileSet {
            sets: (0..game.num_players())
                .map(|i| vec![false; game.num_strategies(i)])
                .collect(),
        };
        for (i, m) in members.iter().enumerate() {
            for &s in m {
                out.sets[i][s] = true;
            }
        }
        out
    }

    pub fn members(&self, i: PlayerId) -> Vec<StrategyId> {
        self.sets[i]
            .iter()
            .enumerate()
            .filter_map(|(s, &b)| b.then_some(s))
            .collect()
    }

    pub fn contains(&self, i: PlayerId, s: StrategyId) -> bool {
        self.sets[i][s]
    }

    /// True when some player has no strategy left, i.e. the product is empty.
    pub fn is_empty(&self) -> bool {
        self.sets.iter().any(|s| !s.iter().any(|&b| b))
    }

    pub fn is_subset_of(&self, other: &ProfileSet) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }
}

/// A validated game plus precomputed strategy, reachability and outcome tables.
#[derive(Debug, Clone)]
pub struct Game {
    tree: GameTree,
    infoset_nodes: Vec<Vec<NodeId>>,
    own: Vec<Vec<InfosetId>>,
    own_pos: Vec<usize>,
    strategies: Vec<Vec<Vec<usize>>>,
    strategy_names: Vec<Vec<String>>,
    node_reach: Vec<Vec<Vec<bool>>>,
    infoset_reach: Vec<Vec<Vec<bool>>>,
    ancestors: Vec<Vec<InfosetId>>,
    radices: Vec<usize>,
    outcomes: Vec<NodeId>,
}

impl Game {
    pub fn new(tree: GameTree) -> Result<Self> {
        let report = validate(&tree);
        if !report.is_valid() {
            return Err(Error::Validation(report));
        }
        Ok(Self::index(tree))
    }

    fn index(tree: GameTree) -> Self {
        let np = tree.players.len();
        let mut infoset_nodes = vec![Vec::new(); tree.infosets.len()];
        for (x, node) in tree.nodes.iter().enumerate() {
            if let NodeKind::Decision { infoset, .. } = node.kind {
                infoset_nodes[infoset].push(x);
            }
        }
        let mut own = vec![Vec::new(); np];
        let mut own_pos = vec![0; tree.infosets.len()];
        for (h, info) in tree.infosets.iter().enumerate() {
            own_pos[h] = own[info.owner].len();
            own[info.owner].push(h);
        }

        let mut strategies = Vec::with_capacity(np);
        let mut strategy_names = Vec::with_capacity(np);
        for hs in &own {
            let radices: Vec<usize> = hs.iter().map(|&h| tree.infosets[h].actions.len()).collect();
            let total: usize = radices.iter().product();
            let mut list = Vec::with_capacity(total);
            let mut names = Vec::with_capacity(total);
            for mut k in 0..total {
                let mut choice = vec![0; radices.len()];
                for p in (0..radices.len()).rev() {
                    choice[p] = k % radices[p];
                    k /= radices[p];
                }
                let name = if hs.is_empty() {
                    "-".to_string()
                } else {
                    hs.iter()
                        .zip(&choice)
                        .map(|(&h, &a)| tree.infosets[h].actions[a].as_str())
                        .collect::<Vec<_>>()
                        .join(".")
                };
                list.push(choice);
                names.push(name);
            }
            strategies.push(list);
            strategy_names.push(names);
        }

        let n = tree.nodes.len();
        let mut node_reach: Vec<Vec<Vec<bool>>> = vec![Vec::new(); n];
        let mut ancestors_at: Vec<Vec<InfosetId>> = vec![Vec::new(); n];
        let start: Vec<Vec<bool>> = strategies.iter().map(|s| vec![true; s.len()]).collect();
        let mut stack = vec![(tree.root, start, Vec::<InfosetId>::new())];
        while let Some((x, reach, path)) = stack.pop() {
            if let NodeKind::Decision { infoset, children } = &tree.nodes[x].kind {
                let owner = tree.infosets[*infoset].owner;
                let pos = own_pos[*infoset];
                for (a, &c) in children.iter().enumerate() {
                    let mut next = reach.clone();
                    for (s, keep) in next[owner].iter_mut().enumerate() {
                        *keep = *keep && strategies[owner][s][pos] == a;
                    }
                    let mut p = path.clone();
                    p.push(*infoset);
                    stack.push((c, next, p));
                }
            }
            node_reach[x] = reach;
            ancestors_at[x] = path;
        }

        let mut infoset_reach = Vec::with_capacity(tree.infosets.len());
        let mut ancestors = Vec::with_capacity(tree.infosets.len());
        for (h, info) in tree.infosets.iter().enumerate() {
            let mut masks: Vec<Vec<bool>> = strategies.iter().map(|s| vec![false; s.len()]).collect();
            for &x in &infoset_nodes[h] {
                for (j, m) in masks.iter_mut().enumerate() {
                    for (s, b) in m.iter_mut().enumerate() {
                        *b |= node_reach[x][j][s];
                    }
                }
            }
            infoset_reach.push(masks);
            let x = infoset_nodes[h][0];
            ancestors.push(
                ancestors_at[x]
                    .iter()
                    .copied()
                    .filter(|&g| tree.infosets[g].owner == info.owner)
                    .collect(),
            );
        }

        let radices: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let total: usize = radices.iter().product();
        let mut outcomes = Vec::with_capacity(total);
        let mut profile = vec![0; np];
        for k in 0..total {
            decode_into(&radices, k, &mut profile);
            let mut x = tree.root;
            while let NodeKind::Decision { infoset, children } = &tree.nodes[x].kind {
                let owner = tree.infosets[*infoset].owner;
                x = children[strategies[owner][profile[owner]][own_pos[*infoset]]];
            }
            outcomes.push(x);
        }

        Game {
            tree,
            infoset_nodes,
            own,
            own_pos,
            strategies,
            strategy_names,
            node_reach,
            infoset_reach,
            ancestors,
            radices,
            outcomes,
        }
    }

    pub fn tree(&self) -> &GameTree {
        &self.tree
    }

    pub fn name(&self) -> &str {
        &self.tree.name
    }

    pub fn num_players(&self) -> usize {
        self.tree.players.len()
    }

    pub fn player_name(&self, i: PlayerId) -> &str {
        &self.tree.players[i]
    }

    pub fn player_index(&self, name: &str) -> Option<PlayerId> {
        self.tree.players.iter().position(|p| p == name)
    }

    pub fn infoset(&self, h: InfosetId) -> &InfoSet {
        &self.tree.infosets[h]
    }

    pub fn infoset_index(&self, name: &str) -> Option<InfosetId> {
        self.tree.infosets.iter().position(|h| h.name == name)
    }

    pub fn infoset_nodes(&self, h: InfosetId) -> &[NodeId] {
        &self.infoset_nodes[h]
    }

    pub fn node(&self, x: NodeId) -> &Node {
        &self.tree.nodes[x]
    }

    pub fn node_index(&self, name: &str) -> Option<NodeId> {
        self.tree.nodes.iter().position(|n| n.name == name)
    }

    /// `H_i` in declaration order.
    pub fn infosets_of(&self, i: PlayerId) -> &[InfosetId] {
        &self.own[i]
    }

    pub fn num_strategies(&self, i: PlayerId) -> usize {
        self.strategies[i].len()
    }

    /// Action index chosen at each of `i`'s information sets, in `H_i` order.
    pub fn strategy(&self, i: PlayerId, s: StrategyId) -> &[usize] {
        &self.strategies[i][s]
    }

    pub fn strategy_name(&self, i: PlayerId, s: StrategyId) -> &str {
        &self.strategy_names[i][s]
    }

    pub fn strategy_index(&self, i: PlayerId, name: &str) -> Option<StrategyId> {
        self.strategy_names[i].iter().position(|n| n == name)
    }

    /// Action that strategy `s` of the owner of `h` picks at `h`.
    pub fn action_at(&self, s: StrategyId, h: InfosetId) -> usize {
        let owner = self.tree.infosets[h].owner;
        self.strategies[owner][s][self.own_pos[h]]
    }

    /// Mask of `S_j(x)` for a node `x`.
    pub fn node_reach(&self, x: NodeId, j: PlayerId) -> &[bool] {
        &self.node_reach[x][j]
    }

    /// Mask of `S_j(h)`: strategies of `j` that allow some node of `h`.
    pub fn reach_mask(&self, h: InfosetId, j: PlayerId) -> &[bool] {
        &self.infoset_reach[h][j]
    }

    pub fn strategies_reaching(&self, j: PlayerId, h: InfosetId) -> Vec<StrategyId> {
        mask_members(&self.infoset_reach[h][j])
    }

    /// `H_i(S̄_J)`: information sets of `i` where every listed player still has
    /// a strategy in `sets` that allows the information set.
    pub fn compatible_infosets(&self, i: PlayerId, sets: &ProfileSet, players: &[PlayerId]) -> Vec<InfosetId> {
        self.own[i]
            .iter()
            .copied()
            .filter(|&h| {
                players.iter().all(|&j| {
                    self.infoset_reach[h][j]
                        .iter()
                        .zip(&sets.sets[j])
                        .any(|(&r, &m)| r && m)
                })
            })
            .collect()
    }

    /// `H_i(S̄)` over all players, the form used by the restriction criteria.
    pub fn compatible_with_profile(&self, i: PlayerId, sets: &ProfileSet) -> Vec<InfosetId> {
        let all: Vec<PlayerId> = (0..self.num_players()).collect();
        self.compatible_infosets(i, sets, &all)
    }

    /// Own information sets strictly preceding `h`, from the first one down.
    pub fn own_ancestors(&self, h: InfosetId) -> &[InfosetId] {
        &self.ancestors[h]
    }

    /// `p(h)`: the closest own information set preceding `h`.
    pub fn immediate_predecessor(&self, h: InfosetId) -> Option<InfosetId> {
        self.ancestors[h].last().copied()
    }

    /// `a ≺ b` for two information sets of the same player.
    pub fn precedes(&self, a: InfosetId, b: InfosetId) -> bool {
        self.ancestors[b].contains(&a)
    }

    pub fn profile_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn encode_profile(&self, profile: &[StrategyId]) -> usize {
        profile
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&s, &r)| acc * r + s)
    }

    pub fn decode_profile(&self, k: usize) -> Vec<StrategyId> {
        let mut out = vec![0; self.radices.len()];
        decode_into(&self.radices, k, &mut out);
        out
    }

    /// `ζ(s)`: the terminal node reached by a complete profile.
    pub fn outcome(&self, profile: &[StrategyId]) -> NodeId {
        self.outcomes[self.encode_profile(profile)]
    }

    pub fn outcome_by_index(&self, k: usize) -> NodeId {
        self.outcomes[k]
    }

    pub fn payoffs(&self, z: NodeId) -> &[Q] {
        match &self.tree.nodes[z].kind {
            NodeKind::Terminal { payoffs } => payoffs,
            NodeKind::Decision { .. } => panic!("node {z} is not terminal"),
        }
    }

    pub fn terminals(&self) -> Vec<NodeId> {
        (0..self.tree.nodes.len())
            .filter(|&x| matches!(self.tree.nodes[x].kind, NodeKind::Terminal { .. }))
            .collect()
    }

    /// Terminal nodes reached by some profile in the product of `sets`.
    pub fn outcome_set(&self, sets: &ProfileSet) -> Vec<NodeId> {
        let mut hit = vec![false; self.tree.nodes.len()];
        if !sets.is_empty() {
            let members: Vec<Vec<StrategyId>> = (0..self.num_players()).map(|i| sets.members(i)).collect();
            for_each_product(&members, |p| hit[self.outcome(p)] = true);
        }
        (0..hit.len()).filter(|&x| hit[x]).collect()
    }

    /// Groups of `i`'s strategies that induce the same outcome against every
    /// opponent profile.
    pub fn equivalence_classes(&self, i: PlayerId) -> Vec<Vec<StrategyId>> {
        let mut classes: Vec<Vec<StrategyId>> = Vec::new();
        let mut keys: Vec<Vec<NodeId>> = Vec::new();
        for s in 0..self.num_strategies(i) {
            let key: Vec<NodeId> = (0..self.profile_count())
                .filter(|&k| self.decode_profile(k)[i] == 0)
                .map(|k| {
                    let mut p = self.decode_profile(k);
                    p[i] = s;
                    self.outcome(&p)
                })
                .collect();
            match keys.iter().position(|k| *k == key) {
                Some(c) => classes[c].push(s),
                None => {
                    keys.push(key);
                    classes.push(vec![s]);
                }
            }
        }
        classes
    }
}

fn decode_into(radices: &[usize], mut k: usize, out: &mut [usize]) {
    for p in (0..radices.len()).rev() {
        out[p] = k % radices[p];
        k /= radices[p];
    }
}

pub fn mask_members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k))
        .collect()
}

/// Calls `f` on every element of the Cartesian product of `lists`.
pub fn for_each_product(lists: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0; lists.len()];
    let mut cur: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut p = lists.len();
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < lists[p].len() {
                cur[p] = lists[p][idx[p]];
                break;
            }
            idx[p] = 0;
            cur[p] = lists[p][0];
        }
    }
}
