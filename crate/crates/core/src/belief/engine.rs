//! Exact search for a CPS that satisfies support mandates, linear restrictions
//! and sequential optimality of a candidate strategy.
//!
//! Conditioning events are ordered by inclusion. A pattern marks every edge of
//! that order's Hasse diagram as positive (the child event gets positive
//! probability under the parent's conditional) or zero. Events joined by
//! positive edges share one unnormalized measure `y`, and each conditional is
//! `y` restricted to its event and normalized. With the pattern fixed, the
//! chain rule, mandates, restrictions and optimality are all linear in `y`, so
//! each pattern is one exact LP. When the supersets of every event form a
//! chain this is complete; otherwise it stays sound and the result is flagged
//! as inexact.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{BeliefRestriction, Clause, ConditionalBeliefSystem, PlayerView, SupportMandate};
use crate::error::{Error, Result};
use crate::game::{Game, StrategyId};
use crate::lp::{feasible_point, Problem, Relation};
use crate::num::Q;

pub type CopyId = usize;

const MAX_PATTERN_BITS: usize = 20;

#[derive(Debug, Clone)]
struct Copy {
    allowed: Vec<Vec<bool>>,
    rows: Vec<(usize, Vec<(usize, Q)>, Relation)>,
    candidate: Option<StrategyId>,
}

/// A feasibility question about one or more belief copies of one player.
/// Copy 0 is the CPS being searched for; restrictions may add auxiliary
/// copies tied to it on chosen events.
#[derive(Debug, Clone)]
pub struct Program<'v> {
    game: &'v Game,
    view: &'v PlayerView,
    copies: Vec<Copy>,
    ties: Vec<(CopyId, CopyId, usize)>,
}

impl<'v> Program<'v> {
    pub fn new(game: &'v Game, view: &'v PlayerView) -> Self {
        let mut p = Program {
            game,
            view,
            copies: Vec::new(),
            ties: Vec::new(),
        };
        p.add_copy();
        p
    }

    pub fn game(&self) -> &'v Game {
        self.game
    }

    pub fn view(&self) -> &'v PlayerView {
        self.view
    }

    pub fn add_copy(&mut self) -> CopyId {
        self.copies.push(Copy {
            allowed: self.view.event_masks.clone(),
            rows: Vec::new(),
            candidate: None,
        });
        self.copies.len() - 1
    }

    pub fn restrict_support(&mut self, c: CopyId, mandate: &SupportMandate) {
        let allowed = mandate.allowed(self.game, self.view);
        for (mask, extra) in self.copies[c].allowed.iter_mut().zip(allowed) {
            for (m, x) in mask.iter_mut().zip(extra) {
                *m = *m && x;
            }
        }
    }

    /// Requires `s` to be a sequential best reply to copy `c`.
    pub fn set_candidate(&mut self, c: CopyId, s: StrategyId) {
        self.copies[c].candidate = Some(s);
    }

    pub fn add_clause(&mut self, c: CopyId, clause: &Clause) {
        let e = self.view.event_of(clause.infoset);
        let coefs = self.view.events[e]
            .iter()
            .map(|&k| (k, clause.coef(k) - &clause.rhs))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        self.copies[c].rows.push((e, coefs, clause.rel));
    }

    /// Pins the conditional of copy `c` at event `e` to `dist`.
    pub fn fix_conditional(&mut self, c: CopyId, e: usize, dist: &[(usize, Q)]) {
        let p = |k: usize| {
            dist.iter()
                .find(|(j, _)| *j == k)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Q::zero)
        };
        for &k in &self.view.events[e] {
            let pk = p(k);
            let coefs = self.view.events[e]
                .iter()
                .map(|&t| {
                    let v = if t == k { Q::from_integer(1.into()) - &pk } else { -pk.clone() };
                    (t, v)
                })
                .filter(|(_, v)| !v.is_zero())
                .collect();
            self.copies[c].rows.push((e, coefs, Relation::Eq));
        }
    }

    /// Copies `a` and `b` must have the same conditional at event `e`.
    pub fn tie(&mut self, a: CopyId, b: CopyId, e: usize) {
        self.ties.push((a, b, e));
    }

    pub fn restrict(&mut self, c: CopyId, r: &dyn BeliefRestriction) -> Result<()> {
        r.attach(self, c)
    }

    fn exact(&self) -> bool {
        if !self.view.chain {
            return false;
        }
        // Tied events must have all their supersets tied too; otherwise two
        // copies may disagree on the relative weight of sibling events.
        self.ties.iter().all(|&(a, b, e)| {
            self.view.supersets[e].iter().all(|&f| {
                self.ties
                    .iter()
                    .any(|&(x, y, g)| g == f && ((x, y) == (a, b) || (x, y) == (b, a)))
            })
        })
    }
}

/// Result of a CPS search.
#[derive(Debug, Clone)]
pub struct Search {
    /// The CPS found for copy 0.
    pub witness: Option<ConditionalBeliefSystem>,
    /// CPSs for every copy, copy 0 first, when a witness exists.
    pub copies: Vec<ConditionalBeliefSystem>,
    /// False when a negative answer might be an artifact of the encoding.
    pub exact: bool,
    pub patterns: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Searches every surprise pattern, most-positive first.
pub fn solve_program(program: &Program<'_>) -> Result<Search> {
    let view = program.view;
    let exact = program.exact();
    for copy in &program.copies {
        if copy.allowed.iter().any(|m| !m.iter().any(|&b| b)) {
            return Ok(Search { witness: None, copies: Vec::new(), exact, patterns: 0 });
        }
    }
    let edges: Vec<(usize, usize)> = view
        .parents
        .iter()
        .enumerate()
        .flat_map(|(e, ps)| ps.iter().map(move |&p| (e, p)))
        .collect();
    // Only edges whose child meets the parent's allowed support can be positive.
    let free: Vec<Vec<usize>> = program
        .copies
        .iter()
        .map(|c| {
            (0..edges.len())
                .filter(|&x| {
                    let (child, parent) = edges[x];
                    view.events[child].iter().any(|&k| c.allowed[parent][k])
                })
                .collect()
        })
        .collect();
    let bits: usize = free.iter().map(Vec::len).sum();
    if bits > MAX_PATTERN_BITS {
        return Err(Error::SearchBudgetExceeded(format!(
            "{bits} free links in the conditioning-event order"
        )));
    }
    let mut order: Vec<u32> = (0..1u32 << bits).collect();
    order.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));

    for (tried, mask) in order.into_iter().enumerate() {
        let mut positive: Vec<Vec<bool>> = vec![vec![false; edges.len()]; program.copies.len()];
        let mut bit = 0;
        for (c, fs) in free.iter().enumerate() {
            for &x in fs {
                positive[c][x] = mask >> bit & 1 == 1;
                bit += 1;
            }
        }
        if let Some(copies) = solve_pattern(program, &edges, &positive)? {
            return Ok(Search {
                witness: Some(copies[0].clone()),
                copies,
                exact,
                patterns: tried + 1,
            });
        }
    }
    Ok(Search { witness: None, copies: Vec::new(), exact, patterns: 1 << bits })
}

fn solve_pattern(
    program: &Program<'_>,
    edges: &[(usize, usize)],
    positive: &[Vec<bool>],
) -> Result<Option<Vec<ConditionalBeliefSystem>>> {
    let view = program.view;
    let ne = view.events.len();
    let nc = program.copies.len();
    let size = view.size;

    // Components of each copy, numbered globally.
    let mut comp = vec![vec![0usize; ne]; nc];
    let mut ncomp = 0;
    for c in 0..nc {
        let mut dsu = Dsu::new(ne);
        for (x, &(child, parent)) in edges.iter().enumerate() {
            if positive[c][x] {
                dsu.union(child, parent);
            }
        }
        let mut ids = vec![usize::MAX; ne];
        for e in 0..ne {
            let r = dsu.find(e);
            if ids[r] == usize::MAX {
                ids[r] = ncomp;
                ncomp += 1;
            }
            comp[c][e] = ids[r];
        }
    }

    let mut member = vec![vec![false; size]; ncomp];
    let mut zero = vec![vec![false; size]; ncomp];
    for c in 0..nc {
        for e in 0..ne {
            let g = comp[c][e];
            for &k in &view.events[e] {
                member[g][k] = true;
                if !program.copies[c].allowed[e][k] {
                    zero[g][k] = true;
                }
            }
        }
        for (x, &(child, parent)) in edges.iter().enumerate() {
            if !positive[c][x] {
                let g = comp[c][parent];
                for &k in &view.events[child] {
                    zero[g][k] = true;
                }
            }
        }
    }

    // Variables are (component, profile) pairs; ties identify pairs.
    let key = |g: usize, k: usize| g * size + k;
    let mut vars = Dsu::new(ncomp * size);
    let mut groups = Dsu::new(ncomp);
    for &(a, b, e) in &program.ties {
        let (ga, gb) = (comp[a][e], comp[b][e]);
        groups.union(ga, gb);
        for &k in &view.events[e] {
            vars.union(key(ga, k), key(gb, k));
        }
    }
    let mut root_zero = vec![false; ncomp * size];
    for g in 0..ncomp {
        for k in 0..size {
            if member[g][k] && zero[g][k] {
                let r = vars.find(key(g, k));
                root_zero[r] = true;
            }
        }
    }
    let mut column = vec![usize::MAX; ncomp * size];
    let mut group_of = vec![0usize; ncomp];
    let mut group_ids = vec![usize::MAX; ncomp];
    let mut ngroups = 0;
    for g in 0..ncomp {
        let r = groups.find(g);
        if group_ids[r] == usize::MAX {
            group_ids[r] = ngroups;
            ngroups += 1;
        }
        group_of[g] = group_ids[r];
    }
    let mut problems: Vec<Problem> = (0..ngroups).map(|_| Problem::new(0)).collect();
    for g in 0..ncomp {
        for k in 0..size {
            if !member[g][k] {
                continue;
            }
            let r = vars.find(key(g, k));
            if !root_zero[r] && column[r] == usize::MAX {
                let p = &mut problems[group_of[g]];
                column[r] = p.num_vars;
                p.num_vars += 1;
            }
        }
    }
    let var = |vars: &mut Dsu, g: usize, k: usize| -> Option<usize> {
        let r = vars.find(key(g, k));
        (!root_zero[r]).then_some(column[r])
    };

    let mut seen: Vec<HashSet<(Vec<(usize, Q)>, Relation)>> = vec![HashSet::new(); ngroups];
    let mut push = |problems: &mut Vec<Problem>, grp: usize, mut coefs: Vec<(usize, Q)>, rel: Relation, rhs: Q| {
        coefs.sort_by_key(|(j, _)| *j);
        if rhs.is_zero() && rel == Relation::Ge && coefs.iter().all(|(_, v)| !v.is_negative()) {
            return;
        }
        if rhs.is_zero() && rel == Relation::Le && coefs.iter().all(|(_, v)| !v.is_positive()) {
            return;
        }
        if rhs.is_zero() && coefs.is_empty() {
            return;
        }
        if seen[grp].insert((coefs.clone(), rel)) || !rhs.is_zero() {
            problems[grp].add(coefs, rel, rhs);
        }
    };

    for c in 0..nc {
        for e in 0..ne {
            let g = comp[c][e];
            let coefs: Vec<(usize, Q)> = view.events[e]
                .iter()
                .filter_map(|&k| var(&mut vars, g, k).map(|j| (j, Q::from_integer(1.into()))))
                .collect();
            if coefs.is_empty() {
                return Ok(None);
            }
            push(&mut problems, group_of[g], coefs, Relation::Ge, Q::from_integer(1.into()));
        }
        for (e, row, rel) in &program.copies[c].rows {
            let g = comp[c][*e];
            let coefs = merge(row.iter().filter_map(|(k, v)| var(&mut vars, g, *k).map(|j| (j, v.clone()))));
            push(&mut problems, group_of[g], coefs, *rel, Q::zero());
        }
        if let Some(s) = program.copies[c].candidate {
            for pos in view.reached_by(s) {
                let e = view.infoset_event[pos];
                let g = comp[c][e];
                for t in view.own_reaching(pos) {
                    if t == s {
                        continue;
                    }
                    let coefs = merge(view.events[e].iter().filter_map(|&k| {
                        let d = &view.utility[s][k] - &view.utility[t][k];
                        if d.is_zero() {
                            return None;
                        }
                        var(&mut vars, g, k).map(|j| (j, d))
                    }));
                    push(&mut problems, group_of[g], coefs, Relation::Ge, Q::zero());
                }
            }
        }
    }

    let mut solutions = Vec::with_capacity(ngroups);
    for p in &problems {
        match feasible_point(p) {
            Some(x) => solutions.push(x),
            None => return Ok(None),
        }
    }

    let mut out = Vec::with_capacity(nc);
    for c in 0..nc {
        let mut per_event: Vec<Vec<(usize, Q)>> = Vec::with_capacity(ne);
        for e in 0..ne {
            let g = comp[c][e];
            let vals: Vec<(usize, Q)> = view.events[e]
                .iter()
                .filter_map(|&k| var(&mut vars, g, k).map(|j| (k, solutions[group_of[g]][j].clone())))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            let total = vals.iter().fold(Q::zero(), |acc, (_, v)| acc + v);
            per_event.push(vals.into_iter().map(|(k, v)| (k, v / &total)).collect());
        }
        out.push(ConditionalBeliefSystem {
            owner: view.player,
            beliefs: view.infoset_event.iter().map(|&e| per_event[e].clone()).collect(),
        });
    }
    Ok(Some(out))
}

fn merge(items: impl Iterator<Item = (usize, Q)>) -> Vec<(usize, Q)> {
    let mut v: Vec<(usize, Q)> = items.collect();
    v.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, Q)> = Vec::with_capacity(v.len());
    for (j, c) in v {
        match out.last_mut() {
            Some((lj, lc)) if *lj == j => *lc += c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// The inputs of one admissibility question for player `view.player`.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub candidate: Option<StrategyId>,
    pub mandate: &'a SupportMandate,
    pub restrictions: &'a [Arc<dyn BeliefRestriction>],
}

fn build<'v>(game: &'v Game, view: &'v PlayerView, query: &Query<'_>) -> Result<Program<'v>> {
    let mut program = Program::new(game, view);
    program.restrict_support(0, query.mandate);
    if let Some(s) = query.candidate {
        program.set_candidate(0, s);
    }
    for r in query.restrictions {
        program.restrict(0, r.as_ref())?;
    }
    Ok(program)
}

/// Search without the emptiness diagnosis; the solvers check emptiness of
/// the restrictions once per player instead.
pub(crate) fn search(game: &Game, view: &PlayerView, query: &Query<'_>) -> Result<Search> {
    solve_program(&build(game, view, query)?)
}

/// A CPS satisfying the mandate and the restrictions to which the candidate
/// (if any) is a sequential best reply. Fails with `EmptyPolytope` when the
/// restrictions admit no CPS at all.
pub fn exists_admissible_cps(game: &Game, view: &PlayerView, query: &Query<'_>) -> Result<Search> {
    let found = search(game, view, query)?;
    if found.witness.is_none() && restrictions_are_empty(game, view, query.restrictions)? {
        return Err(Error::EmptyPolytope {
            player: game.player_name(view.player).to_string(),
        });
    }
    Ok(found)
}

/// True when no CPS satisfies the restrictions.
pub fn restrictions_are_empty(
    game: &Game,
    view: &PlayerView,
    restrictions: &[Arc<dyn BeliefRestriction>],
) -> Result<bool> {
    if restrictions.is_empty() {
        return Ok(false);
    }
    let empty = SupportMandate::new();
    let q = Query { candidate: None, mandate: &empty, restrictions };
    Ok(search(game, view, &q)?.witness.is_none())
}
