use super::kernel::SolveTrace;
use crate::game::{Game, NodeId, PlayerId, StrategyId};

/// Set relation between two finite sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusion {
    Equal,
    /// The first is a strict subset of the second.
    FirstInSecond,
    SecondInFirst,
    Disjoint,
    /// Overlapping, neither contains the other.
    NoInclusion,
}

impl Inclusion {
    fn of<T: PartialEq>(a: &[T], b: &[T]) -> Inclusion {
        let a_in_b = a.iter().all(|x| b.contains(x));
        let b_in_a = b.iter().all(|x| a.contains(x));
        // Disjointness wins over the trivial inclusion of an empty set.
        match (a_in_b, b_in_a) {
            (true, true) => Inclusion::Equal,
            _ if a.iter().all(|x| !b.contains(x)) => Inclusion::Disjoint,
            (true, false) => Inclusion::FirstInSecond,
            (false, true) => Inclusion::SecondInFirst,
            _ => Inclusion::NoInclusion,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Inclusion::Equal => "equal",
            Inclusion::FirstInSecond => "first included in second",
            Inclusion::SecondInFirst => "second included in first",
            Inclusion::Disjoint => "disjoint",
            Inclusion::NoInclusion => "no inclusion",
        }
    }
}

/// Strategies present in one trace's round but not the other's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundDiff {
    pub round: usize,
    pub only_first: Vec<(PlayerId, StrategyId)>,
    pub only_second: Vec<(PlayerId, StrategyId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub first: String,
    pub second: String,
    /// One entry per round up to the later fixed point.
    pub rounds: Vec<RoundDiff>,
    pub outcomes_first: Vec<NodeId>,
    pub outcomes_second: Vec<NodeId>,
    pub solutions: Inclusion,
    pub outcomes: Inclusion,
}

impl Comparison {
    pub fn identical_rounds(&self) -> bool {
        self.rounds
            .iter()
            .all(|r| r.only_first.is_empty() && r.only_second.is_empty())
    }
}

pub fn compare(game: &Game, a: &SolveTrace, b: &SolveTrace) -> Comparison {
    let n = a.rounds.len().max(b.rounds.len());
    let rounds = (0..n)
        .map(|r| {
            let (x, y) = (a.round(r), b.round(r));
            let mut only_first = Vec::new();
            let mut only_second = Vec::new();
            for i in 0..game.num_players() {
                for s in 0..game.num_strategies(i) {
                    match (x.sets[i][s], y.sets[i][s]) {
                        (true, false) => only_first.push((i, s)),
                        (false, true) => only_second.push((i, s)),
                        _ => {}
                    }
                }
            }
            RoundDiff { round: r, only_first, only_second }
        })
        .collect();
    let profiles = |t: &SolveTrace| -> Vec<Vec<StrategyId>> {
        let fin = t.final_set();
        if fin.is_empty() {
            return Vec::new();
        }
        let lists: Vec<Vec<usize>> = (0..game.num_players()).map(|i| fin.members(i)).collect();
        let mut out = Vec::new();
        crate::game::for_each_product(&lists, |p| out.push(p.to_vec()));
        out
    };
    Comparison {
        first: a.procedure.clone(),
        second: b.procedure.clone(),
        rounds,
        outcomes_first: a.outcomes.clone(),
        outcomes_second: b.outcomes.clone(),
        solutions: Inclusion::of(&profiles(a), &profiles(b)),
        outcomes: Inclusion::of(&a.outcomes, &b.outcomes),
    }
}

#[cfg(test)]
mod tests {
    use super::Inclusion;

    #[test]
    fn inclusion_verdicts() {
        assert_eq!(Inclusion::of(&[1, 2], &[2, 1]), Inclusion::Equal);
        assert_eq!(Inclusion::of(&[1], &[1, 2]), Inclusion::FirstInSecond);
        assert_eq!(Inclusion::of(&[1, 2, 3], &[3]), Inclusion::SecondInFirst);
        assert_eq!(Inclusion::of(&[1, 2], &[2, 3]), Inclusion::NoInclusion);
        assert_eq!(Inclusion::of(&[1], &[2]), Inclusion::Disjoint);
        assert_eq!(Inclusion::of::<u8>(&[], &[2]), Inclusion::Disjoint);
        assert_eq!(Inclusion::of::<u8>(&[], &[]), Inclusion::Equal);
    }
}
