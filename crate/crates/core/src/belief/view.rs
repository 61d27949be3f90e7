use crate::game::{mask_members, Game, InfosetId, PlayerId, StrategyId};
use crate::num::Q;

/// Everything about one player's belief space: the opponents' profile space
/// `S_{-i}`, the conditioning events `S_{-i}(h)`, their containment order and
/// the player's payoffs against each opponent profile.
///
/// Information sets with the same conditioning event are merged into one
/// event: a CPS assigns them the same conditional.
#[derive(Debug, Clone)]
pub struct PlayerView {
    pub player: PlayerId,
    pub others: Vec<PlayerId>,
    radices: Vec<usize>,
    pub size: usize,
    pub infosets: Vec<InfosetId>,
    pub events: Vec<Vec<usize>>,
    pub event_masks: Vec<Vec<bool>>,
    pub infoset_event: Vec<usize>,
    /// Immediate strict supersets of each event.
    pub parents: Vec<Vec<usize>>,
    /// Every strict superset of each event.
    pub supersets: Vec<Vec<usize>>,
    /// True when the supersets of every event are totally ordered.
    pub chain: bool,
    /// `u_i(ζ(s_i, s_{-i}))` indexed `[s_i][opponent profile]`.
    pub utility: Vec<Vec<Q>>,
    /// `S_i(h)` per position in `infosets`.
    pub own_reach: Vec<Vec<bool>>,
    opp_strats: Vec<Vec<StrategyId>>,
}

impl PlayerView {
    pub fn new(game: &Game, player: PlayerId) -> Self {
        let others: Vec<PlayerId> = (0..game.num_players()).filter(|&j| j != player).collect();
        let radices: Vec<usize> = others.iter().map(|&j| game.num_strategies(j)).collect();
        let size: usize = radices.iter().product();
        let opp_strats: Vec<Vec<StrategyId>> = (0..size)
            .map(|mut k| {
                let mut out = vec![0; radices.len()];
                for p in (0..radices.len()).rev() {
                    out[p] = k % radices[p];
                    k /= radices[p];
                }
                out
            })
            .collect();

        let infosets = game.infosets_of(player).to_vec();
        let mut events: Vec<Vec<usize>> = Vec::new();
        let mut infoset_event = Vec::with_capacity(infosets.len());
        for &h in &infosets {
            let ev: Vec<usize> = (0..size)
                .filter(|&k| {
                    game.infoset_nodes(h).iter().any(|&x| {
                        others
                            .iter()
                            .zip(&opp_strats[k])
                            .all(|(&j, &s)| game.node_reach(x, j)[s])
                    })
                })
                .collect();
            match events.iter().position(|e| *e == ev) {
                Some(e) => infoset_event.push(e),
                None => {
                    infoset_event.push(events.len());
                    events.push(ev);
                }
            }
        }
        let event_masks: Vec<Vec<bool>> = events
            .iter()
            .map(|e| {
                let mut m = vec![false; size];
                for &k in e {
                    m[k] = true;
                }
                m
            })
            .collect();
        let subset = |a: usize, b: usize| events[a].iter().all(|&k| event_masks[b][k]);
        let ne = events.len();
        let supersets: Vec<Vec<usize>> = (0..ne)
            .map(|e| (0..ne).filter(|&f| f != e && subset(e, f)).collect())
            .collect();
        let parents: Vec<Vec<usize>> = (0..ne)
            .map(|e| {
                supersets[e]
                    .iter()
                    .copied()
                    .filter(|&f| !supersets[e].iter().any(|&g| g != f && subset(g, f)))
                    .collect()
            })
            .collect();
        let chain = supersets.iter().all(|sup| {
            sup.iter()
                .all(|&a| sup.iter().all(|&b| a == b || subset(a, b) || subset(b, a)))
        });

        let utility: Vec<Vec<Q>> = (0..game.num_strategies(player))
            .map(|s| {
                (0..size)
                    .map(|k| {
                        let mut profile = vec![0; game.num_players()];
                        profile[player] = s;
                        for (&j, &t) in others.iter().zip(&opp_strats[k]) {
                            profile[j] = t;
                        }
                        game.payoffs(game.outcome(&profile))[player].clone()
                    })
                    .collect()
            })
            .collect();
        let own_reach = infosets.iter().map(|&h| game.reach_mask(h, player).to_vec()).collect();

        PlayerView {
            player,
            others,
            radices,
            size,
            infosets,
            events,
            event_masks,
            infoset_event,
            parents,
            supersets,
            chain,
            utility,
            own_reach,
            opp_strats,
        }
    }

    /// Strategies of each opponent (in `others` order) in profile `k`.
    pub fn opponents_of(&self, k: usize) -> &[StrategyId] {
        &self.opp_strats[k]
    }

    /// Strategy of opponent `j` in profile `k`.
    pub fn strategy_of(&self, k: usize, j: PlayerId) -> StrategyId {
        let p = self.others.iter().position(|&o| o == j).expect("not an opponent");
        self.opp_strats[k][p]
    }

    pub fn encode(&self, strategies: &[StrategyId]) -> usize {
        strategies
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&s, &r)| acc * r + s)
    }

    pub fn position(&self, h: InfosetId) -> Option<usize> {
        self.infosets.iter().position(|&g| g == h)
    }

    pub fn event_of(&self, h: InfosetId) -> usize {
        self.infoset_event[self.position(h).expect("not an own information set")]
    }

    /// `H_i(s_i)` as positions in `infosets`.
    pub fn reached_by(&self, s: StrategyId) -> Vec<usize> {
        (0..self.infosets.len()).filter(|&p| self.own_reach[p][s]).collect()
    }

    pub fn own_reaching(&self, pos: usize) -> Vec<StrategyId> {
        mask_members(&self.own_reach[pos])
    }

    /// Human-readable name of opponent profile `k`, e.g. `(B.I, A)`.
    pub fn profile_name(&self, game: &Game, k: usize) -> String {
        let names: Vec<&str> = self
            .others
            .iter()
            .zip(&self.opp_strats[k])
            .map(|(&j, &s)| game.strategy_name(j, s))
            .collect();
        if names.len() == 1 {
            names[0].to_string()
        } else {
            format!("({})", names.join(", "))
        }
    }
}
