use crate::error::{Error, Result};
use crate::game::{Game, StrategyId};
use crate::num::to_f64;

/// Mixed strategy of each player, indexed `[player][strategy]`.
pub type MixedProfile = Vec<Vec<f64>>;

const SUM_TOLERANCE: f64 = 1e-12;

/// Payoff table of a game over full strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub players: Vec<String>,
    pub strategies: Vec<Vec<String>>,
    radices: Vec<usize>,
    /// `payoffs[profile][player]`, profiles in mixed radix with player 0
    /// most significant.
    payoffs: Vec<Vec<f64>>,
}

impl NormalForm {
    pub fn from_game(game: &Game) -> Self {
        let n = game.num_players();
        NormalForm {
            players: (0..n).map(|i| game.player_name(i).to_string()).collect(),
            strategies: (0..n)
                .map(|i| (0..game.num_strategies(i)).map(|s| game.strategy_name(i, s).to_string()).collect())
                .collect(),
            radices: game.radices().to_vec(),
            payoffs: (0..game.profile_count())
                .map(|k| game.payoffs(game.outcome_by_index(k)).iter().map(to_f64).collect())
                .collect(),
        }
    }

    pub(crate) fn with_payoffs(&self, payoffs: Vec<Vec<f64>>) -> Self {
        NormalForm { payoffs, ..self.clone() }
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_strategies(&self, i: usize) -> usize {
        self.radices[i]
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len()
    }

    pub fn decode(&self, mut k: usize) -> Vec<StrategyId> {
        let mut out = vec![0; self.radices.len()];
        for i in (0..self.radices.len()).rev() {
            out[i] = k % self.radices[i];
            k /= self.radices[i];
        }
        out
    }

    pub fn payoff(&self, k: usize, i: usize) -> f64 {
        self.payoffs[k][i]
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn strategy_index(&self, i: usize, name: &str) -> Option<StrategyId> {
        self.strategies[i].iter().position(|s| s == name)
    }

    /// `u_i(s, σ_{-i})` for every pure strategy `s` of `i`.
    pub fn deviation_payoffs(&self, profile: &MixedProfile, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.radices[i]];
        for k in 0..self.profile_count() {
            let s = self.decode(k);
            let w: f64 = (0..self.num_players())
                .filter(|&j| j != i)
                .map(|j| profile[j][s[j]])
                .product();
            if w != 0.0 {
                out[s[i]] += w * self.payoffs[k][i];
            }
        }
        out
    }
}

/// Every mixed strategy is nonnegative and sums to 1 within `1e-12`.
pub fn check_profile(nf: &NormalForm, profile: &MixedProfile) -> Result<()> {
    if profile.len() != nf.num_players() {
        return Err(Error::PreconditionViolated(format!(
            "expected {} mixed strategies, found {}",
            nf.num_players(),
            profile.len()
        )));
    }
    for (i, w) in profile.iter().enumerate() {
        let sum: f64 = w.iter().sum();
        if w.len() != nf.num_strategies(i) || w.iter().any(|&x| x < 0.0 || !x.is_finite()) || (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::PreconditionViolated(format!(
                "mixed strategy of {} is not a probability vector",
                nf.players[i]
            )));
        }
    }
    Ok(())
}

pub fn expected_utility(nf: &NormalForm, profile: &MixedProfile, i: usize) -> f64 {
    (0..nf.profile_count())
        .map(|k| {
            let s = nf.decode(k);
            let w: f64 = (0..nf.num_players()).map(|j| profile[j][s[j]]).product();
            w * nf.payoff(k, i)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub is_nash: bool,
    /// Best pure-deviation gain per player.
    pub regrets: Vec<f64>,
}

impl NashReport {
    pub fn max_regret(&self) -> f64 {
        self.regrets.iter().copied().fold(0.0, f64::max)
    }
}

pub fn is_nash(nf: &NormalForm, profile: &MixedProfile, tol: f64) -> NashReport {
    let regrets: Vec<f64> = (0..nf.num_players())
        .map(|i| {
            let dev = nf.deviation_payoffs(profile, i);
            let eu: f64 = dev.iter().zip(&profile[i]).map(|(u, p)| u * p).sum();
            dev.iter().fold(f64::NEG_INFINITY, |m, &u| m.max(u)) - eu
        })
        .collect();
    NashReport {
        is_nash: regrets.iter().all(|&r| r <= tol),
        regrets,
    }
}
