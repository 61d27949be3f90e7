use super::normal_form::{check_profile, expected_utility, MixedProfile, NormalForm};
use crate::error::{Error, Result};

/// Every pure strategy `s_i` is replaced by `(1-δ_i)s_i + δ_i σ̃_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    /// Completely mixed `σ̃`.
    pub sigma: MixedProfile,
    pub deltas: Vec<f64>,
    pub delta0: f64,
}

impl PerturbationSpec {
    pub fn new(nf: &NormalForm, sigma: MixedProfile, deltas: Vec<f64>, delta0: f64) -> Result<Self> {
        check_profile(nf, &sigma)?;
        if sigma.iter().flatten().any(|&p| p <= 0.0) {
            return Err(Error::PreconditionViolated("the tremble profile must be completely mixed".into()));
        }
        if deltas.len() != nf.num_players() || deltas.iter().any(|&d| !(0.0..delta0).contains(&d)) {
            return Err(Error::PreconditionViolated(format!(
                "tremble sizes must lie in [0, {delta0})"
            )));
        }
        Ok(PerturbationSpec { sigma, deltas, delta0 })
    }

    /// Probabilities over the original strategies when `tau` is played in
    /// the perturbed game.
    pub fn induced(&self, tau: &MixedProfile) -> MixedProfile {
        tau.iter()
            .zip(&self.sigma)
            .zip(&self.deltas)
            .map(|((t, s), &d)| t.iter().zip(s).map(|(a, b)| (1.0 - d) * a + d * b).collect())
            .collect()
    }

    fn trembled_pure(&self, nf: &NormalForm, pure: &[usize]) -> MixedProfile {
        let tau: MixedProfile = pure
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let mut e = vec![0.0; nf.num_strategies(i)];
                e[s] = 1.0;
                e
            })
            .collect();
        self.induced(&tau)
    }
}

/// The perturbed game: same strategy sets, payoffs of the trembled mixtures.
pub fn perturb_game(nf: &NormalForm, spec: &PerturbationSpec) -> NormalForm {
    let payoffs = (0..nf.profile_count())
        .map(|k| {
            let mixed = spec.trembled_pure(nf, &nf.decode(k));
            (0..nf.num_players()).map(|i| expected_utility(nf, &mixed, i)).collect()
        })
        .collect();
    nf.with_payoffs(payoffs)
}
