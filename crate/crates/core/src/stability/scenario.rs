use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use super::normal_form::{check_profile, is_nash, MixedProfile, NormalForm};
use super::perturb::{perturb_game, PerturbationSpec};
use super::search::{find_equilibrium_near, SearchOptions, TargetSet};
use crate::error::{Error, Result};
use crate::game::Game;

type Weights = BTreeMap<String, BTreeMap<String, f64>>;

/// A stability scenario: targets, perturbation families and the checks to
/// run on them.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub scenario: Header,
    #[serde(default)]
    pub target: Vec<TargetDecl>,
    #[serde(default)]
    pub family: Vec<FamilyDecl>,
    #[serde(default)]
    pub nash: Vec<NashDecl>,
    #[serde(default)]
    pub indifference: Vec<IndifferenceDecl>,
    #[serde(default)]
    pub check: Vec<CheckDecl>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub name: String,
    pub epsilon: f64,
    pub delta0: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_support")]
    pub max_support: usize,
}

fn default_tolerance() -> f64 {
    1e-9
}

fn default_support() -> usize {
    3
}

/// Exactly one of `profile`, `members` or `outcome`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TargetDecl {
    pub name: String,
    pub profile: Option<Weights>,
    pub members: Option<Vec<String>>,
    pub outcome: Option<String>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Deltas {
    All(f64),
    PerPlayer(BTreeMap<String, f64>),
}

/// Tremble profile `σ̃` (normalized; unlisted players tremble uniformly) and
/// tremble sizes.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyDecl {
    pub name: String,
    pub delta: Deltas,
    #[serde(default)]
    pub sigma: Weights,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NashDecl {
    pub target: String,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IndifferenceDecl {
    pub target: String,
    pub player: String,
    pub between: [String; 2],
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Found,
    None,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CheckDecl {
    pub target: String,
    pub family: String,
    pub expect: Expect,
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|sp| {
                let before = &text[..sp.start];
                let line = before.matches('\n').count() + 1;
                let column = sp.start - before.rfind('\n').map_or(0, |k| k + 1) + 1;
                (line, column)
            })
            .unwrap_or((1, 1));
        Error::syntax(line, column, e.message().to_string())
    })
}

/// One line of the verdict table.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    pub verdicts: Vec<Verdict>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        let w = self.verdicts.iter().map(|v| v.check.len()).max().unwrap_or(0);
        for v in &self.verdicts {
            writeln!(
                f,
                "  {:<w$}  expected {:<10} observed {:<10} value {:<12.3e} {}",
                v.check,
                v.expected,
                v.observed,
                v.value,
                if v.pass { "PASS" } else { "FAIL" },
            )?;
        }
        Ok(())
    }
}

fn profile_from(nf: &NormalForm, weights: &Weights, fill_uniform: bool) -> Result<MixedProfile> {
    let mut out: MixedProfile = (0..nf.num_players())
        .map(|i| {
            let n = nf.num_strategies(i);
            vec![if fill_uniform && !weights.contains_key(&nf.players[i]) { 1.0 / n as f64 } else { 0.0 }; n]
        })
        .collect();
    for (player, ws) in weights {
        let i = nf
            .player_index(player)
            .ok_or_else(|| Error::Unsupported(format!("unknown player `{player}` in scenario")))?;
        for (s, &w) in ws {
            let k = nf
                .strategy_index(i, s)
                .ok_or_else(|| Error::Unsupported(format!("unknown strategy `{s}` of {player} in scenario")))?;
            out[i][k] = w;
        }
    }
    Ok(out)
}

struct Resolved {
    profiles: BTreeMap<String, Vec<MixedProfile>>,
    targets: BTreeMap<String, TargetSet>,
}

fn resolve_targets(game: &Game, nf: &NormalForm, sc: &Scenario) -> Result<Resolved> {
    let mut profiles: BTreeMap<String, Vec<MixedProfile>> = BTreeMap::new();
    let mut outcomes = BTreeMap::new();
    for t in &sc.target {
        match (&t.profile, &t.members, &t.outcome) {
            (Some(w), None, None) => {
                let p = profile_from(nf, w, false)?;
                check_profile(nf, &p)?;
                profiles.insert(t.name.clone(), vec![p]);
            }
            (None, None, Some(z)) => {
                let node = game
                    .node_index(z)
                    .ok_or_else(|| Error::Unsupported(format!("unknown node `{z}` in target `{}`", t.name)))?;
                outcomes.insert(t.name.clone(), node);
            }
            (None, Some(_), None) => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "target `{}` needs exactly one of profile, members, outcome",
                    t.name
                )))
            }
        }
    }
    for t in &sc.target {
        if let Some(members) = &t.members {
            let mut all = Vec::new();
            for m in members {
                let ps = profiles
                    .get(m)
                    .ok_or_else(|| Error::Unsupported(format!("target `{}` lists unknown profile `{m}`", t.name)))?;
                all.extend(ps.iter().cloned());
            }
            profiles.insert(t.name.clone(), all);
        }
    }
    let mut targets: BTreeMap<String, TargetSet> = profiles
        .iter()
        .map(|(k, ps)| (k.clone(), TargetSet::profiles(game, ps.clone())))
        .collect();
    for (k, node) in outcomes {
        targets.insert(k, TargetSet::outcome(game, node));
    }
    Ok(Resolved { profiles, targets })
}

fn single<'a>(resolved: &'a Resolved, name: &str) -> Result<&'a MixedProfile> {
    match resolved.profiles.get(name).map(Vec::as_slice) {
        Some([p]) => Ok(p),
        _ => Err(Error::Unsupported(format!("`{name}` is not a single-profile target"))),
    }
}

/// Runs every check of the scenario, in file order: Nash checks,
/// indifference checks, then perturbation checks.
pub fn run_scenario(game: &Game, sc: &Scenario) -> Result<ScenarioReport> {
    let nf = NormalForm::from_game(game);
    let resolved = resolve_targets(game, &nf, sc)?;
    let tol = sc.scenario.tolerance;
    let mut verdicts = Vec::new();

    for c in &sc.nash {
        let p = single(&resolved, &c.target)?;
        let report = is_nash(&nf, p, tol);
        verdicts.push(Verdict {
            check: format!("nash {}", c.target),
            expected: "nash".into(),
            observed: if report.is_nash { "nash" } else { "not nash" }.into(),
            value: report.max_regret(),
            pass: report.is_nash,
        });
    }
    for c in &sc.indifference {
        let p = single(&resolved, &c.target)?;
        let i = nf
            .player_index(&c.player)
            .ok_or_else(|| Error::Unsupported(format!("unknown player `{}`", c.player)))?;
        let dev = nf.deviation_payoffs(p, i);
        let idx = |s: &str| {
            nf.strategy_index(i, s)
                .ok_or_else(|| Error::Unsupported(format!("unknown strategy `{s}` of {}", c.player)))
        };
        let gap = (dev[idx(&c.between[0])?] - dev[idx(&c.between[1])?]).abs();
        verdicts.push(Verdict {
            check: format!("indifferent {} {}/{} @ {}", c.player, c.between[0], c.between[1], c.target),
            expected: "indifferent".into(),
            observed: if gap < tol { "indifferent" } else { "strict" }.into(),
            value: gap,
            pass: gap < tol,
        });
    }

    let options = SearchOptions {
        max_support: sc.scenario.max_support,
        tolerance: tol,
        ..SearchOptions::default()
    };
    for c in &sc.check {
        let target = resolved
            .targets
            .get(&c.target)
            .ok_or_else(|| Error::Unsupported(format!("unknown target `{}`", c.target)))?;
        let fam = sc
            .family
            .iter()
            .find(|f| f.name == c.family)
            .ok_or_else(|| Error::Unsupported(format!("unknown family `{}`", c.family)))?;
        let mut sigma = profile_from(&nf, &fam.sigma, true)?;
        for w in &mut sigma {
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|p| *p /= total);
        }
        let deltas = match &fam.delta {
            Deltas::All(d) => vec![*d; nf.num_players()],
            Deltas::PerPlayer(m) => (0..nf.num_players())
                .map(|i| {
                    m.get(&nf.players[i])
                        .copied()
                        .ok_or_else(|| Error::Unsupported(format!("family `{}` lacks a delta for {}", fam.name, nf.players[i])))
                })
                .collect::<Result<_>>()?,
        };
        let spec = PerturbationSpec::new(&nf, sigma, deltas, sc.scenario.delta0)?;
        let perturbed = perturb_game(&nf, &spec);
        let found = find_equilibrium_near(&perturbed, &spec, target, sc.scenario.epsilon, &options)?;
        let observed = if found.is_some() { Expect::Found } else { Expect::None };
        let name = |e: Expect| match e {
            Expect::Found => "found",
            Expect::None => "none",
        };
        verdicts.push(Verdict {
            check: format!("perturbed {} near {}", fam.name, c.target),
            expected: name(c.expect).into(),
            observed: name(observed).into(),
            value: found.map_or(f64::NAN, |f| f.distance),
            pass: observed == c.expect,
        });
    }
    Ok(ScenarioReport { name: sc.scenario.name.clone(), verdicts })
}
