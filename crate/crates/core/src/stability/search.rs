use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::normal_form::{is_nash, MixedProfile, NormalForm};
use super::perturb::PerturbationSpec;
use crate::error::{Error, Result};
use crate::game::{Game, NodeId};

/// What the equilibrium should be close to.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSet {
    /// Finitely many mixed profiles. Distance is the max-norm over
    /// outcome-equivalence classes of each player's strategies.
    Profiles {
        profiles: Vec<MixedProfile>,
        classes: Vec<Vec<Vec<usize>>>,
    },
    /// Every profile inducing terminal `node`. Distance is the largest
    /// probability any player puts on strategies that exclude the node, a
    /// lower bound on the max-norm distance to any such profile.
    Outcome { node: NodeId, allows: Vec<Vec<bool>> },
}

impl TargetSet {
    pub fn profiles(game: &Game, profiles: Vec<MixedProfile>) -> Self {
        TargetSet::Profiles {
            profiles,
            classes: (0..game.num_players()).map(|i| game.equivalence_classes(i)).collect(),
        }
    }

    pub fn outcome(game: &Game, node: NodeId) -> Self {
        TargetSet::Outcome {
            node,
            allows: (0..game.num_players()).map(|i| game.node_reach(node, i).to_vec()).collect(),
        }
    }
}

/// Distance from probabilities over original strategies to the target.
pub fn distance(target: &TargetSet, induced: &MixedProfile) -> f64 {
    match target {
        TargetSet::Profiles { profiles, classes } => profiles
            .iter()
            .map(|sigma| {
                classes
                    .iter()
                    .enumerate()
                    .flat_map(|(i, cs)| {
                        cs.iter().map(move |c| {
                            let a: f64 = c.iter().map(|&s| induced[i][s]).sum();
                            let b: f64 = c.iter().map(|&s| sigma[i][s]).sum();
                            (a - b).abs()
                        })
                    })
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min),
        TargetSet::Outcome { allows, .. } => induced
            .iter()
            .zip(allows)
            .map(|(w, a)| w.iter().zip(a).filter(|(_, &ok)| !ok).map(|(p, _)| p).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub max_support: usize,
    /// Regret allowed in the perturbed game.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_support: 3, tolerance: 1e-9, max_iterations: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearEquilibrium {
    /// Equilibrium of the perturbed game.
    pub tau: MixedProfile,
    /// Its probabilities over the original strategies.
    pub induced: MixedProfile,
    pub distance: f64,
    pub max_regret: f64,
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..1 << n)
        .filter(|m| (m.count_ones() as usize) <= max)
        .map(|m| (0..n).filter(|&b| m >> b & 1 == 1).collect())
        .collect();
    out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    out
}

/// Supports that cannot possibly end within `eps` of the target.
fn hopeless(target: &TargetSet, spec: &PerturbationSpec, i: usize, support: &[usize], eps: f64) -> bool {
    match target {
        TargetSet::Profiles { profiles, classes } => profiles.iter().all(|sigma| {
            classes[i].iter().any(|c| {
                let w: f64 = c.iter().map(|&s| sigma[i][s]).sum();
                w - spec.deltas[i] > eps && !c.iter().any(|s| support.contains(s))
            })
        }),
        TargetSet::Outcome { allows, .. } => !support.iter().any(|&s| allows[i][s]),
    }
}

struct Layout {
    supports: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn profile(&self, nf: &NormalForm, x: &DVector<f64>) -> MixedProfile {
        self.supports
            .iter()
            .enumerate()
            .map(|(i, sup)| {
                let mut w = vec![0.0; nf.num_strategies(i)];
                for (m, &s) in sup.iter().enumerate() {
                    w[s] = x[self.offsets[i] + m];
                }
                w
            })
            .collect()
    }
}

/// Indifference on the support, no profitable deviation off it,
/// nonnegativity and normalization; all zero exactly at an equilibrium with
/// that support.
fn residuals(nf: &NormalForm, layout: &Layout, x: &DVector<f64>) -> DVector<f64> {
    let profile = layout.profile(nf, x);
    let mut r = Vec::new();
    for (i, sup) in layout.supports.iter().enumerate() {
        let dev = nf.deviation_payoffs(&profile, i);
        let base = dev[sup[0]];
        for &s in &sup[1..] {
            r.push(dev[s] - base);
        }
        for (t, &u) in dev.iter().enumerate() {
            if !sup.contains(&t) {
                r.push((u - base).max(0.0));
            }
        }
        let total: f64 = sup.iter().enumerate().map(|(m, _)| x[layout.offsets[i] + m]).sum();
        r.push(total - 1.0);
        for m in 0..sup.len() {
            r.push((-x[layout.offsets[i] + m]).max(0.0));
        }
    }
    DVector::from_vec(r)
}

fn levenberg_marquardt(nf: &NormalForm, layout: &Layout, start: DVector<f64>, iterations: usize) -> DVector<f64> {
    let mut x = start;
    let mut r = residuals(nf, layout, &x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let h = 1e-7;
    for _ in 0..iterations {
        if cost < 1e-28 {
            break;
        }
        let mut jac = DMatrix::zeros(r.len(), layout.len);
        for v in 0..layout.len {
            let mut xp = x.clone();
            xp[v] += h;
            let rp = residuals(nf, layout, &xp);
            jac.set_column(v, &((rp - &r) / h));
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for d in 0..layout.len {
                a[(d, d)] += lambda * (1.0 + jtj[(d, d)]);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 4.0;
                continue;
            };
            let xn = &x + step;
            let rn = residuals(nf, layout, &xn);
            let cn = rn.norm_squared();
            if cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

fn polish(profile: MixedProfile) -> MixedProfile {
    profile
        .into_iter()
        .map(|w| {
            let w: Vec<f64> = w.into_iter().map(|p| p.max(0.0)).collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|p| p / total).collect()
        })
        .collect()
}

/// Start points: the target pulled back through the tremble and restricted
/// to the support, then uniform on the support.
fn starts(target: &TargetSet, spec: &PerturbationSpec, layout: &Layout) -> Vec<DVector<f64>> {
    let uniform = DVector::from_iterator(
        layout.len,
        layout.supports.iter().flat_map(|sup| sup.iter().map(move |_| 1.0 / sup.len() as f64)),
    );
    let mut out = Vec::new();
    if let TargetSet::Profiles { profiles, .. } = target {
        for sigma in profiles {
            let x = layout.supports.iter().enumerate().flat_map(|(i, sup)| {
                let d = spec.deltas[i];
                let raw: Vec<f64> = sup
                    .iter()
                    .map(|&s| ((sigma[i][s] - d * spec.sigma[i][s]) / (1.0 - d)).max(0.0))
                    .collect();
                let total: f64 = raw.iter().sum();
                let n = sup.len() as f64;
                raw.into_iter().map(move |v| if total > 0.0 { v / total } else { 1.0 / n })
            });
            out.push(DVector::from_iterator(layout.len, x));
        }
    }
    out.push(uniform);
    out
}

/// Support enumeration (at most `options.max_support` strategies per player)
/// for an equilibrium of the perturbed game whose induced probabilities lie
/// within `eps` of the target. Each support is solved by Levenberg-Marquardt
/// and accepted only after an independent regret check.
pub fn find_equilibrium_near(
    perturbed: &NormalForm,
    spec: &PerturbationSpec,
    target: &TargetSet,
    eps: f64,
    options: &SearchOptions,
) -> Result<Option<NearEquilibrium>> {
    if options.max_support > 3 {
        return Err(Error::SearchBudgetExceeded(format!(
            "supports of {} strategies per player",
            options.max_support
        )));
    }
    let n = perturbed.num_players();
    let per_player: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            subsets(perturbed.num_strategies(i), options.max_support)
                .into_iter()
                .filter(|sup| !hopeless(target, spec, i, sup, eps))
                .collect()
        })
        .collect();
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for lists in &per_player {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..lists.len()).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    let found = super::super::solvers::worker_pool().install(|| {
        combos.par_iter().find_map_first(|combo| {
            let supports: Vec<Vec<usize>> = combo.iter().enumerate().map(|(i, &k)| per_player[i][k].clone()).collect();
            let mut offsets = Vec::with_capacity(n);
            let mut len = 0;
            for sup in &supports {
                offsets.push(len);
                len += sup.len();
            }
            let layout = Layout { supports, offsets, len };
            starts(target, spec, &layout).into_iter().find_map(|x0| {
                let x = levenberg_marquardt(perturbed, &layout, x0, options.max_iterations);
                let tau = polish(layout.profile(perturbed, &x));
                let report = is_nash(perturbed, &tau, options.tolerance);
                if !report.is_nash {
                    return None;
                }
                let induced = spec.induced(&tau);
                let d = distance(target, &induced);
                (d <= eps).then(|| NearEquilibrium {
                    max_regret: report.max_regret(),
                    tau,
                    induced,
                    distance: d,
                })
            })
        })
    });
    Ok(found)
}
