use super::PlayerView;
use crate::game::{Game, PlayerId};

/// One strong-belief requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MandateItem {
    /// Mass 1 on `set × S_{-i,j}` wherever `set` still allows the
    /// information set (independent rationalization).
    Independent {
        opponent: PlayerId,
        set: Vec<bool>,
        label: String,
    },
    /// Mass 1 on the product of `sets` wherever the product is still
    /// compatible with the conditioning event (correlated strong belief).
    Joint {
        sets: Vec<(PlayerId, Vec<bool>)>,
        label: String,
    },
}

impl MandateItem {
    pub fn label(&self) -> &str {
        match self {
            MandateItem::Independent { label, .. } | MandateItem::Joint { label, .. } => label,
        }
    }
}

/// A list of strong-belief requirements. At each information set the
/// conditional must put mass 1 on the intersection of the active ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportMandate {
    pub items: Vec<MandateItem>,
}

impl SupportMandate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: MandateItem) {
        self.items.push(item);
    }

    pub fn prefix(&self, n: usize) -> SupportMandate {
        SupportMandate {
            items: self.items[..n.min(self.items.len())].to_vec(),
        }
    }

    /// Per event, the opponent profiles a conditional may charge.
    pub fn allowed(&self, game: &Game, view: &PlayerView) -> Vec<Vec<bool>> {
        view.events
            .iter()
            .enumerate()
            .map(|(e, members)| {
                let mut mask = view.event_masks[e].clone();
                let pos = view.infoset_event.iter().position(|&x| x == e).expect("event has an infoset");
                let h = view.infosets[pos];
                for item in &self.items {
                    match item {
                        MandateItem::Independent { opponent, set, .. } => {
                            let active = game
                                .reach_mask(h, *opponent)
                                .iter()
                                .zip(set)
                                .any(|(&r, &m)| r && m);
                            if active {
                                for &k in members {
                                    if !set[view.strategy_of(k, *opponent)] {
                                        mask[k] = false;
                                    }
                                }
                            }
                        }
                        MandateItem::Joint { sets, .. } => {
                            let inside = |k: usize| sets.iter().all(|(j, s)| s[view.strategy_of(k, *j)]);
                            if members.iter().any(|&k| inside(k)) {
                                for &k in members {
                                    if !inside(k) {
                                        mask[k] = false;
                                    }
                                }
                            }
                        }
                    }
                }
                mask
            })
            .collect()
    }
}
