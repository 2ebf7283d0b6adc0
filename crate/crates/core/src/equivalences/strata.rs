use std::collections::HashSet;

use super::iso::{bijections, OrderCheck, Orders};
use super::Triple;
use crate::confstruct::{ConfStruct, EventSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrataKind {
    Forward,
    Backward,
}

/// The least stratum at which some configuration of the left structure has
/// no partner in `F_i ∩ B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailingStratum {
    pub index: usize,
    /// `Forward` when already `F_i` has no partner.
    pub kind: StrataKind,
    pub unmatched: Vec<EventSet>,
}

impl FailingStratum {
    /// `F0`, `B2`, …
    pub fn name(&self) -> String {
        let tag = match self.kind {
            StrataKind::Forward => 'F',
            StrataKind::Backward => 'B',
        };
        format!("{tag}{}", self.index)
    }
}

/// `F_0 … F_k` and `B_0 … B_k`, `k` the size of the largest configuration
/// of the left structure. Every triple in stratum `i` relates two
/// configurations of cardinality `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedRelation {
    pub k: usize,
    pub forward: Vec<Vec<Triple>>,
    pub backward: Vec<Vec<Triple>>,
    /// Configurations of the left structure, by cardinality.
    left_configs: Vec<Vec<EventSet>>,
}

/// Builds the strata. `F` is computed from `k` downwards, `B` from `0`
/// upwards on top of `F`. Bijections must preserve labels and carry the
/// causal order of `x₁` into that of `x₂`; the forward and backward clauses
/// are applied from both sides.
pub fn build_stratification(c1: &ConfStruct, c2: &ConfStruct) -> StratifiedRelation {
    let k = c1.max_cardinality();
    let (o1, o2) = (Orders::new(c1), Orders::new(c2));
    let by_card = |c: &ConfStruct, i: usize| -> Vec<EventSet> {
        c.configurations()
            .iter()
            .copied()
            .filter(|x| x.len() == i)
            .collect()
    };
    let candidates: Vec<Vec<Triple>> = (0..=k)
        .map(|i| {
            let mut out = Vec::new();
            for x1 in by_card(c1, i) {
                for x2 in by_card(c2, i) {
                    for f in bijections(&o1, &x1, &o2, &x2, OrderCheck::Preserve) {
                        out.push(Triple { x1, x2, f });
                    }
                }
            }
            out
        })
        .collect();

    let mut forward: Vec<Vec<Triple>> = vec![Vec::new(); k + 1];
    forward[k] = candidates[k].clone();
    for i in (0..k).rev() {
        let above: HashSet<&Triple> = forward[i + 1].iter().collect();
        forward[i] = candidates[i]
            .iter()
            .filter(|t| {
                let ext1 = c1.extensions(&t.x1);
                let ext2 = c2.extensions(&t.x2);
                let left = ext1
                    .iter()
                    .all(|&e1| ext2.iter().any(|&e2| above.contains(&t.extend(e1, e2))));
                let right = ext2
                    .iter()
                    .all(|&e2| ext1.iter().any(|&e1| above.contains(&t.extend(e1, e2))));
                left && right
            })
            .cloned()
            .collect();
    }

    let mut backward: Vec<Vec<Triple>> = vec![Vec::new(); k + 1];
    backward[0] = forward[0].clone();
    for i in 1..=k {
        let below: HashSet<&Triple> = backward[i - 1].iter().collect();
        backward[i] = forward[i]
            .iter()
            .filter(|t| {
                let left = c1.retractions(&t.x1).into_iter().all(|e1| {
                    t.image(e1).is_some_and(|e2| {
                        c2.contains(&t.x2.without(e2)) && below.contains(&t.retract(e1, e2))
                    })
                });
                let right = c2.retractions(&t.x2).into_iter().all(|e2| {
                    t.preimage(e2).is_some_and(|e1| {
                        c1.contains(&t.x1.without(e1)) && below.contains(&t.retract(e1, e2))
                    })
                });
                left && right
            })
            .cloned()
            .collect();
    }
    StratifiedRelation {
        k,
        forward,
        backward,
        left_configs: (0..=k).map(|i| by_card(c1, i)).collect(),
    }
}

impl StratifiedRelation {
    pub fn f(&self, i: usize) -> &[Triple] {
        self.forward.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn b(&self, i: usize) -> &[Triple] {
        self.backward.get(i).map_or(&[], Vec::as_slice)
    }

    /// Distinct `(x₁, x₂)` pairs of a stratum, ignoring `f`.
    pub fn pairs(strat: &[Triple]) -> Vec<(EventSet, EventSet)> {
        let mut out: Vec<_> = strat.iter().map(|t| (t.x1, t.x2)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Whether `x1` has a partner in `F_n ∩ B_n`, `n = |x1|`.
    pub fn matched(&self, x1: &EventSet) -> bool {
        self.b(x1.len()).iter().any(|t| t.x1 == *x1)
    }

    pub fn failing(&self) -> Option<FailingStratum> {
        for (i, configs) in self.left_configs.iter().enumerate() {
            let unmatched: Vec<EventSet> = configs
                .iter()
                .copied()
                .filter(|x| !self.matched(x))
                .collect();
            if unmatched.is_empty() {
                continue;
            }
            let in_f = |x: &EventSet| self.f(i).iter().any(|t| t.x1 == *x);
            let kind = if unmatched.iter().any(|x| !in_f(x)) {
                StrataKind::Forward
            } else {
                StrataKind::Backward
            };
            return Some(FailingStratum {
                index: i,
                kind,
                unmatched,
            });
        }
        None
    }
}
