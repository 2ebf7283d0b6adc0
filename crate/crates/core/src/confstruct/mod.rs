//! Labelled configuration structures `⟨E, C, ℓ⟩` over finite event sets.
//!
//! Events are stored by index. Each structure keeps its events in a
//! canonical order (depth of first occurrence, then label, then
//! provenance) and its configurations sorted by cardinality, so two
//! structures built the same way compare equal field by field.

mod embed;
mod eventset;
mod export;
mod morphism;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Action, Name};

pub use embed::{embedding, is_isomorphic, is_substructure, is_substructure_with};
pub use eventset::{EventIdx, EventSet, MAX_EVENTS};
pub use export::{ConfStructJson, EventJson};
pub use morphism::{Morphism, MorphismViolation};
pub use ops::{
    coproduct, parallel, parallel_by_definition, prefix, product, sync_label, Pair, Product, Synced,
};

/// Labels carried by events. Blanket-implemented.
pub trait Label: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {}
impl<T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display> Label for T {}

/// How an event came to be: the constructions it passed through, innermost
/// last. Event identity across operations is identity of provenance.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Provenance {
    /// The event a prefix introduces.
    Head,
    /// An event of the structure below a prefix.
    Under(Arc<Provenance>),
    /// Left operand of a coproduct.
    Left(Arc<Provenance>),
    /// Right operand of a coproduct.
    Right(Arc<Provenance>),
    /// A product event; `None` is the `⋆` component.
    Pair(Option<Arc<Provenance>>, Option<Arc<Provenance>>),
    /// Events of hand-built structures.
    Atom(u32),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Event<L> {
    pub label: L,
    pub provenance: Arc<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfError {
    #[error("{0:?} is not a configuration of the structure")]
    NotAConfiguration(EventSet),
    #[error("malformed structure: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Finiteness {
        config: EventSet,
        event: EventIdx,
    },
    CoincidenceFreeness {
        config: EventSet,
        e1: EventIdx,
        e2: EventIdx,
    },
    FiniteCompleteness {
        x: EventSet,
        y: EventSet,
    },
    Stability {
        x: EventSet,
        y: EventSet,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Finiteness { config, event } => {
                write!(
                    f,
                    "finiteness: e{event} in {config:?} has no finite witness"
                )
            }
            AxiomViolation::CoincidenceFreeness { config, e1, e2 } => {
                write!(
                    f,
                    "coincidence-freeness: e{e1} and e{e2} always co-occur below {config:?}"
                )
            }
            AxiomViolation::FiniteCompleteness { x, y } => {
                write!(f, "finite completeness: {x:?} and {y:?} are compatible but their union is missing")
            }
            AxiomViolation::Stability { x, y } => {
                write!(
                    f,
                    "stability: union of {x:?} and {y:?} present but not their intersection"
                )
            }
        }
    }
}

/// A labelled configuration structure.
#[derive(Clone, PartialEq, Eq)]
pub struct ConfStruct<L = Action> {
    events: Vec<Event<L>>,
    configs: Vec<EventSet>,
    index: HashMap<EventSet, usize>,
}

impl<L: Label> ConfStruct<L> {
    /// `⟨∅, {∅}⟩`
    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), vec![EventSet::EMPTY])
    }

    /// Builds a structure from raw parts. Events that occur in no
    /// configuration are dropped and the rest renumbered canonically.
    pub fn from_parts(events: Vec<Event<L>>, configs: Vec<EventSet>) -> Self {
        let mut configs = configs;
        configs.sort();
        configs.dedup();
        let n = events.len();
        let mut depth = vec![usize::MAX; n];
        for x in &configs {
            let k = x.len();
            for e in x.iter() {
                assert!(e < n, "configuration mentions unknown event e{e}");
                depth[e] = depth[e].min(k);
            }
        }
        let mut order: Vec<EventIdx> = (0..n).filter(|&e| depth[e] != usize::MAX).collect();
        order.sort_by(|&a, &b| {
            (depth[a], &events[a].label, &events[a].provenance).cmp(&(
                depth[b],
                &events[b].label,
                &events[b].provenance,
            ))
        });
        let mut renumber = vec![None; n];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = Some(new);
        }
        let events: Vec<Event<L>> = order.iter().map(|&e| events[e].clone()).collect();
        let mut configs: Vec<EventSet> = configs.iter().map(|x| x.map(|e| renumber[e])).collect();
        configs.sort();
        let index = configs.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        ConfStruct {
            events,
            configs,
            index,
        }
    }

    /// Hand-built structure: event `i` gets `labels[i]`.
    pub fn from_labels(labels: Vec<L>, configs: Vec<Vec<EventIdx>>) -> Self {
        let events = labels
            .into_iter()
            .enumerate()
            .map(|(i, label)| Event {
                label,
                provenance: Arc::new(Provenance::Atom(i as u32)),
            })
            .collect();
        Self::from_parts(
            events,
            configs
                .into_iter()
                .map(|x| x.into_iter().collect())
                .collect(),
        )
    }

    pub fn events(&self) -> &[Event<L>] {
        &self.events
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn label(&self, e: EventIdx) -> &L {
        &self.events[e].label
    }

    pub fn provenance(&self, e: EventIdx) -> &Arc<Provenance> {
        &self.events[e].provenance
    }

    pub fn configurations(&self) -> &[EventSet] {
        &self.configs
    }

    pub fn num_configurations(&self) -> usize {
        self.configs.len()
    }

    pub fn contains(&self, x: &EventSet) -> bool {
        self.index.contains_key(x)
    }

    pub fn config_index(&self, x: &EventSet) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// The event whose provenance is `p`, if any.
    pub fn find_event(&self, p: &Provenance) -> Option<EventIdx> {
        self.events.iter().position(|e| *e.provenance == *p)
    }

    /// Cardinality of the largest configuration.
    pub fn max_cardinality(&self) -> usize {
        self.configs.iter().map(EventSet::len).max().unwrap_or(0)
    }

    fn check(&self, x: &EventSet) -> Result<(), ConfError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(ConfError::NotAConfiguration(*x))
        }
    }

    /// Events `e ∉ x` with `x ∪ {e}` a configuration.
    pub fn extensions(&self, x: &EventSet) -> Vec<EventIdx> {
        (0..self.events.len())
            .filter(|&e| !x.contains(e) && self.contains(&x.with(e)))
            .collect()
    }

    /// Events `e ∈ x` with `x ∖ {e}` a configuration.
    pub fn retractions(&self, x: &EventSet) -> Vec<EventIdx> {
        x.iter().filter(|&e| self.contains(&x.without(e))).collect()
    }

    /// Forward and backward single-event moves from `x`.
    pub fn transitions(&self, x: &EventSet) -> Result<Transitions, ConfError> {
        self.check(x)?;
        Ok(Transitions {
            forward: self.extensions(x),
            backward: self.retractions(x),
        })
    }

    /// Events whose singleton is a configuration.
    pub fn minimal_events(&self) -> Vec<EventIdx> {
        self.extensions(&EventSet::EMPTY)
    }

    /// Checks the four axioms; each violation carries a witness.
    pub fn validate(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        // Every configuration is finite here, so each event is witnessed by
        // the configuration itself; the check still runs literally.
        for x in &self.configs {
            for e in x.iter() {
                let witnessed = self.configs.iter().any(|z| z.contains(e) && z.is_subset(x));
                if !witnessed {
                    out.push(AxiomViolation::Finiteness {
                        config: *x,
                        event: e,
                    });
                }
            }
        }
        for x in &self.configs {
            let subs: Vec<&EventSet> = self.configs.iter().filter(|z| z.is_subset(x)).collect();
            let members = x.to_vec();
            for (i, &e1) in members.iter().enumerate() {
                for &e2 in &members[i + 1..] {
                    if !subs.iter().any(|z| z.contains(e1) != z.contains(e2)) {
                        out.push(AxiomViolation::CoincidenceFreeness { config: *x, e1, e2 });
                    }
                }
            }
        }
        let maximal: Vec<&EventSet> = self
            .configs
            .iter()
            .filter(|x| !self.configs.iter().any(|y| y != *x && x.is_subset(y)))
            .collect();
        for (i, x) in self.configs.iter().enumerate() {
            for y in &self.configs[i..] {
                let u = x.union(y);
                let present = self.contains(&u);
                if !present && maximal.iter().any(|m| u.is_subset(m)) {
                    out.push(AxiomViolation::FiniteCompleteness { x: *x, y: *y });
                }
                if present && !self.contains(&x.intersection(y)) {
                    out.push(AxiomViolation::Stability { x: *x, y: *y });
                }
            }
        }
        // The empty family of configurations is compatible whenever C is
        // non-empty, so its union ∅ must be present.
        if !self.configs.is_empty() && !self.contains(&EventSet::EMPTY) {
            out.push(AxiomViolation::FiniteCompleteness {
                x: EventSet::EMPTY,
                y: EventSet::EMPTY,
            });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `e1 ≤_x e2` for all events of `x`.
    pub fn causal_order(&self, x: &EventSet) -> Result<CausalOrder, ConfError> {
        self.check(x)?;
        let members = x.to_vec();
        let subs: Vec<&EventSet> = self.configs.iter().filter(|z| z.is_subset(x)).collect();
        let below = members
            .iter()
            .map(|&e2| {
                subs.iter()
                    .filter(|z| z.contains(e2))
                    .fold(*x, |acc, z| acc.intersection(z))
            })
            .collect();
        Ok(CausalOrder { members, below })
    }

    /// `C ∖ x`: the futures of `x`.
    pub fn residual(&self, x: &EventSet) -> Result<Self, ConfError> {
        self.check(x)?;
        let configs = self
            .configs
            .iter()
            .filter(|y| x.is_subset(y))
            .map(|y| y.difference(x))
            .collect();
        Ok(Self::from_parts(self.events.clone(), configs))
    }

    /// `C ↾ E′`: configurations lying entirely inside `keep`.
    pub fn restrict_events(&self, keep: &EventSet) -> Self {
        let configs = self
            .configs
            .iter()
            .filter(|x| x.is_subset(keep))
            .copied()
            .collect();
        Self::from_parts(self.events.clone(), configs)
    }

    pub fn relabel<M: Label>(&self, f: impl Fn(&L) -> M) -> ConfStruct<M> {
        let events = self
            .events
            .iter()
            .map(|e| Event {
                label: f(&e.label),
                provenance: e.provenance.clone(),
            })
            .collect();
        ConfStruct::from_parts(events, self.configs.clone())
    }

    /// Events whose label satisfies `keep`, as a set.
    pub fn events_where(&self, keep: impl Fn(&L) -> bool) -> EventSet {
        (0..self.events.len())
            .filter(|&e| keep(&self.events[e].label))
            .collect()
    }

    /// Covering pairs `(x, e)` with `x ∪ {e}` a configuration.
    pub fn covering_edges(&self) -> Vec<(EventSet, EventIdx)> {
        let mut out = Vec::new();
        for x in &self.configs {
            for e in self.extensions(x) {
                out.push((*x, e));
            }
        }
        out
    }
}

impl ConfStruct<Action> {
    /// Removes the events whose visible label is on channel `a`.
    pub fn restrict_name(&self, a: &Name) -> Self {
        let keep = self.events_where(|l| !l.mentions(a));
        self.restrict_events(&keep)
    }

    /// Visible labels enabled at `x`.
    pub fn barbs(&self, x: &EventSet) -> Vec<Action> {
        let mut out: Vec<Action> = self
            .extensions(x)
            .into_iter()
            .map(|e| self.label(e).clone())
            .filter(|l| !l.is_tau())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl<L: Label> fmt::Debug for ConfStruct<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "e{i}:{}", e.label)?;
        }
        f.write_str(" | ")?;
        for (i, x) in self.configs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x:?}")?;
        }
        f.write_str("⟩")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transitions {
    pub forward: Vec<EventIdx>,
    pub backward: Vec<EventIdx>,
}

/// The causal order `≤_x` on the events of one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalOrder {
    members: Vec<EventIdx>,
    /// `below[i]`: events `≤_x members[i]`.
    below: Vec<EventSet>,
}

impl CausalOrder {
    pub fn members(&self) -> &[EventIdx] {
        &self.members
    }

    fn slot(&self, e: EventIdx) -> usize {
        self.members
            .iter()
            .position(|&m| m == e)
            .unwrap_or_else(|| panic!("e{e} is not in the configuration"))
    }

    pub fn leq(&self, e1: EventIdx, e2: EventIdx) -> bool {
        self.below[self.slot(e2)].contains(e1)
    }

    pub fn lt(&self, e1: EventIdx, e2: EventIdx) -> bool {
        e1 != e2 && self.leq(e1, e2)
    }

    /// Events strictly below `e`.
    pub fn causes(&self, e: EventIdx) -> EventSet {
        self.below[self.slot(e)].without(e)
    }

    /// Length of the longest causal chain ending at `e`, counting `e`.
    pub fn depth(&self, e: EventIdx) -> usize {
        1 + self
            .causes(e)
            .iter()
            .map(|c| self.depth(c))
            .max()
            .unwrap_or(0)
    }
}
