use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{ConfStruct, Event, EventIdx, EventSet, Label, Morphism, Provenance};
use crate::syntax::Action;

/// `α.C`: a fresh event labelled `α` below every event of `c`.
pub fn prefix<L: Label>(alpha: L, c: &ConfStruct<L>) -> ConfStruct<L> {
    let head = c.num_events();
    let mut events: Vec<Event<L>> = c
        .events()
        .iter()
        .map(|e| Event {
            label: e.label.clone(),
            provenance: Arc::new(Provenance::Under(e.provenance.clone())),
        })
        .collect();
    events.push(Event {
        label: alpha,
        provenance: Arc::new(Provenance::Head),
    });
    let mut configs = vec![EventSet::EMPTY];
    configs.extend(c.configurations().iter().map(|x| x.with(head)));
    ConfStruct::from_parts(events, configs)
}

/// `C₁ + C₂`: disjoint union of events, configurations from one side only.
pub fn coproduct<L: Label>(c1: &ConfStruct<L>, c2: &ConfStruct<L>) -> ConfStruct<L> {
    let offset = c1.num_events();
    let tag = |e: &Event<L>, left: bool| Event {
        label: e.label.clone(),
        provenance: Arc::new(if left {
            Provenance::Left(e.provenance.clone())
        } else {
            Provenance::Right(e.provenance.clone())
        }),
    };
    let mut events: Vec<Event<L>> = c1.events().iter().map(|e| tag(e, true)).collect();
    events.extend(c2.events().iter().map(|e| tag(e, false)));
    let mut configs = vec![EventSet::EMPTY];
    configs.extend(c1.configurations().iter().copied());
    configs.extend(
        c2.configurations()
            .iter()
            .map(|x| x.map(|e| Some(e + offset))),
    );
    ConfStruct::from_parts(events, configs)
}

/// Label of a product event; `None` stands for `⋆`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair<A, B>(pub Option<A>, pub Option<B>);

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        match &self.0 {
            Some(a) => write!(f, "{a}")?,
            None => f.write_str("*")?,
        }
        f.write_str(",")?;
        match &self.1 {
            Some(b) => write!(f, "{b}")?,
            None => f.write_str("*")?,
        }
        f.write_str(")")
    }
}

/// A product together with its two projections.
#[derive(Clone, Debug)]
pub struct Product<A: Label, B: Label> {
    pub structure: ConfStruct<Pair<A, B>>,
    pub left: Morphism,
    pub right: Morphism,
}

/// `C₁ × C₂`, generated from `∅` by single-event extensions.
pub fn product<A: Label, B: Label>(c1: &ConfStruct<A>, c2: &ConfStruct<B>) -> Product<A, B> {
    let structure = grow_product(c1, c2, |l, r| Some(Pair(l.cloned(), r.cloned())));
    let left = projection(&structure, c1, true);
    let right = projection(&structure, c2, false);
    Product {
        structure,
        left,
        right,
    }
}

/// The synchronisation table: `(α,⋆) = α`, `(⋆,α) = α`, `(a,'a) = τ`,
/// anything else is killed (`None`).
pub fn sync_label(l: Option<&Action>, r: Option<&Action>) -> Option<Action> {
    match (l, r) {
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        (Some(a), Some(b)) if a.is_dual_of(b) => Some(Action::Tau),
        _ => None,
    }
}

/// `C₁ ∥ C₂`. Only events surviving the synchronisation table are ever
/// generated; [`parallel_by_definition`] builds the full product first.
pub fn parallel(c1: &ConfStruct<Action>, c2: &ConfStruct<Action>) -> ConfStruct<Action> {
    grow_product(c1, c2, sync_label)
}

/// `((C₁ × C₂) ∘ ℓ) ↾ E`, step by step.
pub fn parallel_by_definition(
    c1: &ConfStruct<Action>,
    c2: &ConfStruct<Action>,
) -> ConfStruct<Action> {
    let prod = product(c1, c2).structure;
    let relabelled = prod.relabel(|p| Synced(sync_label(p.0.as_ref(), p.1.as_ref())));
    let keep = relabelled.events_where(|l| l.0.is_some());
    relabelled
        .restrict_events(&keep)
        .relabel(|l| l.0.clone().expect("killed events were restricted away"))
}

/// A label after the synchronisation table; `None` prints as `0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Synced(pub Option<Action>);

impl fmt::Display for Synced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(a) => write!(f, "{a}"),
            None => f.write_str("0"),
        }
    }
}

/// Product morphism back onto one factor, recovered through provenance.
fn projection<A: Label, B: Label, L: Label>(
    prod: &ConfStruct<Pair<A, B>>,
    factor: &ConfStruct<L>,
    left: bool,
) -> Morphism {
    let by_prov: HashMap<&Provenance, EventIdx> = factor
        .events()
        .iter()
        .enumerate()
        .map(|(i, e)| (&*e.provenance, i))
        .collect();
    let map = prod
        .events()
        .iter()
        .map(|e| match &*e.provenance {
            Provenance::Pair(l, r) => {
                let side = if left { l } else { r };
                side.as_ref().map(|p| by_prov[&**p])
            }
            other => panic!("product event with provenance {other:?}"),
        })
        .collect();
    Morphism::new(map)
}

fn grow_product<A: Label, B: Label, M: Label>(
    c1: &ConfStruct<A>,
    c2: &ConfStruct<B>,
    label: impl Fn(Option<&A>, Option<&B>) -> Option<M>,
) -> ConfStruct<M> {
    let mut events: Vec<Event<M>> = Vec::new();
    let mut ids: HashMap<(Option<EventIdx>, Option<EventIdx>), Option<EventIdx>> = HashMap::new();
    let mut seen: HashMap<EventSet, (EventSet, EventSet)> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(EventSet::EMPTY, (EventSet::EMPTY, EventSet::EMPTY));
    queue.push_back(EventSet::EMPTY);

    while let Some(x) = queue.pop_front() {
        let (x1, x2) = seen[&x];
        let ext1 = c1.extensions(&x1);
        let ext2 = c2.extensions(&x2);
        let mut candidates: Vec<(Option<EventIdx>, Option<EventIdx>)> = Vec::new();
        candidates.extend(ext1.iter().map(|&e| (Some(e), None)));
        candidates.extend(ext2.iter().map(|&e| (None, Some(e))));
        for &e1 in &ext1 {
            for &e2 in &ext2 {
                candidates.push((Some(e1), Some(e2)));
            }
        }
        for pair in candidates {
            let id = *ids.entry(pair).or_insert_with(|| {
                let l = label(pair.0.map(|e| c1.label(e)), pair.1.map(|e| c2.label(e)))?;
                events.push(Event {
                    label: l,
                    provenance: Arc::new(Provenance::Pair(
                        pair.0.map(|e| c1.provenance(e).clone()),
                        pair.1.map(|e| c2.provenance(e).clone()),
                    )),
                });
                Some(events.len() - 1)
            });
            let Some(id) = id else { continue };
            let y = x.with(id);
            if seen.contains_key(&y) {
                continue;
            }
            let y1 = pair.0.map_or(x1, |e| x1.with(e));
            let y2 = pair.1.map_or(x2, |e| x2.with(e));
            seen.insert(y, (y1, y2));
            queue.push_back(y);
        }
    }
    ConfStruct::from_parts(events, seen.into_keys().collect())
}
