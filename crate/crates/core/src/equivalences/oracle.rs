use std::collections::HashSet;

use super::{EquivalenceError, Triple};
use crate::confstruct::{ConfStruct, EventIdx, EventSet};

/// Outcome of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub related: bool,
    /// The largest bisimulation over all triples, whether or not it
    /// contains `(∅, ∅, ∅)`.
    pub relation: Vec<Triple>,
}

/// `a ≤ b` in `x`: every configuration inside `x` that holds `b` holds `a`.
fn below(c: &ConfStruct, x: &EventSet, a: EventIdx, b: EventIdx) -> bool {
    c.configurations()
        .iter()
        .filter(|y| y.is_subset(x) && y.contains(b))
        .all(|y| y.contains(a))
}

fn permutations(items: &[EventIdx]) -> Vec<Vec<EventIdx>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Decides hereditary history preserving bisimilarity by listing every
/// triple `(x₁, x₂, f)` with `f` an isomorphism of labelled orders and
/// pruning, one full round at a time, those that violate a clause.
/// Refuses inputs with more than `bound` events in total.
pub fn hhpb_oracle(
    c1: &ConfStruct,
    c2: &ConfStruct,
    bound: usize,
) -> Result<OracleResult, EquivalenceError> {
    let events = c1.num_events() + c2.num_events();
    if events > bound {
        return Err(EquivalenceError::BoundExceeded { events, bound });
    }
    let mut all: Vec<Triple> = Vec::new();
    for x1 in c1.configurations() {
        let left = x1.to_vec();
        for x2 in c2.configurations().iter().filter(|x2| x2.len() == x1.len()) {
            for image in permutations(&x2.to_vec()) {
                let f: Vec<(EventIdx, EventIdx)> =
                    left.iter().copied().zip(image.iter().copied()).collect();
                let labels = f.iter().all(|&(a, b)| c1.label(a) == c2.label(b));
                let order = f.iter().all(|&(a, b)| {
                    f.iter()
                        .all(|&(p, q)| below(c1, x1, a, p) == below(c2, x2, b, q))
                });
                if labels && order {
                    all.push(Triple {
                        x1: *x1,
                        x2: *x2,
                        f,
                    });
                }
            }
        }
    }

    let mut live: HashSet<Triple> = all.iter().cloned().collect();
    loop {
        let next: HashSet<Triple> = live
            .iter()
            .filter(|t| survives(c1, c2, t, &live))
            .cloned()
            .collect();
        if next.len() == live.len() {
            break;
        }
        live = next;
    }
    let mut relation: Vec<Triple> = live.into_iter().collect();
    relation.sort();
    let related = relation.contains(&Triple::empty());
    Ok(OracleResult { related, relation })
}

fn survives(c1: &ConfStruct, c2: &ConfStruct, t: &Triple, live: &HashSet<Triple>) -> bool {
    let grown = |e1: EventIdx, e2: EventIdx| {
        let mut f = t.f.clone();
        f.push((e1, e2));
        f.sort();
        Triple {
            x1: t.x1.with(e1),
            x2: t.x2.with(e2),
            f,
        }
    };
    let shrunk = |e1: EventIdx, e2: EventIdx| Triple {
        x1: t.x1.without(e1),
        x2: t.x2.without(e2),
        f: t.f.iter().copied().filter(|&p| p != (e1, e2)).collect(),
    };
    let next1: Vec<EventIdx> = (0..c1.num_events())
        .filter(|&e| !t.x1.contains(e) && c1.contains(&t.x1.with(e)))
        .collect();
    let next2: Vec<EventIdx> = (0..c2.num_events())
        .filter(|&e| !t.x2.contains(e) && c2.contains(&t.x2.with(e)))
        .collect();
    for &e1 in &next1 {
        if !next2.iter().any(|&e2| live.contains(&grown(e1, e2))) {
            return false;
        }
    }
    for &e2 in &next2 {
        if !next1.iter().any(|&e1| live.contains(&grown(e1, e2))) {
            return false;
        }
    }
    for &(e1, e2) in &t.f {
        let back1 = c1.contains(&t.x1.without(e1));
        let back2 = c2.contains(&t.x2.without(e2));
        if (back1 || back2) && !(back1 && back2 && live.contains(&shrunk(e1, e2))) {
            return false;
        }
    }
    true
}
