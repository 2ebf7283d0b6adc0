use std::collections::{HashMap, HashSet, VecDeque};

use super::iso::Orders;
use super::strata::build_stratification;
use super::{EquivalenceVerdict, Side, Triple, Witness};
use crate::confstruct::{ConfStruct, EventIdx};

/// A forward move of a triple: the pair of events and the target triple.
struct Move {
    e1: EventIdx,
    e2: EventIdx,
    to: usize,
}

struct Node {
    triple: Triple,
    forward: Vec<Move>,
    /// Retractable events of `x1` and the triple reached, if the partner
    /// event can be retracted as well.
    back1: Vec<Option<usize>>,
    back2: Vec<Option<usize>>,
}

/// `e1` may extend the left side of `t` by `e2` on the right: labels agree
/// and every event of `x1` is below `e1` iff its image is below `e2`.
fn fits(o1: &Orders, o2: &Orders, t: &Triple, e1: EventIdx, e2: EventIdx) -> bool {
    if o1.structure().label(e1) != o2.structure().label(e2) {
        return false;
    }
    let below1 = o1.causes(&t.x1.with(e1), e1);
    let below2 = o2.causes(&t.x2.with(e2), e2);
    t.f.iter()
        .all(|&(a, b)| below1.contains(a) == below2.contains(b))
}

/// The greatest hereditary history preserving bisimulation among triples
/// reachable from `(∅, ∅, ∅)`, or `None` when the initial triple is pruned.
pub fn hhpb_relation(c1: &ConfStruct, c2: &ConfStruct) -> Option<Vec<Triple>> {
    let (o1, o2) = (Orders::new(c1), Orders::new(c2));
    let mut index: HashMap<Triple, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Triple, nodes: &mut Vec<Node>, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&i) = index.get(&t) {
            return i;
        }
        nodes.push(Node {
            triple: t.clone(),
            forward: Vec::new(),
            back1: Vec::new(),
            back2: Vec::new(),
        });
        index.insert(t, nodes.len() - 1);
        queue.push_back(nodes.len() - 1);
        nodes.len() - 1
    };
    intern(Triple::empty(), &mut nodes, &mut queue);
    while let Some(n) = queue.pop_front() {
        let t = nodes[n].triple.clone();
        let mut forward = Vec::new();
        for e1 in c1.extensions(&t.x1) {
            for e2 in c2.extensions(&t.x2) {
                if fits(&o1, &o2, &t, e1, e2) {
                    let to = intern(t.extend(e1, e2), &mut nodes, &mut queue);
                    forward.push(Move { e1, e2, to });
                }
            }
        }
        let mut back1 = Vec::new();
        for e1 in c1.retractions(&t.x1) {
            let e2 = t.image(e1).expect("f is total on x1");
            back1.push(
                c2.contains(&t.x2.without(e2))
                    .then(|| intern(t.retract(e1, e2), &mut nodes, &mut queue)),
            );
        }
        let mut back2 = Vec::new();
        for e2 in c2.retractions(&t.x2) {
            let e1 = t.preimage(e2).expect("f is onto x2");
            back2.push(
                c1.contains(&t.x1.without(e1))
                    .then(|| intern(t.retract(e1, e2), &mut nodes, &mut queue)),
            );
        }
        let node = &mut nodes[n];
        node.forward = forward;
        node.back1 = back1;
        node.back2 = back2;
    }

    let ext: Vec<(Vec<EventIdx>, Vec<EventIdx>)> = nodes
        .iter()
        .map(|n| (c1.extensions(&n.triple.x1), c2.extensions(&n.triple.x2)))
        .collect();
    let mut alive = vec![true; nodes.len()];
    loop {
        let mut changed = false;
        for (i, node) in nodes.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let left_ok = ext[i]
                .0
                .iter()
                .all(|&e| node.forward.iter().any(|m| m.e1 == e && alive[m.to]));
            let right_ok = ext[i]
                .1
                .iter()
                .all(|&e| node.forward.iter().any(|m| m.e2 == e && alive[m.to]));
            let back_ok = node
                .back1
                .iter()
                .chain(node.back2.iter())
                .all(|b| b.is_some_and(|j| alive[j]));
            if !(left_ok && right_ok && back_ok) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !alive[0] {
        return None;
    }
    let mut rel: Vec<Triple> = nodes
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(n, _)| n.triple)
        .collect();
    rel.sort();
    Some(rel)
}

/// Decides `c1 ∼ c2`. When unrelated, the verdict names the least stratum
/// at which some configuration lacks a partner, looking from the left
/// structure first and from the right one if the left shows none.
pub fn hhpb(c1: &ConfStruct, c2: &ConfStruct) -> EquivalenceVerdict {
    if let Some(rel) = hhpb_relation(c1, c2) {
        return EquivalenceVerdict::related(Witness::Relation { triples: rel });
    }
    for (side, (a, b)) in [(Side::Left, (c1, c2)), (Side::Right, (c2, c1))] {
        if let Some(fail) = build_stratification(a, b).failing() {
            let mut v = EquivalenceVerdict::unrelated(Witness::Unmatched {
                stratum: fail.name(),
                side,
                x1: fail.unmatched[0],
            });
            v.failing_stratum = Some(fail.index);
            return v;
        }
    }
    EquivalenceVerdict::unrelated(Witness::None)
}

/// Checks that `rel` contains the initial triple and satisfies every clause
/// of the definition, in both directions.
pub fn is_hhpb_relation(c1: &ConfStruct, c2: &ConfStruct, rel: &[Triple]) -> bool {
    let (o1, o2) = (Orders::new(c1), Orders::new(c2));
    let set: HashSet<&Triple> = rel.iter().collect();
    if !set.contains(&Triple::empty()) {
        return false;
    }
    rel.iter().all(|t| {
        let bijective = t.f.len() == t.x1.len()
            && t.f.len() == t.x2.len()
            && t.f
                .iter()
                .all(|&(a, b)| t.x1.contains(a) && t.x2.contains(b));
        let iso = super::iso::bijections(&o1, &t.x1, &o2, &t.x2, super::iso::OrderCheck::Reflect)
            .contains(&t.f);
        let fwd1 = c1.extensions(&t.x1).into_iter().all(|e1| {
            c2.extensions(&t.x2)
                .into_iter()
                .any(|e2| set.contains(&t.extend(e1, e2)))
        });
        let fwd2 = c2.extensions(&t.x2).into_iter().all(|e2| {
            c1.extensions(&t.x1)
                .into_iter()
                .any(|e1| set.contains(&t.extend(e1, e2)))
        });
        let back1 = c1.retractions(&t.x1).into_iter().all(|e1| {
            t.image(e1).is_some_and(|e2| {
                c2.contains(&t.x2.without(e2)) && set.contains(&t.retract(e1, e2))
            })
        });
        let back2 = c2.retractions(&t.x2).into_iter().all(|e2| {
            t.preimage(e2).is_some_and(|e1| {
                c1.contains(&t.x1.without(e1)) && set.contains(&t.retract(e1, e2))
            })
        });
        bijective && iso && fwd1 && fwd2 && back1 && back2
    })
}

/// Re-derives a verdict from its witness alone.
pub fn replay_hhpb(c1: &ConfStruct, c2: &ConfStruct, v: &EquivalenceVerdict) -> bool {
    match &v.witness {
        Witness::Relation { triples } => v.related && is_hhpb_relation(c1, c2, triples),
        Witness::Unmatched { stratum, side, x1 } => {
            let (a, b) = match side {
                Side::Left => (c1, c2),
                Side::Right => (c2, c1),
            };
            let strata = build_stratification(a, b);
            !v.related
                && strata
                    .failing()
                    .is_some_and(|f| f.name() == *stratum && f.unmatched.contains(x1))
        }
        _ => false,
    }
}
