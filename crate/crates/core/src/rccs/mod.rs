//! Reversible CCS: processes that carry a memory of what they did.
//!
//! A monitored process `m ▷ P` pairs a memory stack with a CCS body.
//! Terms are kept in a normal form in which memories are distributed over
//! parallel compositions (with a fork marker), restrictions sit above the
//! monitored process they bind, and the summands of every sum are sorted.
//! The transition functions consume and produce normal forms.

mod graph;
mod step;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{canonical, Action, CcsTerm, Name};

pub use graph::{
    barb, barbs, is_coherent, origin, origin_path, reachable_states, Edge, StateGraph,
};
pub use step::{backward_steps, forward_steps};
pub(crate) use step::{backward_unchecked, forward_unchecked, merge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RccsError {
    #[error("term is not coherent: {0}")]
    IncoherentTerm(String),
    #[error("no transition {0} is enabled")]
    NoSuchTransition(String),
}

/// Identifier attached to a fired event.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct EventId(pub u32);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MemoryEntry {
    Fork,
    /// `⟨i, α, Q⟩`: event `i` fired `α`; `Q` is the discarded rest of the
    /// sum, `0` when there was none.
    Past {
        id: EventId,
        action: Action,
        discarded: CcsTerm,
    },
}

/// A memory stack; the last element is the top.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Memory(pub Vec<MemoryEntry>);

impl Memory {
    pub fn empty() -> Self {
        Memory(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<&MemoryEntry> {
        self.0.last()
    }

    pub fn push(mut self, e: MemoryEntry) -> Self {
        self.0.push(e);
        self
    }

    /// Channel names in recorded actions and discarded branches.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for e in &self.0 {
            if let MemoryEntry::Past {
                action, discarded, ..
            } = e
            {
                out.extend(action.name().cloned());
                out.extend(discarded.names());
            }
        }
        out
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        self.0.iter().filter_map(|e| match e {
            MemoryEntry::Past { id, .. } => Some(*id),
            MemoryEntry::Fork => None,
        })
    }
}

impl fmt::Display for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.0.iter().rev() {
            match e {
                MemoryEntry::Fork => f.write_str("↑.")?,
                MemoryEntry::Past {
                    id,
                    action,
                    discarded,
                } => write!(f, "⟨{id},{action},{discarded}⟩.")?,
            }
        }
        f.write_str("∅")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RccsTerm {
    Monitored(Memory, CcsTerm),
    Par(Box<RccsTerm>, Box<RccsTerm>),
    Restrict(Name, Box<RccsTerm>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// `i:α` forward, `i:α-` backward.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TransitionLabel {
    pub direction: Direction,
    pub id: EventId,
    pub action: Action,
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id, self.action)?;
        if self.direction == Direction::Backward {
            f.write_str("-")?;
        }
        Ok(())
    }
}

/// `∅ ▷ p`, normalised.
pub fn lift(p: &CcsTerm) -> RccsTerm {
    normalize(&RccsTerm::Monitored(Memory::empty(), p.clone()))
}

/// Strips memories.
pub fn erase(r: &RccsTerm) -> CcsTerm {
    match r {
        RccsTerm::Monitored(_, p) => p.clone(),
        RccsTerm::Par(l, r) => CcsTerm::par(erase(l), erase(r)),
        RccsTerm::Restrict(a, r) => CcsTerm::Restrict(a.clone(), Box::new(erase(r))),
    }
}

impl RccsTerm {
    pub fn monitored(m: Memory, p: CcsTerm) -> Self {
        RccsTerm::Monitored(m, p)
    }

    pub fn par(l: RccsTerm, r: RccsTerm) -> Self {
        RccsTerm::Par(Box::new(l), Box::new(r))
    }

    pub fn restrict(a: impl Into<Name>, r: RccsTerm) -> Self {
        RccsTerm::Restrict(a.into(), Box::new(r))
    }

    /// Identifiers occurring in any memory.
    pub fn ids(&self) -> BTreeSet<EventId> {
        let mut out = BTreeSet::new();
        self.visit_memories(&mut |m| out.extend(m.ids()));
        out
    }

    /// `(i, α)` of every past entry, in traversal order.
    pub fn memory_entries(&self) -> Vec<(EventId, Action)> {
        let mut out = Vec::new();
        self.visit_memories(&mut |m| {
            for e in &m.0 {
                if let MemoryEntry::Past { id, action, .. } = e {
                    out.push((*id, action.clone()));
                }
            }
        });
        out
    }

    fn visit_memories(&self, f: &mut impl FnMut(&Memory)) {
        match self {
            RccsTerm::Monitored(m, _) => f(m),
            RccsTerm::Par(l, r) => {
                l.visit_memories(f);
                r.visit_memories(f);
            }
            RccsTerm::Restrict(_, r) => r.visit_memories(f),
        }
    }

    /// True when no memory records a past event.
    pub fn is_initial(&self) -> bool {
        self.ids().is_empty()
    }

    /// Smallest identifier not in use.
    pub fn fresh_id(&self) -> EventId {
        let used = self.ids();
        (1..)
            .map(EventId)
            .find(|i| !used.contains(i))
            .expect("identifier space exhausted")
    }

    fn map_ids(&self, f: &mut impl FnMut(EventId) -> EventId) -> RccsTerm {
        match self {
            RccsTerm::Monitored(m, p) => {
                let m = Memory(
                    m.0.iter()
                        .map(|e| match e {
                            MemoryEntry::Fork => MemoryEntry::Fork,
                            MemoryEntry::Past {
                                id,
                                action,
                                discarded,
                            } => MemoryEntry::Past {
                                id: f(*id),
                                action: action.clone(),
                                discarded: discarded.clone(),
                            },
                        })
                        .collect(),
                );
                RccsTerm::Monitored(m, p.clone())
            }
            RccsTerm::Par(l, r) => {
                let l = l.map_ids(f);
                RccsTerm::par(l, r.map_ids(f))
            }
            RccsTerm::Restrict(a, r) => RccsTerm::restrict(a.clone(), r.map_ids(f)),
        }
    }
}

/// Distributes memories over `|`, moves restrictions above the monitored
/// process, and sorts summands everywhere. A restricted name that also
/// occurs in the memory is renamed apart before it is moved.
pub fn normalize(r: &RccsTerm) -> RccsTerm {
    match r {
        RccsTerm::Monitored(m, p) => match p {
            CcsTerm::Par(p1, p2) => {
                let forked = m.clone().push(MemoryEntry::Fork);
                RccsTerm::par(
                    normalize(&RccsTerm::Monitored(forked.clone(), (**p1).clone())),
                    normalize(&RccsTerm::Monitored(forked, (**p2).clone())),
                )
            }
            CcsTerm::Restrict(a, body) => {
                let used = m.names();
                if used.contains(a) {
                    let mut avoid = used;
                    avoid.extend(body.names());
                    let fresh = (1..)
                        .map(|k| Name::new(format!("{a}{k}")))
                        .find(|n| !avoid.contains(n))
                        .expect("unbounded");
                    let body = body.rename(a, &fresh);
                    RccsTerm::restrict(fresh, normalize(&RccsTerm::Monitored(m.clone(), body)))
                } else {
                    RccsTerm::restrict(
                        a.clone(),
                        normalize(&RccsTerm::Monitored(m.clone(), (**body).clone())),
                    )
                }
            }
            _ => RccsTerm::Monitored(sort_memory(m), sort_sums(p)),
        },
        RccsTerm::Par(l, r) => RccsTerm::par(normalize(l), normalize(r)),
        RccsTerm::Restrict(a, r) => RccsTerm::restrict(a.clone(), normalize(r)),
    }
}

fn sort_memory(m: &Memory) -> Memory {
    Memory(
        m.0.iter()
            .map(|e| match e {
                MemoryEntry::Fork => MemoryEntry::Fork,
                MemoryEntry::Past {
                    id,
                    action,
                    discarded,
                } => MemoryEntry::Past {
                    id: *id,
                    action: action.clone(),
                    discarded: sort_sums(discarded),
                },
            })
            .collect(),
    )
}

/// Moves each restriction back into the monitored process below it when
/// the memory does not mention the name, then puts every process and
/// discarded branch in canonical CCS form.
fn settle(r: &RccsTerm) -> RccsTerm {
    match r {
        RccsTerm::Monitored(m, p) => RccsTerm::Monitored(canonical_memory(m), canonical(p)),
        RccsTerm::Par(l, r) => RccsTerm::par(settle(l), settle(r)),
        RccsTerm::Restrict(a, body) => match settle(body) {
            RccsTerm::Monitored(m, p) if !m.names().contains(a) => {
                RccsTerm::Monitored(m, canonical(&CcsTerm::restrict(a.clone(), p)))
            }
            other => RccsTerm::restrict(a.clone(), other),
        },
    }
}

fn canonical_memory(m: &Memory) -> Memory {
    Memory(
        m.0.iter()
            .map(|e| match e {
                MemoryEntry::Fork => MemoryEntry::Fork,
                MemoryEntry::Past {
                    id,
                    action,
                    discarded,
                } => MemoryEntry::Past {
                    id: *id,
                    action: action.clone(),
                    discarded: canonical(discarded),
                },
            })
            .collect(),
    )
}

/// Sorts the summands of every sum, recursively.
pub fn sort_sums(p: &CcsTerm) -> CcsTerm {
    match p {
        CcsTerm::Nil => CcsTerm::Nil,
        CcsTerm::Prefix(a, q) => CcsTerm::prefix(a.clone(), sort_sums(q)),
        CcsTerm::Sum(..) => {
            let mut s: Vec<(Action, CcsTerm)> = p
                .summands()
                .into_iter()
                .map(|(a, q)| (a.clone(), sort_sums(q)))
                .collect();
            s.sort();
            CcsTerm::from_summands(s)
        }
        CcsTerm::Par(l, r) => CcsTerm::par(sort_sums(l), sort_sums(r)),
        CcsTerm::Restrict(a, q) => CcsTerm::Restrict(a.clone(), Box::new(sort_sums(q))),
    }
}

/// Normal form with identifiers renamed `1, 2, …` by first occurrence
/// (left to right, each memory read bottom to top). Two terms are
/// structurally congruent iff their normal forms are equal.
pub fn congruence_normal_form(r: &RccsTerm) -> RccsTerm {
    let n = settle(&normalize(r));
    let mut order: Vec<EventId> = Vec::new();
    n.visit_memories(&mut |m| {
        for i in m.ids() {
            if !order.contains(&i) {
                order.push(i);
            }
        }
    });
    n.map_ids(&mut |i| {
        let pos = order
            .iter()
            .position(|&o| o == i)
            .expect("id collected above");
        EventId(pos as u32 + 1)
    })
}

/// Structural congruence. Memory-free terms are compared as CCS terms.
pub fn congruent(r: &RccsTerm, s: &RccsTerm) -> bool {
    congruence_normal_form(r) == congruence_normal_form(s)
        || (r.is_initial() && s.is_initial() && crate::syntax::ccs_congruent(&erase(r), &erase(s)))
}

impl fmt::Display for RccsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RccsTerm::Monitored(m, p) => match p {
                CcsTerm::Sum(..) | CcsTerm::Par(..) => write!(f, "{m} ▷ ({p})"),
                _ => write!(f, "{m} ▷ {p}"),
            },
            RccsTerm::Par(l, r) => {
                match **l {
                    RccsTerm::Par(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                write!(f, " | {r}")
            }
            RccsTerm::Restrict(a, r) => match **r {
                RccsTerm::Par(..) => write!(f, "({a})({r})"),
                _ => write!(f, "({a}){r}"),
            },
        }
    }
}

impl fmt::Debug for RccsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests;
