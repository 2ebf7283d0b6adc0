//! Equivalences on configuration structures and processes, and the
//! synthesis of contexts that tell inequivalent processes apart.

mod barbed;
mod hhpb;
mod iso;
mod oracle;
mod strata;
mod strong;
mod synth;

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::confstruct::{EventIdx, EventSet};
use crate::encoding::EncodingError;
use crate::rccs::RccsError;
use crate::syntax::CollapseOptions;

pub use barbed::{barbed_bf_bisim_structs, barbed_bf_bisim_terms};
pub use hhpb::{hhpb, hhpb_relation, is_hhpb_relation, replay_hhpb};
pub use oracle::{hhpb_oracle, OracleResult};
pub use strata::{build_stratification, FailingStratum, StrataKind, StratifiedRelation};
pub use strong::forward_strong_bisim;
pub use synth::{
    check_congruence_closure, context_family, discriminates, schema_context, synthesize_context,
    CongruenceReport, ContextCheck, Synthesis,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("{events} events exceed the oracle bound of {bound}")]
    BoundExceeded { events: usize, bound: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Rccs(#[from] RccsError),
}

impl From<EncodingError> for EquivalenceError {
    fn from(e: EncodingError) -> Self {
        match e {
            EncodingError::Rccs(r) => EquivalenceError::Rccs(r),
            other => EquivalenceError::PreconditionViolated(other.to_string()),
        }
    }
}

/// Tunables shared by the deciders and the context search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivOptions {
    /// Largest combined event count the brute-force oracle accepts.
    pub max_events: usize,
    /// Largest number of observer components in a synthesised context.
    pub max_context: usize,
    /// Refuse inputs that are not collapsed or have clashing events.
    pub check_preconditions: bool,
    pub collapse: CollapseOptions,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            max_events: 10,
            max_context: 8,
            check_preconditions: true,
            collapse: CollapseOptions::default(),
        }
    }
}

/// `(x₁, x₂, f)` with `f` listed as pairs sorted by the left event.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triple {
    pub x1: EventSet,
    pub x2: EventSet,
    pub f: Vec<(EventIdx, EventIdx)>,
}

impl Triple {
    pub fn empty() -> Self {
        Triple {
            x1: EventSet::EMPTY,
            x2: EventSet::EMPTY,
            f: Vec::new(),
        }
    }

    pub fn image(&self, e1: EventIdx) -> Option<EventIdx> {
        self.f.iter().find(|p| p.0 == e1).map(|p| p.1)
    }

    pub fn preimage(&self, e2: EventIdx) -> Option<EventIdx> {
        self.f.iter().find(|p| p.1 == e2).map(|p| p.0)
    }

    pub(crate) fn extend(&self, e1: EventIdx, e2: EventIdx) -> Triple {
        let mut f = self.f.clone();
        f.push((e1, e2));
        f.sort();
        Triple {
            x1: self.x1.with(e1),
            x2: self.x2.with(e2),
            f,
        }
    }

    pub(crate) fn retract(&self, e1: EventIdx, e2: EventIdx) -> Triple {
        Triple {
            x1: self.x1.without(e1),
            x2: self.x2.without(e2),
            f: self.f.iter().copied().filter(|p| *p != (e1, e2)).collect(),
        }
    }

    /// The same triple read from the other side.
    pub fn swap(&self) -> Triple {
        let mut f: Vec<_> = self.f.iter().map(|&(a, b)| (b, a)).collect();
        f.sort();
        Triple {
            x1: self.x2,
            x2: self.x1,
            f,
        }
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            x1: &'a EventSet,
            x2: &'a EventSet,
            f: Pairs<'a>,
        }
        struct Pairs<'a>(&'a [(EventIdx, EventIdx)]);
        impl Serialize for Pairs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (a, b) in self.0 {
                    seq.serialize_element(&(format!("e{a}"), format!("e{b}")))?;
                }
                seq.end()
            }
        }
        Repr {
            x1: &self.x1,
            x2: &self.x2,
            f: Pairs(&self.f),
        }
        .serialize(s)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {{", self.x1, self.x2)?;
        for (i, (a, b)) in self.f.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "e{a}↦e{b}")?;
        }
        f.write_str("})")
    }
}

/// Which structure a witness configuration belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A bisimulation containing the initial triple.
    Relation {
        triples: Vec<Triple>,
    },
    /// A barbed bisimulation on pairs of configurations.
    Pairs {
        pairs: Vec<(EventSet, EventSet)>,
    },
    /// A configuration with no partner in `F_i ∩ B_i`.
    Unmatched {
        stratum: String,
        side: Side,
        x1: EventSet,
    },
    /// Pairs of states, for the game on terms.
    States {
        pairs: Vec<(String, String)>,
    },
    None,
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub related: bool,
    pub failing_stratum: Option<usize>,
    pub witness: Witness,
    pub context: Option<String>,
}

impl EquivalenceVerdict {
    pub fn related(witness: Witness) -> Self {
        EquivalenceVerdict {
            related: true,
            failing_stratum: None,
            witness,
            context: None,
        }
    }

    pub fn unrelated(witness: Witness) -> Self {
        EquivalenceVerdict {
            related: false,
            failing_stratum: None,
            witness,
            context: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialise")
    }
}
