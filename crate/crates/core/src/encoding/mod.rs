//! Denotations: CCS terms as configuration structures, RCCS terms as a
//! configuration inside the denotation of their origin, and projections
//! of `⟦C[P]⟧` onto `⟦P⟧`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::confstruct::{
    coproduct, embedding, parallel, prefix, ConfStruct, ConfStructJson, EventIdx, EventSet,
    Morphism, MorphismViolation, Provenance,
};
use crate::rccs::{
    backward_unchecked, forward_unchecked, is_coherent, origin_path, Direction, RccsError,
    RccsTerm, TransitionLabel,
};
use crate::syntax::{ccs_congruent, is_collapsed, Action, CcsTerm, Context};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error(transparent)]
    Rccs(#[from] RccsError),
    #[error("step {step}: no event labelled {action} fits the trace")]
    NoMatchingEvent { step: usize, action: Action },
    #[error("step {step}: {candidates} events labelled {action} fit the trace")]
    AmbiguousEvent {
        step: usize,
        action: Action,
        candidates: usize,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("operational correspondence fails: {0}")]
    CorrespondenceFailure(String),
}

/// `⟦p⟧`
pub fn encode_ccs(p: &CcsTerm) -> ConfStruct {
    match p {
        CcsTerm::Nil => ConfStruct::empty(),
        CcsTerm::Prefix(a, q) => prefix(a.clone(), &encode_ccs(q)),
        CcsTerm::Sum(l, r) => coproduct(&encode_ccs(l), &encode_ccs(r)),
        CcsTerm::Par(l, r) => parallel(&encode_ccs(l), &encode_ccs(r)),
        CcsTerm::Restrict(a, q) => encode_ccs(q).restrict_name(a),
    }
}

/// Memoised [`encode_ccs`]; results are identical to the uncached ones.
#[derive(Default)]
pub struct EncodingCache {
    map: HashMap<CcsTerm, ConfStruct>,
}

impl EncodingCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn encode(&mut self, p: &CcsTerm) -> ConfStruct {
        if let Some(c) = self.map.get(p) {
            return c.clone();
        }
        let c = match p {
            CcsTerm::Nil => ConfStruct::empty(),
            CcsTerm::Prefix(a, q) => prefix(a.clone(), &self.encode(q)),
            CcsTerm::Sum(l, r) => coproduct(&self.encode(l), &self.encode(r)),
            CcsTerm::Par(l, r) => parallel(&self.encode(l), &self.encode(r)),
            CcsTerm::Restrict(a, q) => self.encode(q).restrict_name(a),
        };
        self.map.insert(p.clone(), c.clone());
        c
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClashKind {
    /// Both events can happen together.
    Concurrency,
    /// Taking one excludes the other.
    Conflict,
}

/// Two distinct events enabled at one configuration with the same label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub kind: ClashKind,
    pub label: Action,
    pub config: EventSet,
    pub events: (EventIdx, EventIdx),
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ClashKind::Concurrency => "auto-concurrency",
            ClashKind::Conflict => "auto-conflict",
        };
        write!(
            f,
            "{kind} on {} at {:?}: e{} and e{}",
            self.label, self.config, self.events.0, self.events.1
        )
    }
}

/// Auto-concurrency and auto-conflict, read off `⟦t⟧`.
pub fn detect_auto_conflict_or_concurrency(t: &CcsTerm) -> Vec<Clash> {
    clashes(&encode_ccs(t))
}

pub fn clashes(c: &ConfStruct) -> Vec<Clash> {
    let mut out = Vec::new();
    for x in c.configurations() {
        let ext = c.extensions(x);
        for (i, &e1) in ext.iter().enumerate() {
            for &e2 in &ext[i + 1..] {
                if c.label(e1) != c.label(e2) {
                    continue;
                }
                let kind = if c.contains(&x.with(e1).with(e2)) {
                    ClashKind::Concurrency
                } else {
                    ClashKind::Conflict
                };
                out.push(Clash {
                    kind,
                    label: c.label(e1).clone(),
                    config: *x,
                    events: (e1, e2),
                });
            }
        }
    }
    out
}

/// Collapsed and clash-free: the class on which addresses are unique.
pub fn check_preconditions(p: &CcsTerm) -> Result<(), EncodingError> {
    if !is_collapsed(p) {
        return Err(EncodingError::PreconditionViolated(format!(
            "{p} is not collapsed"
        )));
    }
    if let Some(c) = detect_auto_conflict_or_concurrency(p).first() {
        return Err(EncodingError::PreconditionViolated(format!("{p}: {c}")));
    }
    Ok(())
}

/// A configuration of the denotation of an origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Address {
    pub origin: CcsTerm,
    pub origin_denotation: ConfStruct,
    pub current: EventSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AddressJson {
    pub origin: ConfStructJson,
    pub current: Vec<String>,
}

impl Address {
    pub fn to_json(&self) -> AddressJson {
        AddressJson {
            origin: self.origin_denotation.to_json(),
            current: self.current.iter().map(|e| format!("e{e}")).collect(),
        }
    }
}

/// Follows a forward trace through `origin`. Each step picks the event
/// `e` extending the accumulated configuration with the step's label such
/// that the denotation of the erased target embeds in what remains.
pub fn address(
    origin: &ConfStruct,
    trace: &[(TransitionLabel, RccsTerm)],
) -> Result<EventSet, EncodingError> {
    let mut x = EventSet::EMPTY;
    for (step, (label, target)) in trace.iter().enumerate() {
        let candidates = address_candidates(origin, &x, &label.action, target);
        match candidates.as_slice() {
            [e] => x.insert(*e),
            [] => {
                return Err(EncodingError::NoMatchingEvent {
                    step,
                    action: label.action.clone(),
                })
            }
            many => {
                return Err(EncodingError::AmbiguousEvent {
                    step,
                    action: label.action.clone(),
                    candidates: many.len(),
                })
            }
        }
    }
    Ok(x)
}

/// Events `e` with `x ∪ {e}` a configuration, `ℓ(e) = α`, and
/// `⟦ε(target)⟧` a substructure of the residual at `x ∪ {e}`.
pub fn address_candidates(
    origin: &ConfStruct,
    x: &EventSet,
    action: &Action,
    target: &RccsTerm,
) -> Vec<EventIdx> {
    let future = encode_ccs(&crate::rccs::erase(target));
    origin
        .extensions(x)
        .into_iter()
        .filter(|&e| origin.label(e) == action)
        .filter(|&e| {
            let rest = origin
                .residual(&x.with(e))
                .expect("extension is a configuration");
            embedding(&future, &rest, false).is_some()
        })
        .collect()
}

/// A forward trace from `lift(origin(r))` to `r`, by reversing a maximal
/// backward path.
pub fn forward_trace(
    r: &RccsTerm,
) -> Result<(CcsTerm, Vec<(TransitionLabel, RccsTerm)>), EncodingError> {
    let (path, origin) = origin_path(r)?;
    let mut states = vec![crate::rccs::normalize(r)];
    states.extend(path.iter().map(|(_, s)| s.clone()));
    let mut trace = Vec::new();
    for j in (0..path.len()).rev() {
        let mut label = path[j].0.clone();
        label.direction = Direction::Forward;
        trace.push((label, states[j].clone()));
    }
    Ok((origin, trace))
}

/// `(⟦O_r⟧, x)` for a coherent `r` whose origin meets the preconditions.
pub fn encode_rccs(r: &RccsTerm) -> Result<Address, EncodingError> {
    if !is_coherent(r) {
        return Err(RccsError::IncoherentTerm(r.to_string()).into());
    }
    let (origin, trace) = forward_trace(r)?;
    check_preconditions(&origin)?;
    let origin_denotation = encode_ccs(&origin);
    let current = address(&origin_denotation, &trace)?;
    Ok(Address {
        origin,
        origin_denotation,
        current,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorrespondenceReport {
    pub forward: usize,
    pub backward: usize,
}

/// Checks that single LTS steps from `r` and single moves from its address
/// are in bijection, with matching labels and directions.
pub fn check_operational_correspondence(
    r: &RccsTerm,
) -> Result<CorrespondenceReport, EncodingError> {
    let here = encode_rccs(r)?;
    let c = &here.origin_denotation;
    let x = here.current;
    let fail = |msg: String| Err(EncodingError::CorrespondenceFailure(msg));

    let mut steps = forward_unchecked(r);
    steps.extend(backward_unchecked(r));
    let mut reached = Vec::new();
    for (label, s) in &steps {
        let there = encode_rccs(s)?;
        if !ccs_congruent(&there.origin, &here.origin) {
            return fail(format!("{label} from {r} changes the origin"));
        }
        let y = there.current;
        let moved = match label.direction {
            Direction::Forward => y.difference(&x),
            Direction::Backward => x.difference(&y),
        };
        let expected_size = match label.direction {
            Direction::Forward => x.is_subset(&y),
            Direction::Backward => y.is_subset(&x),
        };
        if !expected_size || moved.len() != 1 {
            return fail(format!(
                "{label} from {r} is not a single event move: {x:?} to {y:?}"
            ));
        }
        let e = moved.iter().next().expect("one event");
        if *c.label(e) != label.action {
            return fail(format!(
                "{label} from {r} matches e{e} labelled {}",
                c.label(e)
            ));
        }
        reached.push((label.direction, y));
    }
    for e in c.extensions(&x) {
        if !reached.contains(&(Direction::Forward, x.with(e))) {
            return fail(format!("forward move on e{e} from {r} has no transition"));
        }
    }
    for e in c.retractions(&x) {
        if !reached.contains(&(Direction::Backward, x.without(e))) {
            return fail(format!("backward move on e{e} from {r} has no transition"));
        }
    }
    let forward = steps
        .iter()
        .filter(|(l, _)| l.direction == Direction::Forward)
        .count();
    Ok(CorrespondenceReport {
        forward,
        backward: steps.len() - forward,
    })
}

/// The projection `π_{C,P}: ⟦C[P]⟧ → ⟦P⟧`.
#[derive(Debug, Clone)]
pub struct ContextProjection {
    pub whole: ConfStruct,
    pub part: ConfStruct,
    pub map: Morphism,
}

impl ContextProjection {
    /// Configuration-preserving and locally injective; labels agree except
    /// where a synchronisation turned the image's label into `τ`.
    pub fn check(&self) -> Result<(), MorphismViolation> {
        self.map
            .check(&self.whole, &self.part, |w, p| w == p || w.is_tau())
    }
}

pub fn project(c: &Context, p: &CcsTerm) -> ContextProjection {
    let whole = encode_ccs(&c.instantiate(p));
    let part = encode_ccs(p);
    let by_prov: HashMap<&Provenance, EventIdx> = part
        .events()
        .iter()
        .enumerate()
        .map(|(i, e)| (&*e.provenance, i))
        .collect();
    let map = whole
        .events()
        .iter()
        .map(|e| project_provenance(c, &e.provenance).map(|q| by_prov[q]))
        .collect();
    ContextProjection {
        whole,
        part,
        map: Morphism::new(map),
    }
}

/// Strips the part of a provenance contributed by the context; `None` for
/// events that belong to the context alone.
fn project_provenance<'a>(c: &Context, p: &'a Provenance) -> Option<&'a Provenance> {
    match (c, p) {
        (Context::Hole, _) => Some(p),
        (Context::Restrict(_, inner), _) => project_provenance(inner, p),
        (Context::Prefix(_, inner), Provenance::Under(q)) => project_provenance(inner, q),
        (Context::SumLeft(inner, _), Provenance::Left(q)) => project_provenance(inner, q),
        (Context::SumRight(_, inner), Provenance::Right(q)) => project_provenance(inner, q),
        (Context::ParLeft(inner, _), Provenance::Pair(Some(q), _)) => project_provenance(inner, q),
        (Context::ParRight(_, inner), Provenance::Pair(_, Some(q))) => project_provenance(inner, q),
        _ => None,
    }
}
