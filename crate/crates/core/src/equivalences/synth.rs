use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::barbed::{barbed_bf_bisim_structs, barbed_bf_bisim_terms};
use super::hhpb::{hhpb, hhpb_relation};
use super::{EquivOptions, EquivalenceError, Side, Witness};
use crate::confstruct::{ConfStruct, EventSet};
use crate::encoding::{detect_auto_conflict_or_concurrency, encode_ccs};
use crate::rccs::lift;
use crate::syntax::{is_collapsed_with, Action, CcsTerm, Context, Name};

/// A discriminating context and the configuration it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesis {
    pub context: Context,
    /// `None` when the hole alone discriminates.
    pub source: Option<(Side, EventSet)>,
    /// The failing stratum the search started from, e.g. `B2`.
    pub stratum: Option<String>,
}

fn observer(a: &Action, i: usize) -> CcsTerm {
    CcsTerm::sum(
        CcsTerm::prefix(a.dual(), CcsTerm::Nil),
        CcsTerm::prefix(Action::input(format!("#c{i}")), CcsTerm::Nil),
    )
}

/// `∏ (ℓ(e)‾ + #cᵢ) | [·]` over the visible events of `x`, in event order.
pub fn schema_context(c: &ConfStruct, x: &EventSet) -> Context {
    let observers = x
        .iter()
        .map(|e| c.label(e))
        .filter(|l| !l.is_tau())
        .enumerate()
        .map(|(i, l)| observer(l, i))
        .collect();
    Context::parallel_observers(observers)
}

fn visible(c: &ConfStruct, x: &EventSet) -> usize {
    x.iter().filter(|&e| !c.label(e).is_tau()).count()
}

fn preconditions(p: &CcsTerm, opts: &EquivOptions) -> Result<(), EquivalenceError> {
    if !is_collapsed_with(p, opts.collapse) {
        return Err(EquivalenceError::PreconditionViolated(format!(
            "{p} is not collapsed"
        )));
    }
    if let Some(c) = detect_auto_conflict_or_concurrency(p).first() {
        return Err(EquivalenceError::PreconditionViolated(format!("{p}: {c}")));
    }
    Ok(())
}

/// Whether `ctx` tells the two processes apart by barbed back-and-forth
/// bisimilarity of their encodings.
pub fn discriminates(ctx: &Context, p1: &CcsTerm, p2: &CcsTerm) -> bool {
    let c1 = encode_ccs(&ctx.instantiate(p1));
    let c2 = encode_ccs(&ctx.instantiate(p2));
    !barbed_bf_bisim_structs(&c1, &c2).related
}

/// Builds a context that separates `p1` and `p2`. Starting from a
/// configuration left unmatched by the stratification, observers are added
/// for events of ever larger configurations above it until the encodings of
/// the two instantiations stop being barbed bisimilar. Other configurations
/// of either structure are tried afterwards. `Ok(None)` means the search ran
/// out of candidates within `opts.max_context` observers.
pub fn synthesize_context(
    p1: &CcsTerm,
    p2: &CcsTerm,
    opts: &EquivOptions,
) -> Result<Option<Synthesis>, EquivalenceError> {
    if opts.check_preconditions {
        preconditions(p1, opts)?;
        preconditions(p2, opts)?;
    }
    let c1 = encode_ccs(p1);
    let c2 = encode_ccs(p2);
    let verdict = hhpb(&c1, &c2);
    if verdict.related {
        return Err(EquivalenceError::PreconditionViolated(
            "processes are HHPB-related; nothing to discriminate".into(),
        ));
    }
    if !barbed_bf_bisim_structs(&c1, &c2).related {
        return Ok(Some(Synthesis {
            context: Context::Hole,
            source: None,
            stratum: None,
        }));
    }
    let stratum = match &verdict.witness {
        Witness::Unmatched { stratum, .. } => Some(stratum.clone()),
        _ => None,
    };
    let structure = |side: Side| match side {
        Side::Left => &c1,
        Side::Right => &c2,
    };

    let mut seeds: Vec<(Side, EventSet)> = Vec::new();
    for (side, (a, b)) in [(Side::Left, (&c1, &c2)), (Side::Right, (&c2, &c1))] {
        if let Some(fail) = super::strata::build_stratification(a, b).failing() {
            seeds.extend(fail.unmatched.into_iter().map(|x| (side, x)));
        }
    }
    for side in [Side::Left, Side::Right] {
        let mut all = structure(side).configurations().to_vec();
        all.sort();
        seeds.extend(all.into_iter().map(|x| (side, x)));
    }

    let mut tried: HashSet<Context> = HashSet::new();
    let mut visited: HashSet<(Side, EventSet)> = HashSet::new();
    for seed in seeds {
        let mut queue = VecDeque::from([seed]);
        while let Some((side, x)) = queue.pop_front() {
            if !visited.insert((side, x)) {
                continue;
            }
            let c = structure(side);
            if visible(c, &x) > opts.max_context {
                continue;
            }
            let ctx = schema_context(c, &x);
            if tried.insert(ctx.clone()) && discriminates(&ctx, p1, p2) {
                return Ok(Some(Synthesis {
                    context: ctx,
                    source: Some((side, x)),
                    stratum,
                }));
            }
            for e in c.extensions(&x) {
                queue.push_back((side, x.with(e)));
            }
        }
    }
    Ok(None)
}

/// Contexts used to probe congruence: the hole, schema contexts from every
/// configuration of both encodings, prefixes, parallel observers,
/// restrictions, guarded sums and a few nested combinations. Only contexts
/// of size at most `opts.max_context` that accept both processes are kept.
pub fn context_family(p1: &CcsTerm, p2: &CcsTerm, opts: &EquivOptions) -> Vec<Context> {
    let mut names: BTreeSet<Name> = p1.free_names();
    names.extend(p2.free_names());
    names.insert(Name::new("d"));
    let actions: Vec<Action> = names
        .iter()
        .flat_map(|n| [Action::input(n.as_str()), Action::output(n.as_str())])
        .chain([Action::Tau])
        .collect();
    let pre = |a: &Action| CcsTerm::prefix(a.clone(), CcsTerm::Nil);
    let hole = || Box::new(Context::Hole);

    let mut out: Vec<Context> = vec![Context::Hole];
    for c in [encode_ccs(p1), encode_ccs(p2)] {
        for x in c.configurations() {
            if !x.is_empty() {
                out.push(schema_context(&c, x));
            }
        }
    }
    for a in &actions {
        out.push(Context::Prefix(a.clone(), hole()));
        out.push(Context::ParLeft(hole(), Box::new(pre(a))));
        out.push(Context::SumLeft(hole(), Box::new(pre(a))));
        for b in &actions {
            if a != b {
                out.push(Context::Prefix(
                    a.clone(),
                    Box::new(Context::ParLeft(hole(), Box::new(pre(b)))),
                ));
            }
        }
    }
    for n in &names {
        out.push(Context::Restrict(n.clone(), hole()));
        for a in [Action::input(n.as_str()), Action::output(n.as_str())] {
            out.push(Context::Restrict(
                n.clone(),
                Box::new(Context::ParLeft(hole(), Box::new(pre(&a)))),
            ));
        }
    }
    for a in actions.iter().filter(|a| !a.is_tau()) {
        for b in actions.iter().filter(|b| !b.is_tau() && *b != a) {
            out.push(Context::parallel_observers(vec![pre(a), pre(b)]));
        }
    }

    let mut seen = HashSet::new();
    out.retain(|c| {
        c.size() <= opts.max_context && c.accepts(p1) && c.accepts(p2) && seen.insert(c.clone())
    });
    out
}

/// One row of a congruence report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextCheck {
    pub context: String,
    pub hhpb: bool,
    pub barbed: bool,
    /// The barbed game on the reachable states of the lifted terms.
    pub terms: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    /// Always `"over context family"`: only the listed contexts were tried.
    pub scope: &'static str,
    pub base_hhpb: bool,
    pub base_barbed: bool,
    pub checks: Vec<ContextCheck>,
    /// `base_hhpb` implies every row is related in all three senses.
    pub consistent: bool,
}

/// Checks, for each context, that hhpb-related processes stay related
/// under it, both by hhpb and by the barbed game on structures and terms.
pub fn check_congruence_closure(
    p1: &CcsTerm,
    p2: &CcsTerm,
    contexts: &[Context],
) -> Result<CongruenceReport, EquivalenceError> {
    let (c1, c2) = (encode_ccs(p1), encode_ccs(p2));
    let base_hhpb = hhpb_relation(&c1, &c2).is_some();
    let base_barbed = barbed_bf_bisim_structs(&c1, &c2).related;
    let mut checks = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        let (q1, q2) = (ctx.instantiate(p1), ctx.instantiate(p2));
        let (d1, d2) = (encode_ccs(&q1), encode_ccs(&q2));
        checks.push(ContextCheck {
            context: ctx.to_string(),
            hhpb: hhpb_relation(&d1, &d2).is_some(),
            barbed: barbed_bf_bisim_structs(&d1, &d2).related,
            terms: barbed_bf_bisim_terms(&lift(&q1), &lift(&q2))?.related,
        });
    }
    let consistent = !base_hhpb || checks.iter().all(|c| c.hhpb && c.barbed && c.terms);
    Ok(CongruenceReport {
        scope: "over context family",
        base_hhpb,
        base_barbed,
        checks,
        consistent,
    })
}
