use super::{
    is_coherent, normalize, Direction, EventId, Memory, MemoryEntry, RccsError, RccsTerm,
    TransitionLabel,
};
use crate::syntax::{Action, CcsTerm};

/// All forward transitions, each with the smallest unused identifier.
pub fn forward_steps(r: &RccsTerm) -> Result<Vec<(TransitionLabel, RccsTerm)>, RccsError> {
    require_coherent(r)?;
    Ok(forward_unchecked(r))
}

/// All backward transitions.
pub fn backward_steps(r: &RccsTerm) -> Result<Vec<(TransitionLabel, RccsTerm)>, RccsError> {
    require_coherent(r)?;
    Ok(backward_unchecked(r))
}

fn require_coherent(r: &RccsTerm) -> Result<(), RccsError> {
    if is_coherent(r) {
        Ok(())
    } else {
        Err(RccsError::IncoherentTerm(r.to_string()))
    }
}

pub(crate) fn forward_unchecked(r: &RccsTerm) -> Vec<(TransitionLabel, RccsTerm)> {
    let r = normalize(r);
    let id = r.fresh_id();
    fwd(&r, id)
        .into_iter()
        .map(|(action, s)| {
            let label = TransitionLabel {
                direction: Direction::Forward,
                id,
                action,
            };
            (label, s)
        })
        .collect()
}

fn fwd(r: &RccsTerm, id: EventId) -> Vec<(Action, RccsTerm)> {
    match r {
        RccsTerm::Monitored(m, p) => {
            let summands = p.summands();
            let mut out = Vec::new();
            for (k, (a, cont)) in summands.iter().enumerate() {
                let rest: Vec<(Action, CcsTerm)> = summands
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, (b, q))| ((*b).clone(), (*q).clone()))
                    .collect();
                let entry = MemoryEntry::Past {
                    id,
                    action: (*a).clone(),
                    discarded: CcsTerm::from_summands(rest),
                };
                let next = RccsTerm::Monitored(m.clone().push(entry), (*cont).clone());
                out.push(((*a).clone(), normalize(&next)));
            }
            out
        }
        RccsTerm::Par(l, r) => {
            let left = fwd(l, id);
            let right = fwd(r, id);
            let mut out = Vec::new();
            for (a, l2) in &left {
                out.push((a.clone(), RccsTerm::par(l2.clone(), (**r).clone())));
            }
            for (b, r2) in &right {
                out.push((b.clone(), RccsTerm::par((**l).clone(), r2.clone())));
            }
            for (a, l2) in &left {
                for (b, r2) in &right {
                    if a.is_dual_of(b) {
                        out.push((Action::Tau, RccsTerm::par(l2.clone(), r2.clone())));
                    }
                }
            }
            out
        }
        RccsTerm::Restrict(n, body) => fwd(body, id)
            .into_iter()
            .filter(|(a, _)| !a.mentions(n))
            .map(|(a, s)| (a, RccsTerm::restrict(n.clone(), s)))
            .collect(),
    }
}

/// Reassembles a subtree into a single `m ▷ P`, undoing the distribution
/// of memories over `|` and the hoisting of restrictions. Fails when the
/// two sides of a parallel composition do not share a fork-topped memory.
pub(crate) fn merge(r: &RccsTerm) -> Option<(Memory, CcsTerm)> {
    match r {
        RccsTerm::Monitored(m, p) => Some((m.clone(), p.clone())),
        RccsTerm::Par(l, r) => {
            let (mut ml, pl) = merge(l)?;
            let (mr, pr) = merge(r)?;
            if ml != mr || ml.top() != Some(&MemoryEntry::Fork) {
                return None;
            }
            ml.0.pop();
            Some((ml, CcsTerm::par(pl, pr)))
        }
        RccsTerm::Restrict(a, r) => {
            let (m, p) = merge(r)?;
            Some((m, CcsTerm::Restrict(a.clone(), Box::new(p))))
        }
    }
}

pub(crate) fn backward_unchecked(r: &RccsTerm) -> Vec<(TransitionLabel, RccsTerm)> {
    bwd(&normalize(r))
        .into_iter()
        .map(|(id, action, s)| {
            let label = TransitionLabel {
                direction: Direction::Backward,
                id,
                action,
            };
            (label, s)
        })
        .collect()
}

fn bwd(r: &RccsTerm) -> Vec<(EventId, Action, RccsTerm)> {
    if let RccsTerm::Restrict(n, body) = r {
        return bwd(body)
            .into_iter()
            .map(|(i, a, s)| (i, a, RccsTerm::restrict(n.clone(), s)))
            .collect();
    }
    let mut out = internal(r);
    out.extend(undo_root(r));
    out
}

/// Undoes the top entry of the memory shared by the whole subtree.
fn undo_root(r: &RccsTerm) -> Option<(EventId, Action, RccsTerm)> {
    let (mut m, p) = merge(r)?;
    let Some(MemoryEntry::Past {
        id,
        action,
        discarded,
    }) = m.0.pop()
    else {
        return None;
    };
    let mut summands = vec![(action.clone(), p)];
    summands.extend(
        discarded
            .summands()
            .into_iter()
            .map(|(a, q)| (a.clone(), q.clone())),
    );
    let restored = RccsTerm::Monitored(m, CcsTerm::from_summands(summands));
    Some((id, action, normalize(&restored)))
}

/// Backward steps strictly inside the subtree. A restriction stays above
/// the subtree it binds, memories included.
fn internal(r: &RccsTerm) -> Vec<(EventId, Action, RccsTerm)> {
    match r {
        RccsTerm::Monitored(..) => Vec::new(),
        RccsTerm::Par(l, r) => {
            let left = bwd(l);
            let right = bwd(r);
            let (lids, rids) = (l.ids(), r.ids());
            let mut out = Vec::new();
            for (i, a, l2) in &left {
                if !rids.contains(i) {
                    out.push((*i, a.clone(), RccsTerm::par(l2.clone(), (**r).clone())));
                }
            }
            for (i, b, r2) in &right {
                if !lids.contains(i) {
                    out.push((*i, b.clone(), RccsTerm::par((**l).clone(), r2.clone())));
                }
            }
            for (i, a, l2) in &left {
                for (j, b, r2) in &right {
                    if i == j && a.is_dual_of(b) {
                        out.push((*i, Action::Tau, RccsTerm::par(l2.clone(), r2.clone())));
                    }
                }
            }
            out
        }
        RccsTerm::Restrict(..) => bwd(r),
    }
}
