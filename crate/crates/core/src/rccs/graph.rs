use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use super::{
    backward_unchecked, congruence_normal_form, forward_unchecked, merge, normalize, Direction,
    RccsError, RccsTerm, TransitionLabel,
};
use crate::syntax::{Action, CcsTerm};

/// `m ▷ P` with an empty memory, after reassembly.
fn initial_body(r: &RccsTerm) -> Option<CcsTerm> {
    match merge(r) {
        Some((m, p)) if m.is_empty() => Some(p),
        _ => None,
    }
}

/// Searches the backward closure of `r` for a memory-free term.
pub fn is_coherent(r: &RccsTerm) -> bool {
    let start = normalize(r);
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if initial_body(&s).is_some() {
            return true;
        }
        for (_, t) in backward_unchecked(&s) {
            if seen.insert(t.clone()) {
                stack.push(t);
            }
        }
    }
    false
}

/// A maximal backward path from `r` and the term it ends in.
pub fn origin_path(r: &RccsTerm) -> Result<(Vec<(TransitionLabel, RccsTerm)>, CcsTerm), RccsError> {
    let mut cur = normalize(r);
    let mut path = Vec::new();
    loop {
        let mut steps = backward_unchecked(&cur);
        if steps.is_empty() {
            break;
        }
        steps.sort();
        let (label, next) = steps.swap_remove(0);
        path.push((label, next.clone()));
        cur = next;
    }
    match initial_body(&cur) {
        Some(p) => Ok((path, p)),
        None => Err(RccsError::IncoherentTerm(r.to_string())),
    }
}

/// The memory-free process `r` was reached from.
pub fn origin(r: &RccsTerm) -> Result<CcsTerm, RccsError> {
    origin_path(r).map(|(_, p)| p)
}

/// `r ↓α`
pub fn barb(r: &RccsTerm, a: &Action) -> Result<bool, RccsError> {
    if !is_coherent(r) {
        return Err(RccsError::IncoherentTerm(r.to_string()));
    }
    Ok(barbs(r).contains(a))
}

/// Visible labels of forward steps, sorted.
pub fn barbs(r: &RccsTerm) -> Vec<Action> {
    let mut out: Vec<Action> = forward_unchecked(r)
        .into_iter()
        .map(|(l, _)| l.action)
        .filter(|a| !a.is_tau())
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: TransitionLabel,
}

/// States reachable by forward and backward steps, identified up to
/// structural congruence. Each node keeps the first representative
/// reached; node 0 is the start.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub nodes: Vec<RccsTerm>,
    pub edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl StateGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn outgoing(&self, n: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out[n].iter().map(move |&e| &self.edges[e])
    }

    pub fn forward_edges(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.label.direction == Direction::Forward)
            .count()
    }

    pub fn backward_edges(&self) -> usize {
        self.edges.len() - self.forward_edges()
    }

    pub fn barbs(&self, n: usize) -> Vec<Action> {
        let mut out: Vec<Action> = self
            .outgoing(n)
            .filter(|e| e.label.direction == Direction::Forward && !e.label.action.is_tau())
            .map(|e| e.label.action.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Targets of tau moves in one direction.
    pub fn tau_successors(&self, n: usize, dir: Direction) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .outgoing(n)
            .filter(|e| e.label.direction == dir && e.label.action.is_tau())
            .map(|e| e.to)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph states {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label = n.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(s, "  s{i} [label=\"{label}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"];", e.from, e.to, e.label);
        }
        s.push_str("}\n");
        s
    }
}

pub fn reachable_states(r: &RccsTerm) -> Result<StateGraph, RccsError> {
    if !is_coherent(r) {
        return Err(RccsError::IncoherentTerm(r.to_string()));
    }
    let start = normalize(r);
    let mut index: HashMap<RccsTerm, usize> = HashMap::new();
    index.insert(congruence_normal_form(&start), 0);
    let mut nodes = vec![start];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let term = nodes[n].clone();
        let mut steps = forward_unchecked(&term);
        steps.extend(backward_unchecked(&term));
        for (label, next) in steps {
            let key = congruence_normal_form(&next);
            let to = match index.get(&key) {
                Some(&i) => i,
                None => {
                    nodes.push(next);
                    index.insert(key, nodes.len() - 1);
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            edges.push(Edge { from: n, to, label });
        }
    }
    let mut out = vec![Vec::new(); nodes.len()];
    for (i, e) in edges.iter().enumerate() {
        out[e.from].push(i);
    }
    Ok(StateGraph { nodes, edges, out })
}
