use std::collections::{HashMap, VecDeque};

use super::{EquivalenceError, EquivalenceVerdict, Witness};
use crate::confstruct::{ConfStruct, EventSet};
use crate::rccs::{reachable_states, Direction, RccsTerm, StateGraph};
use crate::syntax::Action;

/// One side of the barbed game: states with barbs and tau moves.
trait Arena {
    type State: Clone + Eq + std::hash::Hash + Ord;
    fn start(&self) -> Self::State;
    fn barbs(&self, s: &Self::State) -> Vec<Action>;
    fn tau(&self, s: &Self::State, dir: Direction) -> Vec<Self::State>;
}

impl Arena for ConfStruct {
    type State = EventSet;

    fn start(&self) -> EventSet {
        EventSet::EMPTY
    }

    fn barbs(&self, x: &EventSet) -> Vec<Action> {
        ConfStruct::barbs(self, x)
    }

    fn tau(&self, x: &EventSet, dir: Direction) -> Vec<EventSet> {
        match dir {
            Direction::Forward => self
                .extensions(x)
                .into_iter()
                .filter(|&e| self.label(e).is_tau())
                .map(|e| x.with(e))
                .collect(),
            Direction::Backward => self
                .retractions(x)
                .into_iter()
                .filter(|&e| self.label(e).is_tau())
                .map(|e| x.without(e))
                .collect(),
        }
    }
}

impl Arena for StateGraph {
    type State = usize;

    fn start(&self) -> usize {
        0
    }

    fn barbs(&self, n: &usize) -> Vec<Action> {
        StateGraph::barbs(self, *n)
    }

    fn tau(&self, n: &usize, dir: Direction) -> Vec<usize> {
        self.tau_successors(*n, dir)
    }
}

/// Greatest barbed back-and-forth bisimulation among pairs reachable from
/// the start by simultaneous tau moves, or `None` if the start pair falls.
fn game<A: Arena, B: Arena>(a: &A, b: &B) -> Option<Vec<(A::State, B::State)>> {
    const DIRS: [Direction; 2] = [Direction::Forward, Direction::Backward];
    let mut index: HashMap<(A::State, B::State), usize> = HashMap::new();
    let mut pairs: Vec<(A::State, B::State)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (a.start(), b.start());
    index.insert(start.clone(), 0);
    pairs.push(start);
    queue.push_back(0);
    // moves[i][d] = (successors of the left, successors of the right, pair ids)
    type Moves<S, T> = (Vec<S>, Vec<T>, Vec<Vec<usize>>);
    let mut moves: Vec<[Moves<A::State, B::State>; 2]> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (s, t) = pairs[i].clone();
        let per_dir = DIRS.map(|d| {
            let sa = a.tau(&s, d);
            let tb = b.tau(&t, d);
            let ids = sa
                .iter()
                .map(|s2| {
                    tb.iter()
                        .map(|t2| {
                            let key = (s2.clone(), t2.clone());
                            *index.entry(key.clone()).or_insert_with(|| {
                                pairs.push(key);
                                queue.push_back(pairs.len() - 1);
                                pairs.len() - 1
                            })
                        })
                        .collect()
                })
                .collect();
            (sa, tb, ids)
        });
        if moves.len() <= i {
            moves.resize_with(i + 1, || {
                [(vec![], vec![], vec![]), (vec![], vec![], vec![])]
            });
        }
        moves[i] = per_dir;
    }

    let mut alive: Vec<bool> = pairs
        .iter()
        .map(|(s, t)| a.barbs(s) == b.barbs(t))
        .collect();
    loop {
        let mut changed = false;
        for i in 0..pairs.len() {
            if !alive[i] {
                continue;
            }
            let ok = moves[i].iter().all(|(sa, tb, ids)| {
                let left = (0..sa.len()).all(|p| ids[p].iter().any(|&j| alive[j]));
                let right = (0..tb.len()).all(|q| ids.iter().any(|row| alive[row[q]]));
                left && right
            });
            if !ok {
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
    let mut out: Vec<_> = pairs
        .into_iter()
        .zip(alive)
        .filter(|(_, l)| *l)
        .map(|(p, _)| p)
        .collect();
    out.sort();
    Some(out)
}

/// Strong barbed back-and-forth bisimilarity of two structures.
pub fn barbed_bf_bisim_structs(c1: &ConfStruct, c2: &ConfStruct) -> EquivalenceVerdict {
    match game(c1, c2) {
        Some(pairs) => EquivalenceVerdict::related(Witness::Pairs { pairs }),
        None => EquivalenceVerdict::unrelated(Witness::None),
    }
}

/// The same game on the reachable state graphs of two coherent terms.
/// Event identifiers play no part: only tau moves and barbs are compared.
pub fn barbed_bf_bisim_terms(
    r: &RccsTerm,
    s: &RccsTerm,
) -> Result<EquivalenceVerdict, EquivalenceError> {
    let g1 = reachable_states(r)?;
    let g2 = reachable_states(s)?;
    Ok(match game(&g1, &g2) {
        Some(pairs) => EquivalenceVerdict::related(Witness::States {
            pairs: pairs
                .into_iter()
                .map(|(i, j)| (g1.nodes[i].to_string(), g2.nodes[j].to_string()))
                .collect(),
        }),
        None => EquivalenceVerdict::unrelated(Witness::None),
    })
}
