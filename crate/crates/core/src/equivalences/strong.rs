use std::collections::{HashMap, VecDeque};

use crate::syntax::{canonical, ccs_steps, Action, CcsTerm};

fn steps(p: &CcsTerm) -> Vec<(Action, CcsTerm)> {
    let mut out: Vec<(Action, CcsTerm)> = ccs_steps(p)
        .into_iter()
        .map(|(a, q)| (a, canonical(&q)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Steps of both states and, for each pair of equally labelled steps, the
/// index of the target pair.
type Successors = (
    Vec<(Action, CcsTerm)>,
    Vec<(Action, CcsTerm)>,
    Vec<Vec<Option<usize>>>,
);

/// Classical strong bisimilarity on the forward CCS transition system,
/// states taken up to structural congruence.
pub fn forward_strong_bisim(p1: &CcsTerm, p2: &CcsTerm) -> bool {
    let start = (canonical(p1), canonical(p2));
    let mut index: HashMap<(CcsTerm, CcsTerm), usize> = HashMap::new();
    let mut pairs = vec![start.clone()];
    index.insert(start, 0);
    let mut succ: Vec<Successors> = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let (p, q) = pairs[i].clone();
        let sp = steps(&p);
        let sq = steps(&q);
        let ids = sp
            .iter()
            .map(|(a, p2)| {
                sq.iter()
                    .map(|(b, q2)| {
                        (a == b).then(|| {
                            let key = (p2.clone(), q2.clone());
                            *index.entry(key.clone()).or_insert_with(|| {
                                pairs.push(key);
                                queue.push_back(pairs.len() - 1);
                                pairs.len() - 1
                            })
                        })
                    })
                    .collect()
            })
            .collect();
        if succ.len() <= i {
            succ.resize_with(i + 1, Default::default);
        }
        succ[i] = (sp, sq, ids);
    }
    let mut alive = vec![true; pairs.len()];
    loop {
        let mut changed = false;
        for i in 0..pairs.len() {
            if !alive[i] {
                continue;
            }
            let (sp, sq, ids) = &succ[i];
            let left = (0..sp.len()).all(|x| ids[x].iter().any(|j| j.is_some_and(|j| alive[j])));
            let right =
                (0..sq.len()).all(|y| ids.iter().any(|row| row[y].is_some_and(|j| alive[j])));
            if !(left && right) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            return alive[0];
        }
    }
}
