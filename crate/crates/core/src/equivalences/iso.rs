use std::cell::RefCell;
use std::collections::HashMap;

use crate::confstruct::{CausalOrder, ConfStruct, EventIdx, EventSet};

/// Causal orders of configurations, computed on demand.
pub(crate) struct Orders<'a> {
    c: &'a ConfStruct,
    cache: RefCell<HashMap<EventSet, CausalOrder>>,
}

impl<'a> Orders<'a> {
    pub fn new(c: &'a ConfStruct) -> Self {
        Orders {
            c,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn structure(&self) -> &'a ConfStruct {
        self.c
    }

    /// Events strictly below `e` in `x`.
    pub fn causes(&self, x: &EventSet, e: EventIdx) -> EventSet {
        self.with(x, |o| o.causes(e))
    }

    pub fn leq(&self, x: &EventSet, a: EventIdx, b: EventIdx) -> bool {
        self.with(x, |o| o.leq(a, b))
    }

    fn with<T>(&self, x: &EventSet, f: impl FnOnce(&CausalOrder) -> T) -> T {
        let mut cache = self.cache.borrow_mut();
        let order = cache
            .entry(*x)
            .or_insert_with(|| self.c.causal_order(x).expect("configuration"));
        f(order)
    }
}

/// How a bijection must treat causality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum OrderCheck {
    /// `e ≤ e′ ⟹ f(e) ≤ f(e′)`
    Preserve,
    /// `e ≤ e′ ⟺ f(e) ≤ f(e′)`
    Reflect,
}

/// Label-preserving bijections `x1 → x2` satisfying `check`.
pub(crate) fn bijections(
    o1: &Orders,
    x1: &EventSet,
    o2: &Orders,
    x2: &EventSet,
    check: OrderCheck,
) -> Vec<Vec<(EventIdx, EventIdx)>> {
    if x1.len() != x2.len() {
        return Vec::new();
    }
    let left = x1.to_vec();
    let right = x2.to_vec();
    let mut out = Vec::new();
    let mut current: Vec<(EventIdx, EventIdx)> = Vec::new();
    let mut used = EventSet::EMPTY;
    extend(
        o1,
        x1,
        o2,
        x2,
        check,
        &left,
        &right,
        &mut current,
        &mut used,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    o1: &Orders,
    x1: &EventSet,
    o2: &Orders,
    x2: &EventSet,
    check: OrderCheck,
    left: &[EventIdx],
    right: &[EventIdx],
    current: &mut Vec<(EventIdx, EventIdx)>,
    used: &mut EventSet,
    out: &mut Vec<Vec<(EventIdx, EventIdx)>>,
) {
    let i = current.len();
    if i == left.len() {
        out.push(current.clone());
        return;
    }
    let a = left[i];
    for &b in right {
        if used.contains(b) || o1.structure().label(a) != o2.structure().label(b) {
            continue;
        }
        let consistent = current.iter().all(|&(p, q)| {
            let fwd = |l1: bool, l2: bool| match check {
                OrderCheck::Preserve => !l1 || l2,
                OrderCheck::Reflect => l1 == l2,
            };
            fwd(o1.leq(x1, p, a), o2.leq(x2, q, b)) && fwd(o1.leq(x1, a, p), o2.leq(x2, b, q))
        });
        if consistent {
            current.push((a, b));
            used.insert(b);
            extend(o1, x1, o2, x2, check, left, right, current, used, out);
            used.remove(b);
            current.pop();
        }
    }
}
