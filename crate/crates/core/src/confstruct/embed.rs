use super::{ConfStruct, EventIdx, EventSet, Label};

/// Definition check for `c1 ⊑ c2` under a given alignment of events: the
/// alignment must be total and injective on `E₁`, keep labels, and send
/// every configuration of `c1` to one of `c2`.
pub fn is_substructure_with<L: Label>(
    c1: &ConfStruct<L>,
    c2: &ConfStruct<L>,
    align: impl Fn(EventIdx) -> Option<EventIdx>,
) -> bool {
    let mut image = EventSet::EMPTY;
    for e in 0..c1.num_events() {
        let Some(t) = align(e) else { return false };
        if t >= c2.num_events() || image.contains(t) || c1.label(e) != c2.label(t) {
            return false;
        }
        image.insert(t);
    }
    c1.configurations()
        .iter()
        .all(|x| c2.contains(&x.map(&align)))
}

/// `c1 ⊑ c2` for some alignment of events.
pub fn is_substructure<L: Label>(c1: &ConfStruct<L>, c2: &ConfStruct<L>) -> bool {
    embedding(c1, c2, false).is_some()
}

/// `c1 ≅ c2`
pub fn is_isomorphic<L: Label>(c1: &ConfStruct<L>, c2: &ConfStruct<L>) -> bool {
    c1.num_events() == c2.num_events()
        && c1.num_configurations() == c2.num_configurations()
        && embedding(c1, c2, true).is_some()
}

/// Searches a label-preserving injective event map sending every
/// configuration of `small` into `big`. With `exact`, event depths must
/// agree, which is necessary for an isomorphism.
pub fn embedding<L: Label>(
    small: &ConfStruct<L>,
    big: &ConfStruct<L>,
    exact: bool,
) -> Option<Vec<EventIdx>> {
    if small.num_events() > big.num_events() {
        return None;
    }
    if small.contains(&EventSet::EMPTY) && !big.contains(&EventSet::EMPTY) {
        return None;
    }
    let n = small.num_events();
    let mut closing: Vec<Vec<EventSet>> = vec![Vec::new(); n];
    for x in small.configurations() {
        if let Some(last) = x.iter().last() {
            closing[last].push(*x);
        }
    }
    let search = Search {
        small,
        big,
        exact,
        small_depth: depths(small),
        big_depth: depths(big),
        closing,
    };
    let mut map = vec![usize::MAX; n];
    let mut used = EventSet::EMPTY;
    search.assign(0, &mut map, &mut used).then_some(map)
}

struct Search<'a, L> {
    small: &'a ConfStruct<L>,
    big: &'a ConfStruct<L>,
    exact: bool,
    small_depth: Vec<usize>,
    big_depth: Vec<usize>,
    /// Configurations whose largest event is the index.
    closing: Vec<Vec<EventSet>>,
}

impl<L: Label> Search<'_, L> {
    fn assign(&self, i: EventIdx, map: &mut [EventIdx], used: &mut EventSet) -> bool {
        if i == map.len() {
            return true;
        }
        for t in 0..self.big.num_events() {
            if used.contains(t) || self.small.label(i) != self.big.label(t) {
                continue;
            }
            let (ds, db) = (self.small_depth[i], self.big_depth[t]);
            if (self.exact && ds != db) || db > ds {
                continue;
            }
            map[i] = t;
            let fits = self.closing[i]
                .iter()
                .all(|x| self.big.contains(&x.map(|e| Some(map[e]))));
            if fits {
                used.insert(t);
                if self.assign(i + 1, map, used) {
                    return true;
                }
                used.remove(t);
            }
        }
        false
    }
}

fn depths<L: Label>(c: &ConfStruct<L>) -> Vec<usize> {
    let mut d = vec![usize::MAX; c.num_events()];
    for x in c.configurations() {
        for e in x.iter() {
            d[e] = d[e].min(x.len());
        }
    }
    d
}
