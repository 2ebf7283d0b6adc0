use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

/// Index of an event inside one configuration structure.
pub type EventIdx = usize;

/// Largest number of events a single structure may hold.
pub const MAX_EVENTS: usize = 256;

const WORDS: usize = MAX_EVENTS / 64;

/// A finite set of events, i.e. a candidate configuration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EventSet([u64; WORDS]);

impl EventSet {
    pub const EMPTY: EventSet = EventSet([0; WORDS]);

    pub fn singleton(e: EventIdx) -> Self {
        let mut s = Self::EMPTY;
        s.insert(e);
        s
    }

    pub fn insert(&mut self, e: EventIdx) {
        assert!(
            e < MAX_EVENTS,
            "configuration structure exceeds {MAX_EVENTS} events"
        );
        self.0[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: EventIdx) {
        self.0[e / 64] &= !(1 << (e % 64));
    }

    pub fn with(mut self, e: EventIdx) -> Self {
        self.insert(e);
        self
    }

    pub fn without(mut self, e: EventIdx) -> Self {
        self.remove(e);
        self
    }

    pub fn contains(&self, e: EventIdx) -> bool {
        e < MAX_EVENTS && self.0[e / 64] & (1 << (e % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &EventSet) -> EventSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o |= b;
        }
        out
    }

    pub fn intersection(&self, other: &EventSet) -> EventSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o &= b;
        }
        out
    }

    pub fn difference(&self, other: &EventSet) -> EventSet {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o &= !b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = EventIdx> + '_ {
        self.0.iter().enumerate().flat_map(|(w, bits)| {
            let mut bits = *bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<EventIdx> {
        self.iter().collect()
    }

    /// Map every member through `f`; `None` results are dropped.
    pub fn map(&self, mut f: impl FnMut(EventIdx) -> Option<EventIdx>) -> EventSet {
        self.iter().filter_map(&mut f).collect()
    }
}

impl FromIterator<EventIdx> for EventSet {
    fn from_iter<T: IntoIterator<Item = EventIdx>>(iter: T) -> Self {
        let mut s = EventSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl PartialOrd for EventSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Cardinality first, then the sorted member lists.
impl Ord for EventSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "e{e}")?;
        }
        f.write_str("}")
    }
}

/// As a list of event ids, `["e0", "e2"]`.
impl Serialize for EventSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for e in self.iter() {
            seq.serialize_element(&format!("e{e}"))?;
        }
        seq.end()
    }
}
