use super::{ConfStruct, EventIdx, EventSet, Label};

/// A partial map on events between two structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    map: Vec<Option<EventIdx>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    /// The image of this configuration is not a configuration of the target.
    NotConfigurationPreserving { config: EventSet },
    /// Two events of one configuration share an image.
    NotLocallyInjective {
        config: EventSet,
        e1: EventIdx,
        e2: EventIdx,
    },
    /// The image carries a different label.
    NotLabelPreserving { event: EventIdx },
}

impl Morphism {
    pub fn new(map: Vec<Option<EventIdx>>) -> Self {
        Morphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Morphism::new((0..n).map(Some).collect())
    }

    pub fn get(&self, e: EventIdx) -> Option<EventIdx> {
        self.map.get(e).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<EventIdx>] {
        &self.map
    }

    pub fn apply(&self, x: &EventSet) -> EventSet {
        x.map(|e| self.get(e))
    }

    /// `other ∘ self`
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism::new(
            self.map
                .iter()
                .map(|e| e.and_then(|e| other.get(e)))
                .collect(),
        )
    }

    /// Checks the three morphism conditions; `label_eq` relates a source
    /// label to the label of its image.
    pub fn check<A: Label, B: Label>(
        &self,
        source: &ConfStruct<A>,
        target: &ConfStruct<B>,
        label_eq: impl Fn(&A, &B) -> bool,
    ) -> Result<(), MorphismViolation> {
        for e in 0..source.num_events() {
            if let Some(t) = self.get(e) {
                if !label_eq(source.label(e), target.label(t)) {
                    return Err(MorphismViolation::NotLabelPreserving { event: e });
                }
            }
        }
        for x in source.configurations() {
            if !target.contains(&self.apply(x)) {
                return Err(MorphismViolation::NotConfigurationPreserving { config: *x });
            }
            let members = x.to_vec();
            for (i, &e1) in members.iter().enumerate() {
                for &e2 in &members[i + 1..] {
                    if self.get(e1).is_some() && self.get(e1) == self.get(e2) {
                        return Err(MorphismViolation::NotLocallyInjective { config: *x, e1, e2 });
                    }
                }
            }
        }
        Ok(())
    }
}
