use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ConfError, ConfStruct, EventSet, Label};
use crate::syntax::Action;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventJson {
    pub id: String,
    pub label: String,
}

/// `{"events":[{"id","label"}], "configurations":[[id, ...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfStructJson {
    pub events: Vec<EventJson>,
    pub configurations: Vec<Vec<String>>,
}

pub(crate) fn event_id(e: usize) -> String {
    format!("e{e}")
}

pub(crate) fn config_ids(x: &EventSet) -> Vec<String> {
    x.iter().map(event_id).collect()
}

impl<L: Label> ConfStruct<L> {
    pub fn to_json(&self) -> ConfStructJson {
        ConfStructJson {
            events: self
                .events()
                .iter()
                .enumerate()
                .map(|(i, e)| EventJson {
                    id: event_id(i),
                    label: e.label.to_string(),
                })
                .collect(),
            configurations: self.configurations().iter().map(config_ids).collect(),
        }
    }

    /// Hasse diagram of `⊆`, bottom to top, covering edges labelled.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph conf {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, x) in self.configurations().iter().enumerate() {
            let name = if x.is_empty() {
                "∅".to_string()
            } else {
                format!("{x:?}")
            };
            let _ = writeln!(out, "  n{i} [label=\"{name}\"];");
        }
        for (x, e) in self.covering_edges() {
            let from = self
                .config_index(&x)
                .expect("edge source is a configuration");
            let to = self
                .config_index(&x.with(e))
                .expect("edge target is a configuration");
            let _ = writeln!(out, "  n{from} -> n{to} [label=\"{}\"];", self.label(e));
        }
        out.push_str("}\n");
        out
    }
}

impl ConfStruct<Action> {
    pub fn from_json(json: &ConfStructJson) -> Result<Self, ConfError> {
        let mut labels = Vec::new();
        let mut ids = std::collections::HashMap::new();
        for (i, ev) in json.events.iter().enumerate() {
            let label: Action = ev
                .label
                .parse()
                .map_err(|_| ConfError::Malformed(format!("bad label {:?}", ev.label)))?;
            labels.push(label);
            if ids.insert(ev.id.clone(), i).is_some() {
                return Err(ConfError::Malformed(format!(
                    "duplicate event id {:?}",
                    ev.id
                )));
            }
        }
        let mut configs = Vec::new();
        for c in &json.configurations {
            let mut x = Vec::new();
            for id in c {
                let e = ids
                    .get(id)
                    .ok_or_else(|| ConfError::Malformed(format!("unknown event id {id:?}")))?;
                x.push(*e);
            }
            configs.push(x);
        }
        Ok(ConfStruct::from_labels(labels, configs))
    }
}
