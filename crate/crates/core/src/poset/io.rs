use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FinitePoset;
use crate::error::{Error, Result};

/// Wire format for posets. `leq` may list only covering pairs; the closure
/// is computed on load and `to_json` emits covering pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BTreeMap<String, String>>,
}

impl PosetJson {
    pub fn into_poset(self) -> Result<FinitePoset> {
        for id in &self.elements {
            let sentinel = id.starts_with(super::NEG_INF) || id.starts_with(super::POS_INF);
            if id.starts_with(super::RESERVED_PREFIX) && !sentinel {
                return Err(Error::Input(format!("element id `{id}` uses the reserved prefix")));
            }
        }
        let rank = self.rank.map(|r| per_element(&self.elements, &r, "rank")).transpose()?;
        let base = self.base.map(|b| per_element(&self.elements, &b, "base")).transpose()?;
        FinitePoset::from_relations(&self.elements, &self.leq, base, rank)
    }

    pub fn from_poset(p: &FinitePoset) -> Self {
        let name = |i: usize| p.id(i).to_string();
        PosetJson {
            elements: p.ids().to_vec(),
            leq: p.covering_pairs().into_iter().map(|(a, b)| (name(a), name(b))).collect(),
            rank: p.ranks().map(|r| (0..p.len()).map(|i| (name(i), r[i])).collect()),
            base: p.base().map(|b| (0..p.len()).map(|i| (name(i), b[i].clone())).collect()),
        }
    }
}

fn per_element<T: Clone>(elements: &[String], map: &BTreeMap<String, T>, what: &str) -> Result<Vec<T>> {
    if let Some(extra) = map.keys().find(|k| !elements.contains(k)) {
        return Err(Error::UnknownElement(extra.clone()));
    }
    elements
        .iter()
        .map(|e| map.get(e).cloned().ok_or_else(|| Error::Input(format!("{what} missing for `{e}`"))))
        .collect()
}

impl FinitePoset {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PosetJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        raw.into_poset()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PosetJson::from_poset(self)).expect("poset serializes")
    }
}
