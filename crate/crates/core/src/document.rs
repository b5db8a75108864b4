//! Versioned JSON documents carrying one knot's Floer package.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::BraidWord;
use crate::floer::{BoundaryTerm, DataViolation, FloerGenerator, KnotFloerData, Q};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotHeader {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<BraidWord>,
}

/// The package fields of [`KnotFloerData`] other than name and braid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloerSection {
    #[serde(rename = "chern_N")]
    pub chern_n: u32,
    #[serde(with = "crate::floer::rational_text")]
    pub alpha: Q,
    pub generators: Vec<FloerGenerator>,
    #[serde(rename = "boundary_Z", default)]
    pub boundary: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub higher_boundary: Vec<BoundaryTerm>,
    #[serde(default)]
    pub special_d: Vec<i64>,
    #[serde(default)]
    pub special_delta: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Fields whose values are placeholders rather than known quantities.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub illustrative: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotDataDocument {
    pub schema_version: String,
    pub knot: KnotHeader,
    pub floer: FloerSection,
    #[serde(default)]
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed knot document: {0}")]
    Schema(String),
    #[error("unsupported schema_version {0:?} (expected {SCHEMA_VERSION:?})")]
    Version(String),
    #[error(transparent)]
    Invalid(#[from] DataViolation),
}

impl KnotDataDocument {
    pub fn new(k: &KnotFloerData, provenance: Provenance) -> Self {
        KnotDataDocument {
            schema_version: SCHEMA_VERSION.into(),
            knot: KnotHeader { name: k.name.clone(), braid: k.braid.clone() },
            floer: FloerSection {
                chern_n: k.chern_n,
                alpha: k.alpha,
                generators: k.generators.clone(),
                boundary: k.boundary.clone(),
                higher_boundary: k.higher_boundary.clone(),
                special_d: k.special_d.clone(),
                special_delta: k.special_delta.clone(),
            },
            provenance,
        }
    }

    /// Parses and checks the schema version; package invariants are checked by
    /// [`KnotDataDocument::knot_data`].
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: KnotDataDocument = serde_json::from_str(text).map_err(|e| DocumentError::Schema(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Version(doc.schema_version));
        }
        Ok(doc)
    }

    /// The validated package, with actions brought into their window.
    pub fn knot_data(&self) -> Result<KnotFloerData, DocumentError> {
        let f = &self.floer;
        let mut k = KnotFloerData {
            name: self.knot.name.clone(),
            braid: self.knot.braid.clone(),
            chern_n: f.chern_n,
            alpha: f.alpha,
            generators: f.generators.clone(),
            boundary: f.boundary.clone(),
            higher_boundary: f.higher_boundary.clone(),
            special_d: f.special_d.clone(),
            special_delta: f.special_delta.clone(),
        };
        k.normalize();
        k.validate()?;
        Ok(k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Parses a document and returns its validated package and provenance.
pub fn load_knot_data(text: &str) -> Result<(KnotFloerData, Provenance), DocumentError> {
    let doc = KnotDataDocument::parse(text)?;
    let k = doc.knot_data()?;
    Ok((k, doc.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::packages;

    #[test]
    fn shipped_documents_round_trip() {
        for (name, text) in packages::DOCUMENTS {
            let doc = KnotDataDocument::parse(text).unwrap();
            let printed = doc.to_json();
            assert_eq!(KnotDataDocument::parse(&printed).unwrap(), doc, "{name}");
            let k = doc.knot_data().unwrap();
            let again = KnotDataDocument::new(&k, doc.provenance.clone());
            assert_eq!(again.knot_data().unwrap(), k);
        }
    }

    #[test]
    fn errors() {
        let good = packages::DOCUMENTS[1].1;
        assert!(matches!(KnotDataDocument::parse("{"), Err(DocumentError::Schema(_))));
        let v2 = good.replace("\"schema_version\": \"1\"", "\"schema_version\": \"2\"");
        assert!(matches!(KnotDataDocument::parse(&v2), Err(DocumentError::Version(_))));
        let extra = good.replacen('{', "{\"surplus\": 1,", 1);
        assert!(matches!(KnotDataDocument::parse(&extra), Err(DocumentError::Schema(_))));
        let bad_alpha = good.replace("\"alpha\": \"1/4\"", "\"alpha\": \"1/0\"");
        assert!(matches!(KnotDataDocument::parse(&bad_alpha), Err(DocumentError::Schema(_))));
    }

    #[test]
    fn square_violation_is_named() {
        let text = r#"{
          "schema_version": "1",
          "knot": {"name": "bad"},
          "floer": {
            "chern_N": 1, "alpha": "1/4",
            "generators": [
              {"id": "x", "action": "0", "maslov_lift": 2},
              {"id": "y", "action": "1/8", "maslov_lift": 1},
              {"id": "z", "action": "1/4", "maslov_lift": 0}
            ],
            "boundary_Z": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
          }
        }"#;
        match load_knot_data(text) {
            Err(DocumentError::Invalid(v)) => assert_eq!(v.name, "boundary-square"),
            other => panic!("{other:?}"),
        }
    }
}
