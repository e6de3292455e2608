//! Space documents (JSON) and DOT export of the specialization digraph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FiniteSpace, Point, SpaceError};

/// On-disk form of a space. Exactly one of `min_nbhd` / `opens` must be
/// present:
///
/// ```json
/// {"points": ["a","b"], "min_nbhd": {"a": ["a","b"], "b": ["b"]}}
/// {"points": ["a","b"], "opens": [[], ["b"], ["a","b"]]}
/// ```
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpaceDoc {
    pub points: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_nbhd: Option<BTreeMap<String, Vec<Point>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<Point>>>,
}

impl FiniteSpace {
    pub fn from_doc(doc: &SpaceDoc) -> Result<FiniteSpace, SpaceError> {
        match (&doc.min_nbhd, &doc.opens) {
            (Some(table), None) => {
                let neighborhoods = table
                    .iter()
                    .map(|(name, nbhd)| Ok((name.parse::<Point>()?, nbhd.clone())))
                    .collect::<Result<Vec<_>, SpaceError>>()?;
                FiniteSpace::from_min_nbhd(doc.points.clone(), &neighborhoods)
            }
            (None, Some(opens)) => FiniteSpace::from_open_sets(doc.points.clone(), opens),
            _ => Err(SpaceError::InvalidDocument(
                "exactly one of `min_nbhd` and `opens` must be given".into(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<FiniteSpace, SpaceError> {
        let doc: SpaceDoc =
            serde_json::from_str(text).map_err(|e| SpaceError::InvalidDocument(e.to_string()))?;
        FiniteSpace::from_doc(&doc)
    }

    /// Canonical document: always the minimal-neighborhood form.
    pub fn to_doc(&self) -> SpaceDoc {
        let table = self
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| (p.to_string(), self.set_points(self.min_nbhd_idx(i))))
            .collect();
        SpaceDoc {
            points: self.points().to_vec(),
            min_nbhd: Some(table),
            opens: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("space doc serializes")
    }

    /// Specialization digraph in DOT: an arc `x -> y` for every `y ∈ U(x)`
    /// with `y ≠ x`; self-loops omitted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n");
        for p in self.points() {
            out.push_str(&format!("  \"{p}\";\n"));
        }
        for (x, y) in self.specialization_arcs() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.point(x),
                self.point(y)
            ));
        }
        out.push_str("}\n");
        out
    }
}
