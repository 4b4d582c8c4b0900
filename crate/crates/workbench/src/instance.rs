//! The JSON instance format.
//!
//! ```json
//! {
//!   "name": "vee",
//!   "carrier": ["a", "b", "c"],
//!   "order": [["a", "c"], ["b", "c"]],
//!   "maps": { "collapse": ["c", "c", "c"] },
//!   "families": { "id": [ { "values": [["a"], ["b"], ["c"]] } ] },
//!   "staged": { "name": "omega-top", "shape": "chain-top", "start": 1, "step": 1 }
//! }
//! ```
//!
//! A space is given by `order` (pairs `x ≤ y`, closed reflexively and
//! transitively), by `opens`, or by both, in which case they must agree.

use std::collections::BTreeMap;
use std::path::Path;

use qfs_core::omega::{Shape, StageRule};
use qfs_core::{FiniteSpace, MapFamily, PointMap, PointSet, SetValuedMap, SpecOrder, StagedSpace};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("reading {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance gives neither an order nor opens")]
    NoStructure,
    #[error("carrier has {size} points, above the cap of {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("no {kind} named {name:?} in the instance")]
    Missing { kind: &'static str, name: String },
    #[error("{0}")]
    Core(#[from] qfs_core::Error),
}

type Result<T> = std::result::Result<T, InstanceError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberSpec {
    /// One set of labels per carrier point, in carrier order.
    pub values: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separating: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeSpec {
    ChainTop,
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedSpec {
    pub name: String,
    pub shape: ShapeSpec,
    pub start: u32,
    pub step: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub carrier: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, Vec<MemberSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub staged: Option<StagedSpec>,
}

impl Instance {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }

    /// Describes `space` by the covering pairs of its order.
    pub fn from_space(name: &str, space: &FiniteSpace) -> Self {
        let order = space
            .specialization_order()
            .covers()
            .into_iter()
            .map(|(x, y)| [space.label(x).to_string(), space.label(y).to_string()])
            .collect();
        Instance {
            name: name.to_string(),
            carrier: space.labels().to_vec(),
            order: Some(order),
            ..Instance::default()
        }
    }

    pub fn with_family(mut self, name: &str, space: &FiniteSpace, family: &MapFamily) -> Self {
        let members = family
            .members
            .iter()
            .map(|d| MemberSpec {
                values: d.table().iter().map(|&v| labels_of(space, v)).collect(),
                separating: d.separating_set().map(|f| labels_of(space, f)),
            })
            .collect();
        self.families.insert(name.to_string(), members);
        self
    }

    pub fn space(&self, cap: usize) -> Result<FiniteSpace> {
        let n = self.carrier.len();
        if n > cap {
            return Err(InstanceError::OverCap { size: n, cap });
        }
        let index = |l: &str| {
            self.carrier
                .iter()
                .position(|c| c == l)
                .ok_or_else(|| qfs_core::Error::UnknownLabel(l.to_string()))
        };
        let order = match &self.order {
            Some(pairs) => {
                let pairs = pairs
                    .iter()
                    .map(|[x, y]| Ok((index(x)?, index(y)?)))
                    .collect::<std::result::Result<Vec<_>, qfs_core::Error>>()?;
                Some(SpecOrder::from_relation(n, pairs)?)
            }
            None => None,
        };
        let opens = match &self.opens {
            Some(opens) => Some(
                opens
                    .iter()
                    .map(|u| {
                        u.iter()
                            .map(|l| index(l))
                            .collect::<std::result::Result<PointSet, _>>()
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let labels = self.carrier.clone();
        Ok(match (order, opens) {
            (Some(o), Some(u)) => FiniteSpace::from_order_and_opens(labels, o, u)?,
            (Some(o), None) => FiniteSpace::from_order(labels, o)?,
            (None, Some(u)) => FiniteSpace::from_opens(labels, u)?,
            (None, None) => return Err(InstanceError::NoStructure),
        })
    }

    pub fn map(&self, name: &str, space: &FiniteSpace) -> Result<PointMap> {
        let table = self.maps.get(name).ok_or_else(|| InstanceError::Missing {
            kind: "map",
            name: name.to_string(),
        })?;
        let table = table
            .iter()
            .map(|l| space.index_of(l))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(PointMap::between(table, space, space)?)
    }

    pub fn family(&self, name: &str, space: &FiniteSpace) -> Result<MapFamily> {
        let members = self
            .families
            .get(name)
            .ok_or_else(|| InstanceError::Missing {
                kind: "family",
                name: name.to_string(),
            })?;
        let set = |labels: &[String]| -> Result<PointSet> {
            Ok(labels
                .iter()
                .map(|l| space.index_of(l))
                .collect::<std::result::Result<PointSet, _>>()?)
        };
        let members = members
            .iter()
            .map(|m| {
                let table = m
                    .values
                    .iter()
                    .map(|v| set(v))
                    .collect::<Result<Vec<_>>>()?;
                let sep = m.separating.as_deref().map(set).transpose()?;
                Ok(SetValuedMap::new(table, sep)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MapFamily::new(members))
    }

    pub fn staged(&self) -> Result<Option<StagedSpace>> {
        let Some(spec) = &self.staged else {
            return Ok(None);
        };
        let shape = match spec.shape {
            ShapeSpec::ChainTop => Shape::ChainTop,
            ShapeSpec::Flat => Shape::Flat,
        };
        let rule = StageRule {
            shape,
            start: spec.start,
            step: spec.step,
        };
        Ok(Some(StagedSpace::new(&spec.name, rule)?))
    }
}

pub fn labels_of(space: &FiniteSpace, set: PointSet) -> Vec<String> {
    set.iter().map(|x| space.label(x).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfs_core::catalogue;

    #[test]
    fn round_trips_through_json() {
        let vee = catalogue::vee();
        let inst =
            Instance::from_space("vee", &vee).with_family("id", &vee, &MapFamily::identity(3));
        let back = Instance::parse(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        let space = back.space(12).unwrap();
        assert_eq!(space, vee);
        assert_eq!(back.family("id", &space).unwrap(), MapFamily::identity(3));
    }

    #[test]
    fn order_and_opens_must_agree() {
        let text =
            r#"{"name":"s","carrier":["0","1"],"order":[["0","1"]],"opens":[[],["1"],["0","1"]]}"#;
        assert!(Instance::parse(text).unwrap().space(12).is_ok());
        let bad =
            r#"{"name":"s","carrier":["0","1"],"order":[["1","0"]],"opens":[[],["1"],["0","1"]]}"#;
        assert!(matches!(
            Instance::parse(bad).unwrap().space(12),
            Err(InstanceError::Core(qfs_core::Error::OrderOpensMismatch(_)))
        ));
    }

    #[test]
    fn cap_and_missing_structure_are_errors() {
        let inst = Instance {
            name: "big".into(),
            carrier: (0..13).map(|i| i.to_string()).collect(),
            order: Some(Vec::new()),
            ..Instance::default()
        };
        assert!(matches!(
            inst.space(12),
            Err(InstanceError::OverCap { size: 13, cap: 12 })
        ));
        let bare = Instance {
            carrier: vec!["x".into()],
            ..Instance::default()
        };
        assert!(matches!(bare.space(12), Err(InstanceError::NoStructure)));
    }

    #[test]
    fn staged_rule_is_read() {
        let text = r#"{"name":"w","carrier":["0"],"order":[],
            "staged":{"name":"evens","shape":"chain-top","start":1,"step":2}}"#;
        let staged = Instance::parse(text).unwrap().staged().unwrap().unwrap();
        assert_eq!(staged.rule().step, 2);
        assert_eq!(staged.points_at(1).len(), 4);
    }
}
