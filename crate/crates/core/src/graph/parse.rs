//! JSON graph documents.
//!
//! ```json
//! {
//!   "vertices": [
//!     {"id": 0, "group": {"cyclic": 2}},
//!     {"id": 1, "group": {"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}},
//!     {"id": 2, "group": {"abstract": {"order": "infinite", "hyperbolic": "yes"}}}
//!   ],
//!   "edges": [[0, 1], [1, 2]]
//! }
//! ```
//!
//! Vertex ids must be exactly `0..V` (in any order). Abstract flags default to
//! `"unknown"`.

use serde::{Deserialize, Serialize};

use super::group::{AbstractGroup, FiniteGroup, GroupOrder, Tri, VertexGroup};
use super::LabeledGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: usize,
    pub group: GroupDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupDoc {
    Cyclic(usize),
    Table(Vec<Vec<usize>>),
    Abstract(AbstractDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractDoc {
    pub order: OrderDoc,
    #[serde(default)]
    pub hyperbolic: Tri,
    #[serde(default)]
    pub virtually_infinite_cyclic: Tri,
    #[serde(default)]
    pub virtual_surface: Tri,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderDoc {
    Finite(usize),
    Named(String),
}

impl GraphDoc {
    pub fn into_graph(self) -> Result<LabeledGraph> {
        let n = self.vertices.len();
        let mut slots: Vec<Option<VertexGroup>> = vec![None; n];
        for v in self.vertices {
            if v.id >= n {
                return Err(Error::Malformed(format!(
                    "vertex id {} outside 0..{n}",
                    v.id
                )));
            }
            if slots[v.id].is_some() {
                return Err(Error::Malformed(format!("duplicate vertex id {}", v.id)));
            }
            slots[v.id] = Some(v.group.into_group(v.id)?);
        }
        let labels = slots.into_iter().map(Option::unwrap).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        LabeledGraph::new(labels, &edges)
    }

    pub fn from_graph(g: &LabeledGraph) -> Self {
        let vertices = g
            .labels()
            .iter()
            .enumerate()
            .map(|(id, l)| VertexDoc {
                id,
                group: GroupDoc::from_group(l),
            })
            .collect();
        GraphDoc {
            name: None,
            vertices,
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl GroupDoc {
    fn into_group(self, vertex: usize) -> Result<VertexGroup> {
        match self {
            GroupDoc::Cyclic(k) if k < 2 => Err(Error::TrivialGroup(vertex)),
            GroupDoc::Cyclic(k) => VertexGroup::cyclic(k),
            GroupDoc::Table(rows) if rows.len() < 2 => Err(Error::TrivialGroup(vertex)),
            GroupDoc::Table(rows) => FiniteGroup::from_table(&rows).map(VertexGroup::Concrete),
            GroupDoc::Abstract(a) => {
                let order = match a.order {
                    OrderDoc::Finite(k) if k < 2 => return Err(Error::TrivialGroup(vertex)),
                    OrderDoc::Finite(k) => GroupOrder::Finite(k),
                    OrderDoc::Named(s) if s == "infinite" => GroupOrder::Infinite,
                    OrderDoc::Named(s) => {
                        return Err(Error::Malformed(format!("unknown order {s:?}")))
                    }
                };
                Ok(VertexGroup::Abstract(AbstractGroup {
                    order,
                    hyperbolic: a.hyperbolic,
                    virtually_infinite_cyclic: a.virtually_infinite_cyclic,
                    virtual_surface: a.virtual_surface,
                }))
            }
        }
    }

    fn from_group(g: &VertexGroup) -> Self {
        match g {
            VertexGroup::Concrete(t) => {
                let rows = t.rows();
                let k = t.order();
                if rows
                    == (0..k)
                        .map(|a| (0..k).map(|b| (a + b) % k).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                {
                    GroupDoc::Cyclic(k)
                } else {
                    GroupDoc::Table(rows)
                }
            }
            VertexGroup::Abstract(a) => GroupDoc::Abstract(AbstractDoc {
                order: match a.order {
                    GroupOrder::Finite(k) => OrderDoc::Finite(k),
                    GroupOrder::Infinite => OrderDoc::Named("infinite".into()),
                },
                hyperbolic: a.hyperbolic,
                virtually_infinite_cyclic: a.virtually_infinite_cyclic,
                virtual_surface: a.virtual_surface,
            }),
        }
    }
}

/// Parses and validates a JSON graph document.
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_graph()
}
