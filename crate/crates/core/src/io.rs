//! The JSON diagram file format shared by both categories.
//!
//! ```json
//! {
//!   "category": "finset",
//!   "nodes": [{ "id": "a", "size": 2 }, { "id": "b", "size": 2 }],
//!   "edges": [{ "id": "swap", "src": "a", "dst": "b", "table": [1, 0] }]
//! }
//! ```
//!
//! Linear diagrams use `"category": "finvec"`, a `field_q`, node `dim`s and
//! edge `matrix`es given as lists of rows (rows = target dimension).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagram::{Category, Diagram, Edge, ShapeGraph};
use crate::error::{Error, Result};
use crate::finset::{FinSet, SetMap, SetObj};
use crate::finvec::{Field, FinVec, LinMap, Matrix, VecObj};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryTag {
    Finset,
    Finvec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub category: CategoryTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_q: Option<u32>,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
}

/// A diagram in either supported category.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDiagram {
    Set(Diagram<FinSet>),
    Vec(Diagram<FinVec>),
}

impl AnyDiagram {
    pub fn to_file(&self) -> DiagramFile {
        match self {
            AnyDiagram::Set(d) => DiagramFile::from_set_diagram(d),
            AnyDiagram::Vec(d) => DiagramFile::from_vec_diagram(d),
        }
    }
}

fn edge_error(e: &EdgeSpec, msg: impl std::fmt::Display) -> Error {
    Error::MalformedDiagram(format!("edge `{}`: {msg}", e.id))
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Pretty-printed JSON with a trailing newline. Loading and saving this
    /// text reproduces it byte for byte.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram files serialize");
        s.push('\n');
        s
    }

    pub fn from_set_diagram(d: &Diagram<FinSet>) -> Self {
        DiagramFile {
            category: CategoryTag::Finset,
            field_q: None,
            nodes: node_specs(d, |x| (Some(x.size()), None)),
            edges: edge_specs(d, |f| (Some(f.table().to_vec()), None)),
        }
    }

    pub fn from_vec_diagram(d: &Diagram<FinVec>) -> Self {
        DiagramFile {
            category: CategoryTag::Finvec,
            field_q: Some(d.tag().q() as u32),
            nodes: node_specs(d, |x| (None, Some(x.dim()))),
            edges: edge_specs(d, |f| {
                let rows = f.matrix().to_rows();
                (None, Some(rows.into_iter().map(|r| r.into_iter().map(u32::from).collect()).collect()))
            }),
        }
    }

    fn shape(&self) -> Result<ShapeGraph> {
        let ids: Vec<String> = self.nodes.iter().map(|n| n.id.clone()).collect();
        let lookup = |e: &EdgeSpec, id: &str| {
            ids.iter()
                .position(|n| n == id)
                .ok_or_else(|| edge_error(e, format_args!("unknown node `{id}`")))
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    src: lookup(e, &e.src)?,
                    dst: lookup(e, &e.dst)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ShapeGraph::new(ids, edges)
    }

    pub fn to_diagram(&self) -> Result<AnyDiagram> {
        let shape = self.shape()?;
        match self.category {
            CategoryTag::Finset => {
                if self.field_q.is_some() {
                    return Err(Error::MalformedDiagram("finset diagrams take no field_q".into()));
                }
                let objects = self
                    .nodes
                    .iter()
                    .map(|n| match (n.size, n.dim) {
                        (Some(s), None) => Ok(SetObj::new(s)),
                        _ => Err(Error::MalformedDiagram(format!("node `{}` needs a size", n.id))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let morphisms = self
                    .edges
                    .iter()
                    .zip(shape.edges())
                    .map(|(spec, e)| {
                        let table = match (&spec.table, &spec.matrix) {
                            (Some(t), None) => t.clone(),
                            _ => return Err(edge_error(spec, "needs a table")),
                        };
                        SetMap::new(objects[e.src], objects[e.dst], table).map_err(|err| edge_error(spec, err))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyDiagram::Set(Diagram::new((), shape, objects, morphisms)?))
            }
            CategoryTag::Finvec => {
                let q = self
                    .field_q
                    .ok_or_else(|| Error::MalformedDiagram("finvec diagrams need field_q".into()))?;
                let field = Field::new(q)?;
                let objects = self
                    .nodes
                    .iter()
                    .map(|n| match (n.size, n.dim) {
                        (None, Some(d)) => Ok(VecObj::new(field, d)),
                        _ => Err(Error::MalformedDiagram(format!("node `{}` needs a dim", n.id))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let morphisms = self
                    .edges
                    .iter()
                    .zip(shape.edges())
                    .map(|(spec, e)| {
                        let rows = match (&spec.table, &spec.matrix) {
                            (None, Some(m)) => m,
                            _ => return Err(edge_error(spec, "needs a matrix")),
                        };
                        let (dom, cod) = (objects[e.src], objects[e.dst]);
                        if rows.len() != cod.dim() || rows.iter().any(|r| r.len() != dom.dim()) {
                            return Err(edge_error(
                                spec,
                                format_args!("matrix must be {}x{}", cod.dim(), dom.dim()),
                            ));
                        }
                        if let Some(bad) = rows.iter().flatten().find(|&&v| v >= q) {
                            return Err(edge_error(spec, format_args!("entry {bad} is not below {q}")));
                        }
                        let data = rows.iter().flatten().map(|&v| v as u8).collect();
                        LinMap::new(dom, cod, Matrix::new(field, cod.dim(), dom.dim(), data))
                            .map_err(|err| edge_error(spec, err))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyDiagram::Vec(Diagram::new(field, shape, objects, morphisms)?))
            }
        }
    }
}

fn node_specs<C: Category>(
    d: &Diagram<C>,
    f: impl Fn(&C::Obj) -> (Option<usize>, Option<usize>),
) -> Vec<NodeSpec> {
    d.shape()
        .nodes()
        .iter()
        .zip(d.objects())
        .map(|(id, x)| {
            let (size, dim) = f(x);
            NodeSpec {
                id: id.clone(),
                size,
                dim,
            }
        })
        .collect()
}

type EdgeData = (Option<Vec<usize>>, Option<Vec<Vec<u32>>>);

fn edge_specs<C: Category>(d: &Diagram<C>, f: impl Fn(&C::Mor) -> EdgeData) -> Vec<EdgeSpec> {
    let nodes = d.shape().nodes();
    d.arrows()
        .map(|(e, m)| {
            let (table, matrix) = f(m);
            EdgeSpec {
                id: e.id.clone(),
                src: nodes[e.src].clone(),
                dst: nodes[e.dst].clone(),
                table,
                matrix,
            }
        })
        .collect()
}

pub fn parse_diagram(text: &str) -> Result<AnyDiagram> {
    DiagramFile::parse(text)?.to_diagram()
}

pub fn load_diagram(path: impl AsRef<Path>) -> Result<AnyDiagram> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_diagram(&text)
}

pub fn save_diagram(path: impl AsRef<Path>, d: &AnyDiagram) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, d.to_file().to_canonical_string()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
