//! JSON interchange format.
//!
//! ```json
//! {
//!   "rank": 3,
//!   "vertices": ["p1", "p2", "p3"],
//!   "edges": [
//!     {"from": "p1", "to": "p2", "weight": [-1, 1, 0], "length": "1", "chern": [0]}
//!   ],
//!   "chern_rank": 1,
//!   "fiber": [1, 0, 1]
//! }
//! ```
//!
//! `weight` is α for the `from -> to` orientation. `length` (a positive
//! rational written `"p/q"`) and `chern` (integers, `chern_rank` of them)
//! are optional per edge; `chern_rank` and `fiber` (Poincaré polynomial
//! coefficients of the fixed component) are optional at the top level.
//! Unknown keys are accepted and reported as warnings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::GkmGraph;
use crate::algebra::{format_rational, parse_rational, LinearForm, Rational};
use crate::cohomology::FiberData;
use crate::connection::EdgeGeometry;
use crate::error::{GkmError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonEdge {
    pub from: String,
    pub to: String,
    pub weight: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<LengthField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern: Option<Vec<i64>>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthField {
    Text(String),
    Integer(i64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonGraph {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<JsonEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<Vec<usize>>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

/// A loaded graph file: the graph plus whatever optional data rode along.
#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: GkmGraph,
    pub fiber: Option<FiberData>,
    pub warnings: Vec<String>,
    chern_rank: Option<usize>,
    lengths: Vec<Option<Rational>>,
    chern: Vec<Option<Vec<i64>>>,
}

impl GraphDocument {
    pub fn new(graph: GkmGraph) -> Self {
        let m = graph.edges().len();
        GraphDocument {
            graph,
            fiber: None,
            warnings: Vec::new(),
            chern_rank: None,
            lengths: vec![None; m],
            chern: vec![None; m],
        }
    }

    pub fn with_geometry(mut self, geometry: &EdgeGeometry) -> Self {
        self.chern_rank = Some(geometry.chern_rank());
        self.lengths = geometry.lengths().iter().cloned().map(Some).collect();
        self.chern = geometry.chern_forward().iter().cloned().map(Some).collect();
        self
    }

    pub fn with_fiber(mut self, fiber: FiberData) -> Self {
        self.fiber = Some(fiber);
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: JsonGraph = serde_json::from_str(text).map_err(|e| GkmError::Parse(e.to_string()))?;
        Self::from_json(raw)
    }

    pub fn from_json(raw: JsonGraph) -> Result<Self> {
        let mut warnings: Vec<String> = raw.extra.keys().map(|k| format!("unknown top-level field `{k}`")).collect();
        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut lengths = Vec::with_capacity(raw.edges.len());
        let mut chern = Vec::with_capacity(raw.edges.len());
        for (i, e) in raw.edges.into_iter().enumerate() {
            warnings.extend(e.extra.keys().map(|k| format!("unknown field `{k}` in edges[{i}]")));
            let length = match e.length {
                None => None,
                Some(LengthField::Integer(v)) => Some(Rational::from_integer(v.into())),
                Some(LengthField::Text(t)) => Some(parse_rational(&t)?),
            };
            lengths.push(length);
            chern.push(e.chern);
            edges.push((e.from, e.to, LinearForm::new(e.weight)));
        }
        let graph = GkmGraph::new(raw.rank, &raw.vertices, edges)?;
        let fiber = raw.fiber.map(FiberData::new).transpose()?;
        Ok(GraphDocument { graph, fiber, warnings, chern_rank: raw.chern_rank, lengths, chern })
    }

    pub fn has_geometry(&self) -> bool {
        self.lengths.iter().any(Option::is_some) || self.chern.iter().any(Option::is_some)
    }

    /// Length and Chern data for every edge; fails if any edge lacks it.
    pub fn geometry(&self) -> Result<EdgeGeometry> {
        let mut lengths = Vec::with_capacity(self.lengths.len());
        let mut chern = Vec::with_capacity(self.chern.len());
        for (i, (l, c)) in self.lengths.iter().zip(&self.chern).enumerate() {
            let name = || self.graph.describe(super::OrientedEdge::forward(i)).to_string();
            lengths.push(l.clone().ok_or_else(|| GkmError::MissingChernData(format!("edge {} has no length", name())))?);
            chern.push(c.clone().ok_or_else(|| GkmError::MissingChernData(format!("edge {} has no chern label", name())))?);
        }
        let m = match (self.chern_rank, chern.first()) {
            (Some(m), _) => m,
            (None, Some(c)) => c.len(),
            (None, None) => 0,
        };
        EdgeGeometry::new(&self.graph, m, lengths, chern)
    }

    pub fn to_json(&self) -> JsonGraph {
        let g = &self.graph;
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| JsonEdge {
                from: g.vertex_name(e.from).to_owned(),
                to: g.vertex_name(e.to).to_owned(),
                weight: e.weight.coefficients().to_vec(),
                length: self.lengths[i].as_ref().map(|l| LengthField::Text(format_rational(l))),
                chern: self.chern[i].clone(),
                extra: BTreeMap::new(),
            })
            .collect();
        JsonGraph {
            rank: g.rank(),
            vertices: g.vertices().to_vec(),
            edges,
            chern_rank: self.chern_rank,
            fiber: self.fiber.as_ref().map(|f| f.poincare().to_vec()),
            extra: BTreeMap::new(),
        }
    }

    /// Pretty-printed JSON with a trailing newline. Byte-identical for
    /// identical documents.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("graph serializes");
        s.push('\n');
        s
    }
}
