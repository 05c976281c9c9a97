//! The labeled-graph model of a torus action: vertices, unoriented edges
//! carrying the weight of one orientation, and derived oriented views.

mod io;
mod morse;
mod validate;

use std::collections::HashMap;
use std::fmt;

use crate::algebra::LinearForm;
use crate::error::{GkmError, Result};

pub use io::{GraphDocument, JsonEdge, JsonGraph};
pub use morse::{betti, independence_degree, morse_index, pick_generic, BettiVector, GenericDirection};
pub use validate::{validate, ValidationReport, Violation};

/// An edge stored once; `weight` is α for the `from -> to` orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: LinearForm,
}

/// One orientation of a stored edge. The reversal has weight `-α`, so the
/// reversal axiom holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge { edge, reversed: false }
    }

    pub fn reverse(self) -> Self {
        OrientedEdge { edge: self.edge, reversed: !self.reversed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    /// Outgoing oriented edges per vertex, in edge order.
    stars: Vec<Vec<OrientedEdge>>,
}

/// Outgoing edges at a vertex together with their weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStar {
    pub vertex: usize,
    pub edges: Vec<OrientedEdge>,
    pub weights: Vec<LinearForm>,
}

impl GkmGraph {
    /// Builds a graph from named endpoints. Vertices are sorted
    /// lexicographically; edge order is preserved.
    pub fn new<S: AsRef<str>>(rank: usize, vertices: &[S], edges: Vec<(S, S, LinearForm)>) -> Result<Self> {
        if rank == 0 {
            return Err(GkmError::MalformedGraph("torus rank must be positive".into()));
        }
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(GkmError::MalformedGraph(format!("duplicate vertex `{}`", w[0])));
        }
        if names.is_empty() {
            return Err(GkmError::MalformedGraph("graph has no vertices".into()));
        }
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GkmError::MalformedGraph(format!("edge endpoint `{name}` is not a vertex")))
        };
        let mut stored = Vec::with_capacity(edges.len());
        for (i, (from, to, weight)) in edges.into_iter().enumerate() {
            if weight.rank() != rank {
                return Err(GkmError::MalformedGraph(format!(
                    "edge {i} weight has {} entries, torus rank is {rank}",
                    weight.rank()
                )));
            }
            stored.push(Edge { from: lookup(from.as_ref())?, to: lookup(to.as_ref())?, weight });
        }
        Ok(Self::from_parts(rank, names, stored))
    }

    fn from_parts(rank: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut stars = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            stars[e.from].push(OrientedEdge { edge: i, reversed: false });
            if e.to != e.from {
                stars[e.to].push(OrientedEdge { edge: i, reversed: true });
            }
        }
        GkmGraph { rank, vertices, edges, stars }
    }

    /// Same combinatorics with every weight replaced.
    pub fn with_weights(&self, rank: usize, weights: Vec<LinearForm>) -> Result<Self> {
        assert_eq!(weights.len(), self.edges.len());
        if let Some(w) = weights.iter().find(|w| w.rank() != rank) {
            return Err(GkmError::MalformedGraph(format!("weight {w:?} does not have rank {rank}")));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, weight)| Edge { from: e.from, to: e.to, weight })
            .collect();
        Ok(Self::from_parts(rank, self.vertices.clone(), edges))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn oriented_edges(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        (0..self.edges.len()).flat_map(|i| [OrientedEdge::forward(i), OrientedEdge::forward(i).reverse()])
    }

    pub fn source(&self, e: OrientedEdge) -> usize {
        let edge = &self.edges[e.edge];
        if e.reversed { edge.to } else { edge.from }
    }

    pub fn target(&self, e: OrientedEdge) -> usize {
        let edge = &self.edges[e.edge];
        if e.reversed { edge.from } else { edge.to }
    }

    pub fn weight(&self, e: OrientedEdge) -> LinearForm {
        let w = &self.edges[e.edge].weight;
        if e.reversed { w.neg() } else { w.clone() }
    }

    pub fn outgoing(&self, v: usize) -> &[OrientedEdge] {
        &self.stars[v]
    }

    pub fn star(&self, v: usize) -> VertexStar {
        let edges = self.stars[v].clone();
        let weights = edges.iter().map(|&e| self.weight(e)).collect();
        VertexStar { vertex: v, edges, weights }
    }

    /// Common valence, or `None` if the graph is not regular.
    pub fn valence(&self) -> Option<usize> {
        let d = self.stars.first().map_or(0, Vec::len);
        self.stars.iter().all(|s| s.len() == d).then_some(d)
    }

    pub fn max_valence(&self) -> usize {
        self.stars.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &e in &self.stars[v] {
                    let w = self.target(e);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// First stored edge running from `p` to `q`, oriented that way.
    pub fn edge_between(&self, p: usize, q: usize) -> Option<OrientedEdge> {
        self.stars[p].iter().copied().find(|&e| self.target(e) == q)
    }

    /// Converts a vertex walk into oriented edges, taking the first stored
    /// edge between consecutive vertices.
    pub fn path_from_vertices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<OrientedEdge>> {
        let ids = names
            .iter()
            .map(|n| {
                self.vertex_index(n.as_ref())
                    .ok_or_else(|| GkmError::BrokenPath(format!("unknown vertex `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        ids.windows(2)
            .map(|w| {
                self.edge_between(w[0], w[1]).ok_or_else(|| {
                    GkmError::BrokenPath(format!("no edge between `{}` and `{}`", self.vertices[w[0]], self.vertices[w[1]]))
                })
            })
            .collect()
    }

    /// One closed walk per edge outside a breadth-first spanning tree
    /// rooted at the first vertex. Each walk starts where the two tree
    /// paths to the edge's endpoints meet.
    pub fn fundamental_cycles(&self) -> Vec<Vec<OrientedEdge>> {
        let n = self.vertices.len();
        let mut parent: Vec<Option<OrientedEdge>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; self.edges.len()];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &e in &self.stars[v] {
                    let w = self.target(e);
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent[w] = Some(e);
                        in_tree[e.edge] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let climb = |v: usize| -> (usize, OrientedEdge) {
            let e = parent[v].expect("non-root vertex");
            (self.source(e), e)
        };
        let mut cycles = Vec::new();
        for (i, _) in self.edges.iter().enumerate().filter(|&(i, _)| !in_tree[i]) {
            let e = OrientedEdge::forward(i);
            let (mut u, mut v) = (self.source(e), self.target(e));
            // down: tree edges from the meeting point to u; up: from v back to it.
            let mut down = Vec::new();
            let mut up = Vec::new();
            while u != v {
                if depth[u] >= depth[v] {
                    let (p, t) = climb(u);
                    down.push(t);
                    u = p;
                } else {
                    let (p, t) = climb(v);
                    up.push(t.reverse());
                    v = p;
                }
            }
            down.reverse();
            down.push(e);
            down.extend(up);
            cycles.push(down);
        }
        cycles
    }

    pub fn describe(&self, e: OrientedEdge) -> EdgeLabel<'_> {
        EdgeLabel { graph: self, edge: e }
    }
}

/// Renders an oriented edge as `source->target`.
pub struct EdgeLabel<'a> {
    graph: &'a GkmGraph,
    edge: OrientedEdge,
}

impl fmt::Display for EdgeLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{}",
            self.graph.vertex_name(self.graph.source(self.edge)),
            self.graph.vertex_name(self.graph.target(self.edge))
        )
    }
}
