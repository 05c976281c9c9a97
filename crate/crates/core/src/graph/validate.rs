use std::collections::BTreeMap;

use super::{GkmGraph, OrientedEdge};
use crate::algebra::{Rational, Restriction};

/// One failed condition. Indices refer to the graph that was validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop { edge: usize },
    /// The edge's weight is the zero form.
    ZeroWeight { edge: usize },
    /// Two edges join the same pair of vertices with proportional weights.
    ProportionalParallel { edge: usize, other: usize },
    IrregularValence { vertex: usize, found: usize, expected: usize },
    Disconnected { components: usize },
    /// Two weights at a vertex are proportional.
    NotPairwiseIndependent { vertex: usize, first: OrientedEdge, second: OrientedEdge },
    /// Restricted to `ker α_e`, the star weights at the two endpoints of
    /// `edge` differ as multisets.
    StarMismatch { edge: usize },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::SelfLoop { .. } | Violation::IrregularValence { .. } => "A1",
            Violation::ZeroWeight { .. } => "A1",
            Violation::ProportionalParallel { .. } => "A2",
            Violation::Disconnected { .. } => "connectivity",
            Violation::NotPairwiseIndependent { .. } => "GKM",
            Violation::StarMismatch { .. } => "A3",
        }
    }

    pub fn describe(&self, g: &GkmGraph) -> String {
        let edge_name = |i: usize| g.describe(OrientedEdge::forward(i)).to_string();
        match *self {
            Violation::SelfLoop { edge } => format!("edge {} is a self-loop", edge_name(edge)),
            Violation::ZeroWeight { edge } => format!("edge {} has zero weight", edge_name(edge)),
            Violation::ProportionalParallel { edge, other } => format!(
                "edges {} and {} join the same vertices with proportional weights",
                edge_name(edge),
                edge_name(other)
            ),
            Violation::IrregularValence { vertex, found, expected } => {
                format!("vertex {} has {found} edges, expected {expected}", g.vertex_name(vertex))
            }
            Violation::Disconnected { components } => format!("graph has {components} connected components"),
            Violation::NotPairwiseIndependent { vertex, first, second } => format!(
                "weights of {} and {} at vertex {} are proportional",
                g.describe(first),
                g.describe(second),
                g.vertex_name(vertex)
            ),
            Violation::StarMismatch { edge } => format!(
                "star weights at the ends of {} disagree on the kernel of its weight",
                edge_name(edge)
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn star_mismatches(&self) -> Vec<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::StarMismatch { edge } => Some(*edge),
                _ => None,
            })
            .collect()
    }
}

type FormKey = Vec<(Vec<u32>, Rational)>;

/// Checks the structural axioms, regularity, connectivity, pairwise
/// independence of every star, and the star-matching axiom at the level of
/// weights restricted to `ker α_e`.
pub fn validate(g: &GkmGraph) -> ValidationReport {
    let mut violations = Vec::new();

    for (i, e) in g.edges().iter().enumerate() {
        if e.from == e.to {
            violations.push(Violation::SelfLoop { edge: i });
        }
        if e.weight.is_zero() {
            violations.push(Violation::ZeroWeight { edge: i });
        }
    }

    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        by_pair.entry((e.from.min(e.to), e.from.max(e.to))).or_default().push(i);
    }
    for group in by_pair.values() {
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                if g.edges()[i].weight.is_proportional(&g.edges()[j].weight) {
                    violations.push(Violation::ProportionalParallel { edge: i, other: j });
                }
            }
        }
    }

    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..g.num_vertices() {
        *counts.entry(g.outgoing(v).len()).or_default() += 1;
    }
    let expected = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map_or(0, |(&d, _)| d);
    for v in 0..g.num_vertices() {
        let found = g.outgoing(v).len();
        if found != expected {
            violations.push(Violation::IrregularValence { vertex: v, found, expected });
        }
    }

    let components = g.component_count();
    if components != 1 {
        violations.push(Violation::Disconnected { components });
    }

    for v in 0..g.num_vertices() {
        let star = g.outgoing(v);
        for (a, &e1) in star.iter().enumerate() {
            for &e2 in &star[a + 1..] {
                // Parallel edges are already reported above.
                if g.target(e1) == g.target(e2) {
                    continue;
                }
                if g.weight(e1).is_proportional(&g.weight(e2)) {
                    violations.push(Violation::NotPairwiseIndependent { vertex: v, first: e1, second: e2 });
                }
            }
        }
    }

    for (i, e) in g.edges().iter().enumerate() {
        if e.from == e.to || e.weight.is_zero() {
            continue;
        }
        let mut restriction = Restriction::new(&e.weight, 1).expect("nonzero weight");
        let mut restricted_star = |v: usize| -> Vec<FormKey> {
            let mut keys: Vec<FormKey> = g
                .outgoing(v)
                .iter()
                .map(|&oe| {
                    let r = restriction.apply(&g.weight(oe).to_polynomial());
                    r.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect()
                })
                .collect();
            keys.sort();
            keys
        };
        if restricted_star(e.from) != restricted_star(e.to) {
            violations.push(Violation::StarMismatch { edge: i });
        }
    }

    ValidationReport { violations }
}
