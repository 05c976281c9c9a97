use itertools::Itertools;

use super::{parse_list, BuilderRegistry, BuilderSpec, Example, FamilyBuilder};
use crate::algebra::{LinearForm, Rational};
use crate::cohomology::FiberData;
use crate::connection::EdgeGeometry;
use crate::error::{GkmError, Result};
use crate::graph::{GkmGraph, OrientedEdge};

fn numbered(prefix: &str, i: usize, count: usize) -> String {
    let width = count.to_string().len();
    format!("{prefix}{i:0width$}")
}

/// The complete graph on `n + 1` vertices in rank `n + 1`, with weight
/// `x_j - x_i` on `p_i -> p_j`.
pub fn build_projective(n: usize) -> Result<GkmGraph> {
    if n == 0 {
        return Err(GkmError::InvalidParams("projective space needs n >= 1".into()));
    }
    let names: Vec<String> = (1..=n + 1).map(|i| numbered("p", i, n + 1)).collect();
    let edges = (0..=n)
        .tuple_combinations()
        .map(|(i, j)| (names[i].clone(), names[j].clone(), LinearForm::difference(n + 1, j, i)))
        .collect();
    GkmGraph::new(n + 1, &names, edges)
}

fn subset_name(s: &[usize]) -> String {
    format!("s{}", s.iter().map(|i| (i + 1).to_string()).join("_"))
}

/// The Johnson graph on `k`-subsets of `{1..n}`; `S -> S \ {j} ∪ {l}` has
/// weight `x_l - x_j`.
pub fn build_grassmannian(n: usize, k: usize) -> Result<GkmGraph> {
    if k == 0 || k >= n {
        return Err(GkmError::InvalidParams(format!("grassmannian needs 1 <= k <= n-1, got n={n}, k={k}")));
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let names: Vec<String> = subsets.iter().map(|s| subset_name(s)).collect();
    let mut edges = Vec::new();
    for s in &subsets {
        for &j in s {
            for l in (j + 1..n).filter(|l| !s.contains(l)) {
                let mut t: Vec<usize> = s.iter().copied().filter(|&x| x != j).chain([l]).collect();
                t.sort_unstable();
                edges.push((subset_name(s), subset_name(&t), LinearForm::difference(n, l, j)));
            }
        }
    }
    GkmGraph::new(n, &names, edges)
}

/// Product of projective graphs `CP^{f_1} × ... × CP^{f_r}` with weights
/// in the direct sum of their lattices.
pub fn build_toric_product(factors: &[usize]) -> Result<GkmGraph> {
    if factors.is_empty() {
        return Err(GkmError::InvalidParams("toric product needs at least one factor".into()));
    }
    let pieces = factors.iter().map(|&f| build_projective(f)).collect::<Result<Vec<_>>>()?;
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.rank();
            Some(o)
        })
        .collect();
    let rank: usize = pieces.iter().map(GkmGraph::rank).sum();
    let tuples: Vec<Vec<usize>> =
        pieces.iter().map(|g| 0..g.num_vertices()).multi_cartesian_product().collect();
    let name = |t: &[usize]| {
        let parts = t.iter().zip(&pieces).map(|(&i, g)| numbered("", i + 1, g.num_vertices())).join("_");
        format!("t{parts}")
    };
    let mut edges = Vec::new();
    for t in &tuples {
        for (i, g) in pieces.iter().enumerate() {
            for e in g.edges().iter().filter(|e| e.from == t[i]) {
                let mut u = t.clone();
                u[i] = e.to;
                let mut w = vec![0; rank];
                w[offsets[i]..offsets[i] + g.rank()].copy_from_slice(e.weight.coefficients());
                edges.push((name(t), name(&u), LinearForm::new(w)));
            }
        }
    }
    let names: Vec<String> = tuples.iter().map(|t| name(t)).collect();
    GkmGraph::new(rank, &names, edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistEntry {
    pub from: String,
    pub to: String,
    pub length: Rational,
    pub chern: Vec<i64>,
}

/// User-supplied lengths and Chern labels, one entry per edge in either
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub chern_rank: usize,
    pub entries: Vec<TwistEntry>,
}

fn apply_twist(g: &GkmGraph, twist: &Twist) -> Result<EdgeGeometry> {
    let mut lengths: Vec<Option<Rational>> = vec![None; g.edges().len()];
    let mut chern: Vec<Option<Vec<i64>>> = vec![None; g.edges().len()];
    for entry in &twist.entries {
        let p = g.vertex_index(&entry.from);
        let q = g.vertex_index(&entry.to);
        let oriented: OrientedEdge = match (p, q) {
            (Some(p), Some(q)) => g.edge_between(p, q),
            _ => None,
        }
        .ok_or_else(|| GkmError::GeometryInvariant(format!("no edge {} -> {}", entry.from, entry.to)))?;
        if entry.chern.len() != twist.chern_rank {
            return Err(GkmError::DimensionMismatch { expected: twist.chern_rank, found: entry.chern.len() });
        }
        let forward: Vec<i64> =
            if oriented.reversed { entry.chern.iter().map(|c| -c).collect() } else { entry.chern.clone() };
        let i = oriented.edge;
        if let Some(existing) = &chern[i] {
            if *existing != forward {
                return Err(GkmError::GeometryInvariant(format!(
                    "chern labels on {} -> {} and its reversal are not negatives",
                    entry.from, entry.to
                )));
            }
        }
        if let Some(existing) = &lengths[i] {
            if *existing != entry.length {
                return Err(GkmError::GeometryInvariant(format!(
                    "lengths on {} -> {} and its reversal differ",
                    entry.from, entry.to
                )));
            }
        }
        chern[i] = Some(forward);
        lengths[i] = Some(entry.length.clone());
    }
    let missing = |i: usize| GkmError::MissingChernData(format!("twist has no entry for {}", g.describe(OrientedEdge::forward(i))));
    let lengths = lengths.into_iter().enumerate().map(|(i, l)| l.ok_or_else(|| missing(i))).collect::<Result<_>>()?;
    let chern = chern.into_iter().enumerate().map(|(i, c)| c.ok_or_else(|| missing(i))).collect::<Result<_>>()?;
    EdgeGeometry::new(g, twist.chern_rank, lengths, chern)
}

/// A bundle with GKM fiber `base` over a fixed component with the given
/// Poincaré data. The graph is the fiber's graph. Without a twist, edges
/// get unit length and zero Chern labels in a model of rank `b_2`.
pub fn build_bundle_example(base: &BuilderSpec, fiber: FiberData, twist: Option<&Twist>) -> Result<Example> {
    let inner = base.build()?;
    let graph = inner.graph;
    let geometry = match twist {
        None => EdgeGeometry::untwisted(&graph, fiber.betti(2)),
        Some(t) => apply_twist(&graph, t)?,
    };
    Ok(Example { graph, fiber: Some(fiber), geometry: Some(geometry) })
}

fn single(params: &str) -> Result<usize> {
    match parse_list(params)?.as_slice() {
        [n] => Ok(*n),
        _ => Err(GkmError::InvalidParams(format!("expected one parameter, got `{params}`"))),
    }
}

pub struct ProjectiveFamily;

impl FamilyBuilder for ProjectiveFamily {
    fn name(&self) -> &'static str {
        "projective"
    }

    fn usage(&self) -> &'static str {
        "<n>"
    }

    fn parse(&self, params: &str, _: &BuilderRegistry) -> Result<BuilderSpec> {
        Ok(BuilderSpec::Projective(single(params)?))
    }
}

pub struct GrassmannianFamily;

impl FamilyBuilder for GrassmannianFamily {
    fn name(&self) -> &'static str {
        "grassmannian"
    }

    fn usage(&self) -> &'static str {
        "<n>,<k>"
    }

    fn parse(&self, params: &str, _: &BuilderRegistry) -> Result<BuilderSpec> {
        match parse_list(params)?.as_slice() {
            [n, k] => Ok(BuilderSpec::Grassmannian { n: *n, k: *k }),
            _ => Err(GkmError::InvalidParams(format!("expected n,k, got `{params}`"))),
        }
    }
}

pub struct ToricFamily;

impl FamilyBuilder for ToricFamily {
    fn name(&self) -> &'static str {
        "toric"
    }

    fn usage(&self) -> &'static str {
        "<f1>,<f2>,..."
    }

    fn parse(&self, params: &str, _: &BuilderRegistry) -> Result<BuilderSpec> {
        Ok(BuilderSpec::ToricProduct(parse_list(params)?))
    }
}

pub struct BundleFamily;

impl FamilyBuilder for BundleFamily {
    fn name(&self) -> &'static str {
        "bundle"
    }

    fn usage(&self) -> &'static str {
        "<family>:<params>@<b0>,<b1>,..."
    }

    fn parse(&self, params: &str, registry: &BuilderRegistry) -> Result<BuilderSpec> {
        let (inner, poincare) = params
            .rsplit_once('@')
            .ok_or_else(|| GkmError::InvalidParams(format!("bundle spec `{params}` lacks @poincare")))?;
        let base = registry.parse(inner)?;
        let fiber = FiberData::new(parse_list(poincare)?).map_err(|e| GkmError::InvalidParams(e.to_string()))?;
        Ok(BuilderSpec::Bundle { base: Box::new(base), fiber })
    }
}
