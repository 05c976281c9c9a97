//! Compatible connections, edge lengths and Chern labels, and transport of
//! symplectic classes along paths of the graph.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{LinearForm, Rational};
use crate::error::{GkmError, Result};
use crate::graph::{independence_degree, GkmGraph, OrientedEdge};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ConnectionOptions {
    /// Require `α_{∇e'} - α_{e'}` to be an integer multiple of `α_e`
    /// rather than a rational one.
    pub strict: bool,
    /// Shuffle the candidate scan with this seed. The result must not
    /// depend on it when the connection is unique.
    pub scan_seed: Option<u64>,
}

/// For every oriented edge `e = (p, q)`, a bijection `star(p) -> star(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    /// Indexed by `2 * edge + reversed`; pairs follow the order of `star(p)`.
    tables: Vec<Vec<(OrientedEdge, OrientedEdge)>>,
}

fn slot(e: OrientedEdge) -> usize {
    2 * e.edge + usize::from(e.reversed)
}

impl Connection {
    pub fn table(&self, e: OrientedEdge) -> &[(OrientedEdge, OrientedEdge)] {
        &self.tables[slot(e)]
    }

    pub fn apply(&self, along: OrientedEdge, e: OrientedEdge) -> Option<OrientedEdge> {
        self.table(along).iter().find(|(from, _)| *from == e).map(|&(_, to)| to)
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// `diff` is a multiple of the nonzero `alpha` (rational, or integral when
/// `strict`).
fn is_multiple(diff: &LinearForm, alpha: &LinearForm, strict: bool) -> bool {
    if !diff.is_proportional(alpha) {
        return false;
    }
    if !strict {
        return true;
    }
    let p = alpha.pivot().expect("nonzero weight");
    diff.coefficients()[p] % alpha.coefficients()[p] == 0
}

/// The unique compatible connection, found by scanning, for each `e'` at
/// `i(e)`, the star at `t(e)` for weights congruent to `α_{e'}` modulo `α_e`.
pub fn compute_connection(g: &GkmGraph, options: ConnectionOptions) -> Result<Connection> {
    for v in 0..g.num_vertices() {
        let star = g.star(v);
        let d = star.weights.len();
        let k = independence_degree(&star);
        if k < d.min(2) {
            return Err(GkmError::NotThreeIndependent { vertex: g.vertex_name(v).to_owned(), degree: k });
        }
        if k < d.min(3) {
            log::warn!("vertex {} is only {k}-independent; the connection may not be unique", g.vertex_name(v));
        }
    }
    let mut rng = options.scan_seed.map(ChaCha8Rng::seed_from_u64);
    let mut tables = vec![Vec::new(); 2 * g.edges().len()];
    for along in g.oriented_edges() {
        let alpha = g.weight(along);
        let (p, q) = (g.source(along), g.target(along));
        let mut candidates: Vec<OrientedEdge> = g.outgoing(q).to_vec();
        let name = || g.describe(along).to_string();
        if g.outgoing(p).len() != candidates.len() {
            return Err(GkmError::NotBijective { edge: name() });
        }
        let mut table = Vec::with_capacity(candidates.len());
        for &e in g.outgoing(p) {
            if let Some(rng) = rng.as_mut() {
                candidates.shuffle(rng);
            }
            let we = g.weight(e);
            let matches: Vec<OrientedEdge> = candidates
                .iter()
                .copied()
                .filter(|&c| is_multiple(&g.weight(c).sub(&we), &alpha, options.strict))
                .collect();
            match matches.as_slice() {
                [only] => table.push((e, *only)),
                [] => return Err(GkmError::NoMatch { edge: name(), from: g.describe(e).to_string() }),
                many => {
                    return Err(GkmError::AmbiguousMatch {
                        edge: name(),
                        from: g.describe(e).to_string(),
                        candidates: many.len(),
                    })
                }
            }
        }
        let mut images: Vec<OrientedEdge> = table.iter().map(|&(_, t)| t).collect();
        images.sort();
        images.dedup();
        if images.len() != table.len() {
            return Err(GkmError::NotBijective { edge: name() });
        }
        tables[slot(along)] = table;
    }
    let connection = Connection { tables };
    for along in g.oriented_edges() {
        for &(from, to) in connection.table(along) {
            if connection.apply(along.reverse(), to) != Some(from) {
                return Err(GkmError::NotBijective { edge: g.describe(along).to_string() });
            }
        }
    }
    Ok(connection)
}

/// Connections keyed by a hash of the graph contents and options.
#[derive(Debug, Default)]
pub struct ConnectionCache {
    entries: RwLock<HashMap<u64, Arc<Connection>>>,
}

impl ConnectionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, g: &GkmGraph, options: ConnectionOptions) -> Result<Arc<Connection>> {
        let mut h = DefaultHasher::new();
        g.hash(&mut h);
        options.strict.hash(&mut h);
        let key = h.finish();
        if let Some(c) = self.entries.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(c));
        }
        let computed = Arc::new(compute_connection(g, ConnectionOptions { scan_seed: None, ..options })?);
        let mut entries = self.entries.write().expect("cache lock");
        Ok(Arc::clone(entries.entry(key).or_insert(computed)))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Length `a_e > 0` and Chern label `c_e ∈ ℤ^m` per edge, stored for the
/// `from -> to` orientation. The reversal has the same length and `-c_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGeometry {
    chern_rank: usize,
    lengths: Vec<Rational>,
    chern: Vec<Vec<i64>>,
}

impl EdgeGeometry {
    pub fn new(g: &GkmGraph, chern_rank: usize, lengths: Vec<Rational>, chern: Vec<Vec<i64>>) -> Result<Self> {
        let m = g.edges().len();
        if lengths.len() != m || chern.len() != m {
            return Err(GkmError::MissingChernData(format!(
                "{} lengths and {} chern labels for {m} edges",
                lengths.len(),
                chern.len()
            )));
        }
        for (i, l) in lengths.iter().enumerate() {
            if !l.is_positive() {
                return Err(GkmError::GeometryInvariant(format!(
                    "edge {} has non-positive length",
                    g.describe(OrientedEdge::forward(i))
                )));
            }
        }
        if let Some(c) = chern.iter().find(|c| c.len() != chern_rank) {
            return Err(GkmError::DimensionMismatch { expected: chern_rank, found: c.len() });
        }
        Ok(EdgeGeometry { chern_rank, lengths, chern })
    }

    /// Unit lengths and zero Chern labels.
    pub fn untwisted(g: &GkmGraph, chern_rank: usize) -> Self {
        let m = g.edges().len();
        EdgeGeometry {
            chern_rank,
            lengths: vec![Rational::from_integer(1.into()); m],
            chern: vec![vec![0; chern_rank]; m],
        }
    }

    pub fn chern_rank(&self) -> usize {
        self.chern_rank
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn chern_forward(&self) -> &[Vec<i64>] {
        &self.chern
    }

    pub fn length(&self, e: OrientedEdge) -> &Rational {
        &self.lengths[e.edge]
    }

    pub fn chern(&self, e: OrientedEdge) -> Vec<i64> {
        let c = &self.chern[e.edge];
        if e.reversed { c.iter().map(|x| -x).collect() } else { c.clone() }
    }

    pub fn set_chern(&mut self, edge: usize, value: Vec<i64>) -> Result<()> {
        if value.len() != self.chern_rank {
            return Err(GkmError::DimensionMismatch { expected: self.chern_rank, found: value.len() });
        }
        self.chern[edge] = value;
        Ok(())
    }
}

/// A class in the rational model of `H²(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaClass(pub Vec<Rational>);

impl OmegaClass {
    pub fn zero(dim: usize) -> Self {
        OmegaClass(vec![Rational::zero(); dim])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChernRule {
    /// `c_{∇_e e_i} = c_{e_i}` for edges other than `e`.
    Transported,
    /// `c_{∇_e e} = -c_e`.
    Reversal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernViolation {
    pub rule: ChernRule,
    pub along: OrientedEdge,
    pub moved: OrientedEdge,
    pub image: OrientedEdge,
    pub expected: Vec<i64>,
    pub found: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChernReport {
    pub checked: usize,
    pub violations: Vec<ChernViolation>,
}

impl ChernReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Unoriented edges `e` along which some label failed to transport.
    pub fn flagged_edges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.violations.iter().map(|x| x.along.edge).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Checks that the connection carries Chern labels along every edge.
pub fn check_chern_compat(g: &GkmGraph, connection: &Connection, geometry: &EdgeGeometry) -> ChernReport {
    let mut report = ChernReport::default();
    for along in g.oriented_edges() {
        for &(moved, image) in connection.table(along) {
            report.checked += 1;
            let (rule, expected) = if moved == along {
                (ChernRule::Reversal, geometry.chern(along).iter().map(|x| -x).collect())
            } else {
                (ChernRule::Transported, geometry.chern(moved))
            };
            let found = geometry.chern(image);
            if found != expected {
                report.violations.push(ChernViolation { rule, along, moved, image, expected, found });
            }
        }
    }
    report
}

fn chain_check(g: &GkmGraph, path: &[OrientedEdge]) -> Result<()> {
    for (i, w) in path.windows(2).enumerate() {
        if g.target(w[0]) != g.source(w[1]) {
            return Err(GkmError::BrokenPath(format!(
                "step {} ends at {} but step {} starts at {}",
                i,
                g.vertex_name(g.target(w[0])),
                i + 1,
                g.vertex_name(g.source(w[1]))
            )));
        }
    }
    Ok(())
}

/// Applies `[ω_{t(e)}] = [ω_{i(e)}] + a_e c_e` along the path. Returns the
/// class at every visited vertex, starting with `start`.
pub fn transport_omega(
    g: &GkmGraph,
    geometry: &EdgeGeometry,
    path: &[OrientedEdge],
    start: &OmegaClass,
) -> Result<Vec<OmegaClass>> {
    if start.0.len() != geometry.chern_rank() {
        return Err(GkmError::DimensionMismatch { expected: geometry.chern_rank(), found: start.0.len() });
    }
    chain_check(g, path)?;
    let mut classes = Vec::with_capacity(path.len() + 1);
    classes.push(start.clone());
    for &e in path {
        let a = geometry.length(e);
        let c = geometry.chern(e);
        let prev = classes.last().expect("non-empty");
        let next = prev.0.iter().zip(&c).map(|(w, &ci)| w + a * Rational::from_integer(ci.into())).collect();
        classes.push(OmegaClass(next));
    }
    Ok(classes)
}

/// Net change of the transported class around a closed path.
pub fn cycle_defect(g: &GkmGraph, geometry: &EdgeGeometry, cycle: &[OrientedEdge]) -> Result<OmegaClass> {
    let (Some(first), Some(last)) = (cycle.first(), cycle.last()) else {
        return Ok(OmegaClass::zero(geometry.chern_rank()));
    };
    if g.target(*last) != g.source(*first) {
        return Err(GkmError::BrokenPath(format!(
            "cycle starts at {} but ends at {}",
            g.vertex_name(g.source(*first)),
            g.vertex_name(g.target(*last))
        )));
    }
    let start = OmegaClass::zero(geometry.chern_rank());
    let classes = transport_omega(g, geometry, cycle, &start)?;
    Ok(classes.last().cloned().expect("non-empty"))
}
