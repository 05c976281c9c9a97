use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GkmGraph, VertexStar};
use crate::algebra::{LinearForm, RationalMatrix};
use crate::error::{GkmError, Result};

/// A vector ξ in the Lie algebra on which no edge weight vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GenericDirection(pub Vec<i64>);

impl GenericDirection {
    /// Checks genericity against `g`.
    pub fn for_graph(g: &GkmGraph, xi: Vec<i64>) -> Result<Self> {
        let xi = GenericDirection(xi);
        check_generic(g, &xi)?;
        Ok(xi)
    }

    pub fn negated(&self) -> Self {
        GenericDirection(self.0.iter().map(|x| -x).collect())
    }
}

/// Counts of vertices by Morse index, indexed `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        BettiVector(self.0.iter().rev().copied().collect())
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

fn check_generic(g: &GkmGraph, xi: &GenericDirection) -> Result<()> {
    if xi.0.len() != g.rank() {
        return Err(GkmError::DimensionMismatch { expected: g.rank(), found: xi.0.len() });
    }
    match g.edges().iter().position(|e| e.weight.eval(&xi.0) == 0) {
        Some(edge) => Err(GkmError::NonGenericDirection { edge }),
        None => Ok(()),
    }
}

const GENERIC_ATTEMPTS: usize = 64;

/// Draws integer vectors with entries in `[-B, B]` from a ChaCha stream
/// seeded by `seed`, doubling `B` after each miss.
pub fn pick_generic(g: &GkmGraph, seed: u64) -> Result<GenericDirection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound: i64 = 4;
    for attempt in 0..GENERIC_ATTEMPTS {
        let xi = GenericDirection((0..g.rank()).map(|_| rng.gen_range(-bound..=bound)).collect());
        if check_generic(g, &xi).is_ok() {
            log::debug!("generic direction {:?} after {} attempt(s)", xi.0, attempt + 1);
            return Ok(xi);
        }
        bound = (bound * 2).min(1 << 40);
    }
    Err(GkmError::Unreachable { attempts: GENERIC_ATTEMPTS })
}

/// Number of outgoing edges at `p` whose weight is negative on ξ.
pub fn morse_index(g: &GkmGraph, xi: &GenericDirection, p: usize) -> Result<usize> {
    check_generic(g, xi)?;
    Ok(index_unchecked(g, xi, p))
}

fn index_unchecked(g: &GkmGraph, xi: &GenericDirection, p: usize) -> usize {
    g.outgoing(p).iter().filter(|&&e| g.weight(e).eval(&xi.0) < 0).count()
}

pub fn betti(g: &GkmGraph, xi: &GenericDirection) -> Result<BettiVector> {
    check_generic(g, xi)?;
    let mut b = vec![0; g.max_valence() + 1];
    for p in 0..g.num_vertices() {
        b[index_unchecked(g, xi, p)] += 1;
    }
    Ok(BettiVector(b))
}

fn independent(weights: &[&LinearForm]) -> bool {
    let rows: Vec<Vec<i64>> = weights.iter().map(|w| w.coefficients().to_vec()).collect();
    RationalMatrix::from_integers(&rows).rank() == weights.len()
}

/// Largest `k ≤ min(d, n)` such that every `k`-subset of the star's weights
/// is linearly independent. Always at least 1.
pub fn independence_degree(star: &VertexStar) -> usize {
    let d = star.weights.len();
    let n = star.weights.first().map_or(0, LinearForm::rank);
    let cap = d.min(n).max(1);
    let mut degree = 1;
    for k in 2..=cap {
        let all = star.weights.iter().combinations(k).all(|subset| independent(&subset));
        if !all {
            break;
        }
        degree = k;
    }
    degree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::OrientedEdge;

    fn star_of(weights: &[[i64; 2]]) -> VertexStar {
        VertexStar {
            vertex: 0,
            edges: (0..weights.len()).map(OrientedEdge::forward).collect(),
            weights: weights.iter().map(|w| LinearForm::new(w.to_vec())).collect(),
        }
    }

    fn simplex(n: usize) -> GkmGraph {
        let names: Vec<String> = (1..=n + 1).map(|i| format!("p{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..=n {
            for j in i + 1..=n {
                edges.push((names[i].clone(), names[j].clone(), LinearForm::difference(n + 1, j, i)));
            }
        }
        GkmGraph::new(n + 1, &names, edges).unwrap()
    }

    #[test]
    fn independence_examples() {
        assert_eq!(independence_degree(&star_of(&[[1, 0], [0, 1], [1, 1]])), 2);
        assert_eq!(independence_degree(&star_of(&[[1, 0], [2, 0]])), 1);
    }

    #[test]
    fn cp3_star_is_three_independent() {
        let g = simplex(3);
        for v in 0..4 {
            assert_eq!(independence_degree(&g.star(v)), 3);
        }
    }

    #[test]
    fn cp1_indices() {
        let g = simplex(1);
        let xi = GenericDirection(vec![0, 1]);
        assert_eq!(morse_index(&g, &xi, 0).unwrap(), 0);
        assert_eq!(morse_index(&g, &xi, 1).unwrap(), 1);
        assert_eq!(betti(&g, &xi).unwrap(), BettiVector(vec![1, 1]));
    }

    #[test]
    fn cp2_indices() {
        let g = simplex(2);
        let xi = GenericDirection(vec![0, 1, 2]);
        let sigma: Vec<usize> = (0..3).map(|p| morse_index(&g, &xi, p).unwrap()).collect();
        assert_eq!(sigma, [0, 1, 2]);
        assert_eq!(betti(&g, &xi).unwrap(), BettiVector(vec![1, 1, 1]));
    }

    #[test]
    fn non_generic_direction_rejected() {
        let g = simplex(2);
        let xi = GenericDirection(vec![1, 1, 2]);
        assert_eq!(betti(&g, &xi), Err(GkmError::NonGenericDirection { edge: 0 }));
    }

    #[test]
    fn pick_generic_is_deterministic_and_generic() {
        let g = simplex(2);
        let a = pick_generic(&g, 0).unwrap();
        assert_eq!(a, pick_generic(&g, 0).unwrap());
        assert!(a.0[0] != a.0[1] && a.0[1] != a.0[2] && a.0[0] != a.0[2]);
        let axes = GkmGraph::new(
            2,
            &["a", "b", "c"],
            vec![("a", "b", LinearForm::new(vec![1, 0])), ("b", "c", LinearForm::new(vec![0, 1]))],
        )
        .unwrap();
        for seed in 0..10 {
            let xi = pick_generic(&axes, seed).unwrap();
            assert!(xi.0.iter().all(|&x| x != 0));
        }
    }
}
