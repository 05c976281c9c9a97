#![allow(dead_code)]

use gkm_core::algebra::LinearForm;
use gkm_core::builders::BuilderRegistry;
use gkm_core::graph::GkmGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const BUILDER_CORPUS: &[&str] = &[
    "projective:1",
    "projective:2",
    "projective:3",
    "grassmannian:3,2",
    "grassmannian:4,2",
    "toric:1,1",
    "toric:1,1,1",
    "toric:2,1",
];

pub fn build(spec: &str) -> GkmGraph {
    BuilderRegistry::default().build(spec).unwrap().graph
}

/// `(a·b)² = (a·a)(b·b)` exactly when `a` and `b` are parallel.
pub fn parallel(a: &[i64], b: &[i64]) -> bool {
    let dot = |x: &[i64], y: &[i64]| -> i128 { x.iter().zip(y).map(|(&p, &q)| p as i128 * q as i128).sum() };
    dot(a, b) * dot(a, b) == dot(a, a) * dot(b, b)
}

/// Star-matching check by congruence classes modulo each edge weight,
/// sharing no code with the library's restriction-based check.
pub fn star_matching_holds(g: &GkmGraph) -> bool {
    g.edges().iter().all(|e| {
        let alpha = e.weight.coefficients();
        let weights_at = |v: usize| -> Vec<Vec<i64>> {
            g.outgoing(v).iter().map(|&oe| g.weight(oe).coefficients().to_vec()).collect()
        };
        let (at_p, at_q) = (weights_at(e.from), weights_at(e.to));
        let congruent = |x: &[i64], y: &[i64]| {
            let d: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            parallel(&d, alpha)
        };
        at_p.iter().all(|w| {
            at_p.iter().filter(|x| congruent(x, w)).count() == at_q.iter().filter(|x| congruent(x, w)).count()
        }) && at_q.iter().all(|w| {
            at_p.iter().filter(|x| congruent(x, w)).count() == at_q.iter().filter(|x| congruent(x, w)).count()
        })
    })
}

pub fn pairwise_independent(g: &GkmGraph) -> bool {
    (0..g.num_vertices()).all(|v| {
        let ws: Vec<Vec<i64>> = g.outgoing(v).iter().map(|&e| g.weight(e).coefficients().to_vec()).collect();
        ws.iter().enumerate().all(|(i, a)| ws[i + 1..].iter().all(|b| !parallel(a, b)))
    })
}

/// Weights pushed through a random integer matrix of shape `target × rank`.
pub fn project(g: &GkmGraph, target: usize, rng: &mut ChaCha8Rng) -> GkmGraph {
    let p: Vec<Vec<i64>> = (0..target).map(|_| (0..g.rank()).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let weights = g
        .edges()
        .iter()
        .map(|e| LinearForm::new(p.iter().map(|row| row.iter().zip(e.weight.coefficients()).map(|(a, b)| a * b).sum()).collect()))
        .collect();
    g.with_weights(target, weights).unwrap()
}
