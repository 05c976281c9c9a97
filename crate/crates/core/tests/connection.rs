mod common;

use common::{build, parallel, BUILDER_CORPUS};
use gkm_core::algebra::{LinearForm, Rational};
use gkm_core::builders::BuilderRegistry;
use gkm_core::connection::{
    check_chern_compat, compute_connection, cycle_defect, transport_omega, ConnectionOptions, EdgeGeometry,
    OmegaClass,
};
use gkm_core::graph::{validate, GkmGraph, OrientedEdge};
use gkm_core::GkmError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn connection_is_unique_and_compatible_on_builders() {
    for spec in BUILDER_CORPUS {
        let g = build(spec);
        let reference = compute_connection(&g, ConnectionOptions::default()).unwrap();
        for seed in 0..5 {
            let opts = ConnectionOptions { scan_seed: Some(seed), ..Default::default() };
            assert_eq!(compute_connection(&g, opts).unwrap(), reference, "{spec} seed {seed}");
        }
        for along in g.oriented_edges() {
            let table = reference.table(along);
            assert_eq!(table.len(), g.outgoing(g.source(along)).len());
            assert_eq!(reference.apply(along, along), Some(along.reverse()), "{spec}");
            for &(from, to) in table {
                assert_eq!(g.source(to), g.target(along));
                assert_eq!(reference.apply(along.reverse(), to), Some(from));
                let diff = g.weight(to).sub(&g.weight(from));
                assert!(parallel(diff.coefficients(), g.weight(along).coefficients()));
            }
        }
    }
}

#[test]
fn duplicated_residues_are_ambiguous() {
    // The cube with its three factor weights sent to (1,0), (0,1), (1,1):
    // along an edge of weight ±(1,0) the other two weights are congruent.
    let cube = build("toric:1,1,1");
    let image = [[1, 0], [0, 1], [1, 1]];
    let weights = cube
        .edges()
        .iter()
        .map(|e| {
            let c = e.weight.coefficients();
            LinearForm::new((0..2).map(|r| (0..3).map(|f| image[f][r] * c[2 * f + 1]).sum()).collect())
        })
        .collect();
    let g = cube.with_weights(2, weights).unwrap();
    assert!(validate(&g).is_valid());
    let err = compute_connection(&g, ConnectionOptions::default()).unwrap_err();
    assert!(matches!(err, GkmError::AmbiguousMatch { .. } | GkmError::NoMatch { .. }), "{err:?}");
}

fn cube_bundle() -> (GkmGraph, EdgeGeometry) {
    let ex = BuilderRegistry::default().build("bundle:toric:1,1,1@1,0,1").unwrap();
    (ex.graph, ex.geometry.unwrap())
}

#[test]
fn chern_mutation_flags_adjacent_edges() {
    let (g, geometry) = cube_bundle();
    let conn = compute_connection(&g, ConnectionOptions::default()).unwrap();
    assert!(check_chern_compat(&g, &conn, &geometry).is_compatible());
    for i in 0..g.edges().len() {
        let mut mutated = geometry.clone();
        let mut c = mutated.chern_forward()[i].clone();
        c[0] += 1;
        mutated.set_chern(i, c).unwrap();
        let e = &g.edges()[i];
        let adjacent: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(j, f)| *j != i && [f.from, f.to].iter().any(|v| *v == e.from || *v == e.to))
            .map(|(j, _)| j)
            .collect();
        assert_eq!(check_chern_compat(&g, &conn, &mutated).flagged_edges(), adjacent, "edge {i}");
    }
}

#[test]
fn edge_then_reversal_is_identity() {
    let (g, _) = cube_bundle();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let lengths: Vec<Rational> =
        (0..g.edges().len()).map(|_| Rational::new(rng.gen_range(1..7).into(), rng.gen_range(1..5).into())).collect();
    let chern: Vec<Vec<i64>> = (0..g.edges().len()).map(|_| vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]).collect();
    let geometry = EdgeGeometry::new(&g, 2, lengths, chern).unwrap();
    let start = OmegaClass(vec![Rational::new(1.into(), 3.into()), Rational::from_integer((-2).into())]);
    for e in g.oriented_edges() {
        let classes = transport_omega(&g, &geometry, &[e, e.reverse()], &start).unwrap();
        assert_eq!(classes.last().unwrap(), &start);
    }
}

#[test]
fn defect_is_additive_over_concatenated_cycles() {
    let (g, _) = cube_bundle();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lengths = (0..g.edges().len()).map(|_| Rational::from_integer(rng.gen_range(1..4).into())).collect();
    let chern = (0..g.edges().len()).map(|_| vec![rng.gen_range(-2..=2)]).collect();
    let geometry = EdgeGeometry::new(&g, 1, lengths, chern).unwrap();
    let cycle = |names: &[&str]| -> Vec<OrientedEdge> {
        let mut closed: Vec<&str> = names.to_vec();
        closed.push(names[0]);
        g.path_from_vertices(&closed).unwrap()
    };
    let v = g.vertices().to_vec();
    let square = square_through(&g, &v);
    let a = cycle(&square);
    let b: Vec<OrientedEdge> = a.iter().rev().map(|e| e.reverse()).collect();
    let da = cycle_defect(&g, &geometry, &a).unwrap();
    let db = cycle_defect(&g, &geometry, &b).unwrap();
    let ab: Vec<OrientedEdge> = a.iter().chain(&a).copied().collect();
    let dab = cycle_defect(&g, &geometry, &ab).unwrap();
    assert_eq!(dab.0[0], &da.0[0] + &da.0[0]);
    assert_eq!(&da.0[0] + &db.0[0], Rational::from_integer(0.into()));
}

/// A 4-cycle in the cube starting at its first vertex.
fn square_through<'a>(g: &GkmGraph, names: &'a [String]) -> Vec<&'a str> {
    let n = |i: usize| names[i].as_str();
    let out: Vec<usize> = g.outgoing(0).iter().map(|&e| g.target(e)).collect();
    let (a, b) = (out[0], out[1]);
    let far = (0..g.num_vertices())
        .find(|&v| v != 0 && g.edge_between(a, v).is_some() && g.edge_between(b, v).is_some())
        .unwrap();
    vec![n(0), n(a), n(far), n(b)]
}

#[test]
fn untwisted_bundles_have_no_defect() {
    for spec in ["bundle:projective:2@1,0,1", "bundle:grassmannian:4,2@1,2,1", "bundle:toric:1,1@1,0,1"] {
        let ex = BuilderRegistry::default().build(spec).unwrap();
        let (g, geometry) = (ex.graph, ex.geometry.unwrap());
        let conn = compute_connection(&g, ConnectionOptions::default()).unwrap();
        assert!(check_chern_compat(&g, &conn, &geometry).is_compatible(), "{spec}");
        for p in 0..g.num_vertices() {
            for &e in g.outgoing(p) {
                for &f in g.outgoing(g.target(e)) {
                    if let Some(back) = g.edge_between(g.target(f), p) {
                        assert!(cycle_defect(&g, &geometry, &[e, f, back]).unwrap().is_zero(), "{spec}");
                    }
                }
            }
        }
    }
}
