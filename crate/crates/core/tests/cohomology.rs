mod common;

use std::time::Instant;

use common::{build, project, BUILDER_CORPUS};
use gkm_core::algebra::LinearForm;
use gkm_core::cohomology::{
    compatibility_matrix, formula_dims, morse_check, ring_product, satisfies_compatibility, solve, solve_nonisolated,
    tensor_dims, CohomologyClass, FiberData,
};
use gkm_core::graph::{betti, pick_generic, validate, GkmGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn solver_matches_betti_formula_on_builders() {
    for spec in BUILDER_CORPUS {
        let g = build(spec);
        let kmax = 4;
        let t = Instant::now();
        let s = solve(&g, kmax).unwrap();
        let b = betti(&g, &pick_generic(&g, 0).unwrap()).unwrap();
        assert_eq!(s.dims, formula_dims(&b, g.rank(), kmax), "{spec}");
        eprintln!("{spec}: dims {:?} in {:?}", s.dims, t.elapsed());
    }
}

#[test]
fn basis_elements_satisfy_compatibility() {
    for spec in ["projective:2", "grassmannian:4,2", "toric:1,1"] {
        let g = build(spec);
        let s = solve(&g, 3).unwrap();
        for (k, classes) in s.bases.iter().enumerate() {
            assert_eq!(classes.len(), s.dims[k]);
            for c in classes {
                assert!(satisfies_compatibility(&g, c), "{spec} degree {k}");
                let lead = c.values.iter().flat_map(|p| p.terms()).next().unwrap().1;
                assert_eq!(lead, &gkm_core::algebra::Rational::from_integer(1.into()));
            }
        }
    }
}

#[test]
fn cp2_degree_one_matches_brute_force() {
    // All maps V -> S^1 in rank 3 with integer coefficients in {-1,0,1}:
    // count those satisfying the edge conditions, then compare the span's
    // dimension to the solver's.
    let g = build("projective:2");
    let mut found: Vec<Vec<i64>> = Vec::new();
    for code in 0..3i64.pow(9) {
        let mut c = code;
        let v: Vec<i64> = (0..9).map(|_| { let d = c % 3 - 1; c /= 3; d }).collect();
        let ok = g.edges().iter().all(|e| {
            let diff: Vec<i64> = (0..3).map(|i| v[e.from * 3 + i] - v[e.to * 3 + i]).collect();
            common::parallel(&diff, e.weight.coefficients())
        });
        if ok {
            found.push(v);
        }
    }
    let span = gkm_core::algebra::RationalMatrix::from_integers(&found).rank();
    assert_eq!(span, 4);
    assert_eq!(solve(&g, 1).unwrap().dims[1], 4);
}

#[test]
fn nonisolated_equals_convolution() {
    let fibers = [vec![1], vec![1, 0, 1], vec![1, 2, 1], vec![2]];
    for spec in ["projective:1", "projective:2", "toric:1,1"] {
        let g = build(spec);
        let s = solve(&g, 3).unwrap();
        for f in &fibers {
            let fiber = FiberData::new(f.clone()).unwrap();
            let direct = solve_nonisolated(&g, &fiber, 6).unwrap();
            assert_eq!(direct, tensor_dims(&s, &fiber, 6).unwrap(), "{spec} ⊗ {f:?}");
        }
    }
}

#[test]
fn point_fiber_reduces_to_plain_solve() {
    let g = build("grassmannian:3,2");
    let s = solve(&g, 3).unwrap();
    let direct = solve_nonisolated(&g, &FiberData::point(), 6).unwrap();
    let evens: Vec<usize> = direct.iter().step_by(2).copied().collect();
    assert_eq!(evens, s.dims);
    assert!(direct.iter().skip(1).step_by(2).all(|&d| d == 0));
}

#[test]
fn products_of_basis_elements_stay_compatible() {
    for spec in ["projective:2", "grassmannian:4,2"] {
        let g = build(spec);
        let s = solve(&g, 3).unwrap();
        let mut checked = 0;
        for a in 0..=3 {
            for b in a..=(4 - a).min(3) {
                for f in &s.bases[a] {
                    for h in &s.bases[b] {
                        let p = ring_product(&g, f, h).unwrap();
                        assert!(satisfies_compatibility(&g, &p));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn product_is_commutative_with_unit() {
    let g = build("projective:2");
    let s = solve(&g, 2).unwrap();
    let all: Vec<&CohomologyClass> = s.bases.iter().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = CohomologyClass::constant(&g, gkm_core::algebra::Rational::from_integer(1.into()));
    for _ in 0..50 {
        let f = all[rng.gen_range(0..all.len())];
        let h = all[rng.gen_range(0..all.len())];
        assert_eq!(ring_product(&g, f, h).unwrap(), ring_product(&g, h, f).unwrap());
        assert_eq!(&ring_product(&g, &one, f).unwrap(), f);
    }
}

#[test]
fn extra_constraint_edge_never_increases_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for spec in ["projective:2", "toric:1,1", "grassmannian:4,2"] {
        let g = build(spec);
        for _ in 0..4 {
            let (p, q) = loop {
                let p = rng.gen_range(0..g.num_vertices());
                let q = rng.gen_range(0..g.num_vertices());
                if p != q {
                    break (p, q);
                }
            };
            let w: Vec<i64> = loop {
                let w: Vec<i64> = (0..g.rank()).map(|_| rng.gen_range(-2..=2)).collect();
                if w.iter().any(|&x| x != 0) {
                    break w;
                }
            };
            let mut edges: Vec<(String, String, LinearForm)> = g
                .edges()
                .iter()
                .map(|e| (g.vertex_name(e.from).to_owned(), g.vertex_name(e.to).to_owned(), e.weight.clone()))
                .collect();
            edges.push((g.vertex_name(p).to_owned(), g.vertex_name(q).to_owned(), LinearForm::new(w)));
            let bigger = GkmGraph::new(g.rank(), g.vertices(), edges).unwrap();
            for k in 0..=3 {
                assert!(compatibility_matrix(&bigger, k).kernel_dim() <= compatibility_matrix(&g, k).kernel_dim());
            }
        }
    }
}

#[test]
fn morse_inequality_on_projected_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let bases = ["projective:1", "projective:2", "projective:3", "grassmannian:3,2", "toric:1,1", "grassmannian:4,2"];
    let mut accepted = 0;
    let mut strict = 0;
    let mut attempts = 0;
    while accepted < 50 {
        attempts += 1;
        assert!(attempts < 2000);
        let g = build(bases[rng.gen_range(0..bases.len())]);
        let target = rng.gen_range(1..=g.rank());
        let m = project(&g, target, &mut rng);
        if !validate(&m).is_valid() {
            continue;
        }
        accepted += 1;
        let report = morse_check(&m, 3).unwrap();
        assert!(report.inequality_holds(), "{report:?}");
        if !report.equality_holds() {
            strict += 1;
        }
    }
    eprintln!("{strict} of {accepted} projected graphs have strict inequality somewhere");
}
