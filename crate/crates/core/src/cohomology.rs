//! Graded pieces of the ring of compatible maps `f: V -> S(t*)`, i.e. maps
//! with `f_p - f_q` divisible by `α_e` on every edge, and its extension with
//! coefficients in the cohomology of a fixed component.
//!
//! Grading is by polynomial degree `k`; the corresponding cohomological
//! degree is `2k`. Results with fiber coefficients are indexed by real
//! degree so odd fiber classes are representable.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{graded_dim, monomials, HomogPolynomial, Monomial, Rational, RationalMatrix, Restriction};
use crate::error::{GkmError, Result};
use crate::graph::{betti, pick_generic, validate, BettiVector, GenericDirection, GkmGraph};

/// An element of one graded piece: a polynomial at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub values: Vec<HomogPolynomial>,
}

impl CohomologyClass {
    pub fn constant(g: &GkmGraph, value: Rational) -> Self {
        CohomologyClass { degree: 0, values: vec![HomogPolynomial::constant(g.rank(), value); g.num_vertices()] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySolution {
    pub max_degree: usize,
    /// `dims[k]` is the dimension in polynomial degree `k`.
    pub dims: Vec<usize>,
    pub bases: Vec<Vec<CohomologyClass>>,
}

/// Betti numbers `b_j = dim H^j(F)` of a fixed component, `j = 0..=2m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FiberData {
    poincare: Vec<usize>,
}

impl FiberData {
    pub fn new(poincare: Vec<usize>) -> Result<Self> {
        if poincare.first().copied().unwrap_or(0) == 0 {
            return Err(GkmError::InvalidFiber("b_0 must be at least 1".into()));
        }
        Ok(FiberData { poincare })
    }

    pub fn point() -> Self {
        FiberData { poincare: vec![1] }
    }

    pub fn poincare(&self) -> &[usize] {
        &self.poincare
    }

    pub fn top_degree(&self) -> usize {
        self.poincare.len() - 1
    }

    pub fn betti(&self, j: usize) -> usize {
        self.poincare.get(j).copied().unwrap_or(0)
    }
}

/// Per-edge restriction images of every degree-`k` monomial, with row
/// lookup for the restricted monomial basis.
struct DegreeSystem {
    degree: usize,
    monomials: Vec<Monomial>,
    restricted_rows: usize,
    /// `images[edge][m]` lists `(row, coefficient)` for monomial `m`.
    images: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl DegreeSystem {
    fn new(g: &GkmGraph, degree: usize) -> Self {
        let n = g.rank();
        let monos = monomials(n, degree);
        let reduced = monomials(n - 1, degree);
        let row_of: HashMap<&Monomial, usize> = reduced.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let images = g
            .edges()
            .iter()
            .map(|e| {
                let mut r = Restriction::new(&e.weight, degree).expect("validated graphs have nonzero weights");
                monos
                    .iter()
                    .map(|m| {
                        r.apply_monomial(m)
                            .terms()
                            .map(|(t, c)| (row_of[t], c.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DegreeSystem { degree, monomials: monos, restricted_rows: reduced.len(), images }
    }

    fn unknowns(&self, g: &GkmGraph) -> usize {
        g.num_vertices() * self.monomials.len()
    }

    /// Appends the constraint rows for one copy of the unknowns starting at
    /// column `offset`.
    fn append(&self, g: &GkmGraph, m: &mut RationalMatrix, offset: usize) {
        let block = self.monomials.len();
        for (e, images) in g.edges().iter().zip(&self.images) {
            let first = m.add_rows(self.restricted_rows);
            for (j, image) in images.iter().enumerate() {
                for (row, c) in image {
                    m.set(first + row, offset + e.from * block + j, c.clone());
                    m.set(first + row, offset + e.to * block + j, -c);
                }
            }
        }
    }

    fn matrix(&self, g: &GkmGraph) -> RationalMatrix {
        let mut m = RationalMatrix::new(0, self.unknowns(g));
        self.append(g, &mut m, 0);
        m
    }

    fn class_from_vector(&self, g: &GkmGraph, v: &[Rational]) -> CohomologyClass {
        let block = self.monomials.len();
        let values = (0..g.num_vertices())
            .map(|p| {
                HomogPolynomial::from_terms(
                    g.rank(),
                    self.degree,
                    self.monomials.iter().cloned().zip(v[p * block..(p + 1) * block].iter().cloned()),
                )
            })
            .collect();
        CohomologyClass { degree: self.degree, values }
    }
}

fn ensure_valid(g: &GkmGraph) -> Result<()> {
    let report = validate(g);
    if report.is_valid() {
        Ok(())
    } else {
        Err(GkmError::InvalidGraph(report.violations.len()))
    }
}

/// The linear system whose kernel is the degree-`k` piece. Columns are
/// vertex-major, monomials in graded-lex order within each vertex.
pub fn compatibility_matrix(g: &GkmGraph, degree: usize) -> RationalMatrix {
    DegreeSystem::new(g, degree).matrix(g)
}

/// Dimensions and bases of every degree `0..=max_degree`.
pub fn solve(g: &GkmGraph, max_degree: usize) -> Result<CohomologySolution> {
    ensure_valid(g)?;
    let pieces: Vec<(usize, Vec<CohomologyClass>)> = (0..=max_degree)
        .into_par_iter()
        .map(|k| {
            let system = DegreeSystem::new(g, k);
            let kernel = system.matrix(g).kernel();
            log::debug!("degree {k}: {} unknowns, rank {}, kernel {}", system.unknowns(g), kernel.rank, kernel.dim);
            let basis = kernel.basis.iter().map(|v| system.class_from_vector(g, v)).collect();
            (kernel.dim, basis)
        })
        .collect();
    let (dims, bases) = pieces.into_iter().unzip();
    Ok(CohomologySolution { max_degree, dims, bases })
}

/// Edges on which `f_p - f_q` fails to vanish on `ker α_e`.
pub fn residual_edges(g: &GkmGraph, class: &CohomologyClass) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            let diff = class.values[e.from].sub(&class.values[e.to]);
            let mut r = Restriction::new(&e.weight, class.degree).expect("nonzero weight");
            !r.apply(&diff).is_zero()
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn satisfies_compatibility(g: &GkmGraph, class: &CohomologyClass) -> bool {
    residual_edges(g, class).is_empty()
}

/// `Σ_i β_i · dim S^{k-i}` for each `k ≤ max_degree`.
pub fn formula_dims(betti: &BettiVector, rank: usize, max_degree: usize) -> Vec<usize> {
    (0..=max_degree)
        .map(|k| betti.0.iter().enumerate().filter(|&(i, _)| i <= k).map(|(i, &b)| b * graded_dim(rank, k - i)).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseRow {
    pub degree: usize,
    pub cohomology_degree: usize,
    pub solver_dim: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub xi: GenericDirection,
    pub betti: BettiVector,
    pub rows: Vec<MorseRow>,
}

impl MorseReport {
    pub fn inequality_holds(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
    }

    pub fn equality_holds(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares solver dimensions against the Betti-number bound, with ξ drawn
/// from seed 0.
pub fn morse_check(g: &GkmGraph, max_degree: usize) -> Result<MorseReport> {
    ensure_valid(g)?;
    let xi = pick_generic(g, 0)?;
    morse_check_with(g, &xi, max_degree)
}

pub fn morse_check_with(g: &GkmGraph, xi: &GenericDirection, max_degree: usize) -> Result<MorseReport> {
    let solution = solve(g, max_degree)?;
    let b = betti(g, xi)?;
    let bounds = formula_dims(&b, g.rank(), max_degree);
    let rows = solution
        .dims
        .iter()
        .zip(&bounds)
        .enumerate()
        .map(|(k, (&solver_dim, &bound))| MorseRow {
            degree: k,
            cohomology_degree: 2 * k,
            solver_dim,
            bound,
            within_bound: solver_dim <= bound,
            equal: solver_dim == bound,
        })
        .collect();
    Ok(MorseReport { xi: xi.clone(), betti: b, rows })
}

/// Dimensions, by real degree `0..=max_real_degree`, of compatible maps
/// with values in `H(F) ⊗ S(t*)`.
///
/// Solved directly: one block of compatibility constraints for every basis
/// generator of `H(F)`, all assembled into a single system per degree.
pub fn solve_nonisolated(g: &GkmGraph, fiber: &FiberData, max_real_degree: usize) -> Result<Vec<usize>> {
    ensure_valid(g)?;
    let systems: Vec<DegreeSystem> = (0..=max_real_degree / 2).into_par_iter().map(|k| DegreeSystem::new(g, k)).collect();
    let dims = (0..=max_real_degree)
        .into_par_iter()
        .map(|real| {
            let copies: Vec<&DegreeSystem> = (0..=fiber.top_degree().min(real))
                .filter(|j| (real - j) % 2 == 0)
                .flat_map(|j| std::iter::repeat_n(&systems[(real - j) / 2], fiber.betti(j)))
                .collect();
            let unknowns = copies.iter().map(|s| s.unknowns(g)).sum();
            let mut m = RationalMatrix::new(0, unknowns);
            let mut offset = 0;
            for s in copies {
                s.append(g, &mut m, offset);
                offset += s.unknowns(g);
            }
            m.kernel_dim()
        })
        .collect();
    Ok(dims)
}

/// Convolution of polynomial-degree dimensions with the fiber's Betti
/// numbers: `dim^D = Σ_j b_j · dims[(D - j)/2]` over `D - j` even.
pub fn tensor_dims(solution: &CohomologySolution, fiber: &FiberData, max_real_degree: usize) -> Result<Vec<usize>> {
    if max_real_degree / 2 > solution.max_degree {
        return Err(GkmError::InsufficientDepth { available: solution.max_degree, requested: max_real_degree / 2 });
    }
    Ok(convolve_fiber(&solution.dims, fiber, max_real_degree))
}

/// Real-degree dimensions of `dims ⊗ H(F)`, where `dims[k]` sits in real
/// degree `2k`. Entries past the end of `dims` count as zero.
pub fn convolve_fiber(dims: &[usize], fiber: &FiberData, max_real_degree: usize) -> Vec<usize> {
    (0..=max_real_degree)
        .map(|real| {
            (0..=fiber.top_degree().min(real))
                .filter(|j| (real - j) % 2 == 0)
                .map(|j| fiber.betti(j) * dims.get((real - j) / 2).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

/// Pointwise product, checked against the compatibility condition.
pub fn ring_product(g: &GkmGraph, f: &CohomologyClass, h: &CohomologyClass) -> Result<CohomologyClass> {
    let values = f.values.iter().zip(&h.values).map(|(a, b)| a.mul(b)).collect();
    let product = CohomologyClass { degree: f.degree + h.degree, values };
    match residual_edges(g, &product).first() {
        Some(&edge) => Err(GkmError::ResidualViolation { edge }),
        None => Ok(product),
    }
}
