//! Combinatorial invariants of torus actions with isolated or non-isolated
//! fixed points, computed from their moment graphs with exact rational
//! arithmetic.
//!
//! A graph is a regular graph whose oriented edges carry weights in the
//! weight lattice of a torus (the axial function). From it the crate
//! computes Morse-theoretic Betti numbers, the graded pieces of the ring of
//! compatible polynomial maps on the vertices, the same ring with
//! coefficients in the cohomology of a fixed component, the compatible
//! connection, and the transport of symplectic classes along edges.

pub mod algebra;
pub mod builders;
pub mod cohomology;
pub mod connection;
pub mod error;
pub mod graph;

pub use error::{GkmError, Result};
