//! Exhaustive verification engine for nondegenerate 2 x (k+1) x k
//! hypermatrices over finite fields with plane-partition-restricted support.
//!
//! The crate provides four independent counting routes for the number of
//! nondegenerate hypermatrices whose forced-zero region is a plane partition
//! ⟨λ, μ⟩ inside the staircase Δ:
//!
//! * brute force over free entries ([`counting::brute_force_count`]),
//! * orbit counting through the GL_{k+1} x GL_k action on the standard
//!   hypermatrix E ([`counting::action_count`]),
//! * summing Bruhat-style augmented-hypermatrix cells, which yields an exact
//!   polynomial in q ([`counting::cell_polynomial`]),
//! * the conjectured q-integer product formula
//!   ([`counting::conjectured_polynomial`]).
//!
//! Alongside these live the hyperrook combinatorics (placements of the form
//! (m_sigma, m_pi) acting on E, their (w, c) encoding and product-formula
//! count) and classical full-rank rook/matrix oracles used as 2-D sanity
//! checks.

pub mod counting;
pub mod gf;
pub mod hypermatrix;
pub mod linalg;
pub mod rooks;
pub mod shapes;

pub use gf::{Field, FieldElement};
pub use hypermatrix::Hypermatrix;
pub use linalg::{FqMatrix, FqPolynomial, Permutation};
pub use shapes::{IntegerPartition, PlanePartition};
