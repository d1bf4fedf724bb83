//! Exact-arithmetic computation of abelian Dijkgraaf-Witten invariants and
//! the GNS/universal construction of the associated TQFT vector spaces.
//!
//! The library computes, over a finite abelian gauge group `G`:
//!
//! - the Dijkgraaf-Witten state of labelled ribbon links in `S^3` and of
//!   closed 3-manifolds given by integer surgery presentations, as exact
//!   rationals (groupoid cardinalities of bundle groupoids);
//! - local move rewriting (twist removal, crossing-pair removal, parallel
//!   splitting, ring insertion) and reduction of links to trivial linking
//!   data;
//! - pairing matrices of the universal (GNS) construction, their ranks and
//!   radicals, and the multiplicativity / monoidality / symmetry checks at
//!   rank level;
//! - the TQFT vector spaces of labelled surfaces via standard handlebody
//!   generators: dimensions, basis pairings, coordinates and transition
//!   amplitudes.
//!
//! Everything is exact: integers are arbitrary precision, scalars are
//! `BigRational`, and no floating point appears anywhere.

pub mod error;
pub mod gns;
pub mod group;
pub mod invariant;
pub mod link;
pub mod tqft;
pub mod zmatrix;

pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use invariant::{
    apply_move, eta, invariant_closed, invariant_presentation, invariant_s3, meridian_presentation,
    reduce, HomologyPresentation, Move,
};
pub use link::{
    linking_data, parse_diagram, parse_link_file, Component, FormalSum, Label, LabeledLinkingData,
    LinkDiagram, Role,
};
pub use zmatrix::{
    brute_force_count, count_solutions, smith_normal_form, IntMatrix, SnfDecomposition,
};

/// Exact rational scalar used throughout.
pub type Rational = num_rational::BigRational;
