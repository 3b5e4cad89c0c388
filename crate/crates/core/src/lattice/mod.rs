//! Exact rational polytopes, integer sublattices and lattice-point enumeration.

pub mod affine;
pub mod enumerate;
pub mod hull;
pub mod intlattice;
pub mod linalg;
pub mod polytope;

pub use affine::{affine_decomposition, AffineDecomposition};
pub use hull::Halfspace;
pub use intlattice::{fixed_sublattice, Sublattice};
pub use polytope::{free_sum, restrict_to_sublattice, PolytopeJson, RationalPolytope};
