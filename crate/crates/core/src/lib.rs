//! Exact Minkowski sums of polytopes, face lattices, and the linear
//! relation between the face numbers of a sum and of its partial sums.

pub mod exact;
pub mod formulas;
pub mod gaussmap3d;
pub mod generators;
pub mod io;
pub mod minkowski;
pub mod polytope;

pub use exact::{RatMatrix, RatVector, Rational};
pub use polytope::{FVector, FaceLattice, FaceLatticeEntry, Facet, Polytope, PolytopeError};
