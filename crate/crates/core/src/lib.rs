//! Densest lattice packings of bounded 3-polytopes.
//!
//! The solver computes the critical determinant of the difference body via
//! test-set enumeration over facet selections, LP feasibility pruning, and
//! critical-point analysis of determinant polynomials, returning the packing
//! density together with an explicit optimal lattice basis.

pub mod geom;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod polytope;
pub mod search;
pub mod verify;
pub mod catalog;
pub mod io;

pub use geom::{vec3, Box3, Halfspace, Mat3, Vec3};
