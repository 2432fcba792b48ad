//! Section rings of (Z, L) for Z a projective space or a smooth plane
//! curve, their graded pieces, graded local cohomology and the Frobenius
//! maps between pieces.
//!
//! Local cohomology is computed from the Cech complex on a homogeneous
//! system of parameters: all variables for P^n, and (y, z) for a plane
//! curve after a linear change of frame making the relation monic in x.
//! Top local cohomology then has the explicit basis x^a / (y^b z^c) with
//! a < deg f, b, c >= 1.

mod frob;
mod ring;

pub use frob::{
    cartier_on_canonical, frobenius_on_piece, graded_piece, hasse_invariant, local_cohomology_module,
    local_cohomology_piece, sheaf_cohomology_module, GradedFrobeniusModule,
};
pub use ring::{CechClass, Piece, RingKind, SectionRing};
