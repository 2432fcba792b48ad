//! Exact Frobenius / Cartier semilinear algebra over finite fields.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable inputs; IO, configuration and report formats live
//! in the companion `frobcrys` crate.
//!
//! Layout:
//!
//! * [`fparith`]: prime and extension fields, multivariate polynomials,
//!   fractions with a declared set of denominator atoms, text parsing.
//! * [`semilinalg`]: dense matrices and p-linear / p⁻¹-linear operators,
//!   twisted iterates, stable ranks, nilpotence and duality.
//! * [`gradedcoh`]: section rings of projective space and plane curves,
//!   top local cohomology through a Čech model, induced Frobenius maps and
//!   the Hasse invariant.
//! * [`conegr`]: cones over such bases: rationality verdicts, the graded
//!   trace module and the local duality cross-check.
//! * [`wildquot`]: Z/p actions on localized rings, blow-up charts, fixed
//!   scheme ideals, the cyclic group cohomology obstruction and the torus
//!   log-form computations.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conegr;
pub mod error;
pub mod fparith;
pub mod gradedcoh;
pub mod semilinalg;
pub mod wildquot;

pub use error::{Error, Result};
