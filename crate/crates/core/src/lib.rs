//! Pointwise kernels for a gauge theory of gravitation and internal forces
//! written on a tetrad (vierbein) field.
//!
//! The crate evaluates, at a single spacetime point, the algebraic and
//! first-order differential objects of the model:
//!
//! * [`algebra`]: the 4x4 Clifford representation, spin group elements,
//!   state tensors and their invariant sesquilinear form,
//! * [`lie`]: the o(3,1) basis with its structure constants and
//!   user-supplied internal groups,
//! * [`geometry`]: tetrads, metric, volume density, structure coefficients
//!   of the frame, Jacobi checks and Hodge duality,
//! * [`fields`]: gauge potentials, curvature forms, affine connection,
//!   torsion, Riemann/Ricci/scalar curvature and the Dirac operator,
//! * [`moments`]: gauge-invariant moments of a state tensor, Noether
//!   currents, superpotentials and energy-momentum,
//! * [`solver`]: the closed-form gravitational solve and residual
//!   evaluators for the field equations.
//!
//! Every differential input arrives as a *jet* (value plus first partial
//! derivatives); the crate never discretises. It is `no_std` and needs only
//! `alloc`.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod lie;
pub mod linalg;
pub mod moments;
pub mod solver;

pub use error::{Error, Result};
