//! Explicitly solvable two-dimensional point-potential scattering.
//!
//! The crate evaluates Faddeev, classical and boundary-value eigenfunctions of
//! `-Delta psi + v psi = E psi` for the renormalized point potential, the
//! generalized scattering data `f`, `h+-`, `a`, `b`, the classification of
//! spectral contour singularities in `lambda`, the finite-`N` rank-one
//! regularization, and numerical checks of the dbar and integral identities.

// NaN must fail the positivity guards, hence `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod green;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod regularization;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{ComplexMomentum, Sheet, SpectralPoint, Vec2};
pub use green::QuadratureConfig;
pub use model::{PointModel, Side};
