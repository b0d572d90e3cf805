//! Numerical upper and lower bounds for the sharp constant `C(d, p)` in the
//! Nikolskii-type inequality `|P|_inf^p <= C |P|_p^p` over polynomials of
//! degree `d` on the unit circle.
//!
//! The crate is organised bottom-up:
//!
//! * [`polycircle`] evaluates normalised polynomials given by zero arguments.
//! * [`quadrature`] is the adaptive Gauss-Kronrod integrator used everywhere.
//! * [`specfun`] provides log-gamma and the beta function.
//! * [`norms`] computes `|P|_p^p`, the gamma-sequence lower bound and an exact
//!   coefficient-space oracle for even `p`.
//! * [`kernel`] holds the interval-at-level combinatorics, the kernel
//!   functional `E(tau)` and the upper bounds derived from it.
//! * [`extremal`] searches for the extremal polynomial numerically and checks
//!   the contour identity and the known constraints on its zeros.
//! * [`bounds`] aggregates everything into a [`bounds::BoundReport`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod kernel;
pub mod norms;
pub mod par;
pub mod polycircle;
pub mod quadrature;
pub mod simplex;
pub mod specfun;

pub use error::{Error, Result};
pub use polycircle::ZeroConfig;
pub use quadrature::QuadratureSpec;
