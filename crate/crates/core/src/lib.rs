//! Exact-arithmetic checkers for log canonical threshold bounds on del Pezzo
//! surfaces with quotient singularities.
//!
//! Everything is computed over [`Rational`]; there is no floating point in the
//! library. The [`certs`] module ties the pieces together behind a small
//! certificate language.

pub mod exact;

pub use exact::{q, Rational};
pub mod local_ineq;
pub mod wps;
pub mod resolution;
pub mod pic_lattice;
pub mod certs;
