//! Exact scalars, small linear programs and sparse polynomials.

pub mod cmp;
pub mod lp;
pub mod poly;
pub mod rational;

pub use cmp::Cmp;
pub use lp::{lp_optimize, parse_affine, parse_constraint, Constraint, LinearProgram, LpError, LpOutcome, Relation, Sense};
pub use poly::{
    parse_poly_expr, poly_equal, weighted_degree_profile, Monomial, PolyEquality, PolyError,
    PolyExpr, SparsePoly,
};
pub use rational::{q, ParseRationalError, Rational};
