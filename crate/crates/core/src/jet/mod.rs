//! Truncated multivariate power series with exact coefficients.

mod jmat;
mod ring;
mod scalar;
mod subst;

pub use jmat::{curvature, flat_gauge, jet_kernel, solve_linear, JMat, LinearSolution};
pub use ring::{JetRing, Prec, Ring, MAX_MONOMIALS_ENV};
pub use scalar::{exp_linear, Jet};
pub use subst::{invert_map, Substitution};
