//! Test harnesses shared by the acceptance suite and the command line:
//! an independent reflexive-polygon enumeration, a random suite of
//! Frobenius-type structures, and the acceptance criteria.

pub mod criteria;
pub mod polygons;
pub mod suite;

pub use criteria::{run_all, CriterionReport};
