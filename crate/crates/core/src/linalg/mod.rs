//! Dense exact linear algebra over Q.

mod flag;
mod qmat;
mod subspace;

pub use flag::Flag;
pub use qmat::QMat;
pub use subspace::{QSubspace, Quotient};
