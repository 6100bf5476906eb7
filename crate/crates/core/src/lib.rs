//! Exact construction and verification of mixed Frobenius structures,
//! mixed trTLEP-structures and their toric sources at finite jet order.

pub mod amodel;
pub mod bmodel;
pub mod error;
pub mod io;
pub mod jet;
pub mod limit_mhs;
pub mod linalg;
pub mod polytope;
pub mod rat;
pub mod trtlep;
pub mod unfolding;
pub mod verify;

pub use error::{Error, Result};
pub use rat::{q, Rat};
