//! Frobenius-type structures, mixed trTLEP-structures in the flat frame,
//! their axiom checkers, Tate twists, the Rees construction and mixed
//! Frobenius structures.

mod check;
mod mfs;
mod rees;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::jet::{JMat, Ring};
use crate::linalg::{Flag, QMat};

pub use check::{check_frob_type, check_mixed_trtlep, section_conditions, tate_twist, SectionFlags};
pub use mfs::{check_mfs, mfs_to_mixed, pullback_to_flat, roundtrip_certificate, roundtrip_saito, SaitoMFSData};
pub use rees::{check_opposite, rees_construct, ReesInput, ReesOutput};

/// Matrices `(A_i; C_i; U; V)` over a jet ring, one `A_i` and `C_i` per ring variable.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobTypeStructure {
    pub ring: Ring,
    pub c: Vec<JMat>,
    pub u: JMat,
    pub v: JMat,
    pub a: Vec<JMat>,
}

impl FrobTypeStructure {
    /// Structure in the flat frame (`A_i = 0`).
    pub fn flat(ring: &Ring, c: Vec<JMat>, u: JMat, v: JMat) -> Self {
        let r = u.rows();
        let a = (0..ring.nvars()).map(|_| JMat::zeros(ring, r, r)).collect();
        FrobTypeStructure { ring: ring.clone(), c, u, v, a }
    }

    pub fn rank(&self) -> usize {
        self.u.rows()
    }

    pub fn nvars(&self) -> usize {
        self.c.len()
    }

    /// All endomorphisms `C_i, U, V` with their names.
    pub fn named_matrices(&self) -> Vec<(String, &JMat)> {
        let mut out: Vec<(String, &JMat)> = self.c.iter().enumerate().map(|(i, c)| (format!("C{}", i + 1), c)).collect();
        out.push(("U".into(), &self.u));
        out.push(("V".into(), &self.v));
        out
    }
}

/// Constant pairing matrices `g_k` on the nonzero graded pieces, in the
/// canonical coordinates of [`Flag::graded`].
pub type GradedPairingSet = BTreeMap<i32, QMat>;

/// Frobenius-type structure with a constant weight flag and graded pairings.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTrTLEPData {
    pub frob: FrobTypeStructure,
    pub weight: Flag,
    pub pairings: GradedPairingSet,
}

/// One named residual of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: String,
    pub pass: bool,
}

/// Named list of exact residuals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn new(name: &str) -> Self {
        Certificate { name: name.into(), checks: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn push_bool(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check { name: name.into(), residual: if ok { "0".into() } else { "failed".into() }, pass: ok });
    }

    /// Records whether a jet residual vanishes at all retained orders.
    pub fn push_zero(&mut self, name: impl Into<String>, m: &JMat) {
        let residual = match m.nonzero_terms().map(|(i, _)| m.ring().tdeg(i)).min() {
            None => "0".to_string(),
            Some(k) => format!("nonzero at order {k}"),
        };
        self.checks.push(Check { name: name.into(), pass: residual == "0", residual });
    }

    pub fn push_qzero(&mut self, name: impl Into<String>, m: &QMat) {
        let ok = m.is_zero();
        self.checks.push(Check { name: name.into(), residual: if ok { "0".into() } else { "nonzero".into() }, pass: ok });
    }

    pub fn extend(&mut self, prefix: &str, other: Certificate) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }
}
