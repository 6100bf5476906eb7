//! Limit mixed trTLEP-structures on the cokernel of a compatible nilpotent endomorphism.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::JMat;
use crate::linalg::{Flag, QMat, QSubspace};
use crate::trtlep::{check_mixed_trtlep, Certificate, FrobTypeStructure, MixedTrTLEPData};

/// Nilpotent endomorphism of the fibre, constant in the flat frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentData {
    pub matrix: QMat,
    /// Least `p` with `N^p = 0`.
    pub index: u32,
}

impl NilpotentData {
    pub fn new(matrix: QMat) -> Result<Self> {
        let n = matrix.rows();
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("nilpotent endomorphism must be square".into()));
        }
        let mut p = QMat::identity(n);
        for index in 0..=n as u32 {
            if p.is_zero() {
                return Ok(NilpotentData { matrix, index });
            }
            p = &p * &matrix;
        }
        Err(Error::CompatFails("endomorphism is not nilpotent".into()))
    }

    fn kernel_power(&self, k: u32) -> QSubspace {
        QSubspace::kernel_of(&self.matrix.pow(k))
    }
}

/// Identities `[C_i, N] = [U, N] = 0`, `[V, N] = -N` and `N^T g = g N`.
pub fn check_nilpotent_compat(t: &MixedTrTLEPData, nil: &NilpotentData) -> Certificate {
    let mut cert = Certificate::new("nilpotent-compatibility");
    let f = &t.frob;
    let nj = JMat::constant(&f.ring, nil.matrix.clone());
    for (i, c) in f.c.iter().enumerate() {
        cert.push_zero(format!("[C{},N]", i + 1), &c.commutator(&nj));
    }
    cert.push_zero("[U,N]", &f.u.commutator(&nj));
    cert.push_zero("[V,N]+N", &f.v.commutator(&nj).add(&nj));
    for (i, a) in f.a.iter().enumerate() {
        cert.push_zero(format!("[A{},N]", i + 1), &a.commutator(&nj));
    }
    match t.pairings.get(&0) {
        Some(g) if t.weight.weights() == [0] => {
            let n = &nil.matrix;
            cert.push_qzero("N-selfadjoint", &(&(&n.transpose() * g) - &(g * n)));
        }
        _ => cert.push_bool("single-weight-0", false),
    }
    cert
}

/// Structure induced on `coker N` with weights `W_k = im(ker N^{k+1})` and
/// pairings `q_k([a], [b]) = g(N^k a, b)`.
pub fn limit_mixed(t: &MixedTrTLEPData, nil: &NilpotentData) -> Result<(MixedTrTLEPData, Certificate)> {
    let compat = check_nilpotent_compat(t, nil);
    if let Some(bad) = compat.failures().first() {
        return Err(Error::CompatFails(bad.name.clone()));
    }
    let g = &t.pairings[&0];
    let r = nil.matrix.rows();
    let image = QSubspace::image_of(&nil.matrix);
    let coker = image.quotient();
    let dim = coker.dim();
    let induce = |m: &JMat| m.map_linear(dim, dim, |x| coker.induced(x));
    let f = &t.frob;
    let frob = FrobTypeStructure {
        ring: f.ring.clone(),
        c: f.c.iter().map(induce).collect(),
        u: induce(&f.u),
        v: induce(&f.v),
        a: f.a.iter().map(induce).collect(),
    };
    let top = nil.index.saturating_sub(1) as i32;
    let project = |s: &QSubspace| -> QSubspace {
        let vecs: Vec<Vec<_>> = (0..s.dim()).map(|i| coker.projection.mul_vec(s.basis().row(i))).collect();
        QSubspace::span(dim, &vecs)
    };
    let steps: Vec<(i32, QSubspace)> = (0..=top.max(0)).map(|k| (k, project(&nil.kernel_power(k as u32 + 1)))).collect();
    let weight = Flag::new(dim, steps)?;
    let mut cert = Certificate::new("limit");
    cert.extend("", compat);
    let mut pairings = BTreeMap::new();
    for k in weight.weights() {
        let kk = k as u32;
        let ker = nil.kernel_power(kk + 1);
        let nk = nil.matrix.pow(kk);
        let form = &nk.transpose() * g;
        let lower = image.intersection(&ker)?.sum(&nil.kernel_power(kk))?;
        let ortho = &(lower.basis() * &form) * &ker.basis().transpose();
        cert.push_qzero(format!("P{k}"), &ortho);
        // lift graded representatives into ker N^{k+1}
        let sec = weight.graded(k).section;
        let kb = ker.basis_cols();
        let pk = &coker.projection * &kb;
        let x = pk.solve(&sec).ok_or_else(|| Error::CompatFails(format!("graded piece {k} does not lift")))?;
        let lift = &kb * &x;
        debug_assert_eq!(lift.rows(), r);
        pairings.insert(k, &(&lift.transpose() * &form) * &lift);
    }
    let data = MixedTrTLEPData { frob, weight, pairings };
    cert.extend("", check_mixed_trtlep(&data));
    Ok((data, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetRing;
    use crate::q;
    use crate::rat::Rat;

    fn point(v: QMat, g: QMat) -> MixedTrTLEPData {
        let ring = JetRing::base(0, 2).unwrap();
        let r = v.rows();
        MixedTrTLEPData {
            frob: FrobTypeStructure::flat(&ring, vec![], JMat::zeros(&ring, r, r), JMat::constant(&ring, v)),
            weight: Flag::pure(r, 0),
            pairings: BTreeMap::from([(0, g)]),
        }
    }

    fn antidiag() -> QMat {
        QMat::from_i64(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn compat_examples() {
        let low = NilpotentData::new(QMat::from_i64(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(low.index, 2);
        let t = point(QMat::diag(&[Rat::one(), Rat::zero()]), antidiag());
        assert!(check_nilpotent_compat(&t, &low).passed());
        let zero = NilpotentData::new(QMat::zeros(2, 2)).unwrap();
        assert!(check_nilpotent_compat(&t, &zero).passed());
        let bad = point(QMat::identity(2), antidiag());
        let cert = check_nilpotent_compat(&bad, &low);
        assert_eq!(cert.failures()[0].name, "[V,N]+N");
        assert!(NilpotentData::new(QMat::identity(2)).is_err());
    }

    #[test]
    fn zero_endomorphism() {
        let t = point(QMat::diag(&[q(1, 2), q(-1, 2)]), antidiag());
        let zero = NilpotentData::new(QMat::zeros(2, 2)).unwrap();
        let (lim, cert) = limit_mixed(&t, &zero).unwrap();
        assert!(cert.passed());
        assert_eq!(lim.weight.weights(), vec![0]);
        assert_eq!(lim.pairings[&0], antidiag());
    }

    #[test]
    fn rank_two_cokernel() {
        // N e2 = e1, V = diag(-1/2, 1/2) so that [V, N] = -N
        let t = point(QMat::diag(&[q(-1, 2), q(1, 2)]), antidiag());
        let nil = NilpotentData::new(QMat::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let (lim, cert) = limit_mixed(&t, &nil).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!(lim.frob.rank(), 1);
        assert_eq!(lim.weight.weights(), vec![1]);
        assert_eq!(lim.pairings[&1], QMat::identity(1));
        assert_eq!(lim.frob.v.at0(), QMat::scalar(1, &q(1, 2)));
    }

    #[test]
    fn jordan_block_of_size_three() {
        let n = QMat::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let g = QMat::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let t = point(QMat::diag(&[Rat::int(-1), Rat::zero(), Rat::one()]), g);
        let nil = NilpotentData::new(n).unwrap();
        assert_eq!(nil.index, 3);
        let (lim, cert) = limit_mixed(&t, &nil).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!((0..3).map(|k| lim.weight.graded_dim(k)).collect::<Vec<_>>(), vec![0, 0, 1]);
        assert_eq!(lim.pairings[&2], QMat::identity(1));
    }
}
