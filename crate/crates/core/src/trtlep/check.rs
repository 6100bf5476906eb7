use serde::Serialize;

use super::{Certificate, FrobTypeStructure, MixedTrTLEPData};
use crate::error::{Error, Result};
use crate::jet::{curvature, JMat};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::rat::Rat;

/// Residuals of the relations `nabla(C) = nabla(V) = [C, U] = 0`, `C ^ C = 0`,
/// flatness of the residual connection, and `nabla(U) - [C, V] + C = 0`.
pub fn check_frob_type(f: &FrobTypeStructure) -> Certificate {
    let mut cert = Certificate::new("frobenius-type");
    let m = f.nvars();
    for ((i, j), curv) in curvature(&f.a) {
        cert.push_zero(format!("flat({},{})", i + 1, j + 1), &curv);
    }
    for i in 0..m {
        for j in i + 1..m {
            let d = f.c[j]
                .deriv(i)
                .sub(&f.c[i].deriv(j))
                .add(&f.a[i].commutator(&f.c[j]))
                .sub(&f.a[j].commutator(&f.c[i]));
            cert.push_zero(format!("dC({},{})", i + 1, j + 1), &d);
            cert.push_zero(format!("CC({},{})", i + 1, j + 1), &f.c[i].commutator(&f.c[j]));
        }
    }
    for i in 0..m {
        cert.push_zero(format!("dV({})", i + 1), &f.v.deriv(i).add(&f.a[i].commutator(&f.v)));
        cert.push_zero(format!("CU({})", i + 1), &f.c[i].commutator(&f.u));
        let b = f.u.deriv(i).add(&f.a[i].commutator(&f.u)).sub(&f.c[i].commutator(&f.v)).add(&f.c[i]);
        cert.push_zero(format!("B({})", i + 1), &b);
    }
    cert
}

fn preserves(flag: &Flag, m: &JMat) -> bool {
    m.nonzero_terms().all(|(_, t)| flag.is_invariant_under(t))
}

/// Checks weight preservation and the pairing identities on every graded piece.
pub fn check_mixed_trtlep(t: &MixedTrTLEPData) -> Certificate {
    let mut cert = Certificate::new("mixed-trTLEP");
    cert.extend("", check_frob_type(&t.frob));
    for (name, m) in t.frob.named_matrices() {
        cert.push_bool(format!("W-preserved:{name}"), preserves(&t.weight, m));
    }
    for (i, a) in t.frob.a.iter().enumerate() {
        cert.push_bool(format!("W-preserved:A{}", i + 1), preserves(&t.weight, a));
    }
    let weights = t.weight.weights();
    for k in t.pairings.keys() {
        if !weights.contains(k) {
            cert.push_bool(format!("g{k}:graded-piece-exists"), false);
        }
    }
    for k in weights {
        let Some(g) = t.pairings.get(&k) else {
            cert.push_bool(format!("g{k}:present"), false);
            continue;
        };
        let qt = t.weight.graded(k);
        if g.rows() != qt.dim() || g.cols() != qt.dim() {
            cert.push_bool(format!("g{k}:size"), false);
            continue;
        }
        cert.push_qzero(format!("g{k}:symmetric"), &(&g.transpose() - g));
        cert.push_bool(format!("g{k}:nondegenerate"), !g.det().is_zero());
        let induce = |m: &JMat| m.map_linear(qt.dim(), qt.dim(), |x| qt.induced(x));
        for (name, m) in t.frob.named_matrices() {
            let bar = induce(m);
            let lhs = bar.transpose().mul_const(g);
            let rhs = bar.const_mul(g);
            if name == "V" {
                let resid = lhs.add(&rhs).sub(&JMat::constant(m.ring(), g.scale(&Rat::int(k as i64))));
                cert.push_zero(format!("g{k}:V-weight"), &resid);
            } else {
                cert.push_zero(format!("g{k}:{name}-selfadjoint"), &lhs.sub(&rhs));
            }
        }
    }
    cert
}

/// Twist by the half-integer `l`: `V -> V + l`, `W'_k = W_{k - 2l}`, `g'_k = g_{k - 2l}`.
pub fn tate_twist(t: &MixedTrTLEPData, l: &Rat) -> Result<MixedTrTLEPData> {
    let two_l = l * &Rat::int(2);
    let s = two_l
        .to_i64()
        .filter(|_| two_l.is_integer())
        .ok_or_else(|| Error::DimensionMismatch(format!("twist {l} is not a half-integer")))? as i32;
    let mut frob = t.frob.clone();
    let r = frob.rank();
    frob.v = frob.v.add(&JMat::constant(&frob.ring, QMat::scalar(r, l)));
    Ok(MixedTrTLEPData {
        frob,
        weight: t.weight.reindex(-s),
        pairings: t.pairings.iter().map(|(k, g)| (k + s, g.clone())).collect(),
    })
}

/// Conditions on a flat section at the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionFlags {
    pub ic: bool,
    pub idc: bool,
    pub gc: bool,
    pub ec: bool,
}

/// Decides (IC), (IdC), (GC) and (EC)_d for the constant section `zeta`.
pub fn section_conditions(f: &FrobTypeStructure, zeta: &[Rat], d: &Rat) -> Result<SectionFlags> {
    let r = f.rank();
    if zeta.len() != r {
        return Err(Error::DimensionMismatch("section has wrong length".into()));
    }
    if zeta.iter().all(Rat::is_zero) {
        return Err(Error::ZeroVector);
    }
    let c0: Vec<QMat> = f.c.iter().map(JMat::at0).collect();
    let images: Vec<Vec<Rat>> = c0.iter().map(|c| c.mul_vec(zeta)).collect();
    let rank = if images.is_empty() { 0 } else { QSubspace::span(r, &images).dim() };
    let ic = rank == c0.len();
    let idc = ic && c0.len() == r;
    let mut gens = c0;
    gens.push(f.u.at0());
    let gc = generated_span(&gens, zeta).is_full();
    let half = d / &Rat::int(2);
    let vz = f.v.at0().mul_vec(zeta);
    let ec = vz.iter().zip(zeta).all(|(a, b)| a == &(b * &half));
    Ok(SectionFlags { ic, idc, gc, ec })
}

/// Span of all words in `gens` applied to `v`.
pub(crate) fn generated_span(gens: &[QMat], v: &[Rat]) -> QSubspace {
    let n = v.len();
    let mut span = QSubspace::span(n, &[v.to_vec()]);
    loop {
        let mut vecs: Vec<Vec<Rat>> = (0..span.dim()).map(|i| span.basis().row(i).to_vec()).collect();
        for g in gens {
            for i in 0..span.dim() {
                vecs.push(g.mul_vec(span.basis().row(i)));
            }
        }
        let next = QSubspace::span(n, &vecs);
        if next.dim() == span.dim() {
            return span;
        }
        span = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{Jet, JetRing};
    use crate::q;
    use std::collections::BTreeMap;

    fn rank1(w: i64, v: Rat) -> MixedTrTLEPData {
        let ring = JetRing::base(0, 2).unwrap();
        let frob = FrobTypeStructure::flat(
            &ring,
            vec![],
            JMat::zeros(&ring, 1, 1),
            JMat::constant(&ring, QMat::scalar(1, &v)),
        );
        MixedTrTLEPData {
            frob,
            weight: Flag::pure(1, 2 * w as i32),
            pairings: BTreeMap::from([(2 * w as i32, QMat::identity(1))]),
        }
    }

    #[test]
    fn trivial_structure_passes() {
        let ring = JetRing::base(2, 2).unwrap();
        let z = JMat::zeros(&ring, 2, 2);
        let f = FrobTypeStructure::flat(&ring, vec![z.clone(), z.clone()], z.clone(), z);
        assert!(check_frob_type(&f).passed());
    }

    #[test]
    fn relation_b_sign() {
        let ring = JetRing::base(1, 3).unwrap();
        let m = QMat::from_i64(&[&[0, 1], &[0, 0]]);
        let c = JMat::constant(&ring, m.clone());
        let good = FrobTypeStructure::flat(&ring, vec![c.clone()], JMat::linear(&ring, 0, -&m), JMat::zeros(&ring, 2, 2));
        assert!(check_frob_type(&good).passed());
        let bad = FrobTypeStructure::flat(&ring, vec![c], JMat::linear(&ring, 0, m), JMat::zeros(&ring, 2, 2));
        let cert = check_frob_type(&bad);
        assert_eq!(cert.failures().iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), vec!["B(1)"]);
    }

    #[test]
    fn rank_one_weight_identity() {
        assert!(check_mixed_trtlep(&rank1(2, Rat::int(2))).passed());
        let cert = check_mixed_trtlep(&rank1(2, Rat::int(3)));
        assert_eq!(cert.failures()[0].name, "g4:V-weight");
    }

    #[test]
    fn weight_preservation_failure() {
        let ring = JetRing::base(0, 1).unwrap();
        let u = JMat::constant(&ring, QMat::from_i64(&[&[0, 0], &[1, 0]]));
        let frob = FrobTypeStructure::flat(&ring, vec![], u, JMat::zeros(&ring, 2, 2));
        let w0 = QSubspace::coordinate(2, &[0]);
        let weight = Flag::new(2, vec![(0, w0), (1, QSubspace::full(2))]).unwrap();
        let t = MixedTrTLEPData { frob, weight, pairings: BTreeMap::new() };
        let cert = check_mixed_trtlep(&t);
        assert!(cert.failures().iter().any(|c| c.name == "W-preserved:U"));
    }

    #[test]
    fn twist_rules() {
        let t = rank1(2, Rat::int(2));
        assert_eq!(tate_twist(&t, &Rat::zero()).unwrap(), t);
        let s = tate_twist(&t, &q(-1, 2)).unwrap();
        assert_eq!(s.frob.v.at0(), QMat::scalar(1, &q(3, 2)));
        assert_eq!(s.weight.weights(), vec![3]);
        assert!(check_mixed_trtlep(&s).passed());
        assert_eq!(tate_twist(&s, &q(1, 2)).unwrap(), t);
        assert!(tate_twist(&t, &q(1, 3)).is_err());
    }

    #[test]
    fn section_flags() {
        let t = rank1(1, Rat::int(1));
        let f = section_conditions(&t.frob, &[Rat::one()], &Rat::int(2)).unwrap();
        assert_eq!(f, SectionFlags { ic: true, idc: false, gc: true, ec: true });
        assert_eq!(section_conditions(&t.frob, &[Rat::zero()], &Rat::int(2)).unwrap_err(), Error::ZeroVector);
        let ring = JetRing::base(1, 1).unwrap();
        let z = JMat::zeros(&ring, 2, 2);
        let f2 = FrobTypeStructure::flat(&ring, vec![z.clone()], z.clone(), z.clone());
        assert!(!section_conditions(&f2, &[Rat::one(), Rat::zero()], &Rat::zero()).unwrap().gc);
        let u = JMat::constant(&ring, QMat::from_i64(&[&[0, 0], &[1, 0]]));
        let f3 = FrobTypeStructure::flat(&ring, vec![z.clone()], u, z);
        assert!(section_conditions(&f3, &[Rat::one(), Rat::zero()], &Rat::zero()).unwrap().gc);
        let _ = Jet::zero(&ring);
    }
}
