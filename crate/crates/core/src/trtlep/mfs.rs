use std::collections::BTreeMap;

use super::check::{check_mixed_trtlep, section_conditions};
use super::{Certificate, FrobTypeStructure, MixedTrTLEPData};
use crate::error::{Error, Result};
use crate::jet::{invert_map, Jet, JMat, JetRing, Ring, Substitution};
use crate::linalg::{Flag, QMat};
use crate::rat::Rat;

/// Mixed Frobenius manifold germ in flat coordinates `x_1..x_n`.
///
/// `product[i]` is multiplication by `d/dx_i` in the basis `d/dx_j`; `unit` and
/// `euler` are column vectors of components; `metrics[k]` is the pairing on
/// `Gr^I_k` in the coordinates of [`Flag::graded`].
#[derive(Clone, Debug, PartialEq)]
pub struct SaitoMFSData {
    pub ring: Ring,
    pub product: Vec<JMat>,
    pub unit: JMat,
    pub euler: JMat,
    pub filtration: Flag,
    pub metrics: BTreeMap<i32, JMat>,
    pub charge: Rat,
}

impl SaitoMFSData {
    pub fn dim(&self) -> usize {
        self.product.len()
    }

    /// `nabla E`: column `i` is `d E / d x_i`.
    pub fn euler_gradient(&self) -> JMat {
        JMat::hstack(&(0..self.dim()).map(|i| self.euler.deriv(i)).collect::<Vec<_>>())
    }

    fn along_euler(&self, m: &JMat) -> JMat {
        (0..self.dim()).fold(JMat::zeros(&self.ring, m.rows(), m.cols()), |acc, l| {
            acc.add(&m.deriv(l).scale_jet(&self.euler.entry(l, 0)))
        })
    }
}

/// Axioms of a mixed Frobenius manifold within truncation.
pub fn check_mfs(m: &SaitoMFSData) -> Certificate {
    let mut cert = Certificate::new("mixed-frobenius");
    let n = m.dim();
    if m.ring.nvars() != n || m.unit.rows() != n || m.euler.rows() != n {
        cert.push_bool("shape", false);
        return cert;
    }
    for i in 0..n {
        for j in i + 1..n {
            cert.push_zero(format!("commutative({},{})", i + 1, j + 1), &m.product[i].col(j).sub(&m.product[j].col(i)));
            cert.push_zero(format!("associative({},{})", i + 1, j + 1), &m.product[i].commutator(&m.product[j]));
            cert.push_zero(format!("flat-product({},{})", i + 1, j + 1), &m.product[j].deriv(i).sub(&m.product[i].deriv(j)));
        }
    }
    let unit_op = (0..n).fold(JMat::zeros(&m.ring, n, n), |acc, i| acc.add(&m.product[i].scale_jet(&m.unit.entry(i, 0))));
    cert.push_zero("unit", &unit_op.sub(&JMat::identity(&m.ring, n)));
    for i in 0..n {
        cert.push_zero(format!("unit-flat({})", i + 1), &m.unit.deriv(i));
    }
    let q = m.euler_gradient();
    for i in 0..n {
        cert.push_zero(format!("euler-flat({})", i + 1), &q.deriv(i));
    }
    cert.push_zero("euler-unit", &q.mul(&m.unit).sub(&m.unit));
    for i in 0..n {
        let mut lie = m.along_euler(&m.product[i]).sub(&q.mul(&m.product[i])).add(&m.product[i].mul(&q)).sub(&m.product[i]);
        for l in 0..n {
            lie = lie.add(&m.product[l].scale_jet(&q.entry(l, i)));
        }
        cert.push_zero(format!("euler-product({})", i + 1), &lie);
    }
    let preserves = |x: &JMat| x.all_terms(|t| m.filtration.is_invariant_under(t));
    for (i, p) in m.product.iter().enumerate() {
        cert.push_bool(format!("I-preserved:{}", i + 1), preserves(p));
    }
    cert.push_bool("I-preserved:E", preserves(&q));
    let weights = m.filtration.weights();
    for k in &weights {
        let Some(g) = m.metrics.get(k) else {
            cert.push_bool(format!("g{k}:present"), false);
            continue;
        };
        let qt = m.filtration.graded(*k);
        if g.rows() != qt.dim() || g.cols() != qt.dim() {
            cert.push_bool(format!("g{k}:size"), false);
            continue;
        }
        for i in 0..n {
            cert.push_zero(format!("g{k}:flat({})", i + 1), &g.deriv(i));
        }
        cert.push_zero(format!("g{k}:symmetric"), &g.transpose().sub(g));
        cert.push_bool(format!("g{k}:nondegenerate"), !g.at0().det().is_zero());
        let induce = |x: &JMat| x.map_linear(qt.dim(), qt.dim(), |t| qt.induced(t));
        for (i, p) in m.product.iter().enumerate() {
            let pb = induce(p);
            cert.push_zero(format!("g{k}:g1({})", i + 1), &pb.transpose().mul(g).sub(&g.mul(&pb)));
        }
        let qb = induce(&q);
        let target = g.scale(&(&(&Rat::int(2) - &m.charge) + &Rat::int(*k as i64)));
        let g2 = m.along_euler(g).add(&qb.transpose().mul(g)).add(&g.mul(&qb)).sub(&target);
        cert.push_zero(format!("g{k}:g2"), &g2);
    }
    for k in m.metrics.keys() {
        if !weights.contains(k) {
            cert.push_bool(format!("g{k}:graded-piece-exists"), false);
        }
    }
    cert
}

/// The mixed trTLEP-structure of a mixed Frobenius manifold:
/// `C_i = -(d/dx_i o)`, `U = E o`, `V = nabla E - (2 - d)/2`, `W = I`.
pub fn mfs_to_mixed(m: &SaitoMFSData) -> Result<MixedTrTLEPData> {
    let n = m.dim();
    let c: Vec<JMat> = m.product.iter().map(JMat::neg).collect();
    let u = (0..n).fold(JMat::zeros(&m.ring, n, n), |acc, i| acc.add(&m.product[i].scale_jet(&m.euler.entry(i, 0))));
    let shift = &(&Rat::int(2) - &m.charge) / &Rat::int(2);
    let v = m.euler_gradient().sub(&JMat::constant(&m.ring, QMat::scalar(n, &shift)));
    let mut pairings = BTreeMap::new();
    for (k, g) in &m.metrics {
        if !g.is_constant() {
            return Err(Error::FlatnessViolation(format!("metric g{k} is not constant in flat coordinates")));
        }
        pairings.insert(*k, g.at0());
    }
    Ok(MixedTrTLEPData { frob: FrobTypeStructure::flat(&m.ring, c, u, v), weight: m.filtration.clone(), pairings })
}

struct FlatChart {
    ring: Ring,
    sub: Substitution,
    /// `jac[i][a] = d t_i / d x_a`
    jac: Vec<Vec<Jet>>,
}

impl FlatChart {
    fn new(t: &MixedTrTLEPData, zeta: &[Rat], d: &Rat) -> Result<FlatChart> {
        let f = &t.frob;
        if f.a.iter().any(|a| !a.is_zero()) {
            return Err(Error::ConditionsNotMet("structure is not in its flat frame".into()));
        }
        if f.ring.ny() > 0 {
            return Err(Error::ConditionsNotMet("unfolding variables must be absorbed first".into()));
        }
        let flags = section_conditions(f, zeta, d)?;
        if !flags.idc {
            return Err(Error::ConditionsNotMet("section does not satisfy (IdC)".into()));
        }
        if !flags.ec {
            return Err(Error::ConditionsNotMet(format!("section does not satisfy (EC)_{d}")));
        }
        let n = f.rank();
        let psi = crate::unfolding::potential(f, zeta)?;
        let x_of_t: Vec<Jet> = (0..n).map(|a| psi.entry(a, 0).neg()).collect();
        let ring = JetRing::base(n, f.ring.order())?;
        let t_of_x = invert_map(&x_of_t, &ring).ok_or_else(|| Error::ConditionsNotMet("flat coordinates degenerate".into()))?;
        let jac = t_of_x.iter().map(|ti| (0..n).map(|a| ti.deriv(a)).collect()).collect();
        let sub = Substitution::new(&f.ring, &ring, &t_of_x);
        Ok(FlatChart { ring, sub, jac })
    }

    /// `C` in the direction `d/dx_a`, as a function of `x`.
    fn higgs(&self, c: &[JMat]) -> Vec<JMat> {
        let n = self.ring.nvars();
        let pulled: Vec<JMat> = c.iter().map(|ci| self.sub.jmat(ci)).collect();
        (0..n)
            .map(|a| {
                pulled.iter().enumerate().fold(JMat::zeros(&self.ring, n, n), |acc, (i, ci)| acc.add(&ci.scale_jet(&self.jac[i][a])))
            })
            .collect()
    }
}

/// Mixed Frobenius manifold induced on the base by a section satisfying
/// (IdC) and (EC)_d, written in the flat coordinates `x = -psi(t)`.
pub fn roundtrip_saito(t: &MixedTrTLEPData, zeta: &[Rat], d: &Rat) -> Result<SaitoMFSData> {
    let chart = FlatChart::new(t, zeta, d)?;
    let cx = chart.higgs(&t.frob.c);
    let z = QMat::column_vec(zeta);
    let euler = chart.sub.jmat(&t.frob.u).mul_const(&z);
    let metrics = t.pairings.iter().map(|(k, g)| (*k, JMat::constant(&chart.ring, g.clone()))).collect();
    Ok(SaitoMFSData {
        ring: chart.ring.clone(),
        product: cx.iter().map(JMat::neg).collect(),
        unit: JMat::constant(&chart.ring, z),
        euler,
        filtration: t.weight.clone(),
        metrics,
        charge: d.clone(),
    })
}

/// The structure `t` rewritten in the flat coordinates used by [`roundtrip_saito`].
pub fn pullback_to_flat(t: &MixedTrTLEPData, zeta: &[Rat], d: &Rat) -> Result<MixedTrTLEPData> {
    let chart = FlatChart::new(t, zeta, d)?;
    let frob = FrobTypeStructure::flat(&chart.ring, chart.higgs(&t.frob.c), chart.sub.jmat(&t.frob.u), chart.sub.jmat(&t.frob.v));
    Ok(MixedTrTLEPData { frob, weight: t.weight.clone(), pairings: t.pairings.clone() })
}

/// Checks the induced manifold and compares its structure with `t` in flat coordinates.
pub fn roundtrip_certificate(t: &MixedTrTLEPData, zeta: &[Rat], d: &Rat) -> Result<Certificate> {
    let m = roundtrip_saito(t, zeta, d)?;
    let mut cert = Certificate::new("roundtrip");
    cert.extend("mfs:", check_mfs(&m));
    let back = mfs_to_mixed(&m)?;
    cert.extend("mixed:", check_mixed_trtlep(&back));
    let pb = pullback_to_flat(t, zeta, d)?;
    for (a, (x, y)) in back.frob.c.iter().zip(&pb.frob.c).enumerate() {
        cert.push_zero(format!("same-C{}", a + 1), &x.sub(y));
    }
    cert.push_zero("same-U", &back.frob.u.sub(&pb.frob.u));
    cert.push_zero("same-V", &back.frob.v.sub(&pb.frob.v));
    cert.push_bool("same-W", back.weight == pb.weight);
    cert.push_bool("same-g", back.pairings == pb.pairings);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::exp_linear;
    use crate::linalg::QSubspace;

    fn one_dim(d: i64, k: i32) -> SaitoMFSData {
        let ring = JetRing::base(1, 3).unwrap();
        SaitoMFSData {
            ring: ring.clone(),
            product: vec![JMat::identity(&ring, 1)],
            unit: JMat::identity(&ring, 1),
            euler: JMat::linear(&ring, 0, QMat::identity(1)),
            filtration: Flag::pure(1, k),
            metrics: BTreeMap::from([(k, JMat::identity(&ring, 1))]),
            charge: Rat::int(d),
        }
    }

    // quantum cohomology of the projective line: E = x1 d1 + 2 d2, charge 1
    fn p1(order: u32) -> SaitoMFSData {
        let ring = JetRing::base(2, order).unwrap();
        let e = exp_linear(&ring, 1, &Rat::one());
        let m2 = JMat::constant(&ring, QMat::from_i64(&[&[0, 0], &[1, 0]]))
            .add(&JMat::constant(&ring, QMat::from_i64(&[&[0, 1], &[0, 0]])).scale_jet(&e));
        let euler = JMat::linear(&ring, 0, QMat::from_i64(&[&[1], &[0]])).add(&JMat::constant(&ring, QMat::from_i64(&[&[0], &[2]])));
        SaitoMFSData {
            ring: ring.clone(),
            product: vec![JMat::identity(&ring, 2), m2],
            unit: JMat::constant(&ring, QMat::from_i64(&[&[1], &[0]])),
            euler,
            filtration: Flag::pure(2, 0),
            metrics: BTreeMap::from([(0, JMat::constant(&ring, QMat::from_i64(&[&[0, 1], &[1, 0]])))]),
            charge: Rat::one(),
        }
    }

    // Q[x]/(x^2) with E = x1 d1, I_0 = <d2>
    fn dual_numbers() -> SaitoMFSData {
        let ring = JetRing::base(2, 3).unwrap();
        SaitoMFSData {
            ring: ring.clone(),
            product: vec![JMat::identity(&ring, 2), JMat::constant(&ring, QMat::from_i64(&[&[0, 0], &[1, 0]]))],
            unit: JMat::constant(&ring, QMat::from_i64(&[&[1], &[0]])),
            euler: JMat::linear(&ring, 0, QMat::from_i64(&[&[1], &[0]])),
            filtration: Flag::new(2, vec![(0, QSubspace::coordinate(2, &[1])), (2, QSubspace::full(2))]).unwrap(),
            metrics: BTreeMap::from([(0, JMat::identity(&ring, 1)), (2, JMat::identity(&ring, 1))]),
            charge: Rat::int(2),
        }
    }

    #[test]
    fn one_dimensional_conversion() {
        let m = one_dim(2, 2);
        assert!(check_mfs(&m).passed());
        let t = mfs_to_mixed(&m).unwrap();
        assert_eq!(t.frob.c[0].at0(), QMat::from_i64(&[&[-1]]));
        assert_eq!(t.frob.u, JMat::linear(&m.ring, 0, QMat::identity(1)));
        assert_eq!(t.frob.v.at0(), QMat::identity(1));
        assert!(check_mixed_trtlep(&t).passed());
        let m4 = one_dim(4, 4);
        assert!(check_mfs(&m4).passed());
        assert_eq!(mfs_to_mixed(&m4).unwrap().frob.v.at0(), QMat::scalar(1, &Rat::int(2)));
    }

    #[test]
    fn broken_metric() {
        let mut m = one_dim(2, 2);
        m.metrics.insert(2, JMat::identity(&m.ring, 1).add(&JMat::linear(&m.ring, 0, QMat::identity(1))));
        let cert = check_mfs(&m);
        assert!(cert.failures().iter().any(|c| c.name == "g2:flat(1)"));
        assert!(mfs_to_mixed(&m).is_err());
        assert!(!check_mfs(&one_dim(2, 4)).passed());
    }

    #[test]
    fn examples_pass_and_convert() {
        for m in [p1(4), dual_numbers()] {
            let cert = check_mfs(&m);
            assert!(cert.passed(), "{:?}", cert.failures());
            let t = mfs_to_mixed(&m).unwrap();
            let c = check_mixed_trtlep(&t);
            assert!(c.passed(), "{:?}", c.failures());
        }
    }

    #[test]
    fn roundtrip_recovers_manifold() {
        for m in [one_dim(2, 2), p1(4), dual_numbers()] {
            let t = mfs_to_mixed(&m).unwrap();
            let zeta = m.unit.at0().col(0);
            let back = roundtrip_saito(&t, &zeta, &m.charge).unwrap();
            for (a, b) in back.product.iter().zip(&m.product) {
                assert!(a.sub(b).is_zero());
            }
            assert!(back.euler.sub(&m.euler).is_zero());
            let cert = roundtrip_certificate(&t, &zeta, &m.charge).unwrap();
            assert!(cert.passed(), "{:?}", cert.failures());
        }
    }

    #[test]
    fn roundtrip_through_nonflat_coordinates() {
        // t1 = s1 + s2^2, t2 = s2 - s1 s2
        let m = p1(4);
        let t = mfs_to_mixed(&m).unwrap();
        let ring = m.ring.clone();
        let (s1, s2) = (Jet::var(&ring, 0), Jet::var(&ring, 1));
        let phi = vec![s1.add(&s2.mul(&s2)), s2.sub(&s1.mul(&s2))];
        let sub = Substitution::new(&ring, &ring, &phi);
        let c: Vec<JMat> = (0..2)
            .map(|a| (0..2).fold(JMat::zeros(&ring, 2, 2), |acc, i| acc.add(&sub.jmat(&t.frob.c[i]).scale_jet(&phi[i].deriv(a)))))
            .collect();
        let moved = MixedTrTLEPData {
            frob: FrobTypeStructure::flat(&ring, c, sub.jmat(&t.frob.u), sub.jmat(&t.frob.v)),
            weight: t.weight.clone(),
            pairings: t.pairings.clone(),
        };
        assert!(check_frob_type(&moved.frob).passed());
        let zeta = [Rat::one(), Rat::zero()];
        let cert = roundtrip_certificate(&moved, &zeta, &Rat::one()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures());
        let back = roundtrip_saito(&moved, &zeta, &Rat::one()).unwrap();
        // recovered up to the truncation lost in the coordinate change
        let prec = back.product[1].prec();
        assert!(back.product[1].sub(&m.product[1].clone().with_prec(prec)).is_zero());
    }

    #[test]
    fn conditions_not_met() {
        let t = mfs_to_mixed(&p1(3)).unwrap();
        assert!(matches!(roundtrip_saito(&t, &[Rat::one(), Rat::one()], &Rat::one()), Err(Error::ConditionsNotMet(_))));
        assert!(matches!(roundtrip_saito(&t, &[Rat::one(), Rat::zero()], &Rat::int(2)), Err(Error::ConditionsNotMet(_))));
    }

    use crate::trtlep::check_frob_type;
}
