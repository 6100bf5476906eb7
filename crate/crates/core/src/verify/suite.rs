//! Random Frobenius-type structures with graded pairings.
//!
//! Each instance comes from a potential `Phi(t)` with values in the graded
//! Frobenius algebra `A = Q[x]/(x^r)`: `C_i = d Phi / d t_i`,
//! `U = U_0 + sum_k (k - 1) Phi_k` where `Phi_k` is the degree-`k` part, and
//! `V = c - deg`. Everything is then conjugated by a random unimodular matrix.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jet::{JMat, Jet, JetRing, Ring};
use crate::linalg::{Flag, QMat};
use crate::rat::Rat;
use crate::trtlep::{section_conditions, FrobTypeStructure, MixedTrTLEPData};

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub seed: u64,
    pub data: MixedTrTLEPData,
    pub zeta: Vec<Rat>,
    /// `d` with `V zeta = (d / 2) zeta`.
    pub charge: Rat,
}

/// Multiplication by `x^i` on `A`.
fn mult(r: usize, i: usize) -> QMat {
    let mut m = QMat::zeros(r, r);
    for j in 0..r {
        if i + j < r {
            m[(i + j, j)] = Rat::one();
        }
    }
    m
}

fn small(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn unimodular(rng: &mut ChaCha8Rng, r: usize) -> QMat {
    let mut lo = QMat::identity(r);
    let mut up = QMat::identity(r);
    for i in 0..r {
        for j in 0..i {
            lo[(i, j)] = Rat::int(rng.gen_range(-2..=2));
            up[(j, i)] = Rat::int(rng.gen_range(-2..=2));
        }
    }
    &lo * &up
}

fn monomials(m: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out.into_iter().flat_map(|e| (0..=max).map(move |k| [e.clone(), vec![k]].concat())).collect();
    }
    out.retain(|e| e.iter().sum::<u32>() <= max);
    out
}

/// A jet whose `t`-coefficients are elements of `A`, as a matrix.
fn algebra_jet(ring: &Ring, r: usize, coeffs: &BTreeMap<Vec<u32>, Vec<Rat>>) -> JMat {
    let mut out = JMat::zeros(ring, r, r);
    for (e, a) in coeffs {
        if e.iter().sum::<u32>() > ring.order() {
            continue;
        }
        let mono = Jet::from_terms(ring, &[(e.clone(), Rat::one())]);
        let mut m = QMat::zeros(r, r);
        for (i, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            m.add_scaled(c, &mult(r, i));
        }
        out = out.add(&JMat::constant(ring, m).scale_jet(&mono));
    }
    out
}

/// One instance with rank in `2..=5` and at most two parameters; `None` when
/// the drawn section fails (GC) or (IC).
pub fn try_instance(seed: u64, order: u32) -> Option<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.gen_range(2..=5usize);
    let m = rng.gen_range(0..=2usize).min(r - 1);
    let ring = JetRing::base(m, order).ok()?;
    // Phi as a map from t-exponents to elements of A
    let mut phi: BTreeMap<Vec<u32>, Vec<Rat>> = BTreeMap::new();
    for e in monomials(m, order + 1) {
        let deg: u32 = e.iter().sum();
        if deg == 0 {
            continue;
        }
        let a: Vec<Rat> = (0..r).map(|_| if rng.gen_bool(0.4) { small(&mut rng) } else { Rat::zero() }).collect();
        phi.insert(e, a);
    }
    for i in 0..m {
        let mut e = vec![0; m];
        e[i] = 1;
        let mut a = vec![Rat::zero(); r];
        a[(i + 1).min(r - 1)] = Rat::one();
        if rng.gen_bool(0.5) {
            a[0] = small(&mut rng);
        }
        phi.insert(e, a);
    }
    let c: Vec<JMat> = (0..m)
        .map(|i| {
            let d: BTreeMap<Vec<u32>, Vec<Rat>> = phi
                .iter()
                .filter(|(e, _)| e[i] > 0)
                .map(|(e, a)| {
                    let mut e2 = e.clone();
                    e2[i] -= 1;
                    let k = Rat::int(e[i] as i64);
                    (e2, a.iter().map(|x| x * &k).collect())
                })
                .collect();
            algebra_jet(&ring, r, &d)
        })
        .collect();
    let mut u_coeffs: BTreeMap<Vec<u32>, Vec<Rat>> = phi
        .iter()
        .map(|(e, a)| (e.clone(), a.iter().enumerate().map(|(k, x)| x * &Rat::int(k as i64 - 1)).collect()))
        .collect();
    let u0: Vec<Rat> = (0..r).map(|k| if k == 0 { Rat::zero() } else { small(&mut rng) }).collect();
    u_coeffs.insert(vec![0; m], u0);
    let u = algebra_jet(&ring, r, &u_coeffs);
    let weight = rng.gen_range(-2..=3i64);
    let c0 = Rat::new(weight + r as i64 - 1, 2);
    let v = QMat::diag(&(0..r).map(|k| &c0 - &Rat::int(k as i64)).collect::<Vec<_>>());
    let mut g = QMat::zeros(r, r);
    for i in 0..r {
        g[(i, r - 1 - i)] = Rat::one();
    }
    let p = unimodular(&mut rng, r);
    let pinv = p.inverse().expect("unimodular");
    let conj = |x: &JMat| x.const_mul(&pinv).mul_const(&p);
    let frob = FrobTypeStructure::flat(&ring, c.iter().map(conj).collect(), conj(&u), conj(&JMat::constant(&ring, v)));
    let g = &(&p.transpose() * &g) * &p;
    let mut e0 = vec![Rat::zero(); r];
    e0[0] = Rat::one();
    let zeta = pinv.mul_vec(&e0);
    let flags = section_conditions(&frob, &zeta, &Rat::zero()).ok()?;
    if !flags.gc || !flags.ic {
        return None;
    }
    let data = MixedTrTLEPData { frob, weight: Flag::pure(r, weight as i32), pairings: BTreeMap::from([(weight as i32, g)]) };
    Some(RandomInstance { seed, data, zeta, charge: &c0 * &Rat::int(2) })
}

/// The first `count` seeds from `start` that give valid instances.
pub fn random_suite(start: u64, count: usize, order: u32) -> Vec<RandomInstance> {
    (start..).filter_map(|s| try_instance(s, order)).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trtlep::check_mixed_trtlep;

    #[test]
    fn instances_are_valid() {
        for inst in random_suite(0, 12, 3) {
            let cert = check_mixed_trtlep(&inst.data);
            assert!(cert.passed(), "seed {}: {:?}", inst.seed, cert.failures());
            let flags = section_conditions(&inst.data.frob, &inst.zeta, &inst.charge).unwrap();
            assert!(flags.ec && flags.gc && flags.ic);
        }
    }
}
