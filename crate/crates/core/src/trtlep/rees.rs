use std::collections::BTreeMap;

use super::{Certificate, FrobTypeStructure, GradedPairingSet, MixedTrTLEPData};
use crate::error::{Error, Result};
use crate::jet::{flat_gauge, jet_kernel, JMat};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::rat::Rat;

/// Filtered flat bundle in flat coordinates.
///
/// `hodge` lists `(p, columns spanning F^p)` as jets, decreasing in `p`;
/// `opposite` lists the constant `(l, U_l)`, increasing in `l`. The
/// polarization `S_k` lives on `Gr^W_k` in the coordinates of [`Flag::graded`].
#[derive(Clone, Debug)]
pub struct ReesInput {
    pub weight: Flag,
    pub hodge: Vec<(i32, JMat)>,
    pub opposite: Vec<(i32, QSubspace)>,
    pub polarization: BTreeMap<i32, QMat>,
}

/// Result of [`rees_construct`]: the structure, the adapted frame `Phi` in the
/// input coordinates, and the Hodge level of each frame vector.
#[derive(Clone, Debug)]
pub struct ReesOutput {
    pub data: MixedTrTLEPData,
    pub frame: JMat,
    pub levels: Vec<i32>,
}

#[derive(Clone, Copy, Debug)]
struct LevelRange {
    lo: i32,
    hi: i32,
}

impl ReesInput {
    fn n(&self) -> usize {
        self.weight.ambient()
    }

    fn levels(&self) -> LevelRange {
        let idx = self.hodge.iter().map(|(p, _)| *p).chain(self.opposite.iter().map(|(l, _)| *l));
        let (lo, hi) = idx.fold((i32::MAX, i32::MIN), |(a, b), k| (a.min(k), b.max(k)));
        LevelRange { lo, hi }
    }

    fn hodge_at(&self, p: i32) -> Option<&JMat> {
        self.hodge.iter().filter(|(q, _)| *q >= p).min_by_key(|(q, _)| *q).map(|(_, m)| m)
    }

    fn hodge_space(&self, p: i32) -> QSubspace {
        match self.hodge_at(p) {
            Some(m) if m.cols() > 0 => QSubspace::from_cols(&m.at0()),
            _ => QSubspace::zero(self.n()),
        }
    }

    fn opposite_at(&self, l: i32) -> QSubspace {
        self.opposite
            .iter()
            .filter(|(k, _)| *k <= l)
            .max_by_key(|(k, _)| *k)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| QSubspace::zero(self.n()))
    }
}

fn graded_image(weight: &Flag, k: i32, x: &QSubspace) -> QSubspace {
    let qt = weight.graded(k);
    let inter = x.intersection(&weight.at(k)).expect("same ambient");
    let vecs: Vec<Vec<Rat>> = (0..inter.dim()).map(|i| qt.projection.mul_vec(inter.basis().row(i))).collect();
    QSubspace::span(qt.dim(), &vecs)
}

fn orthogonal(s: &QMat, a: &QSubspace, b: &QSubspace) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    (&(a.basis() * s) * &b.basis().transpose()).is_zero()
}

/// Oppositeness `Gr_k F^l + Gr_k U_{l-1} = Gr_k` (direct), the orthogonality
/// relations of both filtrations under `S_k`, and nondegeneracy of `S_k`,
/// decided at the base point.
pub fn check_opposite(input: &ReesInput) -> Certificate {
    let mut cert = Certificate::new("opposite");
    let w = &input.weight;
    let LevelRange { lo, hi } = input.levels();
    for k in w.weights() {
        let gd = w.graded_dim(k);
        for l in lo..=hi + 1 {
            let f = graded_image(w, k, &input.hodge_space(l));
            let u = graded_image(w, k, &input.opposite_at(l - 1));
            let sum = f.sum(&u).expect("same ambient");
            cert.push_bool(format!("opp(k={k},l={l})"), f.dim() + u.dim() == gd && sum.dim() == gd);
        }
        let Some(s) = input.polarization.get(&k) else {
            cert.push_bool(format!("S{k}:present"), false);
            continue;
        };
        if s.rows() != gd || s.cols() != gd {
            cert.push_bool(format!("S{k}:size"), false);
            continue;
        }
        cert.push_bool(format!("S{k}:nondegenerate"), !s.det().is_zero());
        for l in lo..=hi + 1 {
            let ul = graded_image(w, k, &input.opposite_at(l));
            let uo = graded_image(w, k, &input.opposite_at(k - l - 1));
            cert.push_bool(format!("S{k}:U{l}-orth"), orthogonal(s, &ul, &uo));
            let fl = graded_image(w, k, &input.hodge_space(l));
            let fo = graded_image(w, k, &input.hodge_space(k - l + 1));
            cert.push_bool(format!("S{k}:F{l}-orth"), orthogonal(s, &fl, &fo));
        }
    }
    cert
}

/// Builds the mixed trTLEP-structure of the Rees module of `F` with the
/// splitting given by `U`, in its flat frame.
///
/// The connection is differentiated once, so the output is exact to one order
/// less than the input jets.
pub fn rees_construct(input: &ReesInput) -> Result<ReesOutput> {
    let n = input.n();
    let LevelRange { lo, hi } = input.levels();
    let mut pieces = Vec::new();
    let mut levels = Vec::new();
    for l in (lo..=hi).rev() {
        let Some(b) = input.hodge_at(l).filter(|b| b.cols() > 0) else { continue };
        let u = input.opposite_at(l);
        let ann = QSubspace::kernel_of(u.basis()).basis().clone();
        let nb = b.const_mul(&ann);
        let k = jet_kernel(&nb).map_err(|e| Error::SplittingFails(format!("level {l}: {e}")))?;
        if k.cols() == 0 {
            continue;
        }
        levels.extend(std::iter::repeat_n(l, k.cols()));
        pieces.push(b.mul(&k));
    }
    if levels.len() != n {
        return Err(Error::SplittingFails(format!("pieces have total rank {} in dimension {n}", levels.len())));
    }
    let psi = JMat::hstack(&pieces);
    let ring = psi.ring().clone();
    let psi_inv = psi.inverse().ok_or_else(|| Error::SplittingFails("pieces are dependent at the base point".into()))?;
    let mut a = Vec::new();
    let mut c = Vec::new();
    for v in 0..ring.nvars() {
        let theta = psi_inv.mul(&psi.deriv(v));
        let (same, down) = split_blocks(&theta, &levels, v)?;
        a.push(same);
        c.push(down);
    }
    let gauge = if a.is_empty() { JMat::identity(&ring, n) } else { flat_gauge(&a)? };
    let ginv = gauge.inverse().expect("gauge is invertible");
    let c: Vec<JMat> = c.iter().map(|ci| ginv.mul(ci).mul(&gauge)).collect();
    let frame = psi.mul(&gauge);
    let phi0 = frame.at0();
    let phi0_inv = phi0.inverse().expect("frame is invertible");
    let wf = input.weight.transform(&phi0_inv);
    let vmat = QMat::diag(&levels.iter().map(|&l| Rat::int(l as i64)).collect::<Vec<_>>());
    let lam = QMat::diag(&levels.iter().map(|&l| Rat::int(if l.rem_euclid(2) == 0 { 1 } else { -1 })).collect::<Vec<_>>());
    if !wf.is_invariant_under(&lam) {
        return Err(Error::SplittingFails("the weight filtration is not split by the Hodge levels".into()));
    }
    for (i, ci) in c.iter().enumerate() {
        if !ci.all_terms(|m| wf.is_invariant_under(m)) {
            return Err(Error::SplittingFails(format!("C{} does not preserve the weight filtration", i + 1)));
        }
    }
    let mut pairings = GradedPairingSet::new();
    for k in input.weight.weights() {
        let s = input
            .polarization
            .get(&k)
            .ok_or_else(|| Error::DimensionMismatch(format!("no polarization on Gr_{k}")))?;
        let qo = input.weight.graded(k);
        let qf = wf.graded(k);
        let m = &(&qo.projection * &phi0) * &qf.section;
        let ml = &(&(&qo.projection * &phi0) * &lam) * &qf.section;
        pairings.insert(k, &(&m.transpose() * s) * &ml);
    }
    let u = JMat::zeros(&ring, n, n);
    let v = JMat::constant(&ring, vmat);
    let frob = FrobTypeStructure::flat(&ring, c, u, v);
    Ok(ReesOutput { data: MixedTrTLEPData { frob, weight: wf, pairings }, frame, levels })
}

fn split_blocks(theta: &JMat, levels: &[i32], v: usize) -> Result<(JMat, JMat)> {
    let n = levels.len();
    let same = theta.map_linear(n, n, |m| mask(m, |r, c| levels[r] == levels[c]));
    let down = theta.map_linear(n, n, |m| mask(m, |r, c| levels[r] + 1 == levels[c]));
    let rest = theta.sub(&same).sub(&down);
    if !rest.is_zero() {
        return Err(Error::TransversalityFails(format!("derivative along variable {} leaves F^(l-1)", v + 1)));
    }
    Ok((same, down))
}

fn mask(m: &QMat, keep: impl Fn(usize, usize) -> bool) -> QMat {
    let mut out = QMat::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if keep(r, c) {
                out[(r, c)] = m[(r, c)].clone();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{JetRing, Ring};
    use crate::trtlep::{check_mixed_trtlep, section_conditions};

    fn rank_one(ring: &Ring, w: i32) -> ReesInput {
        ReesInput {
            weight: Flag::pure(1, 2 * w),
            hodge: vec![(w, JMat::identity(ring, 1))],
            opposite: vec![(w, QSubspace::full(1))],
            polarization: BTreeMap::from([(2 * w, QMat::identity(1))]),
        }
    }

    #[test]
    fn rank_one_pure() {
        let ring = JetRing::base(0, 2).unwrap();
        let input = rank_one(&ring, 1);
        assert!(check_opposite(&input).passed());
        let out = rees_construct(&input).unwrap();
        assert_eq!(out.data.frob.v.at0(), QMat::identity(1));
        assert_eq!(out.data.weight.weights(), vec![2]);
        assert!(check_mixed_trtlep(&out.data).passed());
        let flags = section_conditions(&out.data.frob, &[Rat::one()], &Rat::int(2)).unwrap();
        assert!(flags.ec && flags.gc);
    }

    #[test]
    fn weight_one_antisymmetric_polarization() {
        let ring = JetRing::base(0, 1).unwrap();
        let f1 = JMat::constant(&ring, QMat::from_i64(&[&[1], &[0]]));
        let input = ReesInput {
            weight: Flag::pure(2, 1),
            hodge: vec![(0, JMat::identity(&ring, 2)), (1, f1)],
            opposite: vec![(0, QSubspace::coordinate(2, &[1])), (1, QSubspace::full(2))],
            polarization: BTreeMap::from([(1, QMat::from_i64(&[&[0, 1], &[-1, 0]]))]),
        };
        assert!(check_opposite(&input).passed());
        let out = rees_construct(&input).unwrap();
        assert_eq!(out.levels, vec![1, 0]);
        assert_eq!(out.data.pairings[&1], QMat::from_i64(&[&[0, 1], &[1, 0]]));
        assert!(check_mixed_trtlep(&out.data).passed());
        let mut bad = input.clone();
        bad.opposite[0].1 = QSubspace::coordinate(2, &[0]);
        assert!(!check_opposite(&bad).passed());
        assert!(matches!(rees_construct(&bad), Err(Error::SplittingFails(_))));
    }

    // rank 2, W_0 = <e1>, W_2 = all, F^1 spanned by e2 + t e1, U_0 = <e1>
    fn split_family(ring: &Ring) -> ReesInput {
        let f1 = JMat::constant(ring, QMat::from_i64(&[&[0], &[1]])).add(&JMat::linear(ring, 0, QMat::from_i64(&[&[1], &[0]])));
        ReesInput {
            weight: Flag::new(2, vec![(0, QSubspace::coordinate(2, &[0])), (2, QSubspace::full(2))]).unwrap(),
            hodge: vec![(0, JMat::identity(ring, 2)), (1, f1)],
            opposite: vec![(0, QSubspace::coordinate(2, &[0])), (1, QSubspace::full(2))],
            polarization: BTreeMap::from([(0, QMat::identity(1)), (2, QMat::identity(1))]),
        }
    }

    #[test]
    fn rank_two_mixed_family() {
        let ring = JetRing::base(1, 3).unwrap();
        let input = split_family(&ring);
        assert!(check_opposite(&input).passed());
        let out = rees_construct(&input).unwrap();
        assert_eq!(out.levels, vec![1, 0]);
        assert_eq!(out.data.frob.v.at0(), QMat::diag(&[Rat::one(), Rat::zero()]));
        // d/dt (e2 + t e1) = e1 lands one level down
        assert_eq!(out.data.frob.c[0].at0(), QMat::from_i64(&[&[0, 0], &[1, 0]]));
        assert_eq!(out.data.weight.weights(), vec![0, 2]);
        let cert = check_mixed_trtlep(&out.data);
        assert!(cert.passed(), "{:?}", cert.failures());
    }

    #[test]
    fn transversality_failure() {
        let ring = JetRing::base(1, 3).unwrap();
        let t2 = JMat::from_terms(&ring, 3, 1, vec![(ring.index_of(&[2]).unwrap(), QMat::from_i64(&[&[1], &[0], &[0]]))]);
        let f2 = JMat::constant(&ring, QMat::from_i64(&[&[0], &[0], &[1]])).add(&t2);
        let e2 = JMat::constant(&ring, QMat::from_i64(&[&[0], &[1], &[0]]));
        let input = ReesInput {
            weight: Flag::pure(3, 2),
            hodge: vec![(0, JMat::identity(&ring, 3)), (1, JMat::hstack(&[f2.clone(), e2])), (2, f2)],
            opposite: vec![(0, QSubspace::coordinate(3, &[0])), (1, QSubspace::coordinate(3, &[0, 1])), (2, QSubspace::full(3))],
            polarization: BTreeMap::from([(2, QMat::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]))]),
        };
        assert!(matches!(rees_construct(&input), Err(Error::TransversalityFails(_))));
    }
}
