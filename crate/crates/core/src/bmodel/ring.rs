use std::collections::HashMap;

use serde::Serialize;

use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::jet::{solve_linear, JMat, JetRing, Ring};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::polytope::LatticePolytope;
use crate::rat::Rat;

/// One graded slice `S^k` with the top parts of the ideal and the chosen basis of `R^k`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub k: u32,
    pub points: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// Columns `t_0 theta_i f * s` for `s` in `S^{k-1}` and `0 <= i <= d`, ordered by `(s, i)`.
    pub ideal: QMat,
    /// Indices into `points` of the basis monomials of `R^k`.
    pub basis: Vec<usize>,
    /// Coordinates in the basis of the graded class of a vector of `S^k`.
    pub reducer: QMat,
}

impl Slice {
    pub fn point_index(&self, m: &[i64]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Graded Jacobian ring of a Laurent polynomial and its monomial basis.
#[derive(Clone, Debug)]
pub struct JacobianRingData {
    pub delta: LatticePolytope,
    pub f: LaurentPoly,
    /// Slices for `0 <= k <= d + 2`.
    pub slices: Vec<Slice>,
    /// Basis of `R` as `(degree, exponent)`, ordered by degree.
    pub basis: Vec<(u32, Vec<i64>)>,
    offsets: Vec<usize>,
}

impl JacobianRingData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d(&self) -> usize {
        self.delta.dim()
    }

    /// Dimensions of `R^k` for `0 <= k <= d + 1`.
    pub fn graded_dims(&self) -> Vec<usize> {
        self.slices[..=self.d() + 1].iter().map(|s| s.basis.len()).collect()
    }

    pub fn offset(&self, k: u32) -> usize {
        self.offsets[k as usize]
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.basis[i].0
    }

    /// Matrix of the top parts `t_0 theta_i g * s` in the layout of `Slice::ideal`.
    pub fn ideal_matrix(&self, g: &LaurentPoly, k: u32) -> QMat {
        ideal_matrix(&self.slices, g, k, self.d())
    }

    /// Graded class in `R` of a degree-`k` vector of `S^k`.
    pub fn graded_class(&self, k: u32, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        if (k as usize) < self.slices.len() {
            let c = self.slices[k as usize].reducer.mul_vec(v);
            let off = self.offset(k);
            for (j, x) in c.into_iter().enumerate() {
                out[off + j] = x;
            }
        }
        out
    }

    /// Matrix of multiplication by the cone monomial `t_0 t^p` on graded `R`.
    pub fn multiplication(&self, p: &[i64]) -> QMat {
        let n = self.dim();
        let mut m = QMat::zeros(n, n);
        for (c, (k, e)) in self.basis.iter().enumerate() {
            let k1 = k + 1;
            if k1 as usize >= self.slices.len() {
                continue;
            }
            let s = &self.slices[k1 as usize];
            let prod: Vec<i64> = e.iter().zip(p).map(|(a, b)| a + b).collect();
            let mut v = vec![Rat::zero(); s.points.len()];
            v[s.point_index(&prod).expect("product lies in the dilate")] = Rat::one();
            for (r, x) in self.graded_class(k1, &v).into_iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        m
    }

    /// Higgs matrices: multiplication by each basis element of `R^1`.
    pub fn higgs_matrices(&self) -> Vec<QMat> {
        self.basis.iter().filter(|(k, _)| *k == 1).map(|(_, p)| self.multiplication(p)).collect()
    }

    /// Reduces an element of `S` (one column vector per degree) to the fixed basis
    /// of the filtered ring `S / sum L_f^i S`, over a jet ring of deformation parameters.
    ///
    /// `ideal[k]` is the jet matrix of top parts in degree `k`.
    pub fn filtered_reduce(&self, ideal: &[JMat], v: &[JMat]) -> Result<JMat> {
        let ring = v[0].ring().clone();
        let d = self.d();
        let mut v: Vec<JMat> = v.to_vec();
        let mut out: Vec<JMat> = self.slices.iter().map(|s| JMat::zeros(&ring, s.basis.len(), 1)).collect();
        for k in (1..v.len()).rev() {
            let s = &self.slices[k];
            let b = JMat::constant(&ring, basis_columns(s));
            let sys = JMat::hstack(&[b, ideal[k].clone()]);
            let sol = solve_linear(&sys, &v[k])?.x;
            let r = s.basis.len();
            let rows: Vec<usize> = (0..r).collect();
            out[k] = sol.select(&rows, &[0]);
            let hrows: Vec<usize> = (r..sol.rows()).collect();
            let h = sol.select(&hrows, &[0]);
            let low = JMat::constant(&ring, lowering(&self.slices[k - 1], k as u32, d));
            v[k - 1] = v[k - 1].sub(&low.mul(&h));
        }
        out[0] = v[0].clone();
        Ok(JMat::vstack(&out))
    }

    /// Filtered reduction at the base point of a single cone monomial.
    pub fn reduce_monomial(&self, k: u32, m: &[i64]) -> Result<Vec<Rat>> {
        let ring = JetRing::base(0, 0)?;
        let ideal: Vec<JMat> = self.slices.iter().map(|s| JMat::constant(&ring, s.ideal.clone())).collect();
        let v = unit_element(&ring, &self.slices[..=k as usize], k, m);
        Ok(self.filtered_reduce(&ideal, &v)?.at0().col(0))
    }
}

fn basis_columns(s: &Slice) -> QMat {
    let mut b = QMat::zeros(s.points.len(), s.basis.len());
    for (j, &p) in s.basis.iter().enumerate() {
        b[(p, j)] = Rat::one();
    }
    b
}

/// Lower parts of `L_f^i(s)` for `s` in `S^{k-1}`: `(k-1) s` for `i = 0`, `m_i s` otherwise.
fn lowering(prev: &Slice, k: u32, d: usize) -> QMat {
    let n = prev.points.len();
    let mut m = QMat::zeros(n, n * (d + 1));
    for (si, p) in prev.points.iter().enumerate() {
        for i in 0..=d {
            let w = if i == 0 { k as i64 - 1 } else { p[i - 1] };
            m[(si, si * (d + 1) + i)] = Rat::int(w);
        }
    }
    m
}

/// The cone monomial `t_0^k t^m` as per-degree column vectors over `ring`.
pub(crate) fn unit_element(ring: &Ring, slices: &[Slice], k: u32, m: &[i64]) -> Vec<JMat> {
    slices
        .iter()
        .map(|s| {
            let mut col = QMat::zeros(s.points.len(), 1);
            if s.k == k {
                col[(s.point_index(m).expect("monomial in the cone"), 0)] = Rat::one();
            }
            JMat::constant(ring, col)
        })
        .collect()
}

fn ideal_matrix(slices: &[Slice], g: &LaurentPoly, k: u32, d: usize) -> QMat {
    let cur = &slices[k as usize];
    if k == 0 {
        return QMat::zeros(cur.points.len(), 0);
    }
    let prev = &slices[k as usize - 1];
    let mut m = QMat::zeros(cur.points.len(), prev.points.len() * (d + 1));
    for (si, p) in prev.points.iter().enumerate() {
        for i in 0..=d {
            for (n, a) in g.theta_or_self(i).terms() {
                let e: Vec<i64> = p.iter().zip(n).map(|(x, y)| x + y).collect();
                let r = cur.point_index(&e).expect("support inside the polytope");
                m[(r, si * (d + 1) + i)] += a;
            }
        }
    }
    m
}

/// Builds the graded Jacobian ring of `f` for `0 <= k <= d + 2`.
pub fn jacobian_ring(f: &LaurentPoly, delta: &LatticePolytope) -> Result<JacobianRingData> {
    if f.dim() != delta.dim() {
        return Err(Error::DimensionMismatch("polynomial and polytope dimensions differ".into()));
    }
    match f.newton_polytope() {
        Ok(p) if p.vertices() == delta.vertices() => {}
        _ => return Err(Error::NewtonPolytopeMismatch),
    }
    let d = delta.dim();
    let mut slices: Vec<Slice> = Vec::new();
    for k in 0..=(d as u32 + 2) {
        let points = delta.lattice_points(k).points;
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        slices.push(Slice { k, points, index, ideal: QMat::zeros(0, 0), basis: vec![], reducer: QMat::zeros(0, 0) });
        let ideal = ideal_matrix(&slices, f, k, d);
        let s = slices.last_mut().unwrap();
        let n = s.points.len();
        let mut span = QSubspace::from_cols(&ideal);
        let mut basis = Vec::new();
        for p in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[p] = Rat::one();
            if !span.contains(&e) {
                span = span.sum(&QSubspace::span(n, &[e]))?;
                basis.push(p);
            }
        }
        s.ideal = ideal;
        s.basis = basis;
        let proj = QSubspace::from_cols(&s.ideal).quotient().projection;
        let pb = &proj * &basis_columns(s);
        s.reducer = &pb.inverse().expect("basis complements the ideal") * &proj;
    }
    let mut basis = Vec::new();
    let mut offsets = Vec::new();
    for s in &slices {
        offsets.push(basis.len());
        basis.extend(s.basis.iter().map(|&p| (s.k, s.points[p].clone())));
    }
    Ok(JacobianRingData { delta: delta.clone(), f: f.clone(), slices, basis, offsets })
}

/// Images of the index sets `I(l)` in `R` and the re-indexed weight filtration.
#[derive(Clone, Debug, Serialize)]
pub struct WeightData {
    /// `(l, image of I(l))` for `0 <= l <= d + 1`.
    pub raw: Vec<(usize, QSubspace)>,
    pub flag: Flag,
    /// Degree `d + 2` monomials add nothing to any image.
    pub stable: bool,
}

/// Weight filtration on `R` from the images of the face index sets.
pub fn weight_filtration_on_r(jr: &JacobianRingData) -> Result<WeightData> {
    let d = jr.d();
    let n = jr.dim();
    let mut raw = Vec::new();
    let mut stable = true;
    for l in 0..=d + 1 {
        let mut vecs = Vec::new();
        let mut extra = Vec::new();
        for s in &jr.slices {
            for p in &s.points {
                if jr.delta.in_weight_index(l, s.k as i64, p) {
                    let v = jr.reduce_monomial(s.k, p)?;
                    if s.k as usize <= d + 1 {
                        vecs.push(v);
                    } else {
                        extra.push(v);
                    }
                }
            }
        }
        let sub = QSubspace::span(n, &vecs);
        stable &= extra.iter().all(|v| sub.contains(v));
        raw.push((l, sub));
    }
    let d = d as i32;
    let mut steps = Vec::new();
    for i in 1..d {
        steps.push((d - 2 + i, raw[i as usize].1.clone()));
    }
    steps.push((2 * d - 2, raw[d as usize + 1].1.clone()));
    steps.push((2 * d, QSubspace::full(n)));
    steps.dedup_by_key(|(k, _)| *k);
    Ok(WeightData { raw, flag: Flag::new(n, steps)?, stable })
}

/// Report of the H^2-generation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Certificate {
    pub holds: bool,
    pub graded_dims: Vec<usize>,
    /// Dimension of the degree-one part of the ideal, expected `d + 1`.
    pub ideal_degree_one_dim: usize,
    pub failing_degree: Option<u32>,
}

/// Checks `dim R^0 = 1` and that `R^1 * R^k` spans `R^{k+1}` for `k < d`.
pub fn check_h2_generation(jr: &JacobianRingData) -> H2Certificate {
    let dims = jr.graded_dims();
    let higgs = jr.higgs_matrices();
    let mut failing = None;
    if dims[0] != 1 {
        failing = Some(0);
    }
    for k in 0..jr.d() as u32 {
        if failing.is_some() {
            break;
        }
        let lo = jr.offset(k);
        let hi = jr.offset(k + 1);
        let mut vecs = Vec::new();
        for h in &higgs {
            for c in lo..hi {
                vecs.push(h.col(c));
            }
        }
        let got = QSubspace::span(jr.dim(), &vecs).dim();
        if got != dims[k as usize + 1] {
            failing = Some(k + 1);
        }
    }
    H2Certificate {
        holds: failing.is_none(),
        graded_dims: dims,
        ideal_degree_one_dim: jr.slices[1].ideal.rank(),
        failing_degree: failing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::tests::p2_f;

    fn p2_ring() -> JacobianRingData {
        let f = p2_f();
        jacobian_ring(&f, &f.newton_polytope().unwrap()).unwrap()
    }

    #[test]
    fn p2_dims() {
        let jr = p2_ring();
        assert_eq!(jr.graded_dims(), vec![1, 1, 1, 0]);
        assert_eq!(jr.slices[4].basis.len(), 0);
    }

    #[test]
    fn mismatch_detected() {
        let f = LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let delta = p2_f().newton_polytope().unwrap();
        assert_eq!(jacobian_ring(&f, &delta).unwrap_err(), Error::NewtonPolytopeMismatch);
    }

    #[test]
    fn higgs_properties() {
        let jr = p2_ring();
        let h = jr.higgs_matrices();
        assert_eq!(h.len(), 1);
        let v = &h[0];
        let e0 = vec![Rat::one(), Rat::zero(), Rat::zero()];
        assert!(!v.mul_vec(&v.mul_vec(&e0))[2].is_zero());
        assert!(v.pow(3).is_zero());
        let t0 = jr.multiplication(&[0, 0]);
        assert_eq!(t0.rank(), 2);
    }

    #[test]
    fn p2_weights() {
        let jr = p2_ring();
        let w = weight_filtration_on_r(&jr).unwrap();
        assert!(w.stable);
        assert_eq!(w.flag.at(1).dim(), 2);
        assert_eq!(w.flag.at(3).dim(), 2);
        assert_eq!(w.flag.at(4).dim(), 3);
        assert!(w.flag.at(0).is_zero());
        // the unit class sits only in the top weight
        assert!(!w.flag.at(3).contains(&[Rat::one(), Rat::zero(), Rat::zero()]));
        for h in jr.higgs_matrices() {
            assert!(w.flag.is_invariant_under(&h));
        }
    }

    #[test]
    fn h2_generation() {
        let c = check_h2_generation(&p2_ring());
        assert!(c.holds);
        assert_eq!(c.ideal_degree_one_dim, 3);
    }
}
