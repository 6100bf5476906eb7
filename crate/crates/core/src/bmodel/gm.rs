use super::regular::is_delta_regular;
use super::ring::{unit_element, JacobianRingData};
use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::jet::{curvature, flat_gauge, JMat, JetRing, Ring};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::rat::Rat;

/// Gauss-Manin connection of the family `f_0 + sum_j a_j t^{m_j}` on the fixed basis of `R`.
#[derive(Clone, Debug)]
pub struct GMJetData {
    pub directions: Vec<Vec<i64>>,
    pub ring: Ring,
    /// `matrices[j]` is the connection matrix of `d/da_j`: `nabla e_c = sum_r e_r A_rc`.
    pub matrices: Vec<JMat>,
}

/// Computes the connection matrices to total order `order` in the parameters `a`.
pub fn gm_connection(jr: &JacobianRingData, directions: &[Vec<i64>], order: u32) -> Result<GMJetData> {
    if jr.d() <= 2 && !is_delta_regular(&jr.f, &jr.delta)? {
        return Err(Error::NotRegular);
    }
    for m in directions {
        if m.len() != jr.d() || !jr.delta.contains(m) {
            return Err(Error::DimensionMismatch(format!("direction {m:?} is not a lattice point of the polytope")));
        }
    }
    let ring = JetRing::base(directions.len(), order)?;
    let ideal: Vec<JMat> = (0..jr.slices.len() as u32)
        .map(|k| {
            let mut j = JMat::constant(&ring, jr.ideal_matrix(&jr.f, k));
            for (v, m) in directions.iter().enumerate() {
                let mono = LaurentPoly::new(jr.d(), [(m.clone(), Rat::one())]).expect("same dimension");
                j = j.add(&JMat::linear(&ring, v, jr.ideal_matrix(&mono, k)));
            }
            j
        })
        .collect();
    let n = jr.dim();
    let mut matrices = Vec::new();
    for m in directions {
        let mut cols = Vec::with_capacity(n);
        for (k, e) in &jr.basis {
            let p: Vec<i64> = e.iter().zip(m).map(|(a, b)| a + b).collect();
            let v = unit_element(&ring, &jr.slices[..=(k + 1) as usize], k + 1, &p);
            cols.push(jr.filtered_reduce(&ideal, &v)?);
        }
        matrices.push(JMat::hstack(&cols));
    }
    for ((i, j), f) in curvature(&matrices) {
        if !f.is_zero() {
            return Err(Error::NotFlat(format!("Gauss-Manin curvature ({i},{j}) is nonzero")));
        }
    }
    Ok(GMJetData { directions: directions.to_vec(), ring, matrices })
}

/// Hodge-theoretic input for the Rees construction in flat coordinates.
#[derive(Clone, Debug)]
pub struct BHodgeData {
    /// `(p, basis of F^p)` with jet columns, for `0 <= p <= d`.
    pub hodge: Vec<(i32, JMat)>,
    pub weight: Flag,
    /// `(l, U_l)` for `0 <= l <= d`.
    pub opposite: Vec<(i32, QSubspace)>,
    pub gauge: JMat,
}

/// Hodge filtration `F^p = span{deg <= d - p}` transported to flat coordinates,
/// the opposite grading `U_l = span{deg >= d - l}`, and the weight flag.
pub fn hodge_data(jr: &JacobianRingData, gm: &GMJetData, weight: &Flag) -> Result<BHodgeData> {
    for a in &gm.matrices {
        let ok = a.nonzero_terms().all(|(_, m)| weight.is_invariant_under(m));
        if !ok {
            return Err(Error::FlatnessViolation("weight filtration is not preserved by the connection".into()));
        }
    }
    let gauge = flat_gauge(&gm.matrices)?;
    let ginv = gauge.inverse().expect("gauge is invertible");
    let d = jr.d() as i32;
    let n = jr.dim();
    let mut hodge = Vec::new();
    let mut opposite = Vec::new();
    for p in 0..=d {
        let idx: Vec<usize> = (0..n).filter(|&i| jr.degree_of(i) as i32 <= d - p).collect();
        let mut cols = QMat::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            cols[(i, j)] = Rat::one();
        }
        hodge.push((p, ginv.mul_const(&cols)));
        let uidx: Vec<usize> = (0..n).filter(|&i| jr.degree_of(i) as i32 >= d - p).collect();
        opposite.push((p, QSubspace::coordinate(n, &uidx)));
    }
    Ok(BHodgeData { hodge, weight: weight.clone(), opposite, gauge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::ring::{jacobian_ring, weight_filtration_on_r};
    use crate::bmodel::tests::p2_f;

    fn p2_ring() -> JacobianRingData {
        let f = p2_f();
        jacobian_ring(&f, &f.newton_polytope().unwrap()).unwrap()
    }

    #[test]
    fn constant_direction() {
        let jr = p2_ring();
        let gm = gm_connection(&jr, &[vec![0, 0]], 3).unwrap();
        let a0 = gm.matrices[0].at0();
        // the class of t_0 in R^1
        let expect = jr.reduce_monomial(1, &[0, 0]).unwrap();
        assert_eq!(a0.col(0), expect);
    }

    #[test]
    fn graded_part_is_higgs() {
        let jr = p2_ring();
        let gm = gm_connection(&jr, &[vec![0, 0], vec![1, 0]], 2).unwrap();
        for (j, m) in gm.directions.iter().enumerate() {
            let a0 = gm.matrices[j].at0();
            let h = jr.multiplication(m);
            for r in 0..jr.dim() {
                for c in 0..jr.dim() {
                    if jr.degree_of(r) == jr.degree_of(c) + 1 {
                        assert_eq!(a0[(r, c)], h[(r, c)]);
                    }
                }
            }
        }
    }

    #[test]
    fn first_order_jet_matches_perturbed_reduction() {
        // d/da of the reduction of t_0 * e at a = 0 against the reduction for f + epsilon t^m
        let jr = p2_ring();
        let gm = gm_connection(&jr, &[vec![0, 0]], 1).unwrap();
        let lin = gm.matrices[0].coeff(1);
        let eps = Rat::new(1, 1000);
        let f1 = jr.f.add_term(&[0, 0], &eps);
        let r0 = JetRing::base(0, 0).unwrap();
        let ideal0: Vec<JMat> = (0..jr.slices.len() as u32).map(|k| JMat::constant(&r0, jr.ideal_matrix(&jr.f, k))).collect();
        let ideal1: Vec<JMat> = (0..jr.slices.len() as u32).map(|k| JMat::constant(&r0, jr.ideal_matrix(&f1, k))).collect();
        for (c, (k, e)) in jr.basis.iter().enumerate() {
            let v = unit_element(&r0, &jr.slices[..=(k + 1) as usize], k + 1, e);
            let v0 = jr.filtered_reduce(&ideal0, &v).unwrap().at0();
            let v1 = jr.filtered_reduce(&ideal1, &v).unwrap().at0();
            for r in 0..jr.dim() {
                let fd = &(&v1[(r, 0)] - &v0[(r, 0)]) / &eps;
                assert!((&fd - &lin[(r, c)]).abs() < Rat::new(1, 10), "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn weight_is_flat_and_hodge_data() {
        let jr = p2_ring();
        let gm = gm_connection(&jr, &[vec![0, 0]], 3).unwrap();
        let w = weight_filtration_on_r(&jr).unwrap();
        let h = hodge_data(&jr, &gm, &w.flag).unwrap();
        assert_eq!(h.hodge[2].1.cols(), 1);
        assert_eq!(h.opposite[0].1.dim(), 1);
    }
}
