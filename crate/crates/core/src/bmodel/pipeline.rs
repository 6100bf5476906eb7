use std::collections::BTreeMap;

use super::gm::{gm_connection, hodge_data};
use super::ring::{check_h2_generation, weight_filtration_on_r, JacobianRingData};
use crate::error::{Error, Result};
use crate::linalg::{Flag, QMat};
use crate::rat::Rat;
use crate::trtlep::{
    check_mfs, check_opposite, rees_construct, section_conditions, Certificate, ReesInput, ReesOutput, SaitoMFSData,
};
use crate::unfolding::{extend_pairings, extract_mfs, universal_unfold};

/// Hodge level `d - deg` of a vector supported in a single degree of `R`.
fn level_of(jr: &JacobianRingData, v: &[Rat]) -> Option<i32> {
    let mut degs = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| jr.degree_of(i));
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(jr.d() as i32 - first as i32)
}

/// Pairs level `l` with level `k - l` on each `Gr_k`, with sign `(-1)^l`, so
/// that both filtrations satisfy the orthogonality relations.
pub fn standard_polarization(jr: &JacobianRingData, weight: &Flag) -> Result<BTreeMap<i32, QMat>> {
    let mut out = BTreeMap::new();
    for k in weight.weights() {
        let qt = weight.graded(k);
        let levels: Vec<i32> = (0..qt.dim())
            .map(|j| level_of(jr, &qt.section.col(j)))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Unsupported(format!("Gr_{k} is not spanned by homogeneous classes")))?;
        let mut s = QMat::zeros(qt.dim(), qt.dim());
        for (a, &la) in levels.iter().enumerate() {
            let partners: Vec<usize> = (0..levels.len()).filter(|&b| levels[b] == k - la).collect();
            let mine: Vec<usize> = (0..levels.len()).filter(|&b| levels[b] == la).collect();
            if partners.len() != mine.len() {
                return Err(Error::Unsupported(format!("Hodge numbers on Gr_{k} are not symmetric")));
            }
            let pos = mine.iter().position(|&b| b == a).expect("a has level la");
            s[(a, partners[pos])] = Rat::int(if la.rem_euclid(2) == 0 { 1 } else { -1 });
        }
        out.insert(k, s);
    }
    Ok(out)
}

/// Output of the B-model pipeline.
#[derive(Clone, Debug)]
pub struct BPipeline {
    pub rees: ReesOutput,
    /// Frame index of the unit class.
    pub section: usize,
    pub mfs: SaitoMFSData,
    pub certificates: Vec<Certificate>,
}

impl BPipeline {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }
}

/// Gauss-Manin connection along `directions`, Rees construction with the given
/// polarization, universal unfolding at the unit class, and the mixed
/// Frobenius manifold of charge `2d`.
pub fn b_model_pipeline(
    jr: &JacobianRingData,
    directions: &[Vec<i64>],
    polarization: Option<BTreeMap<i32, QMat>>,
    order: u32,
    n: u32,
) -> Result<BPipeline> {
    let h2 = check_h2_generation(jr);
    let mut hcert = Certificate::new("h2-generation");
    hcert.push_bool("H2-generation", h2.holds);
    let gm = gm_connection(jr, directions, order + 1)?;
    let weight = weight_filtration_on_r(jr)?.flag;
    let hd = hodge_data(jr, &gm, &weight)?;
    let polarization = match polarization {
        Some(p) => p,
        None => standard_polarization(jr, &weight)?,
    };
    let input = ReesInput { weight, hodge: hd.hodge, opposite: hd.opposite, polarization };
    let ocert = check_opposite(&input);
    let rees = rees_construct(&input)?;
    let d = jr.d() as i32;
    let section = rees
        .levels
        .iter()
        .position(|&l| l == d)
        .ok_or_else(|| Error::ConditionsNotMet("no frame vector at the top Hodge level".into()))?;
    let mut zeta = vec![Rat::zero(); rees.levels.len()];
    zeta[section] = Rat::one();
    let charge = Rat::int(2 * d as i64);
    let flags = section_conditions(&rees.data.frob, &zeta, &charge)?;
    if !flags.gc {
        return Err(Error::GCFails);
    }
    if !flags.ic {
        return Err(Error::ICFails);
    }
    if !flags.ec {
        return Err(Error::ConditionsNotMet(format!("(EC)_{charge} fails for the unit class")));
    }
    let (unf, ucert) = universal_unfold(&rees.data, &zeta, n)?;
    let (g, pcert) = extend_pairings(&unf, &rees.data.pairings);
    let mfs = extract_mfs(&unf, &zeta, &charge, &g)?;
    let mcert = check_mfs(&mfs);
    Ok(BPipeline { rees, section, mfs, certificates: vec![hcert, ocert, ucert, pcert, mcert] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::jacobian_ring;
    use crate::bmodel::tests::p2_f;

    #[test]
    fn p2_pipeline() {
        let f = p2_f();
        let jr = jacobian_ring(&f, &f.newton_polytope().unwrap()).unwrap();
        let out = b_model_pipeline(&jr, &[vec![0, 0]], None, 3, 3).unwrap();
        assert!(out.passed(), "{:?}", out.certificates.iter().flat_map(|c| c.failures()).collect::<Vec<_>>());
        assert_eq!(out.mfs.charge, Rat::int(4));
        assert_eq!(out.mfs.dim(), 3);
    }

    #[test]
    fn p2_polarization() {
        let f = p2_f();
        let jr = jacobian_ring(&f, &f.newton_polytope().unwrap()).unwrap();
        let w = weight_filtration_on_r(&jr).unwrap().flag;
        let s = standard_polarization(&jr, &w).unwrap();
        assert_eq!(s[&4], QMat::identity(1));
        assert_eq!(&s[&1].transpose(), &s[&1].scale(&Rat::int(-1)));
    }
}
