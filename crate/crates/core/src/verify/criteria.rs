//! The eight acceptance criteria as runnable checks.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::polygons::{boundary_count, dilate_points, interior_count, reflexive_polygons, Pt};
use super::suite::{random_suite, RandomInstance};
use crate::amodel::{local_a_pipeline, quantum_certificate, small_quantum_connection, GWTable, ToricSurfaceData};
use crate::bmodel::{
    b_model_pipeline, check_h2_generation, is_delta_regular, jacobian_ring, standard_polarization,
    weight_filtration_on_r, LaurentPoly,
};
use crate::error::Result;
use crate::jet::{JMat, JetRing};
use crate::limit_mhs::{limit_mixed, NilpotentData};
use crate::linalg::{Flag, QMat};
use crate::polytope::LatticePolytope;
use crate::rat::Rat;
use crate::trtlep::{
    roundtrip_certificate, section_conditions, tate_twist, FrobTypeStructure, MixedTrTLEPData,
};
use crate::unfolding::{extend_pairings, universal_unfold};

pub const P2_GW: &str = include_str!("../../data/p2.gw");
pub const P1P1_GW: &str = include_str!("../../data/p1p1.gw");

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] criterion {}: {} ({:.2}s) {}", self.id, self.title, self.seconds, self.detail)
    }
}

fn report(id: u8, title: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = match run() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id, title, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn to_points(v: &[Pt]) -> Vec<Vec<i64>> {
    v.iter().map(|p| p.to_vec()).collect()
}

fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v
}

/// Reflexivity, duality and degree-one generation on every reflexive polygon.
pub fn criterion_1() -> CriterionReport {
    report(1, "reflexive polygons", || {
        let polys = reflexive_polygons();
        let mut failures = vec![];
        for (i, v) in polys.iter().enumerate() {
            let p = LatticePolytope::from_points(2, &to_points(v))?;
            let dual = p.dual_polytope()?;
            let back = dual.dual_polytope()?;
            let lattice_ok = p.num_lattice_points() as i64 == interior_count(v) + boundary_count(v);
            let ok = p.is_reflexive()
                && dual.is_reflexive()
                && sorted(back.vertices().to_vec()) == sorted(p.vertices().to_vec())
                && p.degree_one_generates(5).generated
                && lattice_ok;
            if !ok {
                failures.push(i);
            }
        }
        Ok((polys.len() == 16 && failures.is_empty(), format!("{} classes, failures {failures:?}", polys.len())))
    })
}

/// A Delta-regular polynomial for the polygon `v`, drawn from a fixed seed.
pub fn regular_polynomial(v: &[Pt], seed: u64) -> Result<Option<LaurentPoly>> {
    let delta = LatticePolytope::from_points(2, &to_points(v))?;
    let pts = dilate_points(v, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let terms: Vec<(Vec<i64>, Rat)> = pts
            .iter()
            .filter(|p| **p != [0, 0])
            .map(|p| {
                let c = if v.contains(p) { rng.gen_range(1..=3) } else { rng.gen_range(-2..=2) };
                (p.to_vec(), Rat::int(c))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let f = LaurentPoly::new(2, terms)?;
        if is_delta_regular(&f, &delta)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// `dim S^k - rank` of the ideal slice spanned by `t^s theta_i f`, built
/// directly from the dilates of the polygon.
pub fn dense_graded_dims(v: &[Pt], f: &LaurentPoly, kmax: i64) -> Vec<usize> {
    (0..=kmax)
        .map(|k| {
            let pts = dilate_points(v, k);
            if k == 0 {
                return pts.len();
            }
            let index: BTreeMap<Pt, usize> = pts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
            let mut cols = vec![];
            for s in dilate_points(v, k - 1) {
                for i in 0..=2 {
                    let mut col = vec![Rat::zero(); pts.len()];
                    for (m, c) in f.terms() {
                        let w = if i == 0 { Rat::one() } else { Rat::int(m[i - 1]) };
                        let p = [s[0] + m[0], s[1] + m[1]];
                        col[index[&p]] += &(c * &w);
                    }
                    cols.push(col);
                }
            }
            pts.len() - QMat::from_cols(pts.len(), &cols).rank()
        })
        .collect()
}

/// Graded dimensions `(1, l - 3, 1, 0)` against the dense oracle.
pub fn criterion_2() -> CriterionReport {
    report(2, "Jacobian ring dimensions", || {
        let mut bad = vec![];
        let polys = reflexive_polygons();
        for (i, v) in polys.iter().enumerate() {
            let Some(f) = regular_polynomial(v, 17 + i as u64)? else {
                bad.push(format!("#{i}: no regular f"));
                continue;
            };
            let delta = LatticePolytope::from_points(2, &to_points(v))?;
            let jr = jacobian_ring(&f, &delta)?;
            let l = (interior_count(v) + boundary_count(v)) as usize;
            let expect = vec![1, l - 3, 1, 0];
            let dims = jr.graded_dims();
            let oracle = dense_graded_dims(v, &f, 3);
            if dims != expect || oracle != expect {
                bad.push(format!("#{i}: {dims:?} oracle {oracle:?} expected {expect:?}"));
            }
        }
        Ok((bad.is_empty() && polys.len() == 16, if bad.is_empty() { "16 polygons".into() } else { bad.join("; ") }))
    })
}

pub fn p2_polynomial() -> LaurentPoly {
    LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]).expect("valid terms")
}

/// H^2-generation and the B-model pipeline for the projective plane.
pub fn criterion_3() -> CriterionReport {
    report(3, "B-model pipeline for P2", || {
        let f = p2_polynomial();
        let jr = jacobian_ring(&f, &f.newton_polytope()?)?;
        let h2 = check_h2_generation(&jr);
        let weight = weight_filtration_on_r(&jr)?.flag;
        let pol = standard_polarization(&jr, &weight)?;
        let out = b_model_pipeline(&jr, &[vec![0, 0]], Some(pol), 3, 3)?;
        let fails: Vec<String> = out.certificates.iter().flat_map(|c| c.failures()).map(|c| c.name.clone()).collect();
        let ok = h2.holds && out.passed() && out.mfs.charge == Rat::int(4);
        Ok((ok, format!("charge {}, dim {}, failures {fails:?}", out.mfs.charge, out.mfs.dim())))
    })
}

pub const SUITE_SEED: u64 = 1000;
pub const SUITE_SIZE: usize = 50;

fn suite(seed: u64) -> Vec<RandomInstance> {
    random_suite(seed, SUITE_SIZE, 4)
}

/// Exact unfolding residuals on the random suite.
pub fn criterion_4(seed: u64) -> CriterionReport {
    report(4, "unfolding flatness", || {
        let mut bad = vec![];
        let mut ranks = [0usize; 6];
        for inst in suite(seed) {
            ranks[inst.data.frob.rank()] += 1;
            match universal_unfold(&inst.data, &inst.zeta, 4) {
                Ok((_, cert)) if cert.passed() => {}
                Ok((_, cert)) => bad.push(format!("seed {}: {:?}", inst.seed, cert.failures().first().map(|c| &c.name))),
                Err(e) => bad.push(format!("seed {}: {e}", inst.seed)),
            }
        }
        Ok((bad.is_empty(), format!("{SUITE_SIZE} instances, ranks 2..5 counts {:?}; {}", &ranks[2..], bad.join("; "))))
    })
}

/// Self-adjointness of the new Higgs components, with a mutation check.
pub fn criterion_5(seed: u64) -> CriterionReport {
    report(5, "pairing extension", || {
        let mut bad = vec![];
        let mut caught = 0;
        for inst in suite(seed) {
            let (res, _) = universal_unfold(&inst.data, &inst.zeta, 4)?;
            let (_, cert) = extend_pairings(&res, &inst.data.pairings);
            if !cert.passed() {
                bad.push(format!("seed {}", inst.seed));
            }
            let mut mutated = res.clone();
            let (k, g) = inst.data.pairings.iter().next().expect("one weight");
            let r = g.rows();
            let mut skew = QMat::zeros(r, r);
            skew[(0, 1)] = Rat::one();
            skew[(1, 0)] = Rat::int(-1);
            let inject = &g.inverse().expect("nondegenerate") * &skew;
            let last = mutated.data.frob.c.len() - 1;
            let ring = mutated.data.frob.ring.clone();
            mutated.data.frob.c[last] = mutated.data.frob.c[last].add(&JMat::linear(&ring, last, inject));
            let (_, mcert) = extend_pairings(&mutated, &inst.data.pairings);
            if mcert.failures().iter().any(|c| c.name.starts_with(&format!("g{k}:")) && c.name.contains("selfadjoint")) {
                caught += 1;
            }
        }
        Ok((bad.is_empty() && caught == SUITE_SIZE, format!("mutations caught {caught}/{SUITE_SIZE}; {}", bad.join("; "))))
    })
}

/// `J_s (x) F` where `J_s` is a Jordan block with `[V, N] = -N` and `F` is a
/// rank-one point or a rank-two factor with `C = [[0, 0], [1, 0]]`.
pub fn jordan_instance(s: usize, wide: bool) -> (MixedTrTLEPData, NilpotentData) {
    let (f, vf, gf, cf) = if wide {
        let c = QMat::from_i64(&[&[0, 0], &[1, 0]]);
        (2, QMat::diag(&[Rat::new(1, 2), Rat::new(-1, 2)]), QMat::from_i64(&[&[0, 1], &[1, 0]]), Some(c))
    } else {
        (1, QMat::zeros(1, 1), QMat::identity(1), None)
    };
    let kron = |a: &QMat, b: &QMat| {
        let mut out = QMat::zeros(a.rows() * b.rows(), a.cols() * b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..b.rows() {
                    for l in 0..b.cols() {
                        out[(i * b.rows() + k, j * b.cols() + l)] = &a[(i, j)] * &b[(k, l)];
                    }
                }
            }
        }
        out
    };
    let mut n = QMat::zeros(s, s);
    let mut gj = QMat::zeros(s, s);
    for i in 0..s {
        if i + 1 < s {
            n[(i + 1, i)] = Rat::one();
        }
        gj[(i, s - 1 - i)] = Rat::one();
    }
    let vj = QMat::diag(&(0..s).map(|i| Rat::new(s as i64 - 1 - 2 * i as i64, 2)).collect::<Vec<_>>());
    let idf = QMat::identity(f);
    let ids = QMat::identity(s);
    let v = &kron(&vj, &idf) + &kron(&ids, &vf);
    let g = kron(&gj, &gf);
    let nn = kron(&n, &idf);
    let ring = JetRing::base(usize::from(cf.is_some()), 2).expect("small ring");
    let c = cf.map(|c| vec![JMat::constant(&ring, kron(&ids, &c))]).unwrap_or_default();
    let r = s * f;
    let frob = FrobTypeStructure::flat(&ring, c, JMat::zeros(&ring, r, r), JMat::constant(&ring, v));
    let data = MixedTrTLEPData { frob, weight: Flag::pure(r, 0), pairings: BTreeMap::from([(0, g)]) };
    (data, NilpotentData::new(nn).expect("nilpotent"))
}

/// `dim W_k = dim ker N^{k+1} - rank N + rank N^{k+2}` on the cokernel.
pub fn kernel_power_dims(n: &QMat, top: u32) -> Vec<usize> {
    let dim = n.rows();
    let rk = |p: u32| n.pow(p).rank();
    let w = |k: u32| (dim - rk(k + 1)) + rk(k + 2) - rk(1);
    (0..=top).map(|k| w(k) - if k == 0 { 0 } else { w(k - 1) }).collect()
}

/// Limit structures of Jordan blocks of sizes 1 to 4.
pub fn criterion_6() -> CriterionReport {
    report(6, "limit construction", || {
        let mut bad = vec![];
        for s in 1..=4 {
            for wide in [false, true] {
                let (t, nil) = jordan_instance(s, wide);
                let (lim, cert) = limit_mixed(&t, &nil)?;
                let top = nil.index.saturating_sub(1);
                let dims: Vec<usize> = (0..=top as i32).map(|k| lim.weight.graded_dim(k)).collect();
                let oracle = kernel_power_dims(&nil.matrix, top);
                if !cert.passed() || dims != oracle {
                    bad.push(format!("size {s} wide {wide}: dims {dims:?} oracle {oracle:?} {:?}", cert.failures()));
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "8 instances".into() } else { bad.join("; ") }))
    })
}

pub type AModelCase = (&'static str, ToricSurfaceData, GWTable, Vec<Rat>);

/// Surface, GW table and base point used for the local A-model criterion.
pub fn a_model_cases() -> Result<Vec<AModelCase>> {
    Ok(vec![
        ("P2", ToricSurfaceData::projective_plane(), GWTable::parse(P2_GW, 1, Some(3))?, vec![Rat::new(1, 10)]),
        (
            "P1xP1",
            ToricSurfaceData::p1_times_p1(),
            GWTable::parse(P1P1_GW, 2, Some(3))?,
            vec![Rat::new(1, 10), Rat::new(1, 20)],
        ),
    ])
}

/// Unit, grading, (EC)_4 and the charge-4 pipeline for two surfaces.
pub fn criterion_7() -> CriterionReport {
    report(7, "local A-model pipeline", || {
        let mut bad = vec![];
        for (name, s, gw, z) in a_model_cases()? {
            let qc = small_quantum_connection(&s, &gw, &z, 3)?;
            let qcert = quantum_certificate(&qc);
            let out = local_a_pipeline(&s, &gw, &z, 3, 3)?;
            let v = out.limit.frob.v.at0();
            let r = s.picard_rank();
            let eig_ok = (0..r + 2).all(|i| {
                let deg = if i == 0 { 0 } else if i <= r { 2 } else { 4 };
                v[(i, i)] == Rat::int(2 - deg / 2)
            }) && (&v - &QMat::diag(&(0..r + 2).map(|i| v[(i, i)].clone()).collect::<Vec<_>>())).is_zero();
            let mut zeta = vec![Rat::zero(); r + 2];
            zeta[0] = Rat::one();
            let ec = section_conditions(&out.limit.frob, &zeta, &Rat::int(4))?.ec;
            let fails: Vec<String> = out.certificates.iter().flat_map(|c| c.failures()).map(|c| c.name.clone()).collect();
            if !(qcert.passed() && eig_ok && ec && out.passed() && out.mfs.charge == Rat::int(4)) {
                bad.push(format!("{name}: eigen {eig_ok} ec {ec} {fails:?} {:?}", qcert.failures()));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "P2 and P1xP1".into() } else { bad.join("; ") }))
    })
}

/// Roundtrip through the induced manifold, twist involution, and the shift of (EC).
pub fn criterion_8(seed: u64) -> CriterionReport {
    report(8, "roundtrip laws", || {
        let mut bad = vec![];
        let twists = [Rat::new(-1, 1), Rat::new(-1, 2), Rat::new(1, 2), Rat::new(3, 2)];
        for inst in random_suite(seed, 20, 3) {
            let (res, _) = universal_unfold(&inst.data, &inst.zeta, 3)?;
            let full = res.absorb()?;
            match roundtrip_certificate(&full, &inst.zeta, &inst.charge) {
                Ok(c) if c.passed() => {}
                Ok(c) => bad.push(format!("seed {} roundtrip {:?}", inst.seed, c.failures().first().map(|x| &x.name))),
                Err(e) => bad.push(format!("seed {} roundtrip: {e}", inst.seed)),
            }
            for l in &twists {
                let tw = tate_twist(&inst.data, l)?;
                if tate_twist(&tw, &-l)? != inst.data {
                    bad.push(format!("seed {} twist {l}", inst.seed));
                }
                for d in [inst.charge.clone(), &inst.charge + &Rat::one()] {
                    let before = section_conditions(&inst.data.frob, &inst.zeta, &d)?.ec;
                    let after = section_conditions(&tw.frob, &inst.zeta, &(&d + &(l * &Rat::int(2))))?.ec;
                    if before != after {
                        bad.push(format!("seed {} EC shift {l}", inst.seed));
                    }
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "20 instances, 4 twists".into() } else { bad.join("; ") }))
    })
}

/// All eight criteria, run on separate threads; the random suites start at `seed`.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    let jobs: Vec<Box<dyn FnOnce() -> CriterionReport + Send>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(criterion_3),
        Box::new(move || criterion_4(seed)),
        Box::new(move || criterion_5(seed)),
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(move || criterion_8(seed)),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|job| s.spawn(job)).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    })
}
