//! Potentials, monomial frames and the order-by-order unfolding of a mixed
//! trTLEP-structure along new parameters, up to the universal unfolding and
//! the induced mixed Frobenius manifold.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{solve_linear, JMat, JetRing, Prec, Ring};
use crate::linalg::{QMat, QSubspace};
use crate::rat::Rat;
use crate::trtlep::{
    check_frob_type, check_mixed_trtlep, roundtrip_saito, section_conditions, Certificate, FrobTypeStructure,
    GradedPairingSet, MixedTrTLEPData, SaitoMFSData,
};

/// Vector potential `psi` with `psi(0) = 0` and `d psi / dt_i = C_i zeta`.
pub fn potential(f: &FrobTypeStructure, zeta: &[Rat]) -> Result<JMat> {
    let r = zeta.len();
    let z = QMat::column_vec(zeta);
    let cols: Vec<JMat> = f.c.iter().map(|ci| ci.mul_const(&z)).collect();
    let euler = cols.iter().enumerate().fold(JMat::zeros(&f.ring, r, 1), |acc, (i, v)| acc.add(&v.times_var(i)));
    let terms = euler
        .nonzero_terms()
        .map(|(k, t)| (k, t.scale(&Rat::new(1, f.ring.tdeg(k) as i64))))
        .collect();
    let psi = JMat::from_terms(&f.ring, r, 1, terms).with_prec(euler.prec());
    if cols.iter().enumerate().any(|(i, v)| !psi.deriv(i).sub(v).is_zero()) {
        return Err(Error::NotIntegrable);
    }
    Ok(psi)
}

/// Letter of a word in the Higgs field and `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Letter {
    C(usize),
    U,
}

/// Product `L_k ... L_1` of letters, applied right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn eval(&self, f: &FrobTypeStructure) -> JMat {
        self.0.iter().fold(JMat::identity(&f.ring, f.rank()), |acc, l| letter(f, *l).mul(&acc))
    }

    fn eval0(&self, c0: &[QMat], u0: &QMat) -> QMat {
        self.0.iter().fold(QMat::identity(u0.rows()), |acc, l| match l {
            Letter::C(i) => &c0[*i] * &acc,
            Letter::U => u0 * &acc,
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|l| match l {
                Letter::C(i) => format!("C{}", i + 1),
                Letter::U => "U".into(),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn letter(f: &FrobTypeStructure, l: Letter) -> &JMat {
    match l {
        Letter::C(i) => &f.c[i],
        Letter::U => &f.u,
    }
}

/// Words `G_1..G_r` with `G_j(0) zeta` a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialFrame {
    pub words: Vec<Word>,
}

/// Breadth-first search over words, keeping those that enlarge the span at the base point.
pub fn monomial_frame(f: &FrobTypeStructure, zeta: &[Rat]) -> Result<MonomialFrame> {
    let r = f.rank();
    if zeta.iter().all(Rat::is_zero) {
        return Err(Error::ZeroVector);
    }
    let c0: Vec<QMat> = f.c.iter().map(JMat::at0).collect();
    let u0 = f.u.at0();
    let alphabet: Vec<Letter> = (0..f.nvars()).map(Letter::C).chain([Letter::U]).collect();
    let mut words = Vec::new();
    let mut vecs: Vec<Vec<Rat>> = Vec::new();
    let mut queue = VecDeque::from([Word::default()]);
    while let Some(w) = queue.pop_front() {
        if words.len() == r {
            break;
        }
        let v = w.eval0(&c0, &u0).mul_vec(zeta);
        vecs.push(v);
        if QSubspace::span(r, &vecs).dim() < vecs.len() {
            vecs.pop();
            continue;
        }
        for l in &alphabet {
            let mut next = w.0.clone();
            next.push(*l);
            queue.push_back(Word(next));
        }
        words.push(w);
    }
    if words.len() < r {
        return Err(Error::GCFails);
    }
    Ok(MonomialFrame { words })
}

/// Number of fixed-point sweeps needed to settle one unfolding direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionLog {
    pub direction: usize,
    pub sweeps: usize,
}

/// A mixed trTLEP-structure over `(t, y)` restricting to the input at `y = 0`.
///
/// `frob.c` lists `C_{t_1}..C_{t_m}` followed by `C_{y_1}..C_{y_l}`.
#[derive(Clone, Debug)]
pub struct UnfoldingResult {
    pub data: MixedTrTLEPData,
    pub base_vars: usize,
    pub frame: MonomialFrame,
    pub log: Vec<DirectionLog>,
}

impl UnfoldingResult {
    pub fn new_vars(&self) -> usize {
        self.data.frob.nvars() - self.base_vars
    }

    /// The same structure over a ring without y-variables, exact to total
    /// order `min(D, N)`.
    pub fn absorb(&self) -> Result<MixedTrTLEPData> {
        let src = &self.data.frob.ring;
        let n = src.nvars();
        let target = JetRing::base(n, src.order())?;
        let map = src.embedding(&target, &(0..n).collect::<Vec<_>>());
        let tot = if src.ny() == 0 { src.order() } else { src.order().min(src.y_order()) };
        let move_ = |m: &JMat| {
            let p = Prec { tot: m.prec().tot.min(tot as i32), y: target.full_prec().y };
            m.transport(&target, &map, p)
        };
        let f = &self.data.frob;
        let frob = FrobTypeStructure {
            ring: target.clone(),
            c: f.c.iter().map(move_).collect(),
            u: move_(&f.u),
            v: move_(&f.v),
            a: f.a.iter().map(move_).collect(),
        };
        Ok(MixedTrTLEPData { frob, weight: self.data.weight.clone(), pairings: self.data.pairings.clone() })
    }
}

fn embed(t: &MixedTrTLEPData, ring: &Ring) -> FrobTypeStructure {
    let src = &t.frob.ring;
    let map = src.embedding(ring, &(0..src.nvars()).collect::<Vec<_>>());
    let move_ = |m: &JMat| {
        let p = Prec { tot: m.prec().tot, y: ring.full_prec().y };
        m.transport(ring, &map, p)
    };
    let f = &t.frob;
    let r = f.rank();
    let extra = ring.nvars() - src.nvars();
    let mut c: Vec<JMat> = f.c.iter().map(move_).collect();
    c.extend((0..extra).map(|_| JMat::zeros(ring, r, r)));
    FrobTypeStructure::flat(ring, c, move_(&f.u), move_(&f.v))
}

/// Unfolds `t` along the y-variables of the ring of `psi_y`, where
/// `psi_y[j] = d psi_ext / d y_j` and `psi_ext` restricts to the potential of
/// `zeta` at `y = 0`. Directions are absorbed one at a time.
pub fn unfold(t: &MixedTrTLEPData, zeta: &[Rat], psi_y: &[JMat]) -> Result<UnfoldingResult> {
    let f0 = &t.frob;
    if f0.a.iter().any(|a| !a.is_zero()) {
        return Err(Error::FlatnessViolation("input is not in its flat frame".into()));
    }
    let flags = section_conditions(f0, zeta, &Rat::zero())?;
    if !flags.gc {
        return Err(Error::GCFails);
    }
    if !flags.ic {
        return Err(Error::ICFails);
    }
    let frame = monomial_frame(f0, zeta)?;
    let m = f0.nvars();
    let Some(ring) = psi_y.first().map(|p| p.ring().clone()) else {
        return Ok(UnfoldingResult { data: t.clone(), base_vars: m, frame, log: vec![] });
    };
    if ring.nt() != m || ring.ny() != psi_y.len() || ring.order() != f0.ring.order() {
        return Err(Error::DimensionMismatch("potential ring does not match the structure".into()));
    }
    let z = QMat::column_vec(zeta);
    let mut f = embed(t, &ring);
    let v = f.v.clone();
    let mut log = Vec::new();
    for j in 0..psi_y.len() {
        let y = m + j;
        let mut mask = vec![false; ring.nvars()];
        mask[y] = true;
        let base_c: Vec<JMat> = f.c.iter().map(|c| c.restrict_zero(&mask)).collect();
        let base_u = f.u.restrict_zero(&mask);
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            let g_words: Vec<JMat> = frame.words.iter().map(|w| w.eval(&f)).collect();
            let cols: Vec<JMat> = g_words.iter().map(|g| g.mul_const(&z)).collect();
            let coeffs = solve_linear(&JMat::hstack(&cols), &psi_y[j])?.x;
            let cy = g_words
                .iter()
                .enumerate()
                .fold(JMat::zeros(&ring, f.rank(), f.rank()), |acc, (k, g)| acc.add(&g.scale_jet(&coeffs.entry(k, 0))));
            let mut next = f.clone();
            for b in 0..y {
                next.c[b] = base_c[b].add(&cy.deriv(b).integrate(y));
            }
            next.c[y] = cy.clone();
            next.u = base_u.add(&cy.commutator(&v).sub(&cy).integrate(y));
            let settled = next == f;
            f = next;
            if settled {
                break;
            }
            if sweeps > ring.order() as usize + 2 {
                return Err(Error::FlatnessViolation(format!("direction {} did not settle", j + 1)));
            }
        }
        log.push(DirectionLog { direction: j + 1, sweeps });
    }
    let result = UnfoldingResult {
        data: MixedTrTLEPData { frob: f, weight: t.weight.clone(), pairings: t.pairings.clone() },
        base_vars: m,
        frame,
        log,
    };
    let cert = unfolding_certificate(&result, t, zeta, psi_y);
    if let Some(bad) = cert.failures().first() {
        return Err(Error::FlatnessViolation(format!("{} = {}", bad.name, bad.residual)));
    }
    Ok(result)
}

/// Residuals of the recursion equations for an unfolding of `t`.
pub fn unfolding_certificate(r: &UnfoldingResult, t: &MixedTrTLEPData, zeta: &[Rat], psi_y: &[JMat]) -> Certificate {
    let f = &r.data.frob;
    let mut cert = Certificate::new("unfolding");
    cert.extend("", check_frob_type(f));
    let ring = &f.ring;
    let m = r.base_vars;
    let orig = embed(t, ring);
    let mask: Vec<bool> = (0..ring.nvars()).map(|v| v >= m).collect();
    for b in 0..m {
        cert.push_zero(format!("n=0:C{}", b + 1), &f.c[b].restrict_zero(&mask).sub(&orig.c[b]));
    }
    cert.push_zero("n=0:U", &f.u.restrict_zero(&mask).sub(&orig.u));
    cert.push_zero("n=0:V", &f.v.sub(&orig.v));
    let z = QMat::column_vec(zeta);
    for (j, py) in psi_y.iter().enumerate() {
        let y = m + j;
        cert.push_zero(format!("potential:y{}", j + 1), &f.c[y].mul_const(&z).sub(py));
        for b in 0..m {
            let d = f.c[b].mul_const(&z).deriv(y).sub(&py.deriv(b));
            cert.push_zero(format!("potential:t{}y{}", b + 1, j + 1), &d);
        }
    }
    for (name, mat) in f.named_matrices() {
        cert.push_bool(format!("W-preserved:{name}"), mat.all_terms(|x| r.data.weight.is_invariant_under(x)));
    }
    cert
}

/// Unfolds along `r - m` new directions spanning a complement of the image of
/// `d psi` at the base point, then certifies (IdC).
pub fn universal_unfold(t: &MixedTrTLEPData, zeta: &[Rat], n: u32) -> Result<(UnfoldingResult, Certificate)> {
    let f = &t.frob;
    let flags = section_conditions(f, zeta, &Rat::zero())?;
    if !flags.gc {
        return Err(Error::GCFails);
    }
    if !flags.ic {
        return Err(Error::ICFails);
    }
    let r = f.rank();
    let m = f.nvars();
    let images: Vec<Vec<Rat>> = f.c.iter().map(|c| c.at0().mul_vec(zeta)).collect();
    let span = QSubspace::span(r, &images);
    let free: Vec<usize> = (0..r).filter(|c| !span.pivots().contains(c)).collect();
    let l = free.len();
    let ring = JetRing::new(m, l, f.ring.order(), n)?;
    let psi_y: Vec<JMat> = free
        .iter()
        .map(|&c| {
            let mut b = QMat::zeros(r, 1);
            b[(c, 0)] = Rat::one();
            JMat::constant(&ring, b)
        })
        .collect();
    let result = unfold(t, zeta, &psi_y)?;
    let mut cert = unfolding_certificate(&result, t, zeta, &psi_y);
    let after = section_conditions(&result.data.frob, zeta, &Rat::zero())?;
    cert.push_bool("IdC", after.idc);
    if !after.idc {
        return Err(Error::ICFails);
    }
    Ok((result, cert))
}

/// Keeps the constant pairings and certifies self-adjointness of every new
/// Higgs component on each graded piece.
pub fn extend_pairings(r: &UnfoldingResult, g: &GradedPairingSet) -> (GradedPairingSet, Certificate) {
    let data = MixedTrTLEPData { frob: r.data.frob.clone(), weight: r.data.weight.clone(), pairings: g.clone() };
    let full = check_mixed_trtlep(&data);
    let mut cert = Certificate::new("pairing-extension");
    for c in full.checks {
        let keep = c.name.contains("selfadjoint") || c.name.contains("V-weight") || c.name.starts_with('g');
        if keep {
            cert.checks.push(c);
        }
    }
    (g.clone(), cert)
}

/// Mixed Frobenius manifold of an unfolding satisfying (IdC) and (EC)_d.
pub fn extract_mfs(r: &UnfoldingResult, zeta: &[Rat], d: &Rat, g: &GradedPairingSet) -> Result<SaitoMFSData> {
    let mut data = r.absorb()?;
    data.pairings = g.clone();
    roundtrip_saito(&data, zeta, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Flag;
    use crate::trtlep::check_mfs;
    use std::collections::BTreeMap;

    fn point(r: usize, u: QMat, v: QMat, weight: Flag, pairings: GradedPairingSet) -> MixedTrTLEPData {
        let ring = JetRing::base(0, 3).unwrap();
        let _ = r;
        MixedTrTLEPData {
            frob: FrobTypeStructure::flat(&ring, vec![], JMat::constant(&ring, u), JMat::constant(&ring, v)),
            weight,
            pairings,
        }
    }

    #[test]
    fn potential_examples() {
        let ring = JetRing::base(2, 3).unwrap();
        let m1 = QMat::from_i64(&[&[0, 0], &[1, 0]]);
        let f = FrobTypeStructure::flat(
            &ring,
            vec![JMat::identity(&ring, 2), JMat::constant(&ring, m1.clone())],
            JMat::zeros(&ring, 2, 2),
            JMat::zeros(&ring, 2, 2),
        );
        let zeta = [Rat::one(), Rat::zero()];
        let psi = potential(&f, &zeta).unwrap();
        let expect = JMat::linear(&ring, 0, QMat::from_i64(&[&[1], &[0]])).add(&JMat::linear(&ring, 1, QMat::from_i64(&[&[0], &[1]])));
        assert_eq!(psi, expect);
        let zero = FrobTypeStructure::flat(&ring, vec![JMat::zeros(&ring, 2, 2); 2], JMat::zeros(&ring, 2, 2), JMat::zeros(&ring, 2, 2));
        assert!(potential(&zero, &zeta).unwrap().is_zero());
        let bad = FrobTypeStructure::flat(
            &ring,
            vec![JMat::linear(&ring, 1, QMat::identity(2)), JMat::zeros(&ring, 2, 2)],
            JMat::zeros(&ring, 2, 2),
            JMat::zeros(&ring, 2, 2),
        );
        assert_eq!(potential(&bad, &zeta).unwrap_err(), Error::NotIntegrable);
    }

    #[test]
    fn frame_needs_u() {
        let ring = JetRing::base(1, 2).unwrap();
        let f = FrobTypeStructure::flat(
            &ring,
            vec![JMat::zeros(&ring, 2, 2)],
            JMat::constant(&ring, QMat::from_i64(&[&[0, 0], &[1, 0]])),
            JMat::zeros(&ring, 2, 2),
        );
        let fr = monomial_frame(&f, &[Rat::one(), Rat::zero()]).unwrap();
        assert_eq!(fr.words.iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["1", "U"]);
        assert_eq!(monomial_frame(&f, &[Rat::zero(), Rat::one()]).unwrap_err(), Error::GCFails);
    }

    #[test]
    fn rank_one_over_a_point() {
        let t = point(1, QMat::zeros(1, 1), QMat::identity(1), Flag::pure(1, 2), BTreeMap::from([(2, QMat::identity(1))]));
        let (res, cert) = universal_unfold(&t, &[Rat::one()], 3).unwrap();
        assert!(cert.passed());
        let f = &res.data.frob;
        assert_eq!(f.c[0], JMat::identity(&f.ring, 1));
        assert_eq!(f.u, JMat::linear(&f.ring, 0, QMat::from_i64(&[&[-1]])));
        let (g, pc) = extend_pairings(&res, &t.pairings);
        assert!(pc.passed());
        let mfs = extract_mfs(&res, &[Rat::one()], &Rat::int(2), &g).unwrap();
        assert!(check_mfs(&mfs).passed());
        assert_eq!(mfs.product[0].at0(), QMat::identity(1));
    }

    #[test]
    fn already_universal_is_unchanged() {
        let ring = JetRing::base(1, 3).unwrap();
        let t = MixedTrTLEPData {
            frob: FrobTypeStructure::flat(
                &ring,
                vec![JMat::constant(&ring, QMat::from_i64(&[&[-1]]))],
                JMat::linear(&ring, 0, QMat::identity(1)),
                JMat::identity(&ring, 1),
            ),
            weight: Flag::pure(1, 2),
            pairings: BTreeMap::from([(2, QMat::identity(1))]),
        };
        let (res, _) = universal_unfold(&t, &[Rat::one()], 2).unwrap();
        assert_eq!(res.new_vars(), 0);
        assert_eq!(res.absorb().unwrap(), t);
    }

    #[test]
    fn two_directions_from_a_point() {
        // Q[x]/(x^2) at a point: U = 0, V = diag(1, 0), zeta = e1 with C-frame from U missing
        let u = QMat::from_i64(&[&[0, 0], &[1, 0]]);
        let w = Flag::new(2, vec![(0, QSubspace::coordinate(2, &[1])), (2, QSubspace::full(2))]).unwrap();
        let g = BTreeMap::from([(0, QMat::identity(1)), (2, QMat::identity(1))]);
        let t = point(2, u, QMat::diag(&[Rat::one(), Rat::zero()]), w, g.clone());
        let zeta = [Rat::one(), Rat::zero()];
        let (res, cert) = universal_unfold(&t, &zeta, 3).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!(res.new_vars(), 2);
        let again = universal_unfold(&t, &zeta, 3).unwrap().0;
        assert_eq!(again.data, res.data);
        let mfs = extract_mfs(&res, &zeta, &Rat::int(2), &g).unwrap();
        let mc = check_mfs(&mfs);
        assert!(mc.passed(), "{:?}", mc.failures());
    }

    #[test]
    fn zero_order_truncation() {
        let t = point(1, QMat::zeros(1, 1), QMat::identity(1), Flag::pure(1, 2), BTreeMap::from([(2, QMat::identity(1))]));
        let (res, _) = universal_unfold(&t, &[Rat::one()], 0).unwrap();
        let f = &res.data.frob;
        assert_eq!(f.c[0], JMat::identity(&f.ring, 1));
        assert!(f.u.is_zero());
    }
}
