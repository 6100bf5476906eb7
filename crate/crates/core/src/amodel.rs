//! Local A-model: cohomology of `X = P(K_S + O)` over a weak Fano toric
//! surface, the small quantum connection along `q_0 = 0` built from a table of
//! local GW invariants, its limit, and the resulting charge-4 mixed Frobenius
//! manifold.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{exp_linear, JMat, Jet, JetRing};
use crate::limit_mhs::{check_nilpotent_compat, limit_mixed, NilpotentData};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::rat::Rat;
use crate::trtlep::{
    check_mfs, check_mixed_trtlep, section_conditions, tate_twist, Certificate, FrobTypeStructure, MixedTrTLEPData,
    SaitoMFSData,
};
use crate::unfolding::{extend_pairings, extract_mfs, universal_unfold};

fn det2(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive integer vector on the ray spanned by `v`.
fn primitive(v: &[Rat]) -> Option<Vec<i64>> {
    let parts: Vec<(i64, i64)> = v.iter().map(Rat::parts).collect::<Option<_>>()?;
    let lcm = parts.iter().fold(1i64, |l, &(_, d)| l / gcd(l, d) * d);
    let ints: Vec<i64> = parts.iter().map(|&(n, d)| n * (lcm / d)).collect();
    let g = ints.iter().fold(0, |g, &x| gcd(g, x));
    (g != 0).then(|| ints.iter().map(|x| x / g).collect())
}

/// Smooth complete fan of a weak Fano toric surface with a nef basis of `H^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricSurfaceData {
    pub rays: Vec<[i64; 2]>,
    /// `D_i^2` for each ray divisor.
    pub self_intersections: Vec<i64>,
    /// `gamma_j` as integer combinations of the ray divisors.
    pub nef_basis: Vec<Vec<i64>>,
    /// `gamma_i . gamma_j`.
    pub intersection: QMat,
}

impl ToricSurfaceData {
    /// Checks the fan and computes a nef basis (Picard rank at most 2).
    pub fn new(rays: Vec<[i64; 2]>) -> Result<Self> {
        let (selfs, ints) = fan_intersections(&rays)?;
        let basis = match rays.len() - 2 {
            1 | 2 => nef_generators(&ints)?,
            r => return Err(Error::Unsupported(format!("nef basis must be supplied for Picard rank {r}"))),
        };
        Self::assemble(rays, selfs, ints, basis)
    }

    /// Uses a caller-supplied nef basis.
    pub fn with_nef_basis(rays: Vec<[i64; 2]>, basis: Vec<Vec<i64>>) -> Result<Self> {
        let (selfs, ints) = fan_intersections(&rays)?;
        Self::assemble(rays, selfs, ints, basis)
    }

    fn assemble(rays: Vec<[i64; 2]>, selfs: Vec<i64>, ints: QMat, basis: Vec<Vec<i64>>) -> Result<Self> {
        let n = rays.len();
        if basis.len() != n - 2 || basis.iter().any(|b| b.len() != n) {
            return Err(Error::DimensionMismatch(format!("nef basis needs {} classes of length {n}", n - 2)));
        }
        let x = QMat::from_rows(basis.iter().map(|b| b.iter().map(|&c| Rat::int(c)).collect()).collect());
        let dots = &x * &ints;
        if dots.entries().any(Rat::is_negative) {
            return Err(Error::Unsupported("supplied classes are not nef".into()));
        }
        let intersection = &dots * &x.transpose();
        if !intersection.det().abs().is_one() {
            return Err(Error::Unsupported("supplied classes are not a basis of H^2(S, Z)".into()));
        }
        Ok(ToricSurfaceData { rays, self_intersections: selfs, nef_basis: basis, intersection })
    }

    pub fn picard_rank(&self) -> usize {
        self.nef_basis.len()
    }

    /// Intersection matrix of the ray divisors.
    pub fn divisor_intersections(&self) -> QMat {
        fan_intersections(&self.rays).expect("checked at construction").1
    }

    /// `-K_S . gamma_j`.
    pub fn anticanonical_degrees(&self) -> Vec<Rat> {
        self.nef_basis.iter().map(|b| Rat::int(self.sum_dots(b))).collect()
    }

    fn sum_dots(&self, b: &[i64]) -> i64 {
        let ints = self.divisor_intersections();
        let n = self.rays.len();
        (0..n)
            .map(|a| (0..n).map(|c| b[c] * ints[(c, a)].to_i64().unwrap_or(0)).sum::<i64>())
            .sum()
    }

    pub fn projective_plane() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, -1]]).expect("P2 fan")
    }

    pub fn p1_times_p1() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).expect("P1xP1 fan")
    }

    /// Parses one ray `x y` per line; `#` starts a comment.
    pub fn parse_fan(text: &str) -> Result<Vec<[i64; 2]>> {
        content_lines(text)
            .map(|line| {
                let xs: Vec<i64> = line
                    .split_whitespace()
                    .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad ray entry {w:?}"))))
                    .collect::<Result<_>>()?;
                match xs[..] {
                    [x, y] => Ok([x, y]),
                    _ => Err(Error::Parse(format!("ray needs two integers: {line:?}"))),
                }
            })
            .collect()
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

/// Self-intersections and the divisor intersection matrix of a smooth
/// complete fan whose rays are listed counterclockwise.
fn fan_intersections(rays: &[[i64; 2]]) -> Result<(Vec<i64>, QMat)> {
    let n = rays.len();
    if n < 3 {
        return Err(Error::NotSmoothFan(format!("{n} rays")));
    }
    let next = |i: usize| (i + 1) % n;
    let prev = |i: usize| (i + n - 1) % n;
    let mut winding = 0;
    for i in 0..n {
        let (a, b) = (rays[i], rays[next(i)]);
        if det2(a, b) != 1 {
            return Err(Error::NotSmoothFan(format!("rays {i} and {} are not a positive basis", next(i))));
        }
        // (1, 0) = s a + t b with s >= 0, t > 0
        if det2([1, 0], b) >= 0 && det2(a, [1, 0]) > 0 {
            winding += 1;
        }
    }
    if winding != 1 {
        return Err(Error::NotSmoothFan(format!("rays wind {winding} times around the origin")));
    }
    let mut selfs = Vec::with_capacity(n);
    for i in 0..n {
        let v = rays[i];
        let u = [rays[prev(i)][0] + rays[next(i)][0], rays[prev(i)][1] + rays[next(i)][1]];
        let a = if v[0] != 0 { u[0] / v[0] } else { u[1] / v[1] };
        if a > 2 {
            return Err(Error::NotWeakFano);
        }
        selfs.push(-a);
    }
    let mut ints = QMat::zeros(n, n);
    for i in 0..n {
        ints[(i, i)] = Rat::int(selfs[i]);
        ints[(i, next(i))] = Rat::one();
        ints[(next(i), i)] = Rat::one();
    }
    Ok((selfs, ints))
}

/// Generators of the nef cone, found as the extremal rays of
/// `{x : x . D_a >= 0}` inside the image of the intersection matrix.
fn nef_generators(ints: &QMat) -> Result<Vec<Vec<i64>>> {
    let n = ints.rows();
    let image = QSubspace::image_of(ints);
    let mut found: Vec<Vec<i64>> = vec![];
    let candidates: Vec<QSubspace> = if image.dim() == 1 {
        vec![image.clone()]
    } else {
        (0..n)
            .map(|a| {
                let others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
                image.intersection(&QSubspace::coordinate(n, &others))
            })
            .collect::<Result<_>>()?
    };
    for line in candidates.iter().filter(|l| l.dim() == 1) {
        let Some(mut w) = primitive(line.basis().row(0)) else { continue };
        if w.iter().all(|&x| x <= 0) {
            w.iter_mut().for_each(|x| *x = -*x);
        }
        if w.iter().any(|&x| x < 0) || found.iter().any(|f| f == &w) {
            continue;
        }
        found.push(w);
    }
    if found.len() != image.dim() {
        return Err(Error::Unsupported("nef cone is not simplicial".into()));
    }
    found
        .iter()
        .map(|w| {
            let rhs = QMat::column_vec(&w.iter().map(|&x| Rat::int(x)).collect::<Vec<_>>());
            let x = ints.solve(&rhs).ok_or(Error::NoSolution)?;
            x.col(0)
                .iter()
                .map(|c| c.to_i64().ok_or_else(|| Error::Unsupported("nef class has no integral lift".into())))
                .collect()
        })
        .collect()
}

/// Cohomology of `X` in the basis `Gamma_0..Gamma_{r+1}, Delta_0..Delta_{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCohomology {
    pub r: usize,
    /// `gamma_i . gamma_j` on `S`.
    pub intersection: QMat,
    /// Coordinates of `-c_1(K_S)` in the nef basis.
    pub anticanonical: Vec<Rat>,
    pub degrees: Vec<u32>,
    /// `cup[a]` is the matrix of `e_a` cup `*`.
    pub cup: Vec<QMat>,
    pub pairing: QMat,
}

impl LocalCohomology {
    pub fn dim(&self) -> usize {
        2 * (self.r + 2)
    }

    pub fn gamma(&self, j: usize) -> usize {
        j
    }

    pub fn delta(&self, j: usize) -> usize {
        self.r + 2 + j
    }

    /// `Delta_0` cup `*`.
    pub fn residue(&self) -> &QMat {
        &self.cup[self.delta(0)]
    }

    /// The class pairing to 1 with `e_k` and to 0 with every other basis vector.
    pub fn dual(&self, k: usize) -> Vec<Rat> {
        let inv = self.pairing.inverse().expect("pairing is nondegenerate");
        inv.col(k)
    }

    pub fn product(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (o, x) in out.iter_mut().zip(self.cup[i].mul_vec(b)) {
                *o += &(ai * &x);
            }
        }
        out
    }

    pub fn integrate(&self, a: &[Rat]) -> Rat {
        a[self.delta(self.r + 1)].clone()
    }
}

/// Product on `H*(S)` in the basis `1, gamma_1..gamma_r, pt`.
fn surface_product(s: &QMat, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let r = s.rows();
    let mut out = vec![Rat::zero(); r + 2];
    out[0] = &a[0] * &b[0];
    for i in 1..=r {
        out[i] = &(&a[0] * &b[i]) + &(&a[i] * &b[0]);
    }
    let mut top = &(&a[0] * &b[r + 1]) + &(&a[r + 1] * &b[0]);
    for i in 0..r {
        for j in 0..r {
            top += &(&(&a[i + 1] * &s[(i, j)]) * &b[j + 1]);
        }
    }
    out[r + 1] = top;
    out
}

pub fn build_cohomology(s: &ToricSurfaceData) -> Result<LocalCohomology> {
    let r = s.picard_rank();
    let m = r + 2;
    let n = 2 * m;
    let sint = s.intersection.clone();
    let kdeg = QMat::column_vec(&s.anticanonical_degrees());
    let kappa = sint.solve(&kdeg).ok_or(Error::NoSolution)?.col(0);
    let mut kvec = vec![Rat::zero(); m];
    kvec[1..=r].clone_from_slice(&kappa);
    let add = |x: &[Rat], y: &[Rat]| -> Vec<Rat> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    // (A + xi B)(A' + xi B') = AA' + xi (AB' + BA' + kappa BB'), using xi^2 = xi kappa
    let mul = |x: &[Rat], y: &[Rat]| -> Vec<Rat> {
        let (a, b) = x.split_at(m);
        let (a2, b2) = y.split_at(m);
        let mut out = surface_product(&sint, a, a2);
        let bb = surface_product(&sint, b, b2);
        let lin = add(&add(&surface_product(&sint, a, b2), &surface_product(&sint, b, a2)), &surface_product(&sint, &kvec, &bb));
        out.extend(lin);
        out
    };
    let unit = |k: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[k] = Rat::one();
        v
    };
    let cup: Vec<QMat> = (0..n)
        .map(|a| QMat::from_cols(n, &(0..n).map(|b| mul(&unit(a), &unit(b))).collect::<Vec<_>>()))
        .collect();
    let pairing = QMat::from_rows((0..n).map(|a| (0..n).map(|b| cup[a][(n - 1, b)].clone()).collect()).collect());
    let sdeg = |j: usize| if j == 0 { 0 } else if j <= r { 2 } else { 4 };
    let degrees = (0..n).map(|a| if a < m { sdeg(a) } else { sdeg(a - m) + 2 }).collect();
    if pairing.det().is_zero() {
        return Err(Error::DimensionMismatch("Poincare pairing is degenerate".into()));
    }
    Ok(LocalCohomology { r, intersection: sint, anticanonical: kappa, degrees, cup, pairing })
}

/// Local GW invariants `N_d` indexed by `d_i = gamma_i . d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GWTable {
    pub r: usize,
    pub entries: BTreeMap<Vec<u32>, Rat>,
    pub cutoff: u32,
}

impl GWTable {
    pub fn new(r: usize, entries: BTreeMap<Vec<u32>, Rat>, cutoff: u32) -> Result<Self> {
        for d in entries.keys() {
            if d.len() != r {
                return Err(Error::DimensionMismatch(format!("class {d:?} has {} coordinates, expected {r}", d.len())));
            }
            let total: u32 = d.iter().sum();
            if total == 0 {
                return Err(Error::Parse("class d = 0 is not allowed".into()));
            }
            if total > cutoff {
                return Err(Error::Parse(format!("class {d:?} exceeds the cutoff {cutoff}")));
            }
        }
        Ok(GWTable { r, entries, cutoff })
    }

    pub fn zero(r: usize, cutoff: u32) -> Self {
        GWTable { r, entries: BTreeMap::new(), cutoff }
    }

    /// Lines `d_1 .. d_r : p/q`; the cutoff defaults to the largest total degree.
    pub fn parse(text: &str, r: usize, cutoff: Option<u32>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for line in content_lines(text) {
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in {line:?}")))?;
            let d: Vec<u32> = lhs
                .split_whitespace()
                .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad degree {w:?}"))))
                .collect::<Result<_>>()?;
            let n: Rat = rhs.trim().parse().map_err(|_| Error::Parse(format!("bad invariant {:?}", rhs.trim())))?;
            if entries.insert(d.clone(), n).is_some() {
                return Err(Error::Parse(format!("class {d:?} listed twice")));
            }
        }
        let top = entries.keys().map(|d: &Vec<u32>| d.iter().sum()).max().unwrap_or(0);
        Self::new(r, entries, cutoff.unwrap_or(top))
    }
}

/// Small quantum connection of `X` restricted to `q_0 = 0` near `z`, with the
/// residue `N = Delta_0 cup` along `q_0 = 0`.
#[derive(Clone, Debug)]
pub struct QuantumConnection {
    pub cohomology: LocalCohomology,
    pub base_point: Vec<Rat>,
    pub data: MixedTrTLEPData,
    pub residue: NilpotentData,
}

/// Higgs field `C_{q_i d/dq_i}` with `q^d = z^d exp(d . t)`, `U = C_E = 2N`,
/// `V = 3/2 - deg/2` and the Poincare pairing in weight 0.
pub fn small_quantum_connection(
    s: &ToricSurfaceData,
    gw: &GWTable,
    z: &[Rat],
    order: u32,
) -> Result<QuantumConnection> {
    let coh = build_cohomology(s)?;
    let r = coh.r;
    if gw.r != r || z.len() != r {
        return Err(Error::DimensionMismatch(format!("Picard rank is {r}")));
    }
    if z.iter().any(Rat::is_zero) {
        return Err(Error::DimensionMismatch("base point must lie in the torus".into()));
    }
    if gw.cutoff < order {
        return Err(Error::CutoffTooSmall { cutoff: gw.cutoff, order });
    }
    let ring = JetRing::base(r, order)?;
    let n = coh.dim();
    let nil = coh.residue().clone();
    let duals: Vec<Vec<Rat>> = (1..=r).map(|k| coh.dual(coh.gamma(k))).collect();
    let series: Vec<(Vec<u32>, Jet)> = gw
        .entries
        .iter()
        .map(|(d, nd)| {
            let zd = d.iter().zip(z).fold(nd.clone(), |acc, (&e, zi)| &acc * &zi.pow(e as i64));
            let jet = d
                .iter()
                .enumerate()
                .fold(Jet::constant(&ring, zd), |acc, (i, &e)| acc.mul(&exp_linear(&ring, i, &Rat::int(e as i64))));
            (d.clone(), jet)
        })
        .collect();
    let c: Vec<JMat> = (1..=r)
        .map(|i| {
            let mut ci = JMat::constant(&ring, coh.cup[coh.gamma(i)].clone());
            for (d, phi) in &series {
                let mut corr = QMat::zeros(n, n);
                for j in 1..=r {
                    let mut col = vec![Rat::zero(); n];
                    for (k, dual) in duals.iter().enumerate() {
                        let w = Rat::int(d[i - 1] as i64 * d[j - 1] as i64 * d[k] as i64);
                        for (x, y) in col.iter_mut().zip(dual) {
                            *x += &(&w * y);
                        }
                    }
                    let delta_col = nil.mul_vec(&col);
                    for row in 0..n {
                        corr[(row, coh.gamma(j))] = col[row].clone();
                        corr[(row, coh.delta(j))] = delta_col[row].clone();
                    }
                }
                ci = ci.add(&JMat::constant(&ring, corr).scale_jet(phi));
            }
            ci
        })
        .collect();
    let u = JMat::constant(&ring, nil.scale(&Rat::int(2)));
    let v = QMat::diag(&coh.degrees.iter().map(|&d| &Rat::new(3, 2) - &Rat::new(d as i64, 2)).collect::<Vec<_>>());
    let frob = FrobTypeStructure::flat(&ring, c, u, JMat::constant(&ring, v));
    let data = MixedTrTLEPData { frob, weight: Flag::pure(n, 0), pairings: BTreeMap::from([(0, coh.pairing.clone())]) };
    let residue = NilpotentData::new(nil)?;
    Ok(QuantumConnection { cohomology: coh, base_point: z.to_vec(), data, residue })
}

/// Unit and grading identities, the residue, and the full trTLEP(0) checks.
pub fn quantum_certificate(qc: &QuantumConnection) -> Certificate {
    let mut cert = Certificate::new("small-quantum-connection");
    let coh = &qc.cohomology;
    let f = &qc.data.frob;
    for (i, ci) in f.c.iter().enumerate() {
        let unit = ci.col(coh.gamma(0));
        let mut expect = QMat::zeros(coh.dim(), 1);
        expect[(coh.gamma(i + 1), 0)] = Rat::one();
        cert.push_zero(format!("C{}:unit", i + 1), &unit.sub(&JMat::constant(&f.ring, expect)));
        cert.push_zero(format!("C{}:grading", i + 1), &f.v.commutator(ci).add(ci));
    }
    cert.push_qzero("residue=Delta0", &(&qc.residue.matrix - coh.residue()));
    let coker = QSubspace::image_of(&qc.residue.matrix).quotient();
    cert.push_bool("euler-vanishes-on-cokernel", f.u.all_terms(|x| coker.induced(x).is_zero()));
    cert.extend("", check_nilpotent_compat(&qc.data, &qc.residue));
    cert.extend("", check_mixed_trtlep(&qc.data));
    cert
}

/// Limit along `N` followed by the half twist that puts `V` at `2 - deg/2`.
pub fn limit_and_twist(qc: &QuantumConnection) -> Result<(MixedTrTLEPData, Certificate)> {
    let (lim, mut cert) = limit_mixed(&qc.data, &qc.residue)?;
    let twisted = tate_twist(&lim, &Rat::new(1, 2))?;
    cert.extend("twisted:", check_mixed_trtlep(&twisted));
    Ok((twisted, cert))
}

/// Output of the full local A-model pipeline.
#[derive(Clone, Debug)]
pub struct APipeline {
    pub connection: QuantumConnection,
    pub limit: MixedTrTLEPData,
    pub mfs: SaitoMFSData,
    pub certificates: Vec<Certificate>,
}

impl APipeline {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }
}

/// Connection, limit, universal unfolding at the class `Gamma_0` and the
/// induced mixed Frobenius manifold of charge 4.
pub fn local_a_pipeline(s: &ToricSurfaceData, gw: &GWTable, z: &[Rat], n: u32, d: u32) -> Result<APipeline> {
    let qc = small_quantum_connection(s, gw, z, d)?;
    let qcert = quantum_certificate(&qc);
    let (limit, lcert) = limit_and_twist(&qc)?;
    let mut zeta = vec![Rat::zero(); limit.frob.rank()];
    zeta[0] = Rat::one();
    let charge = Rat::int(4);
    let flags = section_conditions(&limit.frob, &zeta, &charge)?;
    if !flags.gc {
        return Err(Error::GCFails);
    }
    if !flags.ic {
        return Err(Error::ICFails);
    }
    if !flags.ec {
        return Err(Error::ConditionsNotMet("(EC)_4 fails for Gamma_0".into()));
    }
    let (unf, ucert) = universal_unfold(&limit, &zeta, n)?;
    let (g, pcert) = extend_pairings(&unf, &limit.pairings);
    let mfs = extract_mfs(&unf, &zeta, &charge, &g)?;
    let mcert = check_mfs(&mfs);
    Ok(APipeline { connection: qc, limit, mfs, certificates: vec![qcert, lcert, ucert, pcert, mcert] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn p2_table(n1: Rat) -> GWTable {
        GWTable::new(1, BTreeMap::from([(vec![1], n1), (vec![2], q(-45, 8)), (vec![3], Rat::int(27))]), 3).unwrap()
    }

    #[test]
    fn fan_checks() {
        let p2 = ToricSurfaceData::projective_plane();
        assert_eq!(p2.self_intersections, vec![1, 1, 1]);
        assert_eq!(p2.intersection, QMat::identity(1));
        assert_eq!(p2.anticanonical_degrees(), vec![Rat::int(3)]);
        let p1p1 = ToricSurfaceData::p1_times_p1();
        assert_eq!(p1p1.intersection, QMat::from_i64(&[&[0, 1], &[1, 0]]));
        let f2 = ToricSurfaceData::new(vec![[1, 0], [0, 1], [-1, 2], [0, -1]]).unwrap();
        assert_eq!(f2.self_intersections.iter().min(), Some(&-2));
        assert_eq!(ToricSurfaceData::new(vec![[1, 0], [0, 1], [-1, 3], [0, -1]]).unwrap_err(), Error::NotWeakFano);
        assert!(matches!(ToricSurfaceData::new(vec![[1, 0], [1, 2], [-1, -1]]), Err(Error::NotSmoothFan(_))));
        assert!(matches!(ToricSurfaceData::new(vec![[1, 0], [-1, -1], [0, 1]]), Err(Error::NotSmoothFan(_))));
    }

    #[test]
    fn p2_cohomology() {
        let coh = build_cohomology(&ToricSurfaceData::projective_plane()).unwrap();
        let e = |k: usize| {
            let mut v = vec![Rat::zero(); 6];
            v[k] = Rat::one();
            v
        };
        assert_eq!(coh.product(&e(1), &e(1)), e(2));
        assert_eq!(coh.pairing[(1, coh.delta(1))], Rat::one());
        for i in 0..3 {
            for j in 0..3 {
                assert!(coh.pairing[(i, j)].is_zero());
            }
        }
        // Delta_0^2 = -xi c_1(K) = 3 Delta_1
        assert_eq!(coh.product(&e(3), &e(3)), e(4).iter().map(|x| x * &Rat::int(3)).collect::<Vec<_>>());
        assert_eq!(coh.degrees, vec![0, 2, 4, 2, 4, 6]);
    }

    #[test]
    fn gw_table_parsing() {
        let t = GWTable::parse("# local P2\n1 : 3\n2 : -45/8\n", 1, None).unwrap();
        assert_eq!(t.cutoff, 2);
        assert_eq!(t.entries[&vec![2]], q(-45, 8));
        assert!(GWTable::parse("0 : 1", 1, None).is_err());
        assert!(GWTable::parse("1 1 : 1", 1, None).is_err());
        assert!(GWTable::parse("2 : 1", 1, Some(1)).is_err());
    }

    #[test]
    fn p2_connection() {
        let s = ToricSurfaceData::projective_plane();
        let z = [q(1, 10)];
        let qc = small_quantum_connection(&s, &p2_table(Rat::int(5)), &z, 3).unwrap();
        let cert = quantum_certificate(&qc);
        assert!(cert.passed(), "{:?}", cert.failures());
        let c = &qc.data.frob.c[0];
        // correction along Gamma_1^vee at t = 0 is N_1 z + 8 N_2 z^2 + 27 N_3 z^3
        let dual = qc.cohomology.dual(1);
        let corr = &c.at0().col(1)[4];
        let series = &(&q(1, 2) + &(&Rat::int(8) * &(&q(-45, 8) * &q(1, 100)))) + &(&Rat::int(27 * 27) * &q(1, 1000));
        assert_eq!(corr, &(&series * &dual[4]));
        assert_eq!(qc.data.frob.v.at0().col(0)[0], q(3, 2));
        assert!(matches!(small_quantum_connection(&s, &p2_table(Rat::one()), &z, 4), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn p2_limit() {
        let s = ToricSurfaceData::projective_plane();
        let qc = small_quantum_connection(&s, &p2_table(Rat::int(3)), &[q(1, 10)], 2).unwrap();
        let (lim, cert) = limit_and_twist(&qc).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!(lim.frob.rank(), 3);
        let v = lim.frob.v.at0();
        assert_eq!((0..3).map(|i| v[(i, i)].clone()).collect::<Vec<_>>(), vec![Rat::int(2), Rat::one(), Rat::zero()]);
        assert_eq!(lim.weight.weights(), vec![1, 4]);
        assert_eq!((lim.weight.graded_dim(1), lim.weight.graded_dim(4)), (2, 1));
        assert_eq!(lim.pairings[&4], QMat::scalar(1, &Rat::int(9)));
        assert!(lim.frob.u.is_zero());
    }

    #[test]
    fn p2_pipeline_and_gc_failure() {
        let s = ToricSurfaceData::projective_plane();
        let out = local_a_pipeline(&s, &p2_table(Rat::int(3)), &[q(1, 10)], 2, 2).unwrap();
        assert!(out.passed(), "{:?}", out.certificates.iter().flat_map(|c| c.failures()).collect::<Vec<_>>());
        assert_eq!(out.mfs.charge, Rat::int(4));
        assert_eq!(out.mfs.dim(), 3);
        let crafted = GWTable::new(1, BTreeMap::from([(vec![1], q(10, 3))]), 2).unwrap();
        assert_eq!(local_a_pipeline(&s, &crafted, &[q(1, 10)], 2, 2).unwrap_err(), Error::GCFails);
    }

    #[test]
    fn p1p1_pipeline() {
        let s = ToricSurfaceData::p1_times_p1();
        let gw = GWTable::parse("1 0 : -2\n0 1 : -2\n1 1 : 4\n2 1 : -6\n", 2, Some(3)).unwrap();
        let out = local_a_pipeline(&s, &gw, &[q(1, 10), q(-1, 7)], 3, 3).unwrap();
        assert!(out.passed(), "{:?}", out.certificates.iter().flat_map(|c| c.failures()).collect::<Vec<_>>());
        assert_eq!(out.mfs.dim(), 4);
        let dims: Vec<usize> = out.limit.weight.weights().iter().map(|&k| out.limit.weight.graded_dim(k)).collect();
        assert_eq!(out.limit.weight.weights(), vec![1, 2, 4]);
        assert_eq!(dims, vec![2, 1, 1]);
    }
}
