//! Lattice polytopes, their cones and graded lattice-point slices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::rat::Rat;

/// Facet `{ m : <m, normal> + offset >= 0 }` with primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, m: &[i64]) -> i64 {
        dot(&self.normal, m) + self.offset
    }

    /// Value of the facet inequality at the cone point `(k, m)`.
    pub fn eval_cone(&self, k: i64, m: &[i64]) -> i64 {
        dot(&self.normal, m) + k * self.offset
    }
}

/// Full-dimensional convex lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
}

/// Lattice points of `k * Delta`, i.e. the exponents `(k, m)` of degree `k` in the cone ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupDegree {
    pub k: u32,
    pub points: Vec<Vec<i64>>,
}

/// Faces of the cone over a polytope with a fixed codimension, each given by
/// the indices of the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeFaceSet {
    pub codim: usize,
    pub faces: Vec<Vec<usize>>,
}

/// Outcome of the degree-one generation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generation {
    pub generated: bool,
    pub first_failure: Option<u32>,
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// Determinant of a small integer matrix by cofactor expansion.
fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0] as i128,
        2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * int_det(&minor)
            })
            .sum(),
    }
}

/// Integer vector orthogonal to `d - 1` vectors in `Z^d` (generalized cross product).
fn orthogonal(vs: &[Vec<i64>], d: usize) -> Vec<i64> {
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                vs.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            (s * int_det(&minor)) as i64
        })
        .collect()
}

fn rank_i64(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::int(x)).collect()).collect()).rank()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl LatticePolytope {
    /// Convex hull of a finite set of lattice points in `Z^dim`.
    pub fn from_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("point of wrong length".into()));
        }
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if dim == 0 || pts.len() <= dim {
            return Err(Error::NotFullDimensional);
        }
        let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
        if rank_i64(&diffs) < dim {
            return Err(Error::NotFullDimensional);
        }
        let mut facets = BTreeSet::new();
        for comb in combinations(pts.len(), dim) {
            let base = &pts[comb[0]];
            let vs: Vec<Vec<i64>> =
                comb[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let u = orthogonal(&vs, dim);
            if u.iter().all(|&x| x == 0) {
                continue;
            }
            let u = primitive(u);
            let c = dot(&u, base);
            let vals: Vec<i64> = pts.iter().map(|p| dot(&u, p) - c).collect();
            if vals.iter().all(|&v| v >= 0) {
                facets.insert(Facet { offset: -c, normal: u });
            } else if vals.iter().all(|&v| v <= 0) {
                facets.insert(Facet { offset: c, normal: u.iter().map(|x| -x).collect() });
            }
        }
        let facets: Vec<Facet> = facets.into_iter().collect();
        let vertices: Vec<Vec<i64>> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<i64>> = facets.iter().filter(|f| f.eval(p) == 0).map(|f| f.normal.clone()).collect();
                rank_i64(&tight) == dim
            })
            .collect();
        Ok(LatticePolytope { dim, vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(m) >= 0)
    }

    pub fn contains_in_interior(&self, m: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(m) > 0)
    }

    /// Integer points of `k * Delta`, sorted lexicographically.
    pub fn lattice_points(&self, k: u32) -> SemigroupDegree {
        let k64 = k as i64;
        let lo: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap() * k64).collect();
        let hi: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap() * k64).collect();
        let mut points = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.facets.iter().all(|f| f.eval_cone(k64, &cur) >= 0) {
                points.push(cur.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return SemigroupDegree { k, points };
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..].copy_from_slice(&lo[i + 1..]);
                    break;
                }
            }
        }
    }

    /// Number of lattice points of the polytope itself.
    pub fn num_lattice_points(&self) -> usize {
        self.lattice_points(1).points.len()
    }

    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset == 1)
    }

    /// The polar `{ u : <m, u> >= -1 for all m in Delta }`, which must be a lattice polytope.
    pub fn dual_polytope(&self) -> Result<LatticePolytope> {
        if !self.contains_in_interior(&vec![0; self.dim]) {
            return Err(Error::Unsupported("origin is not an interior point".into()));
        }
        let mut verts = Vec::new();
        for f in &self.facets {
            if f.normal.iter().any(|x| x % f.offset != 0) {
                return Err(Error::NotLattice);
            }
            verts.push(f.normal.iter().map(|x| x / f.offset).collect());
        }
        LatticePolytope::from_points(self.dim, &verts)
    }

    /// Indices of the facets through the cone point `(k, m)`, or `None` if it lies outside the cone.
    pub fn tight_facets(&self, k: i64, m: &[i64]) -> Option<Vec<usize>> {
        if k < 0 || (k == 0 && m.iter().any(|&x| x != 0)) {
            return None;
        }
        let vals: Vec<i64> = self.facets.iter().map(|f| f.eval_cone(k, m)).collect();
        if vals.iter().any(|&v| v < 0) {
            return None;
        }
        Some(vals.iter().enumerate().filter(|(_, &v)| v == 0).map(|(i, _)| i).collect())
    }

    fn cone_rank(&self, facets: &[usize]) -> usize {
        let rows: Vec<Vec<i64>> = facets
            .iter()
            .map(|&i| std::iter::once(self.facets[i].offset).chain(self.facets[i].normal.iter().copied()).collect())
            .collect();
        rank_i64(&rows)
    }

    /// Codimension in the cone of the smallest face containing `(k, m)`.
    pub fn face_codim(&self, k: i64, m: &[i64]) -> Option<usize> {
        self.tight_facets(k, m).map(|t| self.cone_rank(&t))
    }

    /// Membership of `(k, m)` in the index set `I(l)`: it lies on no face of codimension `>= l`.
    pub fn in_weight_index(&self, l: usize, k: i64, m: &[i64]) -> bool {
        self.face_codim(k, m).is_some_and(|c| c < l)
    }

    /// All faces of the cone of codimension `codim`, as sets of containing facets.
    pub fn cone_faces(&self, codim: usize) -> ConeFaceSet {
        let nf = self.facets.len();
        let on: Vec<BTreeSet<usize>> =
            self.facets.iter().map(|f| (0..self.vertices.len()).filter(|&v| f.eval(&self.vertices[v]) == 0).collect()).collect();
        let mut faces = BTreeSet::new();
        if codim == 0 {
            faces.insert(vec![]);
        }
        for size in 1..=nf.min(self.dim + 1) {
            for comb in combinations(nf, size) {
                let common: BTreeSet<usize> =
                    comb.iter().skip(1).fold(on[comb[0]].clone(), |acc, &i| acc.intersection(&on[i]).copied().collect());
                let closure: Vec<usize> = if common.is_empty() {
                    (0..nf).collect()
                } else {
                    (0..nf).filter(|&i| common.is_subset(&on[i])).collect()
                };
                if self.cone_rank(&closure) == codim {
                    faces.insert(closure);
                }
            }
        }
        ConeFaceSet { codim, faces: faces.into_iter().collect() }
    }

    /// Checks that every point of `k * Delta` for `2 <= k <= kmax` is a sum of `k` points of `Delta`.
    pub fn degree_one_generates(&self, kmax: u32) -> Generation {
        let s1 = self.lattice_points(1).points;
        let mut sums: BTreeSet<Vec<i64>> = s1.iter().cloned().collect();
        for k in 2..=kmax {
            sums = sums
                .iter()
                .flat_map(|a| s1.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>()))
                .collect();
            let full = self.lattice_points(k).points;
            if full.len() != sums.len() || full.iter().any(|p| !sums.contains(p)) {
                return Generation { generated: false, first_failure: Some(k) };
            }
        }
        Generation { generated: true, first_failure: None }
    }

    /// Smoothness of the toric surface of a polygon: the cone spanned by the
    /// normals of each pair of adjacent edges is unimodular.
    pub fn is_fano_d2(&self) -> Result<bool> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        for v in &self.vertices {
            let t: Vec<&Facet> = self.facets.iter().filter(|f| f.eval(v) == 0).collect();
            if t.len() != 2 {
                return Ok(false);
            }
            let det = t[0].normal[0] * t[1].normal[1] - t[0].normal[1] * t[1].normal[0];
            if det.abs() != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses the text format: the first line is `d`, then one vertex per
    /// line as `d` integers. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
        let d: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polytope file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the dimension".into()))?;
        let mut pts = Vec::new();
        for l in lines {
            let p: Vec<i64> = l
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate in {l:?}"))))
                .collect::<Result<_>>()?;
            if p.len() != d {
                return Err(Error::Parse(format!("vertex {l:?} does not have {d} coordinates")));
            }
            pts.push(p);
        }
        LatticePolytope::from_points(d, &pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> LatticePolytope {
        LatticePolytope::from_points(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap()
    }

    #[test]
    fn hull_drops_inner_points() {
        let p = LatticePolytope::from_points(2, &[vec![1, 0], vec![0, 1], vec![-1, -1], vec![0, 0]]).unwrap();
        assert_eq!(p, p2());
        assert_eq!(p.facets().len(), 3);
    }

    #[test]
    fn p2_points() {
        assert_eq!(p2().lattice_points(0).points, vec![vec![0, 0]]);
        assert_eq!(p2().lattice_points(1).points, vec![vec![-1, -1], vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(p2().lattice_points(2).points.len(), 10);
    }

    #[test]
    fn reflexivity_and_dual() {
        assert!(p2().is_reflexive());
        let d = p2().dual_polytope().unwrap();
        assert_eq!(d.vertices(), &[vec![-1, -1], vec![-1, 2], vec![2, -1]]);
        assert_eq!(d.dual_polytope().unwrap(), p2());
        let big = LatticePolytope::from_points(2, &[vec![2, 0], vec![0, 2], vec![-2, -2]]).unwrap();
        assert!(!big.is_reflexive());
        assert!(!LatticePolytope::from_points(2, &[vec![1, 0], vec![2, 0], vec![3, 0]]).is_ok());
    }

    #[test]
    fn face_codims() {
        let p = p2();
        assert_eq!(p.face_codim(1, &[0, 0]), Some(0));
        assert_eq!(p.face_codim(1, &[1, 0]), Some(2));
        assert_eq!(p.face_codim(2, &[1, 1]), Some(1));
        assert_eq!(p.face_codim(0, &[0, 0]), Some(3));
        assert!(p.in_weight_index(1, 1, &[0, 0]));
        assert!(!p.in_weight_index(2, 1, &[1, 0]));
        assert!(p.in_weight_index(3, 1, &[1, 0]));
        assert!(!p.in_weight_index(3, 0, &[0, 0]));
        assert_eq!(p.cone_faces(1).faces.len(), 3);
        assert_eq!(p.cone_faces(2).faces.len(), 3);
        assert_eq!(p.cone_faces(3).faces.len(), 1);
    }

    #[test]
    fn generation() {
        assert!(p2().degree_one_generates(5).generated);
        let thin = LatticePolytope::from_points(3, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]).unwrap();
        assert_eq!(thin.degree_one_generates(3), Generation { generated: false, first_failure: Some(2) });
    }

    #[test]
    fn smoothness() {
        assert!(!p2().is_fano_d2().unwrap());
        assert!(p2().dual_polytope().unwrap().is_fano_d2().unwrap());
    }

    #[test]
    fn parse_file() {
        let p = LatticePolytope::parse("# P2\n2\n1 0\n0 1\n-1 -1\n").unwrap();
        assert_eq!(p, p2());
        assert!(LatticePolytope::parse("2\n1 x\n").is_err());
    }
}
