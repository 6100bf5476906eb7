use serde::{Deserialize, Serialize};

use super::qmat::QMat;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A subspace of Q^n stored as the rows of its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSubspace {
    ambient: usize,
    basis: QMat,
    pivots: Vec<usize>,
}

impl QSubspace {
    pub fn zero(n: usize) -> Self {
        QSubspace { ambient: n, basis: QMat::zeros(0, n), pivots: vec![] }
    }

    pub fn full(n: usize) -> Self {
        Self::from_rows(&QMat::identity(n))
    }

    /// Span of the rows of `m`.
    pub fn from_rows(m: &QMat) -> Self {
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..m.cols()).collect();
        QSubspace { ambient: m.cols(), basis: r.submatrix(&keep, &all), pivots }
    }

    /// Span of the columns of `m`.
    pub fn from_cols(m: &QMat) -> Self {
        Self::from_rows(&m.transpose())
    }

    pub fn span(n: usize, vecs: &[Vec<Rat>]) -> Self {
        if vecs.is_empty() {
            return Self::zero(n);
        }
        Self::from_rows(&QMat::from_rows(vecs.to_vec()))
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        let vecs: Vec<Vec<Rat>> = idx
            .iter()
            .map(|&i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self::span(n, &vecs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Basis vectors as rows, in reduced echelon form.
    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    /// Basis vectors as columns.
    pub fn basis_cols(&self) -> QMat {
        self.basis.transpose()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &QSubspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    /// Residue of `v` after subtracting its echelon expansion; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, b) in out.iter_mut().zip(self.basis.row(row)) {
                if !b.is_zero() {
                    *o -= &c * b;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }

    pub fn is_subspace_of(&self, other: &QSubspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &QSubspace) -> Result<QSubspace> {
        self.check(other)?;
        Ok(Self::from_rows(&self.basis.vstack(&other.basis)))
    }

    pub fn intersection(&self, other: &QSubspace) -> Result<QSubspace> {
        self.check(other)?;
        // x A = y B  <=>  [A; -B]^T (x, y) = 0
        let stacked = self.basis.vstack(&(-&other.basis));
        let k = stacked.transpose().kernel();
        let coeff = k.submatrix(&(0..self.dim()).collect::<Vec<_>>(), &(0..k.cols()).collect::<Vec<_>>());
        Ok(Self::from_rows(&(&coeff.transpose() * &self.basis)))
    }

    /// Image of the subspace under the matrix `a` acting on column vectors.
    pub fn image_under(&self, a: &QMat) -> Result<QSubspace> {
        if a.cols() != self.ambient {
            return Err(Error::DimensionMismatch("matrix does not act on subspace".into()));
        }
        Ok(Self::from_cols(&(a * &self.basis_cols())))
    }

    pub fn is_invariant_under(&self, a: &QMat) -> bool {
        (0..self.dim()).all(|i| self.contains(&a.mul_vec(self.basis.row(i))))
    }

    /// Kernel of `a` acting on column vectors.
    pub fn kernel_of(a: &QMat) -> QSubspace {
        Self::from_cols(&a.kernel())
    }

    /// Column space of `a`.
    pub fn image_of(a: &QMat) -> QSubspace {
        Self::from_cols(a)
    }

    /// Quotient of the ambient space by this subspace.
    pub fn quotient(&self) -> Quotient {
        let n = self.ambient;
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut section = QMat::zeros(n, free.len());
        for (j, &f) in free.iter().enumerate() {
            section[(f, j)] = Rat::one();
        }
        let mut projection = QMat::zeros(free.len(), n);
        for c in 0..n {
            let e: Vec<Rat> = (0..n).map(|i| if i == c { Rat::one() } else { Rat::zero() }).collect();
            let red = self.reduce(&e);
            for (j, &f) in free.iter().enumerate() {
                projection[(j, c)] = red[f].clone();
            }
        }
        Quotient { section, projection }
    }

    /// Quotient of this subspace by a smaller one, with representatives drawn
    /// from the echelon rows of `self` whose pivots are new.
    pub fn relative_quotient(&self, lower: &QSubspace) -> Result<Quotient> {
        self.check(lower)?;
        if !lower.is_subspace_of(self) {
            return Err(Error::DimensionMismatch("lower subspace is not contained".into()));
        }
        let n = self.ambient;
        let new: Vec<usize> = (0..self.dim()).filter(|&i| !lower.pivots.contains(&self.pivots[i])).collect();
        let mut section = QMat::zeros(n, new.len());
        for (j, &row) in new.iter().enumerate() {
            for c in 0..n {
                section[(c, j)] = self.basis[(row, c)].clone();
            }
        }
        let mut projection = QMat::zeros(new.len(), n);
        for c in 0..n {
            let e: Vec<Rat> = (0..n).map(|i| if i == c { Rat::one() } else { Rat::zero() }).collect();
            let red = lower.reduce(&e);
            for (j, &row) in new.iter().enumerate() {
                projection[(j, c)] = red[self.pivots[row]].clone();
            }
        }
        Ok(Quotient { section, projection })
    }
}

/// Representatives of a quotient (`section`, columns) and the coordinate map
/// `projection`, with `projection * section = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub section: QMat,
    pub projection: QMat,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.section.cols()
    }

    /// Matrix induced on the quotient by an endomorphism preserving the relevant subspaces.
    pub fn induced(&self, a: &QMat) -> QMat {
        &(&self.projection * a) * &self.section
    }
}

impl Serialize for QSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            ambient: usize,
            basis: &'a QMat,
        }
        Repr { ambient: self.ambient, basis: &self.basis }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ambient: usize,
            basis: Vec<Vec<Rat>>,
        }
        let r = Repr::deserialize(d)?;
        if r.basis.iter().any(|v| v.len() != r.ambient) {
            return Err(serde::de::Error::custom("basis vector length differs from ambient dimension"));
        }
        Ok(QSubspace::span(r.ambient, &r.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<Rat> {
        x.iter().map(|&a| Rat::int(a)).collect()
    }

    #[test]
    fn quotient_example() {
        let s = QSubspace::span(2, &[v(&[1, 0])]);
        let qt = s.quotient();
        assert_eq!(qt.section, QMat::from_i64(&[&[0], &[1]]));
        assert_eq!(qt.projection, QMat::from_i64(&[&[0, 1]]));
        assert_eq!(&qt.projection * &qt.section, QMat::identity(1));
    }

    #[test]
    fn intersection_and_sum() {
        let a = QSubspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = QSubspace::span(3, &[v(&[0, 1, 1]), v(&[1, 1, 0])]);
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, QSubspace::span(3, &[v(&[1, 1, 0])]));
        assert!(a.sum(&b).unwrap().is_full());
    }

    #[test]
    fn relative_quotient_coordinates() {
        let lower = QSubspace::span(3, &[v(&[1, 1, 0])]);
        let upper = QSubspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let qt = upper.relative_quotient(&lower).unwrap();
        assert_eq!(qt.dim(), 1);
        assert_eq!(&qt.projection * &qt.section, QMat::identity(1));
        assert!(qt.projection.mul_vec(&v(&[1, 1, 0])).iter().all(Rat::is_zero));
    }
}
