use serde::{Deserialize, Serialize};

use super::qmat::QMat;
use super::subspace::{QSubspace, Quotient};
use crate::error::{Error, Result};

/// Increasing exhaustive filtration of Q^n indexed by integers.
///
/// Stored as the distinct jumps; `at(k)` is the largest stored step with index
/// at most `k`, or zero below the first one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    ambient: usize,
    steps: Vec<(i32, QSubspace)>,
}

impl Flag {
    pub fn new(ambient: usize, mut steps: Vec<(i32, QSubspace)>) -> Result<Self> {
        steps.sort_by_key(|(k, _)| *k);
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DimensionMismatch(format!("weight {} listed twice", w[0].0)));
            }
            if !w[0].1.is_subspace_of(&w[1].1) {
                return Err(Error::DimensionMismatch(format!("W_{} is not inside W_{}", w[0].0, w[1].0)));
            }
        }
        if steps.iter().any(|(_, s)| s.ambient() != ambient) {
            return Err(Error::DimensionMismatch("flag step in wrong ambient space".into()));
        }
        if !steps.last().is_some_and(|(_, s)| s.is_full()) {
            return Err(Error::DimensionMismatch("flag is not exhaustive".into()));
        }
        let mut out: Vec<(i32, QSubspace)> = Vec::new();
        for (k, s) in steps {
            if s.is_zero() || out.last().is_some_and(|(_, p)| p == &s) {
                continue;
            }
            out.push((k, s));
        }
        Ok(Flag { ambient, steps: out })
    }

    /// The flag with a single jump `0 ⊂ Q^n` at weight `k`.
    pub fn pure(n: usize, k: i32) -> Self {
        Flag { ambient: n, steps: vec![(k, QSubspace::full(n))] }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &[(i32, QSubspace)] {
        &self.steps
    }

    pub fn at(&self, k: i32) -> QSubspace {
        self.steps
            .iter()
            .rev()
            .find(|(j, _)| *j <= k)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| QSubspace::zero(self.ambient))
    }

    /// Weights with a nonzero graded piece, increasing.
    pub fn weights(&self) -> Vec<i32> {
        self.steps.iter().map(|(k, _)| *k).collect()
    }

    pub fn graded_dim(&self, k: i32) -> usize {
        self.at(k).dim() - self.at(k - 1).dim()
    }

    /// Canonical representatives and coordinates of `Gr_k = W_k / W_{k-1}`.
    pub fn graded(&self, k: i32) -> Quotient {
        self.at(k).relative_quotient(&self.at(k - 1)).expect("flag steps are nested")
    }

    pub fn is_invariant_under(&self, a: &QMat) -> bool {
        self.steps.iter().all(|(_, s)| s.is_invariant_under(a))
    }

    /// Shifts indices: the result has `W'_k = W_{k + shift}`.
    pub fn reindex(&self, shift: i32) -> Flag {
        Flag { ambient: self.ambient, steps: self.steps.iter().map(|(k, s)| (k - shift, s.clone())).collect() }
    }

    /// Transports the flag along an invertible change of coordinates `p` (new = p * old).
    pub fn transform(&self, p: &QMat) -> Flag {
        Flag {
            ambient: self.ambient,
            steps: self.steps.iter().map(|(k, s)| (*k, s.image_under(p).expect("square matrix"))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    #[test]
    fn graded_pieces() {
        let w1 = QSubspace::span(3, &[vec![Rat::one(), Rat::one(), Rat::zero()]]);
        let f = Flag::new(3, vec![(1, w1), (4, QSubspace::full(3))]).unwrap();
        assert_eq!(f.graded_dim(1), 1);
        assert_eq!(f.graded_dim(2), 0);
        assert_eq!(f.graded_dim(4), 2);
        let g = f.graded(4);
        assert_eq!(&g.projection * &g.section, QMat::identity(2));
        assert_eq!(f.reindex(-2).graded_dim(6), 2);
    }

    #[test]
    fn rejects_non_nested() {
        let a = QSubspace::coordinate(2, &[0]);
        let b = QSubspace::coordinate(2, &[1]);
        assert!(Flag::new(2, vec![(0, a), (1, b), (2, QSubspace::full(2))]).is_err());
    }
}
