//! Toric Landau-Ginzburg data: Laurent polynomials, Jacobian rings with their
//! filtrations, Higgs fields and Gauss-Manin connections.

mod gm;
mod pipeline;
pub mod poly;
mod regular;
mod ring;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::rat::Rat;

pub use gm::{gm_connection, hodge_data, BHodgeData, GMJetData};
pub use pipeline::{b_model_pipeline, standard_polarization, BPipeline};
pub use regular::is_delta_regular;
pub use ring::{check_h2_generation, jacobian_ring, weight_filtration_on_r, H2Certificate, JacobianRingData, WeightData};

/// Laurent polynomial in `d` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != dim {
                return Err(Error::DimensionMismatch(format!("exponent {m:?} is not in dimension {dim}")));
            }
            *map.entry(m).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { dim, terms: map })
    }

    pub fn from_i64(dim: usize, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::new(dim, terms.iter().map(|(m, c)| (m.to_vec(), Rat::int(*c))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rat> {
        &self.terms
    }

    pub fn coeff(&self, m: &[i64]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        LatticePolytope::from_points(self.dim, &self.support())
    }

    /// Logarithmic derivative `t_i d/dt_i`, for `i` counted from 1.
    pub fn theta(&self, i: usize) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * &Rat::int(m[i - 1])));
        LaurentPoly::new(self.dim, terms).expect("same dimension")
    }

    /// `f` for `i = 0`, `theta_i f` otherwise.
    pub fn theta_or_self(&self, i: usize) -> LaurentPoly {
        if i == 0 {
            self.clone()
        } else {
            self.theta(i)
        }
    }

    pub fn add_term(&self, m: &[i64], c: &Rat) -> LaurentPoly {
        LaurentPoly::new(self.dim, self.terms.clone().into_iter().chain(std::iter::once((m.to_vec(), c.clone()))))
            .expect("same dimension")
    }

    /// Parses lines `m_1 .. m_d : p/q`; blank lines and `#` comments are ignored.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in {line:?}")))?;
            let m: Vec<i64> = lhs
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad exponent in {line:?}"))))
                .collect::<Result<_>>()?;
            let c: Rat = rhs.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient in {line:?}")))?;
            if m.len() != dim {
                return Err(Error::Parse(format!("exponent in {line:?} does not have {dim} entries")));
            }
            terms.push((m, c));
        }
        LaurentPoly::new(dim, terms)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*t^{m:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

/// Finite linear combination of cone monomials `t_0^k t^m`.
pub type ConeElement = BTreeMap<(u32, Vec<i64>), Rat>;

fn push(out: &mut ConeElement, key: (u32, Vec<i64>), c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(key.clone()).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&key);
    }
}

/// The twisted operator `L_f^0 = t_0 d/dt_0 + t_0 f` for `i = 0`, and
/// `L_f^i = t_i d/dt_i + t_0 theta_i f` for `1 <= i <= d`.
pub fn apply_lf(f: &LaurentPoly, i: usize, s: &ConeElement) -> ConeElement {
    let g = f.theta_or_self(i);
    let mut out = ConeElement::new();
    for ((k, m), c) in s {
        let low = if i == 0 { Rat::int(*k as i64) } else { Rat::int(m[i - 1]) };
        push(&mut out, (*k, m.clone()), &low * c);
        for (n, a) in g.terms() {
            let e: Vec<i64> = m.iter().zip(n).map(|(x, y)| x + y).collect();
            push(&mut out, (k + 1, e), a * c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p2_f() -> LaurentPoly {
        LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]).unwrap()
    }

    fn mono(k: u32, m: &[i64]) -> ConeElement {
        [((k, m.to_vec()), Rat::one())].into_iter().collect()
    }

    #[test]
    fn lf_on_unit() {
        let f = p2_f();
        let out = apply_lf(&f, 0, &mono(0, &[0, 0]));
        let expect: ConeElement = f.terms().iter().map(|(m, c)| ((1, m.clone()), c.clone())).collect();
        assert_eq!(out, expect);
    }

    #[test]
    fn lf_theta_one() {
        let out = apply_lf(&p2_f(), 1, &mono(1, &[0, 0]));
        let expect: ConeElement =
            [((2, vec![1, 0]), Rat::int(1)), ((2, vec![-1, -1]), Rat::int(-1))].into_iter().collect();
        assert_eq!(out, expect);
        let out = apply_lf(&p2_f(), 1, &mono(1, &[1, 0]));
        assert_eq!(out[&(1, vec![1, 0])], Rat::int(1));
    }

    #[test]
    fn parse_poly() {
        let f = LaurentPoly::parse(2, "1 0 : 1\n0 1 : 1\n-1 -1 : 1/1\n").unwrap();
        assert_eq!(f, p2_f());
        assert!(LaurentPoly::parse(2, "1 0 1\n").is_err());
    }
}
