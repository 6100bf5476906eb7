//! JSON encoding of jets, structures and reports.
//!
//! A jet matrix is a map from exponent keys (`"1,0"`) to row-major constant
//! matrices, listing only the nonzero terms. Rationals are strings `"p/q"`.
//! All maps are emitted with sorted keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::jet::{JMat, JetRing, Ring};
use crate::linalg::{Flag, QMat, QSubspace};
use crate::rat::Rat;
use crate::trtlep::{FrobTypeStructure, MixedTrTLEPData, SaitoMFSData};

pub type JMatJson = BTreeMap<String, QMat>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub t_vars: usize,
    #[serde(default)]
    pub y_vars: usize,
    pub order: u32,
    #[serde(default)]
    pub y_order: u32,
}

impl RingJson {
    pub fn of(ring: &Ring) -> Self {
        RingJson { t_vars: ring.nt(), y_vars: ring.ny(), order: ring.order(), y_order: ring.y_order() }
    }

    pub fn build(&self) -> Result<Ring> {
        JetRing::new(self.t_vars, self.y_vars, self.order, self.y_order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStep {
    pub k: i32,
    /// Basis vectors of `W_k`.
    pub basis: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureJson {
    pub rank: usize,
    pub ring: RingJson,
    pub c: Vec<JMatJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<JMatJson>>,
    pub u: JMatJson,
    pub v: JMatJson,
    /// Missing means pure of weight 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<WeightStep>>,
    pub pairings: BTreeMap<i32, QMat>,
}

pub fn jmat_to_json(m: &JMat) -> JMatJson {
    m.nonzero_terms().map(|(i, q)| (m.ring().key(i), q.clone())).collect()
}

pub fn jmat_from_json(ring: &Ring, rows: usize, cols: usize, j: &JMatJson) -> Result<JMat> {
    let terms = j
        .iter()
        .map(|(k, q)| {
            if q.rows() != rows || q.cols() != cols {
                return Err(Error::DimensionMismatch(format!("term {k:?} is {}x{}, expected {rows}x{cols}", q.rows(), q.cols())));
            }
            Ok((ring.parse_key(k)?, q.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JMat::from_terms(ring, rows, cols, terms))
}

pub fn flag_to_json(f: &Flag) -> Vec<WeightStep> {
    f.steps().iter().map(|(k, s)| WeightStep { k: *k, basis: s.basis().to_rows() }).collect()
}

pub fn flag_from_json(n: usize, steps: &[WeightStep]) -> Result<Flag> {
    let steps = steps
        .iter()
        .map(|s| {
            if s.basis.iter().any(|v| v.len() != n) {
                return Err(Error::DimensionMismatch(format!("W_{} has a vector of the wrong length", s.k)));
            }
            Ok((s.k, QSubspace::span(n, &s.basis)))
        })
        .collect::<Result<Vec<_>>>()?;
    Flag::new(n, steps)
}

impl StructureJson {
    pub fn of(t: &MixedTrTLEPData) -> Self {
        let f = &t.frob;
        let a = f.a.iter().any(|a| !a.is_zero()).then(|| f.a.iter().map(jmat_to_json).collect());
        StructureJson {
            rank: f.rank(),
            ring: RingJson::of(&f.ring),
            c: f.c.iter().map(jmat_to_json).collect(),
            a,
            u: jmat_to_json(&f.u),
            v: jmat_to_json(&f.v),
            weight: Some(flag_to_json(&t.weight)),
            pairings: t.pairings.clone(),
        }
    }

    pub fn build(&self) -> Result<MixedTrTLEPData> {
        let ring = self.ring.build()?;
        let r = self.rank;
        if self.c.len() != ring.nvars() {
            return Err(Error::DimensionMismatch(format!("{} Higgs components for {} variables", self.c.len(), ring.nvars())));
        }
        let jm = |j: &JMatJson| jmat_from_json(&ring, r, r, j);
        let c = self.c.iter().map(jm).collect::<Result<Vec<_>>>()?;
        let mut frob = FrobTypeStructure::flat(&ring, c, jm(&self.u)?, jm(&self.v)?);
        if let Some(a) = &self.a {
            if a.len() != ring.nvars() {
                return Err(Error::DimensionMismatch("one connection matrix per variable expected".into()));
            }
            frob.a = a.iter().map(jm).collect::<Result<_>>()?;
        }
        let weight = match &self.weight {
            Some(steps) => flag_from_json(r, steps)?,
            None => Flag::pure(r, 0),
        };
        for k in weight.weights() {
            let g = self.pairings.get(&k).ok_or_else(|| Error::Parse(format!("missing pairing g_{k}")))?;
            let d = weight.graded_dim(k);
            if g.rows() != d || g.cols() != d {
                return Err(Error::DimensionMismatch(format!("g_{k} must be {d}x{d}")));
            }
        }
        Ok(MixedTrTLEPData { frob, weight, pairings: self.pairings.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MFSJson {
    pub dim: usize,
    pub ring: RingJson,
    pub product: Vec<JMatJson>,
    pub unit: JMatJson,
    pub euler: JMatJson,
    pub filtration: Vec<WeightStep>,
    pub metrics: BTreeMap<i32, JMatJson>,
    pub charge: Rat,
}

impl MFSJson {
    pub fn of(m: &SaitoMFSData) -> Self {
        MFSJson {
            dim: m.dim(),
            ring: RingJson::of(&m.ring),
            product: m.product.iter().map(jmat_to_json).collect(),
            unit: jmat_to_json(&m.unit),
            euler: jmat_to_json(&m.euler),
            filtration: flag_to_json(&m.filtration),
            metrics: m.metrics.iter().map(|(k, g)| (*k, jmat_to_json(g))).collect(),
            charge: m.charge.clone(),
        }
    }
}

/// Converts to a JSON value whose objects are all key-sorted.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

/// Pretty, key-sorted JSON followed by a newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("valid JSON value");
    s.push('\n');
    s
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::suite::random_suite;

    #[test]
    fn structure_roundtrip() {
        for inst in random_suite(0, 6, 2) {
            let j = StructureJson::of(&inst.data);
            let text = render(&to_value(&j));
            let back: StructureJson = parse_json(&text).unwrap();
            assert_eq!(back.build().unwrap(), inst.data);
        }
    }

    #[test]
    fn rejects_bad_terms() {
        let mut j = StructureJson::of(&random_suite(0, 1, 2)[0].data);
        j.u.insert("9,9,9".into(), QMat::zeros(j.rank, j.rank));
        assert!(matches!(j.build(), Err(Error::Parse(_))));
        let mut j = StructureJson::of(&random_suite(0, 1, 2)[0].data);
        j.pairings.clear();
        assert!(j.build().is_err());
    }

    #[test]
    fn sorted_keys() {
        let v = serde_json::json!({"b": 1, "a": {"z": 0, "c": 2}});
        assert_eq!(render(&v), "{\n  \"a\": {\n    \"c\": 2,\n    \"z\": 0\n  },\n  \"b\": 1\n}\n");
    }
}
