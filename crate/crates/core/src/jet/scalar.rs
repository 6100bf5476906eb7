use std::fmt;
use super::ring::{Prec, Ring};
#[cfg(test)]
use super::ring::JetRing;
use crate::rat::Rat;

/// Truncated power series with rational coefficients.
#[derive(Clone)]
pub struct Jet {
    ring: Ring,
    coeffs: Vec<Rat>,
    prec: Prec,
}

impl Jet {
    pub fn zero(ring: &Ring) -> Self {
        Jet { ring: ring.clone(), coeffs: vec![Rat::zero(); ring.len()], prec: ring.full_prec() }
    }

    pub fn constant(ring: &Ring, c: Rat) -> Self {
        let mut j = Self::zero(ring);
        j.coeffs[0] = c;
        j
    }

    pub fn var(ring: &Ring, v: usize) -> Self {
        let mut j = Self::zero(ring);
        if let Some(i) = ring.up(v, 0) {
            j.coeffs[i] = Rat::one();
        }
        j
    }

    /// Builds a jet from `(exponents, coefficient)` terms; terms beyond the truncation are dropped.
    pub fn from_terms(ring: &Ring, terms: &[(Vec<u32>, Rat)]) -> Self {
        let mut j = Self::zero(ring);
        for (e, c) in terms {
            if let Some(i) = ring.index_of(e) {
                j.coeffs[i] += c;
            }
        }
        j
    }

    pub(crate) fn from_parts(ring: Ring, coeffs: Vec<Rat>, prec: Prec) -> Self {
        let mut j = Jet { ring, coeffs, prec };
        j.clip();
        j
    }

    fn clip(&mut self) {
        let ring = self.ring.clone();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            if !ring.within(i, self.prec) && !c.is_zero() {
                *c = Rat::zero();
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn with_prec(mut self, p: Prec) -> Self {
        self.prec = self.prec.min(p);
        self.clip();
        self
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.ring.index_of(e).map_or(Rat::zero(), |i| self.coeffs[i].clone())
    }

    pub fn at0(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Rat::is_zero)
    }

    fn check(&self, o: &Jet) {
        assert!(self.ring.same(&o.ring), "jets from different rings");
    }

    pub fn add(&self, o: &Jet) -> Jet {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Jet::from_parts(self.ring.clone(), coeffs, self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Jet::from_parts(self.ring.clone(), coeffs, self.prec.min(o.prec))
    }

    pub fn neg(&self) -> Jet {
        Jet { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }

    pub fn scale(&self, c: &Rat) -> Jet {
        Jet { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect(), prec: self.prec }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        self.check(o);
        let mut out = vec![Rat::zero(); self.ring.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, k) in self.ring.mul_table(i) {
                let b = &o.coeffs[j];
                if !b.is_zero() {
                    out[k] += a * b;
                }
            }
        }
        Jet::from_parts(self.ring.clone(), out, self.prec.min(o.prec))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Jet> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![Rat::zero(); self.ring.len()];
        out[0] = inv0.clone();
        for k in 1..self.ring.len() {
            let mut s = Rat::zero();
            for &(i, j) in self.ring.factor_pairs(k) {
                if i == 0 || self.coeffs[i].is_zero() || out[j].is_zero() {
                    continue;
                }
                s += &self.coeffs[i] * &out[j];
            }
            out[k] = -(&s * &inv0);
        }
        Some(Jet::from_parts(self.ring.clone(), out, self.prec))
    }

    pub fn deriv(&self, v: usize) -> Jet {
        let ring = &self.ring;
        let mut out = vec![Rat::zero(); ring.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(k) = ring.down(v, i) {
                out[k] = c * &Rat::int(ring.exps(i)[v] as i64);
            }
        }
        let prec = if ring.is_y_var(v) {
            Prec { tot: self.prec.tot - 1, y: self.prec.y - 1 }
        } else {
            Prec { tot: self.prec.tot - 1, y: self.prec.y }
        };
        Jet::from_parts(ring.clone(), out, prec)
    }

    /// Antiderivative in variable `v` vanishing on `x_v = 0`.
    pub fn integrate(&self, v: usize) -> Jet {
        let ring = &self.ring;
        let mut out = vec![Rat::zero(); ring.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(k) = ring.up(v, i) {
                out[k] = c / &Rat::int(ring.exps(k)[v] as i64);
            }
        }
        let full = ring.full_prec();
        let prec = if ring.is_y_var(v) {
            Prec { tot: self.prec.tot + 1, y: self.prec.y + 1 }
        } else {
            Prec { tot: self.prec.tot + 1, y: self.prec.y }
        }
        .min(full);
        Jet::from_parts(ring.clone(), out, prec)
    }

    /// Maps into another ring along a monomial embedding (see [`JetRing::embedding`]).
    pub fn transport(&self, target: &Ring, map: &[Option<usize>], prec: Prec) -> Jet {
        let mut out = vec![Rat::zero(); target.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(k) = map[i] {
                out[k] += c;
            }
        }
        Jet::from_parts(target.clone(), out, prec)
    }

    /// Sets every variable `v` with `mask[v]` to zero.
    pub fn restrict_zero(&self, mask: &[bool]) -> Jet {
        let ring = &self.ring;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if ring.exps(i).iter().zip(mask).any(|(&e, &m)| m && e > 0) {
                    Rat::zero()
                } else {
                    c.clone()
                }
            })
            .collect();
        Jet { ring: ring.clone(), coeffs, prec: self.prec }
    }

    /// Nonzero terms as `(exponent key, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl PartialEq for Jet {
    fn eq(&self, o: &Jet) -> bool {
        self.ring.same(&o.ring) && self.coeffs == o.coeffs
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(i, c)| format!("{c}*[{}]", self.ring.key(i))).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `exp(c * x_v)` truncated to the ring.
pub fn exp_linear(ring: &Ring, v: usize, c: &Rat) -> Jet {
    let mut out = Jet::constant(ring, Rat::one());
    let mut term = Jet::constant(ring, Rat::one());
    let x = Jet::var(ring, v).scale(c);
    for k in 1..=ring.order() as i64 {
        term = term.mul(&x).scale(&Rat::new(1, k));
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn inverse_of_one_plus_t() {
        let r = JetRing::base(1, 4).unwrap();
        let a = Jet::constant(&r, Rat::one()).add(&Jet::var(&r, 0));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coeff(&[3]), Rat::int(-1));
        assert_eq!(a.mul(&inv), Jet::constant(&r, Rat::one()));
    }

    #[test]
    fn derivative_lowers_precision() {
        let r = JetRing::base(1, 3).unwrap();
        let t = Jet::var(&r, 0);
        let t3 = t.mul(&t).mul(&t);
        let d = t3.deriv(0);
        assert_eq!(d.coeff(&[2]), Rat::int(3));
        assert_eq!(d.prec().tot, 2);
        assert_eq!(d.integrate(0), t3);
    }

    #[test]
    fn exp_series() {
        let r = JetRing::base(1, 3).unwrap();
        let e = exp_linear(&r, 0, &Rat::int(2));
        assert_eq!(e.coeff(&[3]), q(4, 3));
    }
}
