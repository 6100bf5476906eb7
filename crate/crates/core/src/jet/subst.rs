use super::jmat::JMat;
use super::ring::{Prec, Ring};
use super::scalar::Jet;
use crate::linalg::QMat;
use crate::rat::Rat;

/// Values of every monomial of a source ring after substituting jets without
/// constant term for its variables.
pub struct Substitution {
    target: Ring,
    values: Vec<Jet>,
    prec: i32,
}

impl Substitution {
    pub fn new(source: &Ring, target: &Ring, subs: &[Jet]) -> Self {
        assert_eq!(subs.len(), source.nvars(), "one substitution per variable");
        assert!(subs.iter().all(|s| s.at0().is_zero()), "substituted jets must vanish at the origin");
        let prec = subs.iter().map(|s| s.prec().tot).min().unwrap_or(target.order() as i32);
        let mut values: Vec<Jet> = Vec::with_capacity(source.len());
        values.push(Jet::constant(target, Rat::one()));
        for i in 1..source.len() {
            let e = source.exps(i);
            let v = e.iter().position(|&x| x > 0).expect("nonconstant monomial");
            let j = source.down(v, i).expect("divisible");
            let val = values[j].mul(&subs[v]);
            values.push(val);
        }
        Substitution { target: target.clone(), values, prec }
    }

    fn out_prec(&self, p: Prec) -> Prec {
        let tot = p.tot.min(self.prec).min(self.target.order() as i32);
        Prec { tot, y: self.target.full_prec().y }
    }

    pub fn jet(&self, f: &Jet) -> Jet {
        let mut out = Jet::zero(&self.target);
        for (i, c) in f.terms() {
            out = out.add(&self.values[i].scale(c));
        }
        out.with_prec(self.out_prec(f.prec()))
    }

    pub fn jmat(&self, m: &JMat) -> JMat {
        let mut out = JMat::zeros(&self.target, m.rows(), m.cols());
        for (i, t) in m.nonzero_terms() {
            out = out.add(&JMat::constant(&self.target, t.clone()).scale_jet(&self.values[i]));
        }
        out.with_prec(self.out_prec(m.prec()))
    }
}

/// Inverse of a map germ `x = X(t)` with `X(0) = 0` and invertible linear part,
/// returned as jets `t_i(x)` over `target` (one variable per component).
pub fn invert_map(x_of_t: &[Jet], target: &Ring) -> Option<Vec<Jet>> {
    let source = x_of_t[0].ring().clone();
    let n = x_of_t.len();
    assert_eq!(source.nvars(), n);
    assert_eq!(target.nvars(), n);
    let mut lin = QMat::zeros(n, n);
    for (i, x) in x_of_t.iter().enumerate() {
        for j in 0..n {
            if let Some(k) = source.up(j, 0) {
                lin[(i, j)] = x.coeffs()[k].clone();
            }
        }
    }
    let linv = lin.inverse()?;
    let nonlinear: Vec<Jet> = x_of_t
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut y = x.clone();
            for j in 0..n {
                y = y.sub(&Jet::var(&source, j).scale(&lin[(i, j)]));
            }
            y
        })
        .collect();
    let xs: Vec<Jet> = (0..n).map(|v| Jet::var(target, v)).collect();
    let apply_linv = |v: &[Jet]| -> Vec<Jet> {
        (0..n)
            .map(|i| (0..n).fold(Jet::zero(target), |acc, j| acc.add(&v[j].scale(&linv[(i, j)]))))
            .collect()
    };
    let mut t = apply_linv(&xs);
    for _ in 0..target.order() {
        let sub = Substitution::new(&source, target, &t);
        let rhs: Vec<Jet> = (0..n).map(|i| xs[i].sub(&sub.jet(&nonlinear[i]))).collect();
        t = apply_linv(&rhs);
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetRing;

    #[test]
    fn invert_quadratic() {
        let r = JetRing::base(1, 4).unwrap();
        let t = Jet::var(&r, 0);
        // x = t + t^2, inverse t = x - x^2 + 2x^3 - 5x^4
        let x = t.add(&t.mul(&t));
        let inv = invert_map(std::slice::from_ref(&x), &r).unwrap();
        assert_eq!(inv[0].coeff(&[4]), Rat::int(-5));
        let back = Substitution::new(&r, &r, &inv).jet(&x);
        assert_eq!(back, t);
    }

    #[test]
    fn two_variables_roundtrip() {
        let r = JetRing::base(2, 3).unwrap();
        let (a, b) = (Jet::var(&r, 0), Jet::var(&r, 1));
        let x = vec![a.add(&b.mul(&b)), b.sub(&a.mul(&b)).scale(&Rat::int(2))];
        let inv = invert_map(&x, &r).unwrap();
        let s = Substitution::new(&r, &r, &inv);
        assert_eq!(s.jet(&x[0]), a);
        assert_eq!(s.jet(&x[1]), b);
    }
}
