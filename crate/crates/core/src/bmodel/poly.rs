//! Univariate and bivariate polynomials over Q, resultants, and a
//! dynamic-evaluation test for common zeros on the torus.

use crate::linalg::QMat;
use crate::rat::Rat;

/// Dense univariate polynomial, coefficients by increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rat>);

impl UPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Rat::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(vec![])
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * &Rat::int(i as i64)).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().recip();
        let mut r = self.0.clone();
        let mut qt = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] * &inv;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[top - dd + j] -= &c * b;
                }
                qt[top - dd] = c;
            }
            r.pop();
        }
        (UPoly::new(qt), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Removes factors of the variable.
    pub fn strip_var(&self) -> UPoly {
        let k = self.0.iter().take_while(|c| c.is_zero()).count();
        UPoly(self.0[k..].to_vec())
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_zero() || self.gcd(&self.derivative()).is_constant()
    }
}

/// Polynomial in `(x, y)` stored as coefficients in `Q[x]` by increasing power of `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly(Vec<UPoly>);

impl BiPoly {
    pub fn new(mut c: Vec<UPoly>) -> Self {
        while c.last().is_some_and(UPoly::is_zero) {
            c.pop();
        }
        BiPoly(c)
    }

    /// From `(i, j, c)` terms meaning `c x^i y^j`.
    pub fn from_terms(terms: &[(usize, usize, Rat)]) -> Self {
        let ny = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut rows: Vec<Vec<Rat>> = vec![vec![]; ny];
        for (i, j, c) in terms {
            let r = &mut rows[*j];
            if r.len() <= *i {
                r.resize(i + 1, Rat::zero());
            }
            r[*i] += c;
        }
        BiPoly::new(rows.into_iter().map(UPoly::new).collect())
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ydeg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn xdeg(&self) -> usize {
        self.0.iter().filter_map(UPoly::degree).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1 && self.0.first().is_none_or(UPoly::is_constant)
    }

    /// Divides out the largest monomial `x^a y^b`.
    pub fn strip_monomial(&self) -> BiPoly {
        let b = self.0.iter().take_while(|c| c.is_zero()).count();
        let rest = &self.0[b.min(self.0.len())..];
        let a = rest.iter().filter(|c| !c.is_zero()).map(|c| c.coeffs().iter().take_while(|x| x.is_zero()).count()).min();
        match a {
            None => BiPoly::new(vec![]),
            Some(a) => BiPoly::new(rest.iter().map(|c| UPoly::new(c.coeffs().get(a..).unwrap_or(&[]).to_vec())).collect()),
        }
    }

    fn map(&self, f: impl Fn(&UPoly) -> UPoly) -> BiPoly {
        BiPoly::new(self.0.iter().map(f).collect())
    }

    pub fn eval_x(&self, x: &Rat) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c.eval(x)).collect())
    }

    pub fn content(&self) -> UPoly {
        self.0.iter().fold(UPoly::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> BiPoly {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        self.map(|x| x.divrem(&c).0)
    }

    fn mul_upoly(&self, u: &UPoly) -> BiPoly {
        self.map(|x| x.mul(u))
    }

    /// Pseudo-remainder of `self` by `d` with respect to `y`.
    fn pseudo_rem(&self, d: &BiPoly) -> BiPoly {
        let dd = d.ydeg().expect("nonzero divisor");
        let lc = d.0[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.ydeg() {
            if rd < dd {
                break;
            }
            let c = r.0[rd].clone();
            let mut next = r.mul_upoly(&lc).0;
            for (j, b) in d.0.iter().enumerate() {
                next[rd - dd + j] = next[rd - dd + j].sub(&b.mul(&c));
            }
            r = BiPoly::new(next);
        }
        r
    }

    /// Greatest common divisor up to a rational scalar.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let c = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.ydeg() < b.ydeg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.mul_upoly(&c)
    }

    /// Exact division, assuming `d` divides `self`.
    pub fn div_exact(&self, d: &BiPoly) -> BiPoly {
        let dd = d.ydeg().expect("nonzero divisor");
        let lc = &d.0[dd];
        let mut r = self.clone();
        let mut qt: Vec<UPoly> = vec![UPoly::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = r.ydeg() {
            if rd < dd {
                break;
            }
            let (c, rem) = r.0[rd].divrem(lc);
            debug_assert!(rem.is_zero(), "inexact division");
            let mut next = r.0.clone();
            for (j, b) in d.0.iter().enumerate() {
                next[rd - dd + j] = next[rd - dd + j].sub(&b.mul(&c));
            }
            qt[rd - dd] = c;
            r = BiPoly::new(next);
        }
        BiPoly::new(qt)
    }
}

/// Resultant with respect to `y`, using the formal `y`-degrees; computed by
/// evaluation at integer points and interpolation.
pub fn resultant_y(p: &BiPoly, q: &BiPoly) -> UPoly {
    let (m, n) = match (p.ydeg(), q.ydeg()) {
        (Some(m), Some(n)) => (m, n),
        _ => return UPoly::zero(),
    };
    let bound = p.xdeg() * n + q.xdeg() * m;
    let xs: Vec<Rat> = (0..=bound as i64).map(Rat::int).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let pv: Vec<Rat> = p.0.iter().map(|c| c.eval(x)).collect();
            let qv: Vec<Rat> = q.0.iter().map(|c| c.eval(x)).collect();
            sylvester(&pv, &qv).det()
        })
        .collect();
    interpolate(&xs, &ys)
}

fn sylvester(p: &[Rat], q: &[Rat]) -> QMat {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return QMat::identity(0);
    }
    let mut s = QMat::zeros(size, size);
    for r in 0..n {
        for (j, c) in p.iter().rev().enumerate() {
            s[(r, r + j)] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in q.iter().rev().enumerate() {
            s[(n + r, r + j)] = c.clone();
        }
    }
    s
}

fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let mut out = UPoly::zero();
    for (i, xi) in xs.iter().enumerate() {
        if ys[i].is_zero() {
            continue;
        }
        let mut basis = UPoly::constant(Rat::one());
        let mut denom = Rat::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UPoly::new(vec![-xj, Rat::one()]));
                denom *= xi - xj;
            }
        }
        out = out.add(&basis.scale(&(&ys[i] / &denom)));
    }
    out
}

/// Whether the polynomials have a common zero with both coordinates nonzero.
pub fn common_torus_zero(polys: &[BiPoly]) -> bool {
    let mut ps: Vec<BiPoly> = polys.iter().map(BiPoly::strip_monomial).filter(|p| !p.is_zero()).collect();
    if ps.iter().any(BiPoly::is_constant) {
        return false;
    }
    if ps.len() <= 1 {
        return true;
    }
    let p = ps.remove(0);
    let q = ps.remove(0);
    let h = p.gcd(&q).strip_monomial();
    if !h.is_constant() {
        let mut with_h = vec![h.clone()];
        with_h.extend(ps.iter().cloned());
        let mut rest = vec![p.div_exact(&h), q.div_exact(&h)];
        rest.extend(ps.iter().cloned());
        return common_torus_zero(&with_h) || common_torus_zero(&rest);
    }
    let r = resultant_y(&p, &q).strip_var();
    if r.is_constant() {
        return false;
    }
    let m = r.squarefree_part();
    let mut all = vec![p, q];
    all.extend(ps);
    let kp: Vec<Vec<UPoly>> = all.iter().map(|b| b.coeffs().iter().map(|c| c.rem(&m)).collect()).collect();
    has_root_mod(&m, kp)
}

enum Zero {
    Yes,
    No,
    Split(UPoly, UPoly),
}

fn zero_mod(m: &UPoly, c: &UPoly) -> Zero {
    let h = m.gcd(&c.rem(m));
    if h.is_zero() || h.degree() == m.degree() {
        Zero::Yes
    } else if h.is_constant() {
        Zero::No
    } else {
        Zero::Split(h.clone(), m.divrem(&h).0.monic())
    }
}

fn reduce_all(m: &UPoly, ps: &[Vec<UPoly>]) -> Vec<Vec<UPoly>> {
    ps.iter().map(|p| p.iter().map(|c| c.rem(m)).collect()).collect()
}

/// Over every root `a` of the squarefree `m`, decides whether the polynomials
/// in `y` (coefficients in `Q[x]/(m)`) share a nonzero root for some `a`.
fn has_root_mod(m: &UPoly, mut ps: Vec<Vec<UPoly>>) -> bool {
    loop {
        let mut normalized = Vec::with_capacity(ps.len());
        for mut p in ps.clone() {
            loop {
                match p.last() {
                    None => break,
                    Some(c) => match zero_mod(m, c) {
                        Zero::Yes => {
                            p.pop();
                        }
                        Zero::No => break,
                        Zero::Split(a, b) => {
                            return has_root_mod(&a, reduce_all(&a, &ps)) || has_root_mod(&b, reduce_all(&b, &ps));
                        }
                    },
                }
            }
            loop {
                match p.first() {
                    None => break,
                    Some(c) => match zero_mod(m, c) {
                        Zero::Yes => {
                            p.remove(0);
                        }
                        Zero::No => break,
                        Zero::Split(a, b) => {
                            return has_root_mod(&a, reduce_all(&a, &ps)) || has_root_mod(&b, reduce_all(&b, &ps));
                        }
                    },
                }
            }
            if !p.is_empty() {
                normalized.push(p);
            }
        }
        if normalized.iter().any(|p| p.len() == 1) {
            return false;
        }
        if normalized.len() <= 1 {
            return true;
        }
        normalized.sort_by_key(|p| std::cmp::Reverse(p.len()));
        let b = normalized.pop().unwrap();
        let a = normalized.pop().unwrap();
        let r = rem_mod(m, &a, &b);
        normalized.push(b);
        normalized.push(r);
        ps = normalized;
    }
}

/// Remainder of `a` by `b` in `(Q[x]/(m))[y]`, where the leading coefficient of `b` is invertible.
fn rem_mod(m: &UPoly, a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let inv = inverse_mod(m, b.last().unwrap());
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top].mul(&inv).rem(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[top - db + j] = r[top - db + j].sub(&c.mul(bj)).rem(m);
            }
        }
        r.pop();
    }
    r
}

/// Inverse of `c` modulo `m` by the extended Euclidean algorithm.
fn inverse_mod(m: &UPoly, c: &UPoly) -> UPoly {
    let (mut r0, mut r1) = (m.clone(), c.rem(m));
    let (mut s0, mut s1) = (UPoly::zero(), UPoly::constant(Rat::one()));
    while !r1.is_zero() {
        let (qt, r) = r0.divrem(&r1);
        let s = s0.sub(&qt.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    debug_assert!(r0.is_constant() && !r0.is_zero(), "element not invertible");
    s0.scale(&r0.lead().recip()).rem(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| Rat::int(x)).collect())
    }

    fn bp(terms: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(&terms.iter().map(|&(i, j, c)| (i, j, Rat::int(c))).collect::<Vec<_>>())
    }

    #[test]
    fn univariate_gcd() {
        let a = up(&[-1, 0, 1]);
        let b = up(&[1, 1]);
        assert_eq!(a.gcd(&b), up(&[1, 1]));
        assert!(!up(&[1, 2, 1]).is_squarefree());
        assert_eq!(up(&[0, 0, 3, 3]).strip_var(), up(&[3, 3]));
    }

    #[test]
    fn resultant_of_lines() {
        // y - x and y + x - 2 meet at x = 1
        let r = resultant_y(&bp(&[(0, 1, 1), (1, 0, -1)]), &bp(&[(0, 1, 1), (1, 0, 1), (0, 0, -2)]));
        assert_eq!(r.monic(), up(&[-1, 1]));
    }

    #[test]
    fn bivariate_gcd() {
        let p = bp(&[(1, 0, 1), (0, 1, 1)]);
        let q = bp(&[(1, 0, 1), (0, 1, -1)]);
        let pq = BiPoly::from_terms(&[(2, 0, Rat::int(1)), (0, 2, Rat::int(-1))]);
        let g = pq.gcd(&p);
        assert_eq!(g.primitive_part().ydeg(), Some(1));
        assert_eq!(pq.div_exact(&p), q);
    }

    #[test]
    fn torus_zeros() {
        // x - 1 = 0, y - 1 = 0
        assert!(common_torus_zero(&[bp(&[(1, 0, 1), (0, 0, -1)]), bp(&[(0, 1, 1), (0, 0, -1)])]));
        // x = 0 only
        assert!(!common_torus_zero(&[bp(&[(1, 0, 1)]), bp(&[(0, 1, 1), (0, 0, -1)])]));
        // x^2 = 2, y = x, y^2 = 3 incompatible
        let a = bp(&[(2, 0, 1), (0, 0, -2)]);
        let b = bp(&[(0, 1, 1), (1, 0, -1)]);
        let c = bp(&[(0, 2, 1), (0, 0, -3)]);
        assert!(!common_torus_zero(&[a.clone(), b.clone(), c]));
        let c2 = bp(&[(0, 2, 1), (0, 0, -2)]);
        assert!(common_torus_zero(&[a, b, c2]));
    }
}
