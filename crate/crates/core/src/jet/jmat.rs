use std::fmt;

use super::ring::{Prec, Ring};
use super::scalar::Jet;
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::rat::Rat;

/// Matrix-valued jet, stored as one constant matrix per monomial.
#[derive(Clone)]
pub struct JMat {
    ring: Ring,
    rows: usize,
    cols: usize,
    terms: Vec<Option<QMat>>,
    prec: Prec,
}

impl JMat {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        JMat { ring: ring.clone(), rows, cols, terms: vec![None; ring.len()], prec: ring.full_prec() }
    }

    pub fn constant(ring: &Ring, m: QMat) -> Self {
        let mut j = Self::zeros(ring, m.rows(), m.cols());
        if !m.is_zero() {
            j.terms[0] = Some(m);
        }
        j
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::constant(ring, QMat::identity(n))
    }

    /// `x_v * m`
    pub fn linear(ring: &Ring, v: usize, m: QMat) -> Self {
        let mut j = Self::zeros(ring, m.rows(), m.cols());
        if let Some(i) = ring.up(v, 0) {
            j.terms[i] = Some(m);
        }
        j
    }

    pub fn from_terms(ring: &Ring, rows: usize, cols: usize, terms: Vec<(usize, QMat)>) -> Self {
        let mut j = Self::zeros(ring, rows, cols);
        for (i, m) in terms {
            assert_eq!((m.rows(), m.cols()), (rows, cols));
            j.add_term(i, &Rat::one(), &m);
        }
        j
    }

    fn from_parts(ring: Ring, rows: usize, cols: usize, terms: Vec<Option<QMat>>, prec: Prec) -> Self {
        let mut j = JMat { ring, rows, cols, terms, prec };
        j.clip();
        j
    }

    fn clip(&mut self) {
        for (i, t) in self.terms.iter_mut().enumerate() {
            if t.as_ref().is_some_and(QMat::is_zero) || (t.is_some() && !self.ring.within(i, self.prec)) {
                *t = None;
            }
        }
    }

    fn add_term(&mut self, i: usize, c: &Rat, m: &QMat) {
        match &mut self.terms[i] {
            Some(t) => t.add_scaled(c, m),
            slot => *slot = Some(m.scale(c)),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn with_prec(mut self, p: Prec) -> Self {
        self.prec = self.prec.min(p);
        self.clip();
        self
    }

    pub fn term(&self, i: usize) -> Option<&QMat> {
        self.terms[i].as_ref()
    }

    /// Coefficient at monomial index `i`, zero if absent.
    pub fn coeff(&self, i: usize) -> QMat {
        self.terms[i].clone().unwrap_or_else(|| QMat::zeros(self.rows, self.cols))
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &QMat)> {
        self.terms.iter().enumerate().filter_map(|(i, t)| t.as_ref().map(|m| (i, m)))
    }

    pub fn at0(&self) -> QMat {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Option::is_none)
    }

    pub fn is_constant(&self) -> bool {
        self.terms[1..].iter().all(Option::is_none)
    }

    fn check(&self, o: &JMat) -> Result<()> {
        if !self.ring.same(&o.ring) {
            return Err(Error::InconsistentTruncation);
        }
        Ok(())
    }

    pub fn add(&self, o: &JMat) -> JMat {
        self.check(o).expect("same ring");
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        let mut out = self.clone();
        for (i, m) in o.nonzero_terms() {
            out.add_term(i, &Rat::one(), m);
        }
        out.prec = self.prec.min(o.prec);
        out.clip();
        out
    }

    pub fn sub(&self, o: &JMat) -> JMat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> JMat {
        self.scale(&Rat::int(-1))
    }

    pub fn scale(&self, c: &Rat) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(|m| m.scale(c))).collect();
        JMat::from_parts(self.ring.clone(), self.rows, self.cols, terms, self.prec)
    }

    pub fn mul(&self, o: &JMat) -> JMat {
        self.check(o).expect("same ring");
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out: Vec<Option<QMat>> = vec![None; self.ring.len()];
        for (i, a) in self.nonzero_terms() {
            for &(j, k) in self.ring.mul_table(i) {
                if let Some(b) = &o.terms[j] {
                    out[k].get_or_insert_with(|| QMat::zeros(self.rows, o.cols)).add_product(a, b);
                }
            }
        }
        JMat::from_parts(self.ring.clone(), self.rows, o.cols, out, self.prec.min(o.prec))
    }

    pub fn mul_const(&self, m: &QMat) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(|a| a * m)).collect();
        JMat::from_parts(self.ring.clone(), self.rows, m.cols(), terms, self.prec)
    }

    pub fn const_mul(&self, m: &QMat) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(|a| m * a)).collect();
        JMat::from_parts(self.ring.clone(), m.rows(), self.cols, terms, self.prec)
    }

    /// Scalar jet times matrix jet.
    pub fn scale_jet(&self, s: &Jet) -> JMat {
        assert!(self.ring.same(s.ring()));
        let mut out: Vec<Option<QMat>> = vec![None; self.ring.len()];
        for (i, c) in s.terms() {
            for &(j, k) in self.ring.mul_table(i) {
                if let Some(b) = &self.terms[j] {
                    match &mut out[k] {
                        Some(t) => t.add_scaled(c, b),
                        slot => *slot = Some(b.scale(c)),
                    }
                }
            }
        }
        JMat::from_parts(self.ring.clone(), self.rows, self.cols, out, self.prec.min(s.prec()))
    }

    pub fn commutator(&self, o: &JMat) -> JMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(QMat::transpose)).collect();
        JMat::from_parts(self.ring.clone(), self.cols, self.rows, terms, self.prec)
    }

    pub fn deriv(&self, v: usize) -> JMat {
        let ring = &self.ring;
        let mut out: Vec<Option<QMat>> = vec![None; ring.len()];
        for (i, m) in self.nonzero_terms() {
            if let Some(k) = ring.down(v, i) {
                out[k] = Some(m.scale(&Rat::int(ring.exps(i)[v] as i64)));
            }
        }
        let prec = if ring.is_y_var(v) {
            Prec { tot: self.prec.tot - 1, y: self.prec.y - 1 }
        } else {
            Prec { tot: self.prec.tot - 1, y: self.prec.y }
        };
        JMat::from_parts(ring.clone(), self.rows, self.cols, out, prec)
    }

    /// Antiderivative in variable `v` vanishing on `x_v = 0`.
    pub fn integrate(&self, v: usize) -> JMat {
        let ring = &self.ring;
        let mut out: Vec<Option<QMat>> = vec![None; ring.len()];
        for (i, m) in self.nonzero_terms() {
            if let Some(k) = ring.up(v, i) {
                out[k] = Some(m.scale(&Rat::new(1, ring.exps(k)[v] as i64)));
            }
        }
        let prec = if ring.is_y_var(v) {
            Prec { tot: self.prec.tot + 1, y: self.prec.y + 1 }
        } else {
            Prec { tot: self.prec.tot + 1, y: self.prec.y }
        }
        .min(ring.full_prec());
        JMat::from_parts(ring.clone(), self.rows, self.cols, out, prec)
    }

    /// Multiplies by the variable `x_v`.
    pub fn times_var(&self, v: usize) -> JMat {
        let ring = &self.ring;
        let mut out: Vec<Option<QMat>> = vec![None; ring.len()];
        for (i, m) in self.nonzero_terms() {
            if let Some(k) = ring.up(v, i) {
                out[k] = Some(m.clone());
            }
        }
        let prec = if ring.is_y_var(v) {
            Prec { tot: self.prec.tot + 1, y: self.prec.y + 1 }
        } else {
            Prec { tot: self.prec.tot + 1, y: self.prec.y }
        }
        .min(ring.full_prec());
        JMat::from_parts(ring.clone(), self.rows, self.cols, out, prec)
    }

    pub fn entry(&self, r: usize, c: usize) -> Jet {
        let coeffs = self.terms.iter().map(|t| t.as_ref().map_or(Rat::zero(), |m| m[(r, c)].clone())).collect();
        Jet::from_parts(self.ring.clone(), coeffs, self.prec)
    }

    pub fn from_entries(ring: &Ring, entries: &[Vec<Jet>]) -> JMat {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut out = JMat::zeros(ring, rows, cols);
        let mut prec = ring.full_prec();
        for (r, row) in entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                prec = prec.min(e.prec());
                for (i, x) in e.terms() {
                    out.terms[i].get_or_insert_with(|| QMat::zeros(rows, cols))[(r, c)] = x.clone();
                }
            }
        }
        out.prec = prec;
        out.clip();
        out
    }

    /// Column `j` as an `rows x 1` jet.
    pub fn col(&self, j: usize) -> JMat {
        let terms = self
            .terms
            .iter()
            .map(|t| t.as_ref().map(|m| QMat::column_vec(&m.col(j))))
            .collect();
        JMat::from_parts(self.ring.clone(), self.rows, 1, terms, self.prec)
    }

    pub fn select_cols(&self, idx: &[usize]) -> JMat {
        let rows: Vec<usize> = (0..self.rows).collect();
        let terms = self.terms.iter().map(|t| t.as_ref().map(|m| m.submatrix(&rows, idx))).collect();
        JMat::from_parts(self.ring.clone(), self.rows, idx.len(), terms, self.prec)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(|m| m.submatrix(rows, cols))).collect();
        JMat::from_parts(self.ring.clone(), rows.len(), cols.len(), terms, self.prec)
    }

    pub fn hstack(parts: &[JMat]) -> JMat {
        let ring = parts[0].ring.clone();
        let rows = parts[0].rows;
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = JMat::zeros(&ring, rows, cols);
        let mut off = 0;
        let mut prec = ring.full_prec();
        for p in parts {
            assert_eq!(p.rows, rows);
            prec = prec.min(p.prec);
            for (i, m) in p.nonzero_terms() {
                let t = out.terms[i].get_or_insert_with(|| QMat::zeros(rows, cols));
                for r in 0..rows {
                    for c in 0..p.cols {
                        t[(r, off + c)] = m[(r, c)].clone();
                    }
                }
            }
            off += p.cols;
        }
        out.prec = prec;
        out.clip();
        out
    }

    pub fn vstack(parts: &[JMat]) -> JMat {
        let t: Vec<JMat> = parts.iter().map(JMat::transpose).collect();
        JMat::hstack(&t).transpose()
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(ring: &Ring, blocks: &[JMat]) -> JMat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = JMat::zeros(ring, n, n);
        let mut prec = ring.full_prec();
        let mut off = 0;
        for b in blocks {
            prec = prec.min(b.prec);
            for (i, m) in b.nonzero_terms() {
                let t = out.terms[i].get_or_insert_with(|| QMat::zeros(n, n));
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        t[(off + r, off + c)] = m[(r, c)].clone();
                    }
                }
            }
            off += b.rows;
        }
        out.prec = prec;
        out.clip();
        out
    }

    /// Inverse of a square jet matrix with invertible constant term.
    pub fn inverse(&self) -> Option<JMat> {
        assert_eq!(self.rows, self.cols);
        let inv0 = self.at0().inverse()?;
        let n = self.rows;
        let mut out: Vec<Option<QMat>> = vec![None; self.ring.len()];
        out[0] = Some(inv0.clone());
        for k in 1..self.ring.len() {
            if !self.ring.within(k, self.prec) {
                continue;
            }
            let mut s = QMat::zeros(n, n);
            let mut any = false;
            for &(i, j) in self.ring.factor_pairs(k) {
                if i == 0 {
                    continue;
                }
                if let (Some(a), Some(x)) = (&self.terms[i], &out[j]) {
                    s.add_product(a, x);
                    any = true;
                }
            }
            if any {
                out[k] = Some(-&(&inv0 * &s));
            }
        }
        Some(JMat::from_parts(self.ring.clone(), n, n, out, self.prec))
    }

    /// Embeds into another ring (see [`crate::jet::JetRing::embedding`]).
    pub fn transport(&self, target: &Ring, map: &[Option<usize>], prec: Prec) -> JMat {
        let mut out = JMat::zeros(target, self.rows, self.cols);
        for (i, m) in self.nonzero_terms() {
            if let Some(k) = map[i] {
                out.add_term(k, &Rat::one(), m);
            }
        }
        out.prec = prec;
        out.clip();
        out
    }

    /// Sets every variable `v` with `mask[v]` to zero.
    pub fn restrict_zero(&self, mask: &[bool]) -> JMat {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if ring.exps(i).iter().zip(mask).any(|(&e, &m)| m && e > 0) {
                    None
                } else {
                    t.clone()
                }
            })
            .collect();
        JMat { ring: ring.clone(), rows: self.rows, cols: self.cols, terms, prec: self.prec }
    }

    /// Applies `f` coefficientwise; `f` must be linear.
    pub fn map_linear(&self, rows: usize, cols: usize, f: impl Fn(&QMat) -> QMat) -> JMat {
        let terms = self.terms.iter().map(|t| t.as_ref().map(&f)).collect();
        JMat::from_parts(self.ring.clone(), rows, cols, terms, self.prec)
    }

    /// Coefficientwise check that `f` holds, used for exact certificate predicates.
    pub fn all_terms(&self, f: impl Fn(&QMat) -> bool) -> bool {
        self.nonzero_terms().all(|(_, m)| f(m))
    }
}

impl PartialEq for JMat {
    fn eq(&self, o: &JMat) -> bool {
        self.ring.same(&o.ring)
            && self.rows == o.rows
            && self.cols == o.cols
            && (0..self.terms.len()).all(|i| match (&self.terms[i], &o.terms[i]) {
                (None, None) => true,
                (Some(a), None) | (None, Some(a)) => a.is_zero(),
                (Some(a), Some(b)) => a == b,
            })
    }
}

impl fmt::Debug for JMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JMat {}x{} {{", self.rows, self.cols)?;
        for (i, m) in self.nonzero_terms() {
            write!(f, " [{}]: {:?}", self.ring.key(i), m)?;
        }
        write!(f, " }}")
    }
}

/// Result of [`solve_linear`]: a particular solution and the order-0 kernel.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub x: JMat,
    pub kernel0: QMat,
}

/// Solves `a * x = b` order by order in the total degree.
pub fn solve_linear(a: &JMat, b: &JMat) -> Result<LinearSolution> {
    a.check(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!("{} rows vs {}", a.rows, b.rows)));
    }
    let ring = a.ring.clone();
    let a0 = a.at0();
    let prec = a.prec.min(b.prec);
    let mut x: Vec<Option<QMat>> = vec![None; ring.len()];
    for k in 0..ring.len() {
        if !ring.within(k, prec) {
            continue;
        }
        let mut rhs = b.coeff(k);
        for &(i, j) in ring.factor_pairs(k) {
            if i == 0 {
                continue;
            }
            if let (Some(ai), Some(xj)) = (&a.terms[i], &x[j]) {
                rhs = &rhs - &(ai * xj);
            }
        }
        if rhs.is_zero() {
            continue;
        }
        let xk = a0.solve(&rhs).ok_or(Error::NoSolution)?;
        x[k] = Some(xk);
    }
    Ok(LinearSolution { x: JMat::from_parts(ring, a.cols, b.cols, x, prec), kernel0: a0.kernel() })
}

/// Kernel of a jet matrix of constant rank: returns `K` with `a * K = 0` and
/// `K(0)` spanning the kernel of `a(0)`.
pub fn jet_kernel(a: &JMat) -> Result<JMat> {
    let a0 = a.at0();
    let (_, pivc) = a0.rref();
    let (_, pivr) = a0.transpose().rref();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivc.contains(c)).collect();
    let ring = a.ring.clone();
    if pivc.is_empty() {
        return Ok(JMat::identity(&ring, a.cols).with_prec(a.prec));
    }
    let sq = a.select(&pivr, &pivc);
    let rest = a.select(&pivr, &free);
    let inv = sq.inverse().expect("pivot block invertible at order 0");
    let xp = inv.mul(&rest).neg();
    let mut k = JMat::zeros(&ring, a.cols, free.len());
    let mut prec = xp.prec;
    for (i, m) in xp.nonzero_terms() {
        let t = k.terms[i].get_or_insert_with(|| QMat::zeros(a.cols, free.len()));
        for (r, &p) in pivc.iter().enumerate() {
            for c in 0..free.len() {
                t[(p, c)] = m[(r, c)].clone();
            }
        }
    }
    let t0 = k.terms[0].get_or_insert_with(|| QMat::zeros(a.cols, free.len()));
    for (c, &f) in free.iter().enumerate() {
        t0[(f, c)] = Rat::one();
    }
    prec = prec.min(a.prec);
    k.prec = prec;
    k.clip();
    if !a.mul(&k).is_zero() {
        return Err(Error::DimensionMismatch("rank of jet matrix jumps off the base point".into()));
    }
    Ok(k)
}

/// Curvature components `F_ij = d_i A_j - d_j A_i + [A_i, A_j]` for `i < j`.
pub fn curvature(a: &[JMat]) -> Vec<((usize, usize), JMat)> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let f = a[j].deriv(i).sub(&a[i].deriv(j)).add(&a[i].commutator(&a[j]));
            out.push(((i, j), f));
        }
    }
    out
}

/// Gauge `g` with `g(0) = I` and `dg + A g = 0`, so that `g^{-1} (d + A) g = d`.
///
/// `a[v]` is the connection component along ring variable `v`; missing trailing
/// components are zero.
pub fn flat_gauge(a: &[JMat]) -> Result<JMat> {
    let ring = a[0].ring.clone();
    let n = a[0].rows;
    for ((i, j), f) in curvature(a) {
        if !f.is_zero() {
            return Err(Error::NotFlat(format!("curvature component ({i},{j}) is nonzero")));
        }
    }
    let prec_a = a.iter().fold(ring.full_prec(), |p, m| p.min(m.prec));
    let mut g: Vec<Option<QMat>> = vec![None; ring.len()];
    g[0] = Some(QMat::identity(n));
    let by_deg: Vec<Vec<usize>> = (0..=ring.order())
        .map(|d| (0..ring.len()).filter(|&i| ring.tdeg(i) == d).collect())
        .collect();
    for d in 1..=ring.order() as usize {
        // k g_k = sum_v x_v (-A_v g)_{k-1}
        let cur = JMat::from_parts(ring.clone(), n, n, g.clone(), ring.full_prec());
        let mut acc = JMat::zeros(&ring, n, n);
        for (v, av) in a.iter().enumerate() {
            let prod = av.mul(&cur);
            let low = JMat::from_parts(
                ring.clone(),
                n,
                n,
                (0..ring.len())
                    .map(|i| if ring.tdeg(i) as usize == d - 1 { prod.terms[i].clone() } else { None })
                    .collect(),
                ring.full_prec(),
            );
            acc = acc.sub(&low.times_var(v));
        }
        for &i in &by_deg[d] {
            if let Some(m) = &acc.terms[i] {
                g[i] = Some(m.scale(&Rat::new(1, d as i64)));
            }
        }
    }
    let prec = Prec { tot: prec_a.tot + 1, y: prec_a.y + 1 }.min(ring.full_prec());
    Ok(JMat::from_parts(ring, n, n, g, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetRing;
    use crate::q;

    #[test]
    fn solve_examples() {
        let r = JetRing::base(1, 3).unwrap();
        let a = JMat::identity(&r, 2);
        let b = JMat::from_entries(&r, &[vec![Jet::constant(&r, Rat::one())], vec![Jet::var(&r, 0)]]);
        assert_eq!(solve_linear(&a, &b).unwrap().x, b);
        let bad = JMat::constant(&r, QMat::from_i64(&[&[1, 1], &[0, 0]]));
        let rhs = JMat::constant(&r, QMat::from_i64(&[&[1], &[1]]));
        assert_eq!(solve_linear(&bad, &rhs).unwrap_err(), Error::NoSolution);
    }

    #[test]
    fn solve_with_y() {
        let r = JetRing::new(1, 1, 2, 2).unwrap();
        let one = Jet::constant(&r, Rat::one());
        let zero = Jet::zero(&r);
        let y = Jet::var(&r, 1);
        let t = Jet::var(&r, 0);
        let a = JMat::from_entries(&r, &[vec![one.clone(), y.clone()], vec![zero, one.clone()]]);
        let b = JMat::from_entries(&r, &[vec![t.clone()], vec![one.clone()]]);
        let x = solve_linear(&a, &b).unwrap().x;
        let expect = JMat::from_entries(&r, &[vec![t.sub(&y)], vec![one]]);
        assert_eq!(x, expect);
    }

    #[test]
    fn gauge_of_constant_connection() {
        let r = JetRing::base(1, 4).unwrap();
        let m = QMat::from_rows(vec![vec![Rat::zero(), Rat::one()], vec![q(1, 2), Rat::int(3)]]);
        let a = JMat::constant(&r, m.clone());
        let g = flat_gauge(std::slice::from_ref(&a)).unwrap();
        // exp(-M t) coefficients: (-M)^k / k!
        let mut fact = 1i64;
        for k in 0..=4u32 {
            if k > 0 {
                fact *= k as i64;
            }
            let i = r.index_of(&[k]).unwrap();
            let expect = (&QMat::zeros(2, 2) - &m.pow(k)).scale(&Rat::new(if k % 2 == 0 { -1 } else { 1 }, fact));
            assert_eq!(g.coeff(i), expect);
        }
        let resid = g.deriv(0).add(&a.mul(&g));
        assert!(resid.is_zero());
    }

    #[test]
    fn non_flat_rejected() {
        let r = JetRing::base(2, 2).unwrap();
        let a1 = JMat::constant(&r, QMat::from_i64(&[&[0, 1], &[0, 0]]));
        let a2 = JMat::constant(&r, QMat::from_i64(&[&[0, 0], &[1, 0]]));
        assert!(matches!(flat_gauge(&[a1, a2]), Err(Error::NotFlat(_))));
    }

    #[test]
    fn kernel_of_jet_matrix() {
        let r = JetRing::base(1, 3).unwrap();
        let t = Jet::var(&r, 0);
        let one = Jet::constant(&r, Rat::one());
        let a = JMat::from_entries(&r, &[vec![one.clone(), t.clone()]]);
        let k = jet_kernel(&a).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(k.at0(), QMat::from_i64(&[&[0], &[1]]));
    }
}
