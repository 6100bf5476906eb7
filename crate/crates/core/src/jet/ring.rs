use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Environment variable capping the number of monomials in a jet ring.
pub const MAX_MONOMIALS_ENV: &str = "MIXFROB_MAX_MONOMIALS";
const DEFAULT_MAX_MONOMIALS: usize = 200_000;

/// Known-exact range of a jet: coefficients of monomials with total degree
/// `<= tot` and y-degree `<= y` are exact, all others are stored as zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec {
    pub tot: i32,
    pub y: i32,
}

impl Prec {
    pub fn min(self, o: Prec) -> Prec {
        Prec { tot: self.tot.min(o.tot), y: self.y.min(o.y) }
    }
}

/// Truncated polynomial ring Q[t_1..t_m, y_1..y_l] modulo monomials of total
/// degree above `d` or y-degree above `n`.
pub struct JetRing {
    nt: usize,
    ny: usize,
    d: u32,
    n: u32,
    monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    tdeg: Vec<u32>,
    ydeg: Vec<u32>,
    mul: Vec<Vec<(usize, usize)>>,
    pairs: Vec<Vec<(usize, usize)>>,
    up: Vec<Vec<Option<usize>>>,
    down: Vec<Vec<Option<usize>>>,
}

pub type Ring = Arc<JetRing>;

impl PartialEq for JetRing {
    fn eq(&self, other: &JetRing) -> bool {
        self.same(other)
    }
}


impl JetRing {
    /// Ring with `nt` base variables and `ny` unfolding variables.
    pub fn new(nt: usize, ny: usize, d: u32, n: u32) -> Result<Ring> {
        let cap = std::env::var(MAX_MONOMIALS_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_MONOMIALS);
        let nv = nt + ny;
        let n = if ny == 0 { 0 } else { n.min(d) };
        let mut monos = Vec::new();
        let mut cur = vec![0u32; nv];
        enumerate(&mut cur, 0, d, nt, n, &mut monos, cap)?;
        let tdeg: Vec<u32> = monos.iter().map(|e| e.iter().sum()).collect();
        let mut order: Vec<usize> = (0..monos.len()).collect();
        order.sort_by(|&a, &b| tdeg[a].cmp(&tdeg[b]).then_with(|| monos[b].cmp(&monos[a])));
        let monos: Vec<Vec<u32>> = order.into_iter().map(|i| monos[i].clone()).collect();
        let tdeg: Vec<u32> = monos.iter().map(|e| e.iter().sum()).collect();
        let ydeg: Vec<u32> = monos.iter().map(|e| e[nt..].iter().sum()).collect();
        let index: HashMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let len = monos.len();
        let mut mul = vec![Vec::new(); len];
        let mut pairs = vec![Vec::new(); len];
        for i in 0..len {
            for j in 0..len {
                if tdeg[i] + tdeg[j] > d || ydeg[i] + ydeg[j] > n {
                    continue;
                }
                let e: Vec<u32> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                let k = index[&e];
                mul[i].push((j, k));
                pairs[k].push((i, j));
            }
        }
        let mut up = vec![vec![None; len]; nv];
        let mut down = vec![vec![None; len]; nv];
        for v in 0..nv {
            for i in 0..len {
                let mut e = monos[i].clone();
                e[v] += 1;
                up[v][i] = index.get(&e).copied();
                if monos[i][v] > 0 {
                    let mut e = monos[i].clone();
                    e[v] -= 1;
                    down[v][i] = Some(index[&e]);
                }
            }
        }
        Ok(Arc::new(JetRing { nt, ny, d, n, monos, index, tdeg, ydeg, mul, pairs, up, down }))
    }

    /// Ring with base variables only.
    pub fn base(nt: usize, d: u32) -> Result<Ring> {
        Self::new(nt, 0, d, 0)
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nvars(&self) -> usize {
        self.nt + self.ny
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn y_order(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn full_prec(&self) -> Prec {
        Prec { tot: self.d as i32, y: self.n as i32 }
    }

    pub fn exps(&self, i: usize) -> &[u32] {
        &self.monos[i]
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn tdeg(&self, i: usize) -> u32 {
        self.tdeg[i]
    }

    pub fn ydeg(&self, i: usize) -> u32 {
        self.ydeg[i]
    }

    pub fn within(&self, i: usize, p: Prec) -> bool {
        self.tdeg[i] as i32 <= p.tot && self.ydeg[i] as i32 <= p.y
    }

    pub fn is_y_var(&self, v: usize) -> bool {
        v >= self.nt
    }

    /// Pairs `(j, k)` with `mono_i * mono_j = mono_k` retained.
    pub fn mul_table(&self, i: usize) -> &[(usize, usize)] {
        &self.mul[i]
    }

    /// Pairs `(i, j)` with `mono_i * mono_j = mono_k`.
    pub fn factor_pairs(&self, k: usize) -> &[(usize, usize)] {
        &self.pairs[k]
    }

    /// Index of `mono_i * x_v`, when retained.
    pub fn up(&self, v: usize, i: usize) -> Option<usize> {
        self.up[v][i]
    }

    /// Index of `mono_i / x_v`, when `x_v` divides it.
    pub fn down(&self, v: usize, i: usize) -> Option<usize> {
        self.down[v][i]
    }

    pub fn same(&self, other: &JetRing) -> bool {
        std::ptr::eq(self, other) || (self.nt, self.ny, self.d, self.n) == (other.nt, other.ny, other.d, other.n)
    }

    /// Exponent key used in serialized output, e.g. `"1,0,2"`.
    pub fn key(&self, i: usize) -> String {
        self.monos[i].iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(&self, s: &str) -> Result<usize> {
        let e: Vec<u32> = if s.trim().is_empty() {
            vec![]
        } else {
            s.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent key {s:?}"))))
                .collect::<Result<_>>()?
        };
        if e.len() != self.nvars() {
            return Err(Error::Parse(format!("exponent key {s:?} has wrong length")));
        }
        self.index_of(&e).ok_or_else(|| Error::Parse(format!("exponent {s:?} beyond truncation")))
    }

    /// Index map sending monomials of `self` into `target`, where variable `v`
    /// of `self` becomes variable `vars[v]` of `target`.
    pub fn embedding(&self, target: &JetRing, vars: &[usize]) -> Vec<Option<usize>> {
        assert_eq!(vars.len(), self.nvars());
        self.monos
            .iter()
            .map(|e| {
                let mut f = vec![0u32; target.nvars()];
                for (v, &x) in e.iter().enumerate() {
                    f[vars[v]] += x;
                }
                target.index_of(&f)
            })
            .collect()
    }
}

impl fmt::Debug for JetRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetRing(t:{}, y:{}, D={}, N={})", self.nt, self.ny, self.d, self.n)
    }
}

fn enumerate(
    cur: &mut Vec<u32>,
    v: usize,
    d: u32,
    nt: usize,
    n: u32,
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    if v == cur.len() {
        if out.len() >= cap {
            return Err(Error::TooLarge(out.len() + 1, cap));
        }
        out.push(cur.clone());
        return Ok(());
    }
    let used: u32 = cur[..v].iter().sum();
    let yused: u32 = cur[nt.min(v)..v].iter().sum();
    let mut max = d - used;
    if v >= nt {
        max = max.min(n - yused);
    }
    for x in 0..=max {
        cur[v] = x;
        enumerate(cur, v + 1, d, nt, n, out, cap)?;
    }
    cur[v] = 0;
    Ok(())
}
