use super::poly::{common_torus_zero, BiPoly, UPoly};
use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::rat::Rat;

/// Decides regularity of `f` with respect to `delta` for `d <= 2`.
pub fn is_delta_regular(f: &LaurentPoly, delta: &LatticePolytope) -> Result<bool> {
    let d = delta.dim();
    if d > 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    if f.dim() != d {
        return Err(Error::DimensionMismatch("polynomial and polytope dimensions differ".into()));
    }
    match f.newton_polytope() {
        Ok(p) if p.vertices() == delta.vertices() => {}
        _ => return Ok(false),
    }
    if delta.vertices().iter().any(|v| f.coeff(v).is_zero()) {
        return Ok(false);
    }
    if d == 1 {
        let lo = delta.vertices()[0][0];
        let hi = delta.vertices()[1][0];
        let p = UPoly::new((lo..=hi).map(|x| f.coeff(&[x])).collect());
        return Ok(p.is_squarefree());
    }
    for facet in delta.facets() {
        let on: Vec<&Vec<i64>> = delta.vertices().iter().filter(|v| facet.eval(v) == 0).collect();
        let (v, w) = (on[0], on[1]);
        let diff = [w[0] - v[0], w[1] - v[1]];
        let len = gcd(diff[0], diff[1]);
        let e = [diff[0] / len, diff[1] / len];
        let g = UPoly::new((0..=len).map(|j| f.coeff(&[v[0] + j * e[0], v[1] + j * e[1]])).collect());
        if !g.is_squarefree() {
            return Ok(false);
        }
    }
    let lo: Vec<i64> = (0..2).map(|i| delta.vertices().iter().map(|v| v[i]).min().unwrap()).collect();
    let polys: Vec<BiPoly> = (0..=2)
        .map(|i| {
            let g = f.theta_or_self(i);
            let terms: Vec<(usize, usize, Rat)> = g
                .terms()
                .iter()
                .map(|(m, c)| ((m[0] - lo[0]) as usize, (m[1] - lo[1]) as usize, c.clone()))
                .collect();
            BiPoly::from_terms(&terms)
        })
        .collect();
    Ok(!common_torus_zero(&polys))
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmodel::tests::p2_f;

    fn p2() -> LatticePolytope {
        p2_f().newton_polytope().unwrap()
    }

    #[test]
    fn p2_family() {
        assert!(is_delta_regular(&p2_f(), &p2()).unwrap());
        assert!(!is_delta_regular(&p2_f().add_term(&[0, 0], &Rat::int(-3)), &p2()).unwrap());
        assert!(is_delta_regular(&p2_f().add_term(&[0, 0], &Rat::int(1)), &p2()).unwrap());
    }

    #[test]
    fn wrong_newton_polytope() {
        let f = LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        assert!(!is_delta_regular(&f, &p2()).unwrap());
    }

    #[test]
    fn square_family() {
        let f = LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]).unwrap();
        let sq = LatticePolytope::from_points(2, &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        // f vanishes with its log-derivatives at (1, -1) and (-1, 1)
        assert!(!is_delta_regular(&f, &sq).unwrap());
        let g = f.add_term(&[0, 0], &Rat::int(1));
        assert!(is_delta_regular(&g, &sq).unwrap());
    }

    #[test]
    fn edge_degeneration() {
        // t1 + 2 + 1/t1 = (t1 + 1)^2 / t1 along the horizontal edge of the square
        let f = LaurentPoly::from_i64(1, &[(&[1], 1), (&[0], 2), (&[-1], 1)]).unwrap();
        let seg = f.newton_polytope().unwrap();
        assert!(!is_delta_regular(&f, &seg).unwrap());
    }
}
