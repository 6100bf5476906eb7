//! Brute-force enumeration of reflexive lattice polygons up to `GL(2, Z)`,
//! written without the `polytope` module so it can serve as an oracle.

use std::collections::BTreeSet;

pub type Pt = [i64; 2];

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Strict convex hull, counterclockwise, starting at the lexicographically smallest point.
pub fn hull(points: &[Pt]) -> Vec<Pt> {
    let mut p: Vec<Pt> = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Pt> = vec![];
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Pt> = vec![];
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area and the number of boundary lattice points.
fn area_boundary(v: &[Pt]) -> (i64, i64) {
    let n = v.len();
    let mut twice = 0;
    let mut b = 0;
    for i in 0..n {
        let (a, c) = (v[i], v[(i + 1) % n]);
        twice += a[0] * c[1] - a[1] * c[0];
        b += gcd(c[0] - a[0], c[1] - a[1]);
    }
    (twice, b)
}

/// Interior lattice points by Pick's theorem.
pub fn interior_count(v: &[Pt]) -> i64 {
    let (twice, b) = area_boundary(v);
    (twice - b + 2) / 2
}

pub fn boundary_count(v: &[Pt]) -> i64 {
    area_boundary(v).1
}

fn strictly_inside(v: &[Pt], p: Pt) -> bool {
    let n = v.len();
    (0..n).all(|i| cross(v[i], v[(i + 1) % n], p) > 0)
}

/// Lattice points of `k * conv(v)` for a counterclockwise polygon.
pub fn dilate_points(v: &[Pt], k: i64) -> Vec<Pt> {
    let w: Vec<Pt> = v.iter().map(|p| [k * p[0], k * p[1]]).collect();
    let (lo, hi) = w.iter().fold(([i64::MAX; 2], [i64::MIN; 2]), |(lo, hi), p| {
        ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
    });
    let n = w.len();
    let mut out = vec![];
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            if (0..n).all(|i| cross(w[i], w[(i + 1) % n], [x, y]) >= 0) {
                out.push([x, y]);
            }
        }
    }
    out
}

fn primitive(d: Pt) -> Pt {
    let g = gcd(d[0], d[1]);
    [d[0] / g, d[1] / g]
}

/// Extended Euclid: `(g, s, t)` with `s a + t b = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Canonical representative under `GL(2, Z)` and translation: over every
/// vertex and orientation, move the vertex to 0, its outgoing edge onto the
/// positive x-axis and reduce the incoming edge by a shear; keep the least
/// sorted vertex list.
pub fn normal_form(v: &[Pt]) -> Vec<Pt> {
    let n = v.len();
    let mut best: Option<Vec<Pt>> = None;
    for dir in [1i64, -1] {
        let order: Vec<Pt> = if dir == 1 { v.to_vec() } else { v.iter().rev().copied().collect() };
        for i in 0..n {
            let o = order[i];
            let a = primitive([order[(i + 1) % n][0] - o[0], order[(i + 1) % n][1] - o[1]]);
            let b = primitive([order[(i + n - 1) % n][0] - o[0], order[(i + n - 1) % n][1] - o[1]]);
            // rows (s, t) and (-a1, a0) send a to (1, 0)
            let (g, s, t) = ext_gcd(a[0], a[1]);
            let (s, t) = (s * g, t * g);
            let mut m = [[s, t], [-a[1], a[0]]];
            let bq = m[1][0] * b[0] + m[1][1] * b[1];
            if bq < 0 {
                m[1] = [-m[1][0], -m[1][1]];
            }
            let bq = bq.abs();
            let bp = m[0][0] * b[0] + m[0][1] * b[1];
            let shift = bp.div_euclid(bq);
            m[0] = [m[0][0] - shift * m[1][0], m[0][1] - shift * m[1][1]];
            let mut img: Vec<Pt> = order
                .iter()
                .map(|p| {
                    let d = [p[0] - o[0], p[1] - o[1]];
                    [m[0][0] * d[0] + m[0][1] * d[1], m[1][0] * d[0] + m[1][1] * d[1]]
                })
                .collect();
            img.sort();
            if best.as_ref().is_none_or(|bst| img < *bst) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

/// Vertex lists of one representative per class of reflexive polygons,
/// found among convex polygons with at most six vertices in `[-2, 2]^2`
/// whose only interior lattice point is the origin.
pub fn reflexive_polygons() -> Vec<Vec<Pt>> {
    let pts: Vec<Pt> = (-2..=2).flat_map(|x| (-2..=2).map(move |y| [x, y])).filter(|p| p != &[0, 0]).collect();
    let mut seen = BTreeSet::new();
    let mut reps = vec![];
    let mut chosen: Vec<Pt> = vec![];
    fn rec(
        pts: &[Pt],
        start: usize,
        chosen: &mut Vec<Pt>,
        seen: &mut BTreeSet<Vec<Pt>>,
        reps: &mut Vec<Vec<Pt>>,
    ) {
        if chosen.len() >= 3 {
            let h = hull(chosen);
            if h.len() != chosen.len() {
                return;
            }
            if strictly_inside(&h, [0, 0]) && interior_count(&h) == 1 && seen.insert(normal_form(&h)) {
                reps.push(h);
            }
        }
        if chosen.len() == 6 {
            return;
        }
        for i in start..pts.len() {
            chosen.push(pts[i]);
            rec(pts, i + 1, chosen, seen, reps);
            chosen.pop();
        }
    }
    rec(&pts, 0, &mut chosen, &mut seen, &mut reps);
    reps.sort_by_key(|v| (boundary_count(v), v.len(), normal_form(v)));
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pick_and_normal_form() {
        let tri = vec![[1, 0], [0, 1], [-1, -1]];
        assert_eq!(interior_count(&tri), 1);
        assert_eq!(boundary_count(&tri), 3);
        let moved: Vec<Pt> = tri.iter().map(|p| [p[0] + 2 * p[1], p[1]]).collect();
        assert_eq!(normal_form(&hull(&moved)), normal_form(&hull(&tri)));
        let square = vec![[-1, -1], [1, -1], [1, 1], [-1, 1]];
        assert_ne!(normal_form(&square), normal_form(&tri));
        assert_eq!(dilate_points(&tri, 2).len(), 10);
    }
}
