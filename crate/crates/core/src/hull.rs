//! Exact convex hulls of small lattice point sets in dimension 2 and 3.
//!
//! Facets are found by exhaustive supporting-hyperplane search over all
//! (d-1)-element subsets of the input. The point counts in this crate stay
//! below ~15, so the O(n^4) scan is instant and trivially exact. Normals are
//! primitive integers oriented outward.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rat_int, RatMatrix, Rational};

/// Coordinates are bounded so that all hull arithmetic fits in `i128`
/// (cross products of coordinate differences times a coordinate).
pub const MAX_COORD: i64 = 1_000_000;

/// A facet of the hull: `normal . x = offset` on the facet,
/// `normal . x <= offset` on the whole point set, `normal` primitive outward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i128>,
    pub offset: i128,
    /// Indices of input points lying on the facet hyperplane.
    pub on: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

fn dot(n: &[i128], p: &[i64]) -> i128 {
    n.iter().zip(p).map(|(a, &b)| a * b as i128).sum()
}

/// Primitive normal of the hyperplane through `d` points (zero if degenerate).
fn hyperplane_normal(pts: &[&[i64]]) -> Vec<i128> {
    match pts.len() {
        2 => {
            let u0 = (pts[1][0] - pts[0][0]) as i128;
            let u1 = (pts[1][1] - pts[0][1]) as i128;
            vec![u1, -u0]
        }
        3 => {
            let u: Vec<i128> = (0..3).map(|k| (pts[1][k] - pts[0][k]) as i128).collect();
            let v: Vec<i128> = (0..3).map(|k| (pts[2][k] - pts[0][k]) as i128).collect();
            vec![
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        }
        _ => unreachable!("hyperplanes only in dim 2 or 3"),
    }
}

/// Facets of the convex hull of `points`, which must span `R^dim`.
pub fn hull_of(points: &[Vec<i64>], dim: usize) -> Result<Hull> {
    if !(2..=3).contains(&dim) {
        return Err(Error::Validation(format!("unsupported dimension {dim}")));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        if p.iter().any(|&c| c.abs() > MAX_COORD) {
            return Err(Error::Validation(format!(
                "coordinate exceeds bound {MAX_COORD}"
            )));
        }
    }
    let n = points.len();
    if n < dim {
        return Err(Error::Validation("too few points to span".into()));
    }
    let mut facets: BTreeMap<(Vec<i128>, i128), Vec<usize>> = BTreeMap::new();
    let idx_subsets = subsets_of(n, dim - 1 + 1); // d points define a hyperplane
    for sub in idx_subsets {
        let pts: Vec<&[i64]> = sub.iter().map(|&i| points[i].as_slice()).collect();
        let mut normal = hyperplane_normal(&pts);
        if normal.iter().all(|&c| c == 0) {
            continue;
        }
        let mut offset = dot(&normal, pts[0]);
        let mut pos = false;
        let mut neg = false;
        for p in points {
            let s = dot(&normal, p) - offset;
            if s > 0 {
                pos = true;
            } else if s < 0 {
                neg = true;
            }
            if pos && neg {
                break;
            }
        }
        if pos == neg {
            // Mixed signs: not a supporting plane. All zero: the input is
            // flat in this direction and there is no facet to orient.
            continue;
        }
        if pos {
            for c in &mut normal {
                *c = -*c;
            }
            offset = -offset;
        }
        let g = normal
            .iter()
            .fold(0i128, |acc, &c| acc.gcd(&c));
        if g > 1 {
            for c in &mut normal {
                *c /= g;
            }
            offset /= g;
        }
        let on: Vec<usize> = (0..n)
            .filter(|&i| dot(&normal, &points[i]) == offset)
            .collect();
        facets.entry((normal, offset)).or_insert(on);
    }
    if facets.is_empty() {
        return Err(Error::Validation("points do not span the space".into()));
    }
    Ok(Hull {
        dim,
        facets: facets
            .into_iter()
            .map(|((normal, offset), on)| Facet { normal, offset, on })
            .collect(),
    })
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl Hull {
    /// True when the origin satisfies every facet inequality strictly.
    pub fn origin_strictly_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    /// Membership of a lattice point (boundary included).
    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, p) <= f.offset)
    }

    /// Whether input point `i` is a vertex of the hull.
    pub fn is_vertex(&self, points: &[Vec<i64>], i: usize) -> bool {
        let Some(facet) = self.facets.iter().find(|f| f.on.contains(&i)) else {
            return false; // strictly inside the hull
        };
        if facet.on.len() == self.dim {
            return true;
        }
        let others: Vec<usize> = facet.on.iter().copied().filter(|&j| j != i).collect();
        !in_convex_hull_of(&points[i], &others, points)
    }
}

/// Exact membership of `p` in the convex hull of the points indexed by
/// `idx`, by Caratheodory search over simplices of dimension <= 2.
fn in_convex_hull_of(p: &[i64], idx: &[usize], points: &[Vec<i64>]) -> bool {
    let d = p.len();
    // Single points and segments.
    for (a_pos, &a) in idx.iter().enumerate() {
        if points[a] == p {
            return true;
        }
        for &b in &idx[a_pos + 1..] {
            if on_segment(p, &points[a], &points[b]) {
                return true;
            }
        }
    }
    // Triangles.
    for (a_pos, &a) in idx.iter().enumerate() {
        for (b_off, &b) in idx[a_pos + 1..].iter().enumerate() {
            for &c in &idx[a_pos + 1 + b_off + 1..] {
                let cols: Vec<Vec<Rational>> = (0..d)
                    .map(|k| {
                        vec![
                            rat_int(points[a][k] - points[c][k]),
                            rat_int(points[b][k] - points[c][k]),
                        ]
                    })
                    .collect();
                let mat = RatMatrix::new(d, 2, cols.concat()).expect("well-formed");
                let rhs: Vec<Rational> = (0..d).map(|k| rat_int(p[k] - points[c][k])).collect();
                if let Ok(Some(lambda)) = mat.solve(&rhs) {
                    // Verify (solve may return a least-structure answer only
                    // for consistent systems, so re-check exactly).
                    let consistent = (0..d).all(|k| {
                        &lambda[0] * rat_int(points[a][k] - points[c][k])
                            + &lambda[1] * rat_int(points[b][k] - points[c][k])
                            == rat_int(p[k] - points[c][k])
                    });
                    let zero = BigRational::zero();
                    if consistent
                        && lambda[0] >= zero
                        && lambda[1] >= zero
                        && &lambda[0] + &lambda[1] <= rat_int(1)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn on_segment(p: &[i64], a: &[i64], b: &[i64]) -> bool {
    let d = p.len();
    // p = a + t (b - a) with rational t in [0, 1].
    let mut t: Option<Rational> = None;
    for k in 0..d {
        let num = p[k] - a[k];
        let den = b[k] - a[k];
        if den == 0 {
            if num != 0 {
                return false;
            }
            continue;
        }
        let tk = Rational::new(num.into(), den.into());
        match &t {
            None => t = Some(tk),
            Some(prev) if *prev != tk => return false,
            _ => {}
        }
    }
    match t {
        Some(t) => t >= BigRational::zero() && t <= rat_int(1),
        None => true, // a == b == p
    }
}
