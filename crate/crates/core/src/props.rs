//! Variety-level predicates: Fano, terminal, Gorenstein, Picard numbers.
//!
//! All predicates are decided on the spanning polytope of the generator
//! list, which is the right notion for the face-fan varieties this crate
//! works with.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Fan, LatticeVector};
use crate::hull::{hull_of, Hull};

/// Property flags of a variety given by a generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VarietyProfile {
    pub q_factorial: bool,
    pub complete: bool,
    pub fano: bool,
    /// Only meaningful when `fano` holds; false otherwise.
    pub terminal: bool,
    /// Only meaningful when `fano` holds; false otherwise.
    pub gorenstein: bool,
    pub picard: i64,
}

fn hull_or_none(points: &[LatticeVector]) -> Result<Option<Hull>> {
    let dim = points.first().map_or(0, LatticeVector::dim);
    if !(2..=3).contains(&dim) {
        return Err(Error::Validation(format!("unsupported dimension {dim}")));
    }
    let coords: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    match hull_of(&coords, dim) {
        Ok(h) => Ok(Some(h)),
        Err(Error::Validation(_)) => Ok(None), // degenerate: cannot be Fano
        Err(e) => Err(e),
    }
}

/// Fano test: origin strictly interior to the spanning polytope and every
/// generator a vertex of it.
pub fn is_fano(points: &[LatticeVector]) -> Result<bool> {
    let Some(hull) = hull_or_none(points)? else {
        return Ok(false);
    };
    if !hull.origin_strictly_interior() {
        return Ok(false);
    }
    let coords: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    Ok((0..points.len()).all(|i| hull.is_vertex(&coords, i)))
}

/// Terminality for Fano input: the spanning polytope contains no lattice
/// point other than the origin and its vertices.
pub fn is_terminal(points: &[LatticeVector]) -> Result<bool> {
    if !is_fano(points)? {
        return Err(Error::Precondition("terminality test needs Fano input".into()));
    }
    let dim = points[0].dim();
    let coords: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let hull = hull_of(&coords, dim)?;
    let allowed: std::collections::BTreeSet<Vec<i64>> = coords
        .iter()
        .cloned()
        .chain(std::iter::once(vec![0; dim]))
        .collect();
    for p in lattice_points_in(&hull, &coords, dim) {
        if !allowed.contains(&p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Gorenstein (reflexive) test: every facet's primitive outward normal
/// supports the facet at lattice height one.
pub fn is_gorenstein(points: &[LatticeVector]) -> Result<bool> {
    if !is_fano(points)? {
        return Err(Error::Precondition("Gorenstein test needs Fano input".into()));
    }
    let dim = points[0].dim();
    let coords: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let hull = hull_of(&coords, dim)?;
    Ok(hull.facets.iter().all(|f| f.offset == 1))
}

/// All lattice points of the hull, by bounding-box scan with exact facet
/// membership.
fn lattice_points_in(hull: &Hull, coords: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for p in coords {
        for k in 0..dim {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        if hull.contains(&cur) {
            out.push(cur.clone());
        }
        for k in 0..dim {
            cur[k] += 1;
            if cur[k] <= hi[k] {
                continue 'scan;
            }
            cur[k] = lo[k];
        }
        break;
    }
    out
}

/// Picard number of a complete simplicial variety: rays minus dimension.
pub fn picard_number(fan: &Fan) -> Result<i64> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete("Picard number needs a complete fan".into()));
    }
    Ok(fan.n_generators() as i64 - fan.dim() as i64)
}

/// Picard number of the torus invariant surface around `ray` in a
/// 3-dimensional fan: the star cycle length minus two.
pub fn surface_picard(fan: &Fan, ray: usize) -> Result<i64> {
    let star = fan.star_of_ray(ray)?;
    Ok(star.rays.len() as i64 - 2)
}

/// Full profile of the variety spanned by `points`, with `fan` its face fan.
pub fn profile(points: &[LatticeVector], fan: &Fan) -> Result<VarietyProfile> {
    let fano = is_fano(points)?;
    let (terminal, gorenstein) = if fano {
        (is_terminal(points)?, is_gorenstein(points)?)
    } else {
        (false, false)
    };
    Ok(VarietyProfile {
        q_factorial: fan.is_simplicial(),
        complete: fan.is_complete(),
        fano,
        terminal,
        gorenstein,
        picard: fan.n_generators() as i64 - fan.dim() as i64,
    })
}
