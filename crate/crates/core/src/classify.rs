//! Variety verdicts and dataset-level classification runs.
//!
//! A verdict checks `gamma_2 . S >= 0` (or `> 0`) on every torus invariant
//! surface: all rays of a 3-fold, the whole variety when 2-dimensional.
//! The reflexive polygon enumeration is an independent brute-force oracle
//! over vertex sets in `[-3,3]^2`, deduplicated by a Hermite-form canonical
//! representative of the `GL(2,Z)` orbit.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Fan, LatticeVector};
use crate::intersection::{gamma_dot_surface, rho1_form, rho2_form, Surface};
use crate::linalg::Rational;
use crate::props::{self, VarietyProfile};

/// Sign class of `gamma_2` over all torus invariant surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "gamma2-positive")]
    Gamma2Positive,
    #[serde(rename = "gamma2-nef-not-positive")]
    Gamma2NefNotPositive,
    #[serde(rename = "not-gamma2-nef")]
    NotGamma2Nef,
}

impl Verdict {
    pub fn is_nef(self) -> bool {
        matches!(self, Verdict::Gamma2Positive | Verdict::Gamma2NefNotPositive)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Gamma2Positive => "gamma2-positive",
            Verdict::Gamma2NefNotPositive => "gamma2-nef-not-positive",
            Verdict::NotGamma2Nef => "not-gamma2-nef",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which closed form applies to a surface (the reported value itself is
/// always computed by the generic exact route).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormTag {
    Rho1,
    Rho2,
    Generic,
}

#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub surface: Surface,
    pub rho: i64,
    pub gamma2: Rational,
    pub form: FormTag,
}

#[derive(Debug, Clone)]
pub struct VarietyReport {
    pub id: String,
    pub profile: VarietyProfile,
    pub surfaces: Vec<SurfaceReport>,
    pub verdict: Verdict,
    pub witness: Surface,
}

impl VarietyReport {
    pub fn witness_value(&self) -> &Rational {
        &self
            .surfaces
            .iter()
            .find(|s| s.surface == self.witness)
            .expect("witness is a listed surface")
            .gamma2
    }
}

/// Classify the variety spanned by `points`.
pub fn verdict(id: &str, points: &[LatticeVector]) -> Result<VarietyReport> {
    let fan = Fan::face_fan(points.to_vec())?;
    verdict_of_fan(id, &fan)
}

/// Classify a complete simplicial fan assembled by hand (used for fans that
/// are not face fans of their generators, e.g. non-Fano test fans).
pub fn verdict_of_fan(id: &str, fan: &Fan) -> Result<VarietyReport> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete("verdicts need a complete fan".into()));
    }
    let profile = props::profile(fan.generators(), fan)?;
    let selectors: Vec<Surface> = match fan.dim() {
        2 => vec![Surface::Whole],
        3 => (0..fan.n_generators()).map(Surface::Ray).collect(),
        d => {
            return Err(Error::Validation(format!(
                "verdicts are defined in dimension 2 and 3, got {d}"
            )))
        }
    };
    let mut surfaces = Vec::with_capacity(selectors.len());
    for sel in selectors {
        let rho = match sel {
            Surface::Whole => props::picard_number(fan)?,
            Surface::Ray(r) => props::surface_picard(fan, r)?,
        };
        let gamma2 = gamma_dot_surface(fan, sel)?;
        let form = match rho {
            1 => FormTag::Rho1,
            2 => FormTag::Rho2,
            _ => FormTag::Generic,
        };
        debug_assert!(closed_form_sign_agrees(fan, sel, form, &gamma2));
        surfaces.push(SurfaceReport {
            surface: sel,
            rho,
            gamma2,
            form,
        });
    }
    let zero = Rational::zero();
    let verdict = if surfaces.iter().all(|s| s.gamma2 > zero) {
        Verdict::Gamma2Positive
    } else if surfaces.iter().all(|s| s.gamma2 >= zero) {
        Verdict::Gamma2NefNotPositive
    } else {
        Verdict::NotGamma2Nef
    };
    let witness = surfaces
        .iter()
        .min_by(|a, b| a.gamma2.cmp(&b.gamma2))
        .expect("at least one surface")
        .surface;
    Ok(VarietyReport {
        id: id.to_string(),
        profile,
        surfaces,
        verdict,
        witness,
    })
}

fn closed_form_sign_agrees(fan: &Fan, sel: Surface, form: FormTag, exact: &Rational) -> bool {
    let closed = match form {
        FormTag::Rho1 => rho1_form(fan, sel),
        FormTag::Rho2 => rho2_form(fan, sel),
        FormTag::Generic => return true,
    };
    match closed {
        Ok(q) => {
            let scaled = q.diagonal_sum();
            scaled.cmp(&Rational::zero()) == exact.cmp(&Rational::zero())
        }
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub positive: usize,
    pub nef_not_positive: usize,
    pub not_nef: usize,
    pub errors: usize,
    pub fano: usize,
    pub terminal: usize,
    pub gorenstein: usize,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub reports: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// One sweep result: the record id with its report or error.
pub type SweepRow = (String, Result<VarietyReport>);

/// Classify a list of `(id, points)` records; per-entry errors are
/// collected, not fatal. Evaluation order across `jobs` worker threads is
/// arbitrary, the output order is the input order.
pub fn sweep(entries: &[(String, Vec<LatticeVector>)], jobs: usize) -> SweepOutcome {
    let jobs = jobs.max(1).min(entries.len().max(1));
    let mut results: Vec<Option<SweepRow>> = vec![None; entries.len()];
    if jobs <= 1 {
        for (i, (id, points)) in entries.iter().enumerate() {
            results[i] = Some((id.clone(), verdict(id, points)));
        }
    } else {
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| (w..entries.len()).step_by(jobs).collect())
            .collect();
        let computed: Vec<Vec<(usize, SweepRow)>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|chunk| {
                        scope.spawn(move || {
                            chunk
                                .iter()
                                .map(|&i| {
                                    let (id, points) = &entries[i];
                                    (i, (id.clone(), verdict(id, points)))
                                })
                                .collect()
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker")).collect()
            });
        for chunk in computed {
            for (i, r) in chunk {
                results[i] = Some(r);
            }
        }
    }
    let reports: Vec<SweepRow> = results.into_iter().map(|r| r.expect("filled")).collect();
    let mut summary = SweepSummary {
        total: reports.len(),
        ..SweepSummary::default()
    };
    for (_, r) in &reports {
        match r {
            Ok(rep) => {
                match rep.verdict {
                    Verdict::Gamma2Positive => summary.positive += 1,
                    Verdict::Gamma2NefNotPositive => summary.nef_not_positive += 1,
                    Verdict::NotGamma2Nef => summary.not_nef += 1,
                }
                if rep.profile.fano {
                    summary.fano += 1;
                }
                if rep.profile.terminal {
                    summary.terminal += 1;
                }
                if rep.profile.gorenstein {
                    summary.gorenstein += 1;
                }
            }
            Err(_) => summary.errors += 1,
        }
    }
    SweepOutcome { reports, summary }
}

// ---------------------------------------------------------------------------
// Reflexive polygon enumeration.
// ---------------------------------------------------------------------------

type Col = (i64, i64);

fn cross(a: Col, b: Col) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Angular order around the origin: upper half plane (positive x-axis
/// included) first, then by counterclockwise angle.
fn angular_cmp(a: Col, b: Col) -> std::cmp::Ordering {
    let half = |p: Col| usize::from(!(p.1 > 0 || (p.1 == 0 && p.0 > 0)));
    half(a).cmp(&half(b)).then_with(|| {
        // Within a half plane the cross product orders by angle.
        0.cmp(&cross(a, b))
    })
}

/// Extended gcd: `(g, u, v)` with `u a + v b = g >= 0`.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, u, v) = egcd(b, a.rem_euclid(b));
        (g, v, u - a.div_euclid(b) * v)
    }
}

/// Left Hermite form of the 2 x k matrix with the given columns: the unique
/// representative of its orbit under `GL(2,Z)` acting on coordinates.
fn row_hermite(cols: &[Col]) -> Vec<(i128, i128)> {
    let mut r0: Vec<i128> = cols.iter().map(|c| c.0 as i128).collect();
    let mut r1: Vec<i128> = cols.iter().map(|c| c.1 as i128).collect();
    let (g, u, v) = egcd(r0[0], r1[0]);
    debug_assert!(g > 0, "vertex columns are nonzero");
    let (p, q) = (-r1[0] / g, r0[0] / g);
    for j in 0..cols.len() {
        let (a, b) = (r0[j], r1[j]);
        r0[j] = u * a + v * b;
        r1[j] = p * a + q * b;
    }
    let pivot = r1
        .iter()
        .position(|&x| x != 0)
        .expect("vertex matrix has rank 2");
    if r1[pivot] < 0 {
        for x in &mut r1 {
            *x = -*x;
        }
    }
    let h = r1[pivot];
    let shift = r0[pivot].div_euclid(h);
    if shift != 0 {
        for j in 0..cols.len() {
            r0[j] -= shift * r1[j];
        }
    }
    (0..cols.len()).map(|j| (r0[j], r1[j])).collect()
}

/// Canonical form of a polygon given by its vertex cycle: the
/// lexicographically smallest Hermite form over all rotations and both
/// orientations of the cycle.
fn canonical_of_cycle(cycle: &[Col]) -> Vec<(i128, i128)> {
    let k = cycle.len();
    let mut best: Option<Vec<(i128, i128)>> = None;
    let mut candidate = Vec::with_capacity(k);
    for start in 0..k {
        for dir in [1usize, 2] {
            candidate.clear();
            for t in 0..k {
                let idx = if dir == 1 {
                    (start + t) % k
                } else {
                    (start + k - t) % k
                };
                candidate.push(cycle[idx]);
            }
            let h = row_hermite(&candidate);
            if best.as_ref().is_none_or(|b| h < *b) {
                best = Some(h);
            }
        }
    }
    best.expect("nonempty cycle")
}

/// Canonical `GL(2,Z)` representative of a polygon spanned by vertices
/// around an interior origin.
pub fn polygon_canonical_form(points: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    if points.iter().any(|p| p.dim() != 2) {
        return Err(Error::Validation("canonical forms are for polygons".into()));
    }
    let mut cycle: Vec<Col> = points.iter().map(|p| (p.coords()[0], p.coords()[1])).collect();
    cycle.sort_by(|&a, &b| angular_cmp(a, b));
    let k = cycle.len();
    for t in 0..k {
        if cross(cycle[t], cycle[(t + 1) % k]) <= 0 {
            return Err(Error::NotFano(
                "origin is not strictly interior to the polygon".into(),
            ));
        }
        let (prev, cur, next) = (cycle[(t + k - 1) % k], cycle[t], cycle[(t + 1) % k]);
        let turn = cross(
            (cur.0 - prev.0, cur.1 - prev.1),
            (next.0 - cur.0, next.1 - cur.1),
        );
        if turn <= 0 {
            return Err(Error::NonVertexGenerator { index: t });
        }
    }
    canonical_of_cycle(&cycle)
        .into_iter()
        .map(|(x, y)| LatticeVector::new(vec![x as i64, y as i64]))
        .collect()
}

/// All reflexive lattice polygons up to `GL(2,Z)`, by brute force over
/// vertex sets of primitive points in `[-3,3]^2` (vertices of reflexive
/// polygons are primitive, and no class needs more than 6 vertices).
pub fn enumerate_reflexive_polygons() -> Vec<Vec<LatticeVector>> {
    const BOX: i64 = 3;
    let mut pts: Vec<Col> = Vec::new();
    for x in -BOX..=BOX {
        for y in -BOX..=BOX {
            if (x, y) != (0, 0) && gcd64(x, y) == 1 {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by(|&a, &b| angular_cmp(a, b));
    let n = pts.len();
    let mut classes: BTreeSet<Vec<(i128, i128)>> = BTreeSet::new();
    let mut subset: Vec<usize> = Vec::new();

    // Combinations in angular order: the chosen subset is automatically the
    // candidate vertex cycle.
    fn rec(
        pts: &[Col],
        n: usize,
        k: usize,
        start: usize,
        subset: &mut Vec<usize>,
        classes: &mut BTreeSet<Vec<(i128, i128)>>,
    ) {
        if subset.len() == k {
            let cycle: Vec<Col> = subset.iter().map(|&i| pts[i]).collect();
            if is_reflexive_vertex_cycle(&cycle) {
                classes.insert(canonical_of_cycle(&cycle));
            }
            return;
        }
        let remaining = k - subset.len();
        for i in start..=(n - remaining) {
            subset.push(i);
            rec(pts, n, k, i + 1, subset, classes);
            subset.pop();
        }
    }

    for k in 3..=6 {
        rec(&pts, n, k, 0, &mut subset, &mut classes);
    }
    let mut out: Vec<Vec<LatticeVector>> = classes
        .into_iter()
        .map(|cols| {
            cols.into_iter()
                .map(|(x, y)| {
                    LatticeVector::new(vec![x as i64, y as i64]).expect("small canonical entry")
                })
                .collect()
        })
        .collect();
    out.sort_by_key(|p: &Vec<LatticeVector>| {
        (p.len(), p.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>())
    });
    out
}

/// Strictly convex cycle around the origin with every edge at lattice
/// height one.
fn is_reflexive_vertex_cycle(cycle: &[Col]) -> bool {
    let k = cycle.len();
    for t in 0..k {
        let a = cycle[t];
        let b = cycle[(t + 1) % k];
        let c = cross(a, b);
        // c > 0: consecutive angular gaps below pi (origin interior);
        // c == gcd(edge direction): supporting line at height one.
        if c <= 0 || c != gcd64(b.1 - a.1, b.0 - a.0) {
            return false;
        }
        let p = cycle[(t + 2) % k];
        if cross((b.0 - a.0, b.1 - a.1), (p.0 - b.0, p.1 - b.1)) <= 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::lv;
    use crate::linalg::rat_int;

    fn p2() -> Vec<LatticeVector> {
        vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])]
    }

    #[test]
    fn simplex_3fold_is_positive() {
        let rep = verdict(
            "4",
            &[
                lv(&[1, 0, 0]),
                lv(&[0, 1, 0]),
                lv(&[0, 0, 1]),
                lv(&[-1, -1, -1]),
            ],
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2Positive);
        assert_eq!(rep.profile.picard, 1);
        assert!(rep.profile.terminal);
        assert_eq!(rep.surfaces.len(), 4);
        assert!(rep.surfaces.iter().all(|s| s.rho == 1));
    }

    #[test]
    fn worked_example_is_nef_with_zero_witness() {
        let rep = verdict(
            "34",
            &[
                lv(&[1, 0, 0]),
                lv(&[0, 1, 0]),
                lv(&[-2, 1, 5]),
                lv(&[1, -1, -3]),
                lv(&[-1, 1, 3]),
            ],
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2NefNotPositive);
        assert_eq!(rep.witness, Surface::Ray(0));
        assert_eq!(rep.witness_value(), &rat_int(0));
    }

    #[test]
    fn p2_report() {
        let rep = verdict("P2", &p2()).unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2Positive);
        assert_eq!(rep.surfaces.len(), 1);
        assert_eq!(rep.surfaces[0].gamma2, rat_int(3));
        assert_eq!(rep.surfaces[0].form, FormTag::Rho1);
    }

    #[test]
    fn sweep_collects_errors() {
        let entries = vec![
            ("good".to_string(), p2()),
            (
                "bad".to_string(),
                vec![lv(&[1, 0]), lv(&[-1, 0]), lv(&[0, 1])],
            ),
        ];
        let out = sweep(&entries, 1);
        assert_eq!(out.summary.total, 2);
        assert_eq!(out.summary.positive, 1);
        assert_eq!(out.summary.errors, 1);
        assert!(out.reports[1].1.is_err());
    }

    #[test]
    fn sweep_is_deterministic_across_jobs() {
        let entries: Vec<(String, Vec<LatticeVector>)> = (0..6)
            .map(|i| (format!("r{i}"), p2()))
            .collect();
        let a = sweep(&entries, 1);
        let b = sweep(&entries, 4);
        let ids_a: Vec<&String> = a.reports.iter().map(|(id, _)| id).collect();
        let ids_b: Vec<&String> = b.reports.iter().map(|(id, _)| id).collect();
        assert_eq!(ids_a, ids_b);
    }

    #[test]
    fn canonical_form_is_unimodular_invariant() {
        let a = polygon_canonical_form(&p2()).unwrap();
        // Image of P^2 generators under [[1, 1], [0, 1]].
        let b = polygon_canonical_form(&[lv(&[1, 0]), lv(&[1, 1]), lv(&[-2, -1])]).unwrap();
        assert_eq!(a, b);
        // A non-equivalent triangle.
        let c = polygon_canonical_form(&[lv(&[0, 1]), lv(&[2, 1]), lv(&[-1, -1])]).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn enumeration_finds_sixteen_classes() {
        let classes = enumerate_reflexive_polygons();
        assert_eq!(classes.len(), 16);
        let p2_canon = polygon_canonical_form(&p2()).unwrap();
        assert!(classes.contains(&p2_canon));
        for poly in &classes {
            assert!(props::is_fano(poly).unwrap());
            assert!(props::is_gorenstein(poly).unwrap());
        }
    }
}
