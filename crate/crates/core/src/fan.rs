//! Lattice fans in dimension 2 and 3.
//!
//! A variety is specified by its generator list alone; the fan is
//! reconstructed as the face fan of the convex hull of the generators
//! ([`Fan::face_fan`]), which is how Fano varieties are tabulated. Hand
//! assembly through [`Fan::new`] is kept for non-Fano test fans and product
//! fans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::hull::{self, MAX_COORD};
use crate::linalg::lattice_index;

/// An integer point of the lattice `N = Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if !(1..=3).contains(&coords.len()) {
            return Err(Error::Validation(format!(
                "unsupported dimension {}",
                coords.len()
            )));
        }
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::Validation("zero vector".into()));
        }
        if coords.iter().any(|&c| c.abs() > MAX_COORD) {
            return Err(Error::Validation(format!(
                "coordinate exceeds bound {MAX_COORD}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_primitive(&self) -> bool {
        self.coords.iter().fold(0i64, |acc, &c| acc.gcd(&c)) == 1
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Convenience constructor used throughout the tests.
pub fn lv(coords: &[i64]) -> LatticeVector {
    LatticeVector::new(coords.to_vec()).expect("valid lattice vector")
}

/// A simplicial cone, stored as a sorted set of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.indices.iter().all(|i| other.contains(*i))
    }
}

/// A complete-or-partial fan: primitive generators plus maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    generators: Vec<LatticeVector>,
    maximal_cones: Vec<Cone>,
}

/// The link of a surface cone: neighbor rays arranged in a cycle, with
/// `cones[k]` the maximal cone spanned by the surface cone together with
/// `rays[k]` and `rays[(k + 1) % m]`.
#[derive(Debug, Clone)]
pub struct StarCycle {
    pub rays: Vec<usize>,
    pub cones: Vec<Cone>,
}

impl Fan {
    pub fn new(
        dim: usize,
        generators: Vec<LatticeVector>,
        maximal_cones: Vec<Cone>,
    ) -> Result<Fan> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Validation(format!("unsupported dimension {dim}")));
        }
        let mut seen = BTreeSet::new();
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
            if !g.is_primitive() {
                return Err(Error::Validation(format!("generator {i} is not primitive")));
            }
            if !seen.insert(g.coords().to_vec()) {
                return Err(Error::Validation(format!("duplicate generator {g}")));
            }
        }
        let mut used = vec![false; generators.len()];
        for cone in &maximal_cones {
            if cone.dim() == 0 || cone.dim() > dim {
                return Err(Error::Structure(format!(
                    "cone of dimension {} in a {dim}-dimensional fan",
                    cone.dim()
                )));
            }
            for &i in cone.indices() {
                if i >= generators.len() {
                    return Err(Error::Structure(format!("cone references generator {i}")));
                }
                used[i] = true;
            }
            let vecs: Vec<&[i64]> = cone
                .indices()
                .iter()
                .map(|&i| generators[i].coords())
                .collect();
            lattice_index(&vecs).map_err(|_| Error::Structure("degenerate cone".into()))?;
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return Err(Error::Structure(format!(
                "generator {i} lies in no maximal cone"
            )));
        }
        let mut cones = maximal_cones;
        cones.sort();
        cones.dedup();
        Ok(Fan {
            dim,
            generators,
            maximal_cones: cones,
        })
    }

    /// Face fan of the convex hull of `points`.
    ///
    /// Requires the origin strictly interior, every point a vertex of the
    /// hull, and (in dimension 3) simplicial facets; each condition failing
    /// gives a distinct error.
    pub fn face_fan(points: Vec<LatticeVector>) -> Result<Fan> {
        let dim = points.first().map_or(0, LatticeVector::dim);
        if !(2..=3).contains(&dim) {
            return Err(Error::Validation(format!(
                "face fans only in dimension 2 or 3, got {dim}"
            )));
        }
        for p in &points {
            if !p.is_primitive() {
                return Err(Error::Validation(format!("non-primitive generator {p}")));
            }
        }
        let coords: Vec<Vec<i64>> = points.iter().map(|p| p.coords().to_vec()).collect();
        let hull = hull::hull_of(&coords, dim)
            .map_err(|_| Error::NotFano("generators do not span the lattice".into()))?;
        if !hull.origin_strictly_interior() {
            return Err(Error::NotFano(
                "origin is not strictly interior to the spanning polytope".into(),
            ));
        }
        for i in 0..points.len() {
            if !hull.is_vertex(&coords, i) {
                return Err(Error::NonVertexGenerator { index: i });
            }
        }
        let mut cones = Vec::with_capacity(hull.facets.len());
        for f in &hull.facets {
            if f.on.len() != dim {
                return Err(Error::NonSimplicialFacet(f.on.len()));
            }
            cones.push(Cone::new(f.on.clone()));
        }
        Fan::new(dim, points, cones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &LatticeVector {
        &self.generators[i]
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// Lattice index of the cone's generators inside the saturation of
    /// their span; 1 exactly for smooth cones.
    pub fn mult(&self, cone: &Cone) -> Result<BigInt> {
        let vecs: Vec<&[i64]> = cone
            .indices()
            .iter()
            .map(|&i| self.generators[i].coords())
            .collect();
        lattice_index(&vecs)
    }

    pub fn is_simplicial(&self) -> bool {
        // Cones are generated by independent rays by construction; being
        // simplicial as a complete fan additionally means full dimension.
        self.maximal_cones.iter().all(|c| c.dim() == self.dim)
    }

    /// Wall-to-maximal-cone incidence: every (d-1)-face of every maximal
    /// cone, mapped to the maximal cones containing it.
    fn wall_incidence(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.maximal_cones.iter().enumerate() {
            for skip in 0..cone.dim() {
                let wall: Vec<usize> = cone
                    .indices()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                map.entry(wall).or_default().push(ci);
            }
        }
        map
    }

    /// Completeness: every wall lies in exactly two maximal cones whose
    /// completing generators sit on opposite sides of the wall hyperplane
    /// (solid-angle closure), and the dual graph of maximal cones is
    /// connected.
    pub fn is_complete(&self) -> bool {
        if self.dim == 1 {
            let mut signs: Vec<i64> = self.generators.iter().map(|g| g.coords()[0]).collect();
            signs.sort_unstable();
            return signs == [-1, 1] && self.maximal_cones.len() == 2;
        }
        if !self.is_simplicial() || self.maximal_cones.is_empty() {
            return false;
        }
        let incidence = self.wall_incidence();
        if incidence.values().any(|cones| cones.len() != 2) {
            return false;
        }
        for (wall, cones) in &incidence {
            if !self.wall_separates(wall, [cones[0], cones[1]]) {
                return false;
            }
        }
        // Dual graph connectivity.
        let n = self.maximal_cones.len();
        let mut adj = vec![Vec::new(); n];
        for cones in incidence.values() {
            adj[cones[0]].push(cones[1]);
            adj[cones[1]].push(cones[0]);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &nb in &adj[c] {
                if !seen[nb] {
                    seen[nb] = true;
                    stack.push(nb);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The two maximal cones at a wall must complete it to opposite sides
    /// of its hyperplane; a same-side pair means the cones overlap instead
    /// of closing up around the wall.
    fn wall_separates(&self, wall: &[usize], cones: [usize; 2]) -> bool {
        let rows: Vec<&[i64]> = wall.iter().map(|&i| self.generators[i].coords()).collect();
        let kernel = crate::linalg::RatMatrix::from_int_rows(&rows).kernel_basis();
        let [normal] = kernel.as_slice() else {
            return false;
        };
        let side = |cone_idx: usize| -> Option<i32> {
            let outer = self.maximal_cones[cone_idx]
                .indices()
                .iter()
                .copied()
                .find(|i| !wall.contains(i))?;
            let dot: BigInt = normal
                .iter()
                .zip(self.generators[outer].coords())
                .map(|(n, &c)| n * BigInt::from(c))
                .sum();
            match dot.sign() {
                num_bigint::Sign::Plus => Some(1),
                num_bigint::Sign::Minus => Some(-1),
                num_bigint::Sign::NoSign => None,
            }
        };
        matches!((side(cones[0]), side(cones[1])), (Some(a), Some(b)) if a != b)
    }

    /// All walls of a complete fan with their two incident maximal cones.
    pub fn walls(&self) -> Result<Vec<(Cone, [usize; 2])>> {
        let incidence = self.wall_incidence();
        let mut out = Vec::with_capacity(incidence.len());
        for (wall, cones) in incidence {
            if cones.len() != 2 {
                return Err(Error::NotComplete(format!(
                    "wall {wall:?} lies in {} maximal cone(s)",
                    cones.len()
                )));
            }
            out.push((Cone::new(wall), [cones[0], cones[1]]));
        }
        Ok(out)
    }

    /// Neighbor cycle around a surface cone: the full ray cycle of a
    /// 2-dimensional fan (`tau` empty), or the link of a ray in a
    /// 3-dimensional fan.
    pub fn star_cycle(&self, tau: &[usize]) -> Result<StarCycle> {
        let expected_link = self.dim - tau.len();
        if expected_link != 2 {
            return Err(Error::Structure(format!(
                "star cycles exist for codimension-2 cones, got codimension {expected_link}"
            )));
        }
        let through: Vec<&Cone> = self
            .maximal_cones
            .iter()
            .filter(|c| tau.iter().all(|&i| c.contains(i)))
            .collect();
        if through.is_empty() {
            return Err(Error::Structure("cone lies in no maximal cone".into()));
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for cone in &through {
            let pair: Vec<usize> = cone
                .indices()
                .iter()
                .copied()
                .filter(|i| !tau.contains(i))
                .collect();
            if pair.len() != 2 {
                return Err(Error::NotSimplicial);
            }
            adj.entry(pair[0]).or_default().push(pair[1]);
            adj.entry(pair[1]).or_default().push(pair[0]);
        }
        if adj.values().any(|nb| nb.len() != 2) {
            return Err(Error::Structure(
                "star of the cone is not a closed cycle".into(),
            ));
        }
        let start = *adj.keys().next().expect("nonempty link");
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = *adj[&start].iter().min().expect("two neighbors");
        while cur != start {
            cycle.push(cur);
            let nbs = &adj[&cur];
            let next = if nbs[0] == prev { nbs[1] } else { nbs[0] };
            prev = cur;
            cur = next;
        }
        if cycle.len() != through.len() || cycle.len() < 3 {
            return Err(Error::Structure(
                "star of the cone is not a single cycle".into(),
            ));
        }
        let mut cones = Vec::with_capacity(cycle.len());
        for k in 0..cycle.len() {
            let a = cycle[k];
            let b = cycle[(k + 1) % cycle.len()];
            let mut idx = tau.to_vec();
            idx.push(a);
            idx.push(b);
            let cone = Cone::new(idx);
            if !through.iter().any(|c| **c == cone) {
                return Err(Error::Structure("cycle does not match cone list".into()));
            }
            cones.push(cone);
        }
        Ok(StarCycle { rays: cycle, cones })
    }

    /// Star of a ray in a 3-dimensional fan.
    pub fn star_of_ray(&self, ray: usize) -> Result<StarCycle> {
        if self.dim != 3 {
            return Err(Error::Structure(
                "ray stars are cycles only in dimension 3".into(),
            ));
        }
        if ray >= self.generators.len() {
            return Err(Error::Structure(format!("no generator {ray}")));
        }
        self.star_cycle(&[ray])
    }

    /// Product fan (generators embedded block-wise, cones pairwise unions).
    pub fn product(&self, other: &Fan) -> Result<Fan> {
        let dim = self.dim + other.dim;
        if dim > 3 {
            return Err(Error::Validation(format!(
                "product dimension {dim} unsupported"
            )));
        }
        let mut generators = Vec::new();
        for g in &self.generators {
            let mut c = g.coords().to_vec();
            c.resize(self.dim + other.dim, 0);
            generators.push(LatticeVector::new(c)?);
        }
        for g in &other.generators {
            let mut c = vec![0; self.dim];
            c.extend_from_slice(g.coords());
            generators.push(LatticeVector::new(c)?);
        }
        let offset = self.generators.len();
        let mut cones = Vec::new();
        for a in &self.maximal_cones {
            for b in &other.maximal_cones {
                let mut idx = a.indices().to_vec();
                idx.extend(b.indices().iter().map(|&i| i + offset));
                cones.push(Cone::new(idx));
            }
        }
        Fan::new(dim, generators, cones)
    }

    /// The complete fan of the projective line.
    pub fn projective_line() -> Fan {
        Fan::new(
            1,
            vec![lv(&[1]), lv(&[-1])],
            vec![Cone::new(vec![0]), Cone::new(vec![1])],
        )
        .expect("static fan")
    }

    /// Subdivide a maximal cone of a 2-dimensional fan at a primitive ray
    /// `y` strictly interior to it. Returns the new fan and the index of
    /// the inserted generator.
    pub fn subdivide_2d(&self, cone: &Cone, y: &LatticeVector) -> Result<(Fan, usize)> {
        if self.dim != 2 || cone.dim() != 2 {
            return Err(Error::Structure("subdivision needs a 2-dimensional cone".into()));
        }
        if !self.maximal_cones.contains(cone) {
            return Err(Error::Structure("not a maximal cone of this fan".into()));
        }
        if !y.is_primitive() {
            return Err(Error::Precondition("subdivision point is not primitive".into()));
        }
        let (i, j) = (cone.indices()[0], cone.indices()[1]);
        let (x1, x2) = oriented_pair(self, i, j);
        let a = det2(y.coords(), self.generator(x2).coords());
        let b = det2(self.generator(x1).coords(), y.coords());
        if a <= 0 || b <= 0 {
            return Err(Error::Precondition(
                "subdivision point is not strictly interior to the cone".into(),
            ));
        }
        let mut generators = self.generators.clone();
        let new_index = generators.len();
        generators.push(y.clone());
        let mut cones: Vec<Cone> = self
            .maximal_cones
            .iter()
            .filter(|c| *c != cone)
            .cloned()
            .collect();
        cones.push(Cone::new(vec![x1, new_index]));
        cones.push(Cone::new(vec![new_index, x2]));
        Ok((Fan::new(2, generators, cones)?, new_index))
    }
}

/// 2x2 determinant of two lattice vectors.
pub(crate) fn det2(u: &[i64], v: &[i64]) -> i128 {
    u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128
}

/// Order the two rays of a 2-dimensional cone positively.
pub(crate) fn oriented_pair(fan: &Fan, i: usize, j: usize) -> (usize, usize) {
    if det2(fan.generator(i).coords(), fan.generator(j).coords()) > 0 {
        (i, j)
    } else {
        (j, i)
    }
}
