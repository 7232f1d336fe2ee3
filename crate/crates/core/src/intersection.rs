//! Intersection numbers against torus invariant surfaces.
//!
//! For a surface `S = V(tau)` in a complete simplicial fan the nonzero
//! products `D_i . D_j . S` live on the star of `tau`. Off-diagonal entries
//! for cone-spanning pairs come straight from the multiplicity formula
//! (`1 / mult(sigma)` for the maximal cone spanned together with `tau`);
//! every remaining entry is resolved exactly by pairing with a character
//! functional chosen to eliminate the divisor being squared. Closed forms
//! for the Picard rank 1 and rank 2 cases are implemented separately from
//! wall relations so that the two routes check each other.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{det2, oriented_pair, Cone, Fan, LatticeVector};
use crate::linalg::{RatMatrix, Rational};

/// Selector for a torus invariant surface: a whole 2-dimensional variety,
/// or the divisor surface around a ray of a 3-dimensional one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Surface {
    Whole,
    Ray(usize),
}

impl std::fmt::Display for Surface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Surface::Whole => write!(f, "whole"),
            Surface::Ray(r) => write!(f, "ray{r}"),
        }
    }
}

/// Scaling convention of a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormScale {
    Exact,
    UpToPositiveScalar,
}

/// Symmetric rational matrix indexed by fan generators; the quadratic form
/// `sum_{i,j} m[i][j] X_i X_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    pub scale: FormScale,
    n: usize,
    mat: Vec<Rational>,
}

impl QuadForm {
    fn zero(n: usize, scale: FormScale) -> Self {
        Self {
            scale,
            n,
            mat: vec![Rational::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rational {
        &self.mat[i * self.n + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: Rational) {
        self.mat[i * self.n + j] = v.clone();
        self.mat[j * self.n + i] = v;
    }

    fn add_sym(&mut self, i: usize, j: usize, v: &Rational) {
        self.mat[i * self.n + j] += v;
        if i != j {
            self.mat[j * self.n + i] += v;
        }
    }

    /// `gamma_2 . S`: the sum of the diagonal (the squared divisors).
    pub fn diagonal_sum(&self) -> Rational {
        (0..self.n).map(|i| self.coeff(i, i)).sum()
    }

    /// If `self == c * other` entrywise for a single positive rational `c`,
    /// returns `c`.
    pub fn positive_multiple_of(&self, other: &QuadForm) -> Option<Rational> {
        if self.n != other.n {
            return None;
        }
        let mut scale: Option<Rational> = None;
        for (a, b) in self.mat.iter().zip(&other.mat) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return None,
                _ => {}
            }
            let c = a / b;
            if !c.is_positive() {
                return None;
            }
            match &scale {
                None => scale = Some(c),
                Some(prev) if *prev != c => return None,
                _ => {}
            }
        }
        scale
    }

    /// Extend the index range by fresh generators (new rows and columns of
    /// zeros), keeping existing entries.
    pub fn extended(&self, new_n: usize) -> QuadForm {
        assert!(new_n >= self.n);
        let mut out = QuadForm::zero(new_n, self.scale);
        for i in 0..self.n {
            for j in 0..self.n {
                out.mat[i * new_n + j] = self.mat[i * self.n + j].clone();
            }
        }
        out
    }
}

/// All triple products `D_i . D_j . S` for a fixed surface.
#[derive(Debug, Clone)]
pub struct TripleTable {
    pub surface: Surface,
    /// Generators with some nonzero product against `S`: the surface cone's
    /// generators and its star rays.
    pub participants: Vec<usize>,
    form: QuadForm,
}

impl TripleTable {
    pub fn value(&self, i: usize, j: usize) -> &Rational {
        self.form.coeff(i, j)
    }

    pub fn as_form(&self) -> &QuadForm {
        &self.form
    }

    pub fn into_form(self) -> QuadForm {
        self.form
    }
}

/// The primitive linear relation supported on a wall: the wall generators
/// plus the two generators completing the wall to its maximal cones, signed
/// so the two completing ("outer") coefficients are positive.
#[derive(Debug, Clone)]
pub struct WallRelation {
    pub wall: Cone,
    pub outer: [usize; 2],
    pub coeffs: BTreeMap<usize, BigInt>,
}

impl WallRelation {
    pub fn coeff(&self, index: usize) -> BigInt {
        self.coeffs.get(&index).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn participants(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }
}

/// Find the unique wall relation over a (d-1)-cone of a complete fan.
pub fn wall_relation(fan: &Fan, wall: &Cone) -> Result<WallRelation> {
    if wall.dim() + 1 != fan.dim() {
        return Err(Error::Structure(format!(
            "wall must have dimension {}, got {}",
            fan.dim() - 1,
            wall.dim()
        )));
    }
    let through: Vec<&Cone> = fan
        .maximal_cones()
        .iter()
        .filter(|c| wall.is_face_of(c))
        .collect();
    if through.len() != 2 {
        return Err(Error::NotComplete(format!(
            "wall lies in {} maximal cone(s)",
            through.len()
        )));
    }
    let outer: Vec<usize> = through
        .iter()
        .map(|c| {
            c.indices()
                .iter()
                .copied()
                .find(|i| !wall.contains(*i))
                .expect("maximal cone strictly contains its wall")
        })
        .collect();
    let mut participants: Vec<usize> = wall.indices().to_vec();
    participants.extend(&outer);
    participants.sort_unstable();
    let cols: Vec<&[i64]> = participants
        .iter()
        .map(|&i| fan.generator(i).coords())
        .collect();
    let kernel = RatMatrix::from_int_columns(&cols).kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::Structure(format!(
            "wall relation space has dimension {}",
            kernel.len()
        )));
    }
    let mut coeffs: Vec<BigInt> = kernel.into_iter().next().expect("one vector");
    let pos0 = participants.iter().position(|&i| i == outer[0]).unwrap();
    let pos1 = participants.iter().position(|&i| i == outer[1]).unwrap();
    if coeffs[pos0].is_negative() {
        for c in &mut coeffs {
            *c = -c.clone();
        }
    }
    if !coeffs[pos0].is_positive() || !coeffs[pos1].is_positive() {
        return Err(Error::Structure(
            "outer coefficients of the wall relation are not positive; \
             the cones do not lie on opposite sides of the wall"
                .into(),
        ));
    }
    Ok(WallRelation {
        wall: wall.clone(),
        outer: [outer[0], outer[1]],
        coeffs: participants.into_iter().zip(coeffs).collect(),
    })
}

/// The rational functional taking prescribed values on a basis of lattice
/// vectors.
fn functional(fan: &Fan, basis: &[usize], values: &[Rational]) -> Result<Vec<Rational>> {
    let d = fan.dim();
    debug_assert_eq!(basis.len(), d);
    let rows: Vec<&[i64]> = basis.iter().map(|&i| fan.generator(i).coords()).collect();
    let m = RatMatrix::from_int_rows(&rows);
    m.solve(values)?
        .ok_or_else(|| Error::Structure("cone generators do not form a basis".into()))
}

fn pair(fnl: &[Rational], v: &LatticeVector) -> Rational {
    fnl.iter()
        .zip(v.coords())
        .map(|(m, &c)| m * Rational::from_integer(BigInt::from(c)))
        .sum()
}

fn check_surface(fan: &Fan, surface: Surface) -> Result<Vec<usize>> {
    match surface {
        Surface::Whole if fan.dim() == 2 => Ok(Vec::new()),
        Surface::Ray(r) if fan.dim() == 3 => {
            if r >= fan.n_generators() {
                return Err(Error::Structure(format!("no generator {r}")));
            }
            Ok(vec![r])
        }
        _ => Err(Error::Structure(format!(
            "surface {surface} does not match a {}-dimensional fan",
            fan.dim()
        ))),
    }
}

/// Exact `D_i . D_j . S` for all generator pairs.
pub fn triple_table(fan: &Fan, surface: Surface) -> Result<TripleTable> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let tau = check_surface(fan, surface)?;
    let star = fan.star_cycle(&tau)?;
    let n = fan.n_generators();
    let m = star.rays.len();
    let mut form = QuadForm::zero(n, FormScale::Exact);

    // Adjacent star pairs: 1 / mult of the spanned maximal cone.
    for k in 0..m {
        let a = star.rays[k];
        let b = star.rays[(k + 1) % m];
        let mult = fan.mult(&star.cones[k])?;
        form.set_sym(a, b, Rational::new(BigInt::one(), mult));
    }

    // Entries involving the surface cone's own generator (dimension 3).
    if let [t] = tau.as_slice() {
        let t = *t;
        for j in 0..m {
            let yj = star.rays[j];
            let y_next = star.rays[(j + 1) % m];
            let y_prev = star.rays[(j + m - 1) % m];
            let fnl = functional(
                fan,
                &[t, yj, y_next],
                &[-Rational::one(), Rational::zero(), Rational::zero()],
            )?;
            let value = pair(&fnl, fan.generator(y_prev)) * form.coeff(y_prev, yj);
            form.set_sym(t, yj, value);
        }
        let fnl = functional(
            fan,
            &[t, star.rays[0], star.rays[1]],
            &[-Rational::one(), Rational::zero(), Rational::zero()],
        )?;
        let tt: Rational = star
            .rays
            .iter()
            .map(|&y| pair(&fnl, fan.generator(y)) * form.coeff(t, y))
            .sum();
        form.set_sym(t, t, tt);
    }

    // Squares of the star divisors.
    for j in 0..m {
        let yj = star.rays[j];
        let y_next = star.rays[(j + 1) % m];
        let y_prev = star.rays[(j + m - 1) % m];
        let mut basis = tau.clone();
        basis.push(yj);
        basis.push(y_next);
        let mut values = vec![Rational::zero(); tau.len()];
        values.push(-Rational::one());
        values.push(Rational::zero());
        let fnl = functional(fan, &basis, &values)?;
        // The functional vanishes on tau's generator and on y_next, so the
        // only surviving known entry is the one through y_prev.
        let value = pair(&fnl, fan.generator(y_prev)) * form.coeff(y_prev, yj);
        form.set_sym(yj, yj, value);
    }

    let mut participants = tau.clone();
    participants.extend(&star.rays);
    participants.sort_unstable();

    debug_assert!(character_closure_holds(fan, &participants, &form));

    Ok(TripleTable {
        surface,
        participants,
        form,
    })
}

/// Every divisor of a character is numerically trivial: for each lattice
/// basis functional `e_k` and each participant `j`,
/// `sum_v <e_k, v> (D_v . D_j . S) = 0`.
fn character_closure_holds(fan: &Fan, participants: &[usize], form: &QuadForm) -> bool {
    let d = fan.dim();
    for k in 0..d {
        for &j in participants {
            let mut acc = Rational::zero();
            for v in 0..fan.n_generators() {
                let coord = Rational::from_integer(BigInt::from(fan.generator(v).coords()[k]));
                acc += coord * form.coeff(v, j);
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The quadratic form `I_{S/X}` with exact coefficients.
pub fn i_poly(fan: &Fan, surface: Surface) -> Result<QuadForm> {
    Ok(triple_table(fan, surface)?.into_form())
}

/// Exact `gamma_2 . S`.
pub fn gamma_dot_surface(fan: &Fan, surface: Surface) -> Result<Rational> {
    Ok(triple_table(fan, surface)?.as_form().diagonal_sum())
}

/// Exact `gamma_2` of a complete 2-dimensional variety.
pub fn surface_gamma2(fan: &Fan) -> Result<Rational> {
    gamma_dot_surface(fan, Surface::Whole)
}

/// Exact `gamma_1 . C` for the torus invariant curve of a wall.
///
/// With the wall relation `sum a_i x_i = 0` (outer coefficients positive)
/// the divisor pairings satisfy `D_i . C = a_i / alpha'`, where `alpha'` is
/// pinned by the multiplicity formula on either outer generator.
pub fn gamma1_dot_curve(fan: &Fan, wall: &Cone) -> Result<Rational> {
    let rel = wall_relation(fan, wall)?;
    let mult_wall = fan.mult(wall)?;
    let scale = |outer: usize| -> Result<Rational> {
        let mut idx = wall.indices().to_vec();
        idx.push(outer);
        let sigma = Cone::new(idx);
        let mult_sigma = fan.mult(&sigma)?;
        Ok(Rational::new(rel.coeff(outer) * mult_sigma, mult_wall.clone()))
    };
    let alpha = scale(rel.outer[0])?;
    debug_assert_eq!(alpha, scale(rel.outer[1])?);
    let total: Rational = rel
        .coeffs
        .values()
        .map(|c| Rational::from_integer(c.clone()))
        .sum();
    Ok(total / alpha)
}

/// Rank-one closed form for a surface of Picard number 1: the square of the
/// unique relation among the surface generator(s) and the three star rays.
pub fn rho1_form(fan: &Fan, surface: Surface) -> Result<QuadForm> {
    let tau = check_surface(fan, surface)?;
    let star = fan.star_cycle(&tau)?;
    let rho = star.rays.len() as i64 - 2;
    if rho != 1 {
        return Err(Error::PicardMismatch { expected: 1, got: rho });
    }
    let mut wall_idx = tau.clone();
    wall_idx.push(star.rays[0]);
    let rel = wall_relation(fan, &Cone::new(wall_idx))?;
    for &y in &star.rays {
        if !rel.coeff(y).is_positive() {
            return Err(Error::Structure(
                "rank-one relation is not positive on the star".into(),
            ));
        }
    }
    let n = fan.n_generators();
    let mut form = QuadForm::zero(n, FormScale::UpToPositiveScalar);
    for (&i, a) in &rel.coeffs {
        for (&j, b) in &rel.coeffs {
            if i <= j {
                form.set_sym(i, j, Rational::from_integer(a * b));
            }
        }
    }
    Ok(form)
}

/// The two wall relations and labeling used by the rank-two closed form.
#[derive(Debug, Clone)]
pub struct Rho2Decomposition {
    /// Star rays labeled so that `y[0], y[1]` and `y[2], y[3]` are the
    /// opposite pairs of the 4-cycle; `y[0]` is the lowest-index star ray
    /// and `y[2]` its highest-index cycle neighbor.
    pub y: [usize; 4],
    /// Relation through the wall containing `y[2]` (outer: `y[0]`, `y[1]`).
    pub rel1: WallRelation,
    /// Relation through the wall containing `y[0]` (outer: `y[2]`, `y[3]`).
    pub rel2: WallRelation,
    pub form: QuadForm,
}

/// Closed form for a surface of Picard number 2 from the two wall relations
/// around its 4-cycle star.
pub fn rho2_form(fan: &Fan, surface: Surface) -> Result<QuadForm> {
    Ok(rho2_decomposition(fan, surface)?.form)
}

pub fn rho2_decomposition(fan: &Fan, surface: Surface) -> Result<Rho2Decomposition> {
    let tau = check_surface(fan, surface)?;
    let star = fan.star_cycle(&tau)?;
    let rho = star.rays.len() as i64 - 2;
    if rho != 2 {
        return Err(Error::PicardMismatch { expected: 2, got: rho });
    }
    let cycle = &star.rays;
    let pos = (0..4).min_by_key(|&k| cycle[k]).expect("four star rays");
    let y1 = cycle[pos];
    let y2 = cycle[(pos + 2) % 4];
    let nb = [cycle[(pos + 1) % 4], cycle[(pos + 3) % 4]];
    let y3 = nb[0].max(nb[1]);
    let y4 = nb[0].min(nb[1]);

    let mut wall3 = tau.clone();
    wall3.push(y3);
    let rel1 = wall_relation(fan, &Cone::new(wall3))?;
    let mut wall1 = tau.clone();
    wall1.push(y1);
    let rel2 = wall_relation(fan, &Cone::new(wall1))?;
    debug_assert_eq!({ let mut o = rel1.outer; o.sort_unstable(); o },
                     { let mut o = [y1, y2]; o.sort_unstable(); o });
    debug_assert_eq!({ let mut o = rel2.outer; o.sort_unstable(); o },
                     { let mut o = [y3, y4]; o.sort_unstable(); o });

    let n = fan.n_generators();
    let as_vec = |rel: &WallRelation| -> Vec<Rational> {
        (0..n)
            .map(|i| Rational::from_integer(rel.coeff(i)))
            .collect()
    };
    let u1 = as_vec(&rel1);
    let u2 = as_vec(&rel2);
    let b1 = Rational::from_integer(rel1.coeff(y1));
    let c3 = Rational::from_integer(rel1.coeff(y3));
    let b3 = Rational::from_integer(rel2.coeff(y3));
    let c1 = Rational::from_integer(rel2.coeff(y1));

    // -b3 c1 (R1)^2 + 2 b1 b3 (R1)(R2) - b1 c3 (R2)^2, as a symmetric matrix.
    let mut form = QuadForm::zero(n, FormScale::UpToPositiveScalar);
    let w11 = -(&b3 * &c1);
    let w12 = &b1 * &b3;
    let w22 = -(&b1 * &c3);
    for i in 0..n {
        for j in i..n {
            let mut v = &w11 * (&u1[i] * &u1[j]) + &w22 * (&u2[i] * &u2[j]);
            v += &w12 * (&u1[i] * &u2[j] + &u1[j] * &u2[i]);
            if !v.is_zero() {
                form.set_sym(i, j, v);
            }
        }
    }
    Ok(Rho2Decomposition {
        y: [y1, y2, y3, y4],
        rel1,
        rel2,
        form,
    })
}

/// Interior subdivision data of a 2-dimensional cone, in the coordinates
/// of the multiplicity formula: `big_a = mult(y, x2)`, `big_b = mult(x1, y)`,
/// `big_c = mult(x1, x2)` with positive orientation.
struct SubdivisionData {
    x1: usize,
    x2: usize,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

fn subdivision_data(fan: &Fan, cone: &Cone, y: &LatticeVector) -> Result<SubdivisionData> {
    if fan.dim() != 2 || cone.dim() != 2 {
        return Err(Error::Structure("subdivision needs a 2-dimensional cone".into()));
    }
    if !y.is_primitive() {
        return Err(Error::Precondition("subdivision point is not primitive".into()));
    }
    let (x1, x2) = oriented_pair(fan, cone.indices()[0], cone.indices()[1]);
    let a = det2(y.coords(), fan.generator(x2).coords());
    let b = det2(fan.generator(x1).coords(), y.coords());
    let c = det2(fan.generator(x1).coords(), fan.generator(x2).coords());
    if a <= 0 || b <= 0 {
        return Err(Error::Precondition(
            "subdivision point is not strictly interior to the cone".into(),
        ));
    }
    Ok(SubdivisionData {
        x1,
        x2,
        a: BigInt::from(a),
        b: BigInt::from(b),
        c: BigInt::from(c),
    })
}

/// Update `I_{S/S}` under subdivision of `cone` at `y`: append the new
/// generator and subtract the rank-one correction
/// `(1 / (abc)) (a X_1 + b X_2 - c Y)^2`.
pub fn subdivide_update(
    form: &QuadForm,
    fan: &Fan,
    cone: &Cone,
    y: &LatticeVector,
) -> Result<QuadForm> {
    if form.size() != fan.n_generators() {
        return Err(Error::DimensionMismatch {
            expected: fan.n_generators(),
            got: form.size(),
        });
    }
    let data = subdivision_data(fan, cone, y)?;
    let n = fan.n_generators();
    let mut out = form.extended(n + 1);
    let mut u = vec![Rational::zero(); n + 1];
    u[data.x1] = Rational::from_integer(data.a.clone());
    u[data.x2] = Rational::from_integer(data.b.clone());
    u[n] = -Rational::from_integer(data.c.clone());
    let denom = Rational::from_integer(&data.a * &data.b * &data.c);
    for i in 0..=n {
        if u[i].is_zero() {
            continue;
        }
        for j in i..=n {
            if u[j].is_zero() {
                continue;
            }
            let corr = -(&u[i] * &u[j]) / &denom;
            out.add_sym(i, j, &corr);
        }
    }
    Ok(out)
}

/// The exact drop of `gamma_2` caused by the subdivision:
/// `(a^2 + b^2 + c^2) / (abc) > 0`.
pub fn subdivision_drop(fan: &Fan, cone: &Cone, y: &LatticeVector) -> Result<Rational> {
    let data = subdivision_data(fan, cone, y)?;
    let num = &data.a * &data.a + &data.b * &data.b + &data.c * &data.c;
    Ok(Rational::new(num, &data.a * &data.b * &data.c))
}
