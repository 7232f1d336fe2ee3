//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them).
//!
//! Every tolerance is exact: all comparisons are between arbitrary
//! precision rationals, and "zero" means exactly zero.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toric_gamma2::classify::{
    enumerate_reflexive_polygons, polygon_canonical_form, sweep, verdict, verdict_of_fan, Verdict,
};
use toric_gamma2::dataset::{
    parse_dataset, counterexample_records, table1_expected, table1_records, table2_expected,
    table2_records, DatasetRecord,
};
use toric_gamma2::intersection::{
    gamma1_dot_curve, gamma_dot_surface, i_poly, rho1_form, rho2_decomposition, rho2_form,
    subdivide_update, subdivision_drop, Surface,
};
use toric_gamma2::linalg::{rat_int, Rational};
use toric_gamma2::props::{is_fano, surface_picard};
use toric_gamma2::{Cone, Error, Fan, LatticeVector};

fn criterion<F: FnOnce() + UnwindSafe>(name: &str, f: F) {
    match catch_unwind(f) {
        Ok(()) => println!("criterion {name}: PASS"),
        Err(e) => {
            println!("criterion {name}: FAIL");
            resume_unwind(e);
        }
    }
}

fn fan_of(rec: &DatasetRecord) -> Fan {
    Fan::face_fan(rec.generators.clone()).expect("bundled record spans a face fan")
}

fn bundled_fans() -> Vec<(String, Fan)> {
    table1_records()
        .iter()
        .chain(table2_records().iter())
        .chain(counterexample_records().iter())
        .map(|r| (r.id.clone(), fan_of(r)))
        .collect()
}

fn surfaces_of(fan: &Fan) -> Vec<Surface> {
    match fan.dim() {
        2 => vec![Surface::Whole],
        3 => (0..fan.n_generators()).map(Surface::Ray).collect(),
        _ => unreachable!(),
    }
}

#[test]
fn acceptance_1_table2_reproduction() {
    criterion("1 (Table 2: 23 terminal Fano 3-folds)", || {
        let start = Instant::now();
        let records = table2_records();
        let expected = table2_expected();
        assert_eq!(records.len(), 23);
        let mut positive_ids = Vec::new();
        for (rec, (id, want)) in records.iter().zip(&expected) {
            let rep = verdict(&rec.id, &rec.generators).expect("bundled record classifies");
            assert_eq!(&rep.id, id);
            assert!(rep.profile.fano, "{}: must be Fano", rec.id);
            assert!(rep.profile.terminal, "{}: must be terminal", rec.id);
            assert!(rep.verdict.is_nef(), "{}: must be nef", rec.id);
            assert_eq!(rep.verdict, *want, "{}", rec.id);
            if rep.verdict == Verdict::Gamma2Positive {
                positive_ids.push(rec.id.clone());
            }
        }
        assert_eq!(
            positive_ids,
            ["1", "2", "3", "4", "5", "6", "7", "8"],
            "exactly the rank-one entries are positive"
        );
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs_f64() < 1.0,
            "table 2 took {elapsed:?}, expected under 1s"
        );
    });
}

#[test]
fn acceptance_2_worked_example_id34() {
    criterion("2 (worked example, 3-fold id 34)", || {
        let rec = table2_records()
            .into_iter()
            .find(|r| r.id == "34")
            .expect("id 34 bundled");
        let fan = fan_of(&rec);
        assert_eq!(
            gamma_dot_surface(&fan, Surface::Ray(0)).unwrap(),
            rat_int(0),
            "gamma_2 . S_1 = 0 exactly"
        );
        assert!(
            gamma_dot_surface(&fan, Surface::Ray(4)).unwrap().is_positive(),
            "gamma_2 . S_5 > 0"
        );

        let dec = rho2_decomposition(&fan, Surface::Ray(0)).unwrap();
        // Extracted relations: v1 + 2 v2 + 3 v3 - 5 v5 = 0 and v4 + v5 = 0.
        let rel1: Vec<BigInt> = (0..5).map(|i| dec.rel1.coeff(i)).collect();
        let rel2: Vec<BigInt> = (0..5).map(|i| dec.rel2.coeff(i)).collect();
        let ints = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
        assert_eq!(rel1, ints(&[1, 2, 3, 0, -5]));
        assert_eq!(rel2, ints(&[0, 0, 0, 1, 1]));

        // Form proportional (positive scalar) to
        // 4 (V1 + 2 V2 + 3 V3 - 5 V5)(V4 + V5) + 10 (V4 + V5)^2.
        let u1: Vec<Rational> = [1, 2, 3, 0, -5].iter().map(|&x| rat_int(x)).collect();
        let u2: Vec<Rational> = [0, 0, 0, 1, 1].iter().map(|&x| rat_int(x)).collect();
        let expected = |i: usize, j: usize| -> Rational {
            rat_int(2) * (&u1[i] * &u2[j] + &u1[j] * &u2[i]) + rat_int(10) * (&u2[i] * &u2[j])
        };
        let mut scale: Option<Rational> = None;
        for i in 0..5 {
            for j in 0..5 {
                let want = expected(i, j);
                let got = dec.form.coeff(i, j);
                match (got.is_zero(), want.is_zero()) {
                    (true, true) => {}
                    (false, false) => {
                        let c = got / &want;
                        assert!(c.is_positive(), "scalar must be positive");
                        match &scale {
                            None => scale = Some(c),
                            Some(prev) => assert_eq!(prev, &c, "single scalar"),
                        }
                    }
                    _ => panic!("zero pattern differs at ({i},{j})"),
                }
            }
        }
        assert!(scale.is_some(), "form is nonzero");
    });
}

#[test]
fn acceptance_3_surface_example() {
    criterion("3 (rank-two surface with alpha gamma_2 = 20)", || {
        let points = vec![
            LatticeVector::new(vec![1, 0]).unwrap(),
            LatticeVector::new(vec![1, 2]).unwrap(),
            LatticeVector::new(vec![-1, 2]).unwrap(),
            LatticeVector::new(vec![-1, -1]).unwrap(),
        ];
        let fan = Fan::face_fan(points.clone()).unwrap();
        let closed = rho2_form(&fan, Surface::Whole).unwrap();
        assert_eq!(closed.diagonal_sum(), rat_int(20), "alpha gamma_2 = 20 exactly");
        let rep = verdict("example", &points).unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2Positive);
        assert!(!rep.profile.gorenstein, "has a non-Gorenstein point");
    });
}

#[test]
fn acceptance_4_table1_and_reflexive_enumeration() {
    criterion("4 (Table 1 and the 16 reflexive polygon classes)", || {
        let records = table1_records();
        let expected = table1_expected();
        assert_eq!(records.len(), 10);
        let mut positive_ids = Vec::new();
        for (rec, (id, want)) in records.iter().zip(&expected) {
            let rep = verdict(&rec.id, &rec.generators).unwrap();
            assert_eq!(&rep.id, id);
            assert!(rep.verdict.is_nef(), "{}: must be nef", rec.id);
            assert_eq!(rep.verdict, *want, "{}", rec.id);
            assert!(rep.profile.gorenstein, "{}: must be Gorenstein", rec.id);
            if rep.verdict == Verdict::Gamma2Positive {
                positive_ids.push(rec.id.clone());
            }
        }
        assert_eq!(positive_ids, ["12", "13", "14", "15", "16"]);

        let start = Instant::now();
        let classes = enumerate_reflexive_polygons();
        let elapsed = start.elapsed();
        assert_eq!(classes.len(), 16, "exactly 16 classes");
        assert!(
            elapsed.as_secs_f64() < 5.0,
            "enumeration took {elapsed:?}, expected under 5s"
        );
        let mut nef_classes = Vec::new();
        for poly in &classes {
            let rep = verdict("class", poly).unwrap();
            if rep.verdict.is_nef() {
                nef_classes.push(polygon_canonical_form(poly).unwrap());
            }
        }
        assert_eq!(nef_classes.len(), 10, "exactly 10 nef classes");
        // The nef classes are exactly the bundled table up to unimodular
        // equivalence.
        let mut table_canon: Vec<_> = records
            .iter()
            .map(|r| polygon_canonical_form(&r.generators).unwrap())
            .collect();
        table_canon.sort();
        table_canon.dedup();
        assert_eq!(table_canon.len(), 10, "table entries are inequivalent");
        for c in &table_canon {
            assert!(nef_classes.contains(c), "table polygon among nef classes");
        }
    });
}

#[test]
fn acceptance_5_smooth_fano_counterexample() {
    criterion("5 (smooth Fano 3-fold that is not gamma_2-nef)", || {
        let rec = counterexample_records().into_iter().next().unwrap();
        let fan = fan_of(&rec);
        assert!(is_fano(&rec.generators).unwrap());
        for cone in fan.maximal_cones() {
            assert_eq!(fan.mult(cone).unwrap(), BigInt::from(1), "smooth fan");
        }
        let rep = verdict_of_fan(&rec.id, &fan).unwrap();
        assert_eq!(rep.verdict, Verdict::NotGamma2Nef);
        let negative = rep
            .surfaces
            .iter()
            .find(|s| s.gamma2.is_negative())
            .expect("a surface with negative gamma_2");
        assert!(matches!(negative.surface, Surface::Ray(_)));
    });
}

#[test]
fn acceptance_6a_closed_forms_match_exact_route() {
    criterion("6a (closed forms match the exact route)", || {
        let mut rank1 = 0;
        let mut rank2 = 0;
        for (id, fan) in bundled_fans() {
            for sel in surfaces_of(&fan) {
                let rho = match sel {
                    Surface::Whole => fan.n_generators() as i64 - 2,
                    Surface::Ray(r) => surface_picard(&fan, r).unwrap(),
                };
                let closed = match rho {
                    1 => {
                        rank1 += 1;
                        rho1_form(&fan, sel).unwrap()
                    }
                    2 => {
                        rank2 += 1;
                        rho2_form(&fan, sel).unwrap()
                    }
                    _ => continue,
                };
                let exact = i_poly(&fan, sel).unwrap();
                let scale = closed
                    .positive_multiple_of(&exact)
                    .unwrap_or_else(|| panic!("{id}/{sel}: forms not proportional"));
                assert!(scale.is_positive());
                // Sign coherence of the scaled diagonal.
                assert_eq!(
                    closed.diagonal_sum().cmp(&Rational::zero()),
                    exact.diagonal_sum().cmp(&Rational::zero()),
                    "{id}/{sel}"
                );
            }
        }
        assert!(rank1 >= 40, "bundled data exercises many rank-1 surfaces");
        assert!(rank2 >= 30, "bundled data exercises many rank-2 surfaces");
    });
}

fn random_complete_2d_fan(rng: &mut StdRng) -> Fan {
    'retry: loop {
        let n_rays = rng.gen_range(3..=8);
        let mut rays: Vec<(i64, i64)> = Vec::new();
        while rays.len() < n_rays {
            let x: i64 = rng.gen_range(-9..=9);
            let y: i64 = rng.gen_range(-9..=9);
            if (x, y) == (0, 0) {
                continue;
            }
            let g = gcd64(x, y);
            let p = (x / g, y / g);
            if !rays.contains(&p) {
                rays.push(p);
            }
        }
        rays.sort_by(|&a, &b| angular_cmp(a, b));
        for k in 0..rays.len() {
            let a = rays[k];
            let b = rays[(k + 1) % rays.len()];
            if a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128 <= 0 {
                continue 'retry;
            }
        }
        let generators: Vec<LatticeVector> = rays
            .iter()
            .map(|&(x, y)| LatticeVector::new(vec![x, y]).unwrap())
            .collect();
        let cones: Vec<Cone> = (0..rays.len())
            .map(|k| Cone::new(vec![k, (k + 1) % rays.len()]))
            .collect();
        return Fan::new(2, generators, cones).unwrap();
    }
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn angular_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |p: (i64, i64)| usize::from(!(p.1 > 0 || (p.1 == 0 && p.0 > 0)));
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

#[test]
fn acceptance_6b_subdivision_strictly_decreases_gamma2() {
    criterion("6b (subdivision strictly decreases gamma_2 by the closed drop)", || {
        let mut rng = StdRng::seed_from_u64(0x5eed_2d5d);
        for _ in 0..100 {
            let fan = random_complete_2d_fan(&mut rng);
            let cone = fan.maximal_cones()[rng.gen_range(0..fan.maximal_cones().len())].clone();
            let (i, j) = (cone.indices()[0], cone.indices()[1]);
            let a: i64 = rng.gen_range(1..=4);
            let b: i64 = rng.gen_range(1..=4);
            let xi = fan.generator(i).coords();
            let xj = fan.generator(j).coords();
            let raw = (a * xi[0] + b * xj[0], a * xi[1] + b * xj[1]);
            let g = gcd64(raw.0, raw.1);
            let y = LatticeVector::new(vec![raw.0 / g, raw.1 / g]).unwrap();

            let before_form = i_poly(&fan, Surface::Whole).unwrap();
            let before = before_form.diagonal_sum();
            let drop = subdivision_drop(&fan, &cone, &y).unwrap();
            assert!(drop.is_positive(), "drop is strictly positive");

            let (sub, _) = fan.subdivide_2d(&cone, &y).unwrap();
            let fresh = i_poly(&sub, Surface::Whole).unwrap();
            let after = fresh.diagonal_sum();
            assert!(after < before, "gamma_2 strictly decreases");
            assert_eq!(&before - &after, drop, "decrease equals the closed-form drop");

            let updated = subdivide_update(&before_form, &fan, &cone, &y).unwrap();
            assert_eq!(updated, fresh, "updated form equals fresh recomputation");
        }
    });
}

#[test]
fn acceptance_6c_product_surfaces_vanish() {
    criterion("6c (gamma_2 vanishes on product surfaces)", || {
        let p1 = Fan::projective_line();
        let p1xp1 = p1.product(&p1).unwrap();
        assert_eq!(
            gamma_dot_surface(&p1xp1, Surface::Whole).unwrap(),
            rat_int(0)
        );

        let p1cubed = p1xp1.product(&p1).unwrap();
        for ray in 0..p1cubed.n_generators() {
            assert_eq!(
                gamma_dot_surface(&p1cubed, Surface::Ray(ray)).unwrap(),
                rat_int(0),
                "P1xP1xP1 ray {ray}"
            );
            // Both wall relations of a product surface share no generator.
            let dec = rho2_decomposition(&p1cubed, Surface::Ray(ray)).unwrap();
            assert!(dec.rel1.coeff(dec.y[0]).is_positive());
            assert!(dec.rel2.coeff(dec.y[0]).is_zero(), "c1 = 0");
            assert!(dec.rel1.coeff(dec.y[2]).is_zero(), "c3 = 0");
            assert!(dec.rel1.coeff(ray).is_zero() || dec.rel2.coeff(ray).is_zero());
        }
        let rep = verdict_of_fan("p1^3", &p1cubed).unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2NefNotPositive);

        let p2fan = Fan::face_fan(vec![
            LatticeVector::new(vec![1, 0]).unwrap(),
            LatticeVector::new(vec![0, 1]).unwrap(),
            LatticeVector::new(vec![-1, -1]).unwrap(),
        ])
        .unwrap();
        let p1xp2 = p1.product(&p2fan).unwrap();
        // Product surfaces are the ones over rays of the surface factor.
        for ray in 2..5 {
            assert_eq!(
                gamma_dot_surface(&p1xp2, Surface::Ray(ray)).unwrap(),
                rat_int(0),
                "P1xP2 ray {ray}"
            );
        }
        let rep = verdict_of_fan("p1xp2", &p1xp2).unwrap();
        assert_eq!(rep.verdict, Verdict::Gamma2NefNotPositive);
    });
}

fn random_unimodular(rng: &mut StdRng, d: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..rng.gen_range(3..=6) {
        match rng.gen_range(0..3) {
            0 => {
                // Shear row i by k times row j.
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                while j == i {
                    j = rng.gen_range(0..d);
                }
                let k: i64 = rng.gen_range(-2..=2);
                let src = u[j].clone();
                for (dst, s) in u[i].iter_mut().zip(src) {
                    *dst += k * s;
                }
            }
            1 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                while j == i {
                    j = rng.gen_range(0..d);
                }
                u.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..d);
                for x in &mut u[i] {
                    *x = -*x;
                }
            }
        }
    }
    u
}

fn apply(u: &[Vec<i64>], v: &LatticeVector) -> LatticeVector {
    let coords: Vec<i64> = u
        .iter()
        .map(|row| {
            row.iter()
                .zip(v.coords())
                .map(|(&a, &b)| a.checked_mul(b).expect("no overflow"))
                .sum()
        })
        .collect();
    LatticeVector::new(coords).expect("transformed vector is valid")
}

#[test]
fn acceptance_6d_verdicts_are_unimodular_invariant() {
    criterion("6d (verdicts invariant under GL(d,Z))", || {
        let mut rng = StdRng::seed_from_u64(0x6d6d_6d6d);
        let records: Vec<DatasetRecord> = table1_records()
            .into_iter()
            .chain(table2_records())
            .chain(counterexample_records())
            .collect();
        for rec in &records {
            let base = verdict(&rec.id, &rec.generators).unwrap();
            for _ in 0..20 {
                let u = random_unimodular(&mut rng, rec.dim);
                let moved: Vec<LatticeVector> =
                    rec.generators.iter().map(|v| apply(&u, v)).collect();
                let rep = verdict(&rec.id, &moved).unwrap();
                assert_eq!(rep.verdict, base.verdict, "{}", rec.id);
                assert_eq!(rep.profile, base.profile, "{}", rec.id);
                // Generators keep their indices, so per-surface values align.
                for (a, b) in rep.surfaces.iter().zip(&base.surfaces) {
                    assert_eq!(a.gamma2, b.gamma2, "{}", rec.id);
                    assert_eq!(a.rho, b.rho, "{}", rec.id);
                }
            }
        }
    });
}

fn hirzebruch(a: i64) -> Fan {
    Fan::new(
        2,
        vec![
            LatticeVector::new(vec![1, 0]).unwrap(),
            LatticeVector::new(vec![0, 1]).unwrap(),
            LatticeVector::new(vec![-1, a]).unwrap(),
            LatticeVector::new(vec![0, -1]).unwrap(),
        ],
        vec![
            Cone::new(vec![0, 1]),
            Cone::new(vec![1, 2]),
            Cone::new(vec![2, 3]),
            Cone::new(vec![3, 0]),
        ],
    )
    .unwrap()
}

fn deep_blowup_of_p2() -> Fan {
    let p2 = Fan::face_fan(vec![
        LatticeVector::new(vec![1, 0]).unwrap(),
        LatticeVector::new(vec![0, 1]).unwrap(),
        LatticeVector::new(vec![-1, -1]).unwrap(),
    ])
    .unwrap();
    let (fan, _) = p2
        .subdivide_2d(
            &Cone::new(vec![0, 1]),
            &LatticeVector::new(vec![3, 1]).unwrap(),
        )
        .unwrap();
    fan
}

#[test]
fn acceptance_6e_gamma1_positive_iff_fano() {
    criterion("6e (gamma_1 positive on all walls iff Fano)", || {
        let mut fans: Vec<(String, Fan, bool)> = bundled_fans()
            .into_iter()
            .map(|(id, fan)| (id, fan, true))
            .collect();
        let p1 = Fan::projective_line();
        let non_fano: Vec<(String, Fan)> = vec![
            ("hirzebruch2".into(), hirzebruch(2)),
            ("hirzebruch3".into(), hirzebruch(3)),
            ("hirzebruch2xp1".into(), hirzebruch(2).product(&p1).unwrap()),
            ("hirzebruch3xp1".into(), hirzebruch(3).product(&p1).unwrap()),
            ("deep-blowup-p2".into(), deep_blowup_of_p2()),
        ];
        for (id, fan) in non_fano {
            fans.push((id, fan, false));
        }
        for (id, fan, expect_fano) in &fans {
            assert!(fan.is_complete(), "{id}");
            let fano = is_fano(fan.generators()).unwrap();
            assert_eq!(fano, *expect_fano, "{id}");
            let all_walls_positive = fan
                .walls()
                .unwrap()
                .iter()
                .all(|(wall, _)| gamma1_dot_curve(fan, wall).unwrap().is_positive());
            assert_eq!(all_walls_positive, fano, "{id}");
        }
    });
}

/// With a user-supplied 233-entry terminal Fano dataset, the sweep must
/// report exactly the 23 bundled entries as nef. Skipped (still passing)
/// when no file is supplied.
#[test]
fn acceptance_6f_full_terminal_fano_sweep_when_supplied() {
    let path = std::env::var("GAMMA2_TERMINAL_FANO3_FILE")
        .unwrap_or_else(|_| "data/grdb_terminal_fano3.txt".into());
    let Ok(text) = std::fs::read_to_string(&path) else {
        println!("criterion 6f (233-entry sweep): SKIP (no dataset at {path})");
        return;
    };
    criterion("6f (233-entry sweep finds exactly 23 nef)", || {
        let records = parse_dataset(&text).expect("well-formed dataset");
        assert_eq!(records.len(), 233, "the full classification has 233 entries");
        let entries: Vec<(String, Vec<LatticeVector>)> =
            records.iter().map(DatasetRecord::entry).collect();
        let outcome = sweep(&entries, 4);
        assert_eq!(outcome.summary.errors, 0);
        let nef: Vec<&String> = outcome
            .reports
            .iter()
            .filter(|(_, r)| r.as_ref().is_ok_and(|rep| rep.verdict.is_nef()))
            .map(|(id, _)| id)
            .collect();
        assert_eq!(nef.len(), 23, "exactly 23 nef entries");
    });
}

#[test]
fn acceptance_error_paths() {
    criterion("input validation (distinct error classes)", || {
        // Origin on the boundary.
        let err = Fan::face_fan(vec![
            LatticeVector::new(vec![1, 0]).unwrap(),
            LatticeVector::new(vec![-1, 0]).unwrap(),
            LatticeVector::new(vec![0, 1]).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NotFano(_)));
        // A generator interior to an edge of the hull.
        let err = Fan::face_fan(vec![
            LatticeVector::new(vec![1, 1]).unwrap(),
            LatticeVector::new(vec![1, -1]).unwrap(),
            LatticeVector::new(vec![-1, 0]).unwrap(),
            LatticeVector::new(vec![1, 0]).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonVertexGenerator { index: 3 }));
        // A non-simplicial facet in dimension 3.
        let err = Fan::face_fan(vec![
            LatticeVector::new(vec![1, 1, 1]).unwrap(),
            LatticeVector::new(vec![1, -1, 1]).unwrap(),
            LatticeVector::new(vec![-1, 1, 1]).unwrap(),
            LatticeVector::new(vec![-1, -1, 1]).unwrap(),
            LatticeVector::new(vec![0, 0, -1]).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonSimplicialFacet(4)));
    });
}
