use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphroot_core::divisors::Curve;
use sphroot_core::engine::{demazure_roots, VarietySpec};
use sphroot_core::lattice::*;
use sphroot_core::roots::{distinguished_ray, enumerate_roots, roots_of_cone};
use sphroot_core::sample;
use sphroot_core::symbolic::{Poly, RatFunc};
use sphroot_core::type1::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
}

fn lattice_vectors(n: usize, k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<LatticeVector>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), k)
}

fn box_points(n: usize, b: i64) -> Vec<LatticeVector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-b..=b).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn poly(c: Vec<i64>) -> Poly {
    Poly::new(c.into_iter().map(q).collect())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(-4i64..=4, 0..4), prop::collection::vec(-4i64..=4, 1..3))
        .prop_filter_map("nonzero denominator", |(n, d)| {
            let den = poly(d);
            (!den.is_zero()).then(|| RatFunc::new(poly(n), den))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factors(a in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let cols = a[0].len();
        let s = smith(&a, cols);
        prop_assert_eq!(mat_mul(&mat_mul(&s.u, &a), &s.v), s.d.clone());
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|d| *d > 0));
        prop_assert!(diag.windows(2).all(|w| w[1] % w[0] == 0));
        let n = s.u.len();
        let id: IntMatrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        prop_assert_eq!(mat_mul(&s.u, &unimodular_inverse(&s.u)), id);
    }

    #[test]
    fn integer_kernel_is_exact(rows in (1usize..3, 2usize..4).prop_flat_map(|(r, n)| int_matrix(r, n))) {
        let n = rows[0].len();
        let k = integer_kernel(&rows, n);
        for b in &k.basis {
            prop_assert!(rows.iter().all(|r| r.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() == 0));
        }
        prop_assert!(k.is_saturated());
        // Every kernel point in a small box is an integer combination of the basis.
        for x in box_points(n, 3) {
            let in_kernel = rows.iter().all(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() == 0);
            prop_assert_eq!(k.contains(&qv(&x)), in_kernel, "{:?}", x);
        }
    }

    #[test]
    fn cone_duality(gens in (2usize..4).prop_flat_map(|n| lattice_vectors(n, 1..=4))) {
        let n = gens[0].len();
        let c = Cone::from_lattice(Side::N, n, &gens).unwrap();
        prop_assert_eq!(c.dual().dual(), c.clone());
        for g in &gens {
            prop_assert!(c.contains_lattice(g));
        }
        for r in c.rays() {
            prop_assert_eq!(primitive(r), r.clone());
            prop_assert!(c.dual().rays().iter().all(|f| dot(f, r) >= q(0)));
        }
    }

    #[test]
    fn cone_roots_match_definition(gens in (1usize..4).prop_flat_map(|n| lattice_vectors(n, 1..=3))) {
        let n = gens[0].len();
        let c = Cone::from_lattice(Side::N, n, &gens).unwrap();
        prop_assume!(c.is_strongly_convex() && !c.rays().is_empty());
        let found = enumerate_roots(&roots_of_cone(&c).unwrap(), 3);
        let rays = c.rays_lattice();
        let brute: Vec<LatticeVector> = box_points(n, 3)
            .into_iter()
            .filter(|t| {
                let p: Vec<i64> = rays.iter().map(|r| r.iter().zip(t).map(|(a, b)| a * b).sum()).collect();
                p.iter().filter(|x| **x == -1).count() == 1 && p.iter().all(|x| *x >= -1)
            })
            .collect();
        let mut found_sorted = found.clone();
        found_sorted.sort();
        prop_assert_eq!(found_sorted, brute);
        for t in &found {
            prop_assert!(distinguished_ray(&c, &qv(t)).is_some());
        }
    }

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.recip(), a.clone());
        }
        // Leibniz rule.
        prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn random_type1_instances(seed in any::<u64>(), pick in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = if pick < 4 { 2 } else { 3 };
        let case = if pick % 2 == 0 { Case::Reflexive } else { Case::Skew };
        let curve = if pick % 4 < 2 { Curve::A1 } else { Curve::P1 };
        let d = sample::type1(&mut rng, n, case, curve);
        prop_assert!(validate_type1(&d).is_empty());
        let tr = sl2_triple(&d).unwrap();
        prop_assert_eq!(tr.plus.commutator(&tr.minus), tr.delta.clone());
        prop_assert_eq!(tr.minus.commutator(&tr.plus), tr.delta.scale(&q(-1)));
        for side in [BorelSide::Minus, BorelSide::Plus] {
            let cc = colored_cone(&d, side).unwrap();
            prop_assert!(colored_cone_diagnostics(&cc, &d.e).is_empty());
            if curve == Curve::P1 {
                prop_assert_eq!(from_colored_cone(&cc, &d.homogeneous()).unwrap(), d.clone());
            }
            // Every root family of the variety consists of roots of Gamma.
            let x = VarietySpec { kind: sphroot_core::engine::VarietyKind::TypeI(d.clone()), side };
            let dr = demazure_roots(&x).unwrap();
            let (ext, int) = dr.enumerate(2);
            for t in ext.iter().chain(&int) {
                prop_assert!(distinguished_ray(&dr.gamma, &qv(t)).is_some());
                prop_assert!(d.in_weight_lattice(t));
            }
        }
    }
}
