//! Random valid instances, by rejection sampling. Used by the property
//! suites; the generators only ever return data that passes validation.

use rand::Rng;

use crate::divisors::Curve;
use crate::lattice::*;
use crate::type1::{validate_type1, Case, SphericalDataI};
use crate::type2::{validate_type2, Type2Data};

const RANGE: i64 = 2;

fn small_vec<R: Rng>(rng: &mut R, n: usize, r: i64) -> LatticeVector {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive_nonzero<R: Rng>(rng: &mut R, n: usize, r: i64) -> LatticeVector {
    loop {
        let v = small_vec(rng, n, r);
        if v.iter().any(|x| *x != 0) && to_lattice(&primitive(&qv(&v))) == Some(v.clone()) {
            return v;
        }
    }
}

/// One attempt at a type I instance with the requested shape.
pub fn try_type1<R: Rng>(rng: &mut R, n: usize, case: Case, curve: Curve) -> Option<SphericalDataI> {
    let e = primitive_nonzero(rng, n, 1);
    let v0 = match case {
        Case::Reflexive => {
            let v = small_vec(rng, n, RANGE);
            if pairing(&v, &e) != 1 {
                return None;
            }
            qv(&v)
        }
        Case::Skew => {
            let w = small_vec(rng, n, RANGE);
            if pairing(&w, &e) != 1 {
                return None;
            }
            scale(&qf(1, 2), &qv(&w))
        }
    };
    let v1 = small_vec(rng, n, RANGE);
    if pairing(&v1, &e) != -1 {
        return None;
    }
    let v1 = qv(&v1);
    let eperp = integer_kernel(&[e.clone()], n).basis;
    let in_eperp = |rng: &mut R, r: i64| -> QVector {
        let c: Vec<i64> = (0..eperp.len()).map(|_| rng.gen_range(-r..=r)).collect();
        (0..n).map(|i| q(eperp.iter().zip(&c).map(|(b, x)| b[i] * x).sum())).collect()
    };
    // Horizontal rays live in e^perp.
    let k = rng.gen_range(0..n);
    let mut gens: Vec<QVector> = (0..k).map(|_| in_eperp(rng, 1)).filter(|v| !is_zero(v)).collect();
    let delta_inf = match curve {
        Curve::A1 => None,
        Curve::P1 => {
            // Each vertex p of Delta_inf comes with the rays its vertical
            // G-divisor forces into sigma.
            let pts: Vec<QVector> = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let p = in_eperp(rng, 3);
                    if rng.gen_bool(0.2) {
                        scale(&qf(1, 2), &p)
                    } else {
                        p
                    }
                })
                .collect();
            for p in &pts {
                let c = add(p, &v0);
                gens.push(c.clone());
                gens.push(add(&c, &v1));
                if case == Case::Reflexive {
                    gens.push(p.clone());
                    gens.push(add(p, &v1));
                }
            }
            Some(pts)
        }
    };
    let sigma = Cone::from_generators(Side::N, n, &gens).ok()?;
    if !sigma.is_strongly_convex() {
        return None;
    }
    let delta_inf = match delta_inf {
        Some(pts) => Some(Polyhedron::new(&pts, sigma.clone()).ok()?),
        None => None,
    };
    let d = SphericalDataI { case, v0, v1, sigma, delta_inf, e };
    if validate_type1(&d).is_empty() {
        Some(d)
    } else {
        None
    }
}

/// A valid type I instance; retries until one is found.
pub fn type1<R: Rng>(rng: &mut R, n: usize, case: Case, curve: Curve) -> SphericalDataI {
    for _ in 0..200_000 {
        if let Some(d) = try_type1(rng, n, case, curve) {
            return d;
        }
    }
    panic!("no valid instance found for rank {n}, {case:?}, {curve:?}");
}

/// A mixed suite: ranks 2 and 3, both cases, both curves, round robin.
pub fn type1_suite<R: Rng>(rng: &mut R, count: usize) -> Vec<SphericalDataI> {
    let mut shapes = Vec::new();
    for n in [2, 3] {
        for case in [Case::Reflexive, Case::Skew] {
            for curve in [Curve::A1, Curve::P1] {
                shapes.push((n, case, curve));
            }
        }
    }
    (0..count).map(|i| {
        let (n, case, curve) = shapes[i % shapes.len()];
        type1(rng, n, case, curve)
    }).collect()
}

/// A strongly convex cone of rank `n` with between 1 and `n + 1` rays.
pub fn strongly_convex_cone<R: Rng>(rng: &mut R, n: usize) -> Cone {
    loop {
        let k = rng.gen_range(1..=n + 1);
        let gens: Vec<LatticeVector> = (0..k).map(|_| primitive_nonzero(rng, n, 3)).collect();
        if let Ok(c) = Cone::from_lattice(Side::N, n, &gens) {
            if c.is_strongly_convex() {
                return c;
            }
        }
    }
}

/// A valid type II instance of rank `n`.
pub fn type2<R: Rng>(rng: &mut R, n: usize) -> Type2Data {
    loop {
        let c = strongly_convex_cone(rng, n);
        let e = small_vec(rng, n, 2);
        if let Ok(d) = validate_type2(&c, &e) {
            return d;
        }
    }
}
