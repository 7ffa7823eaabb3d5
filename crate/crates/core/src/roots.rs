//! Demazure roots of a cone and finite enumeration of root descriptions.
//!
//! A root of a strongly convex `sigma` in `N` is a `theta` in `M` pairing to
//! `-1` with one ray (the distinguished ray) and non-negatively with every
//! other ray. The root set is a finite union of such families, one per ray.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::*;

/// Where a description came from; kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Cone,
    VarietyExterior,
    VarietyInterior,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Cone => "cone",
            Provenance::VarietyExterior => "variety-exterior",
            Provenance::VarietyInterior => "variety-interior",
        }
    }
}

/// `{theta in lattice : <theta, d> = -1, <theta, a> = c for equalities,
/// <theta, b> >= 0 for inequalities}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootFamily {
    pub distinguished_ray: QVector,
    /// Extra affine equalities `<theta, a> = c`, beyond the distinguished one.
    pub equalities: Vec<(QVector, Rational)>,
    pub inequalities: Vec<QVector>,
    /// Restriction to a sublattice of `M`; `None` means all of `M`.
    pub lattice: Option<Sublattice>,
}

impl RootFamily {
    /// All equalities including the distinguished one.
    pub fn all_equalities(&self) -> Vec<(QVector, Rational)> {
        let mut eqs = vec![(self.distinguished_ray.clone(), q(-1))];
        eqs.extend(self.equalities.iter().cloned());
        eqs
    }

    pub fn contains(&self, theta: &[i64]) -> bool {
        let t = qv(theta);
        self.all_equalities().iter().all(|(a, c)| dot(a, &t) == *c)
            && self.inequalities.iter().all(|b| !dot(b, &t).is_negative())
            && self.lattice.as_ref().map_or(true, |l| l.contains(&t))
    }

    /// Rational feasibility of the defining system, by elimination.
    pub fn is_feasible(&self) -> bool {
        let n = self.distinguished_ray.len();
        // Homogenise: theta -> (theta, s) with s > 0, equalities a.theta - c s = 0.
        let lift = |a: &QVector, c: &Rational| {
            let mut v = a.clone();
            v.push(-c.clone());
            v
        };
        let eqs: Vec<QVector> = self.all_equalities().iter().map(|(a, c)| lift(a, c)).collect();
        let mut ineqs: Vec<QVector> = self.inequalities.iter().map(|b| lift(b, &Rational::zero())).collect();
        ineqs.push(unit_vec(n + 1, n));
        let c = Cone::from_constraints(Side::M, n + 1, &ineqs, &eqs).expect("dimensions agree");
        c.generators().iter().any(|g| sign(&g[n]) > 0)
    }

    /// Integral points of the family in the box `|theta_i| <= bound`.
    ///
    /// Solves the equalities over `Z` with a Smith form and walks the
    /// kernel coordinates, instead of scanning the whole box.
    pub fn enumerate(&self, bound: i64) -> Vec<LatticeVector> {
        let n = self.distinguished_ray.len();
        let mut rows: Vec<LatticeVector> = Vec::new();
        let mut rhs: Vec<i64> = Vec::new();
        for (a, c) in self.all_equalities() {
            let l = Rational::from_integer(mu_denominator(&a));
            let scaled = scale(&l, &a);
            let c = &c * &l;
            if !c.is_integer() {
                return Vec::new();
            }
            rows.push(to_lattice(&scaled).expect("small coefficients"));
            rhs.push(c.to_integer().to_i64().expect("small coefficients"));
        }
        let snf = smith(&rows, n);
        // rows = u^-1 d v^-1, so rows x = b  <=>  d y = u b with x = v y.
        let ub = mat_vec(&snf.u, &rhs);
        let mut y0 = vec![0i64; n];
        for (i, &c) in ub.iter().enumerate() {
            if i < snf.rank {
                if c % snf.d[i][i] != 0 {
                    return Vec::new();
                }
                y0[i] = c / snf.d[i][i];
            } else if c != 0 {
                return Vec::new();
            }
        }
        let x0 = mat_vec(&snf.v, &y0);
        let kernel: Vec<LatticeVector> = (snf.rank..n).map(|j| snf.v.iter().map(|r| r[j]).collect()).collect();
        let mut out = Vec::new();
        if kernel.is_empty() {
            if in_box(&x0, bound) && self.contains(&x0) {
                out.push(x0);
            }
            return out;
        }
        // Coefficient bounds from the rational left inverse of the kernel basis.
        let kq: Vec<QVector> = kernel.iter().map(|k| qv(k)).collect();
        let k = kernel.len();
        let mut cbound = vec![0i64; k];
        for i in 0..n {
            let dir = unit_vec(n, i);
            // Coefficients of e_i's component in the kernel span.
            let lo = project_coeffs(&kq, &dir);
            for (j, c) in lo.iter().enumerate() {
                let span = c.abs() * Rational::from_integer((bound + x0[i].abs()).into());
                cbound[j] += span.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4);
            }
        }
        let mut coeffs = vec![0i64; k];
        walk(&mut coeffs, 0, &cbound, &mut |c| {
            let mut x = x0.clone();
            for (kv, &cj) in kernel.iter().zip(c) {
                for (xi, ki) in x.iter_mut().zip(kv) {
                    *xi += cj * ki;
                }
            }
            if in_box(&x, bound) && self.contains(&x) {
                out.push(x);
            }
        });
        out
    }
}

/// Coordinates `c` such that `c . kernel` is the orthogonal projection of
/// `v` onto the span of `kernel`, via the normal equations.
fn project_coeffs(kernel: &[QVector], v: &[Rational]) -> QVector {
    let k = kernel.len();
    let gram: Vec<QVector> = (0..k).map(|i| (0..k).map(|j| dot(&kernel[i], &kernel[j])).collect()).collect();
    let rhs: QVector = kernel.iter().map(|kv| dot(kv, v)).collect();
    // Columns of gram are the "basis" for solve_in_span.
    let cols: Vec<QVector> = (0..k).map(|j| gram.iter().map(|r| r[j].clone()).collect()).collect();
    solve_in_span(&cols, &rhs).expect("gram matrix is invertible")
}

fn walk(c: &mut Vec<i64>, i: usize, bounds: &[i64], f: &mut dyn FnMut(&[i64])) {
    if i == c.len() {
        f(c);
        return;
    }
    for x in -bounds[i]..=bounds[i] {
        c[i] = x;
        walk(c, i + 1, bounds, f);
    }
}

fn in_box(x: &[i64], bound: i64) -> bool {
    x.iter().all(|v| v.abs() <= bound)
}

/// A finite union of root families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDescription {
    pub rank: usize,
    pub families: Vec<RootFamily>,
    pub provenance: Provenance,
}

impl RootDescription {
    pub fn empty(rank: usize, provenance: Provenance) -> RootDescription {
        RootDescription { rank, families: Vec::new(), provenance }
    }

    pub fn contains(&self, theta: &[i64]) -> bool {
        self.families.iter().any(|f| f.contains(theta))
    }

    /// Drops families with no rational point.
    pub fn prune(mut self) -> RootDescription {
        self.families.retain(RootFamily::is_feasible);
        self
    }
}

/// The root families of a strongly convex cone, one per ray.
pub fn roots_of_cone(sigma: &Cone) -> Result<RootDescription> {
    if !sigma.is_strongly_convex() {
        return Err(Error::StronglyConvexRequired);
    }
    let rays = sigma.rays();
    let families = rays
        .iter()
        .map(|rho| RootFamily {
            distinguished_ray: rho.clone(),
            equalities: Vec::new(),
            inequalities: rays.iter().filter(|r| *r != rho).cloned().collect(),
            lattice: None,
        })
        .collect();
    Ok(RootDescription { rank: sigma.rank(), families, provenance: Provenance::Cone })
}

/// Whether `theta` (on the dual side of `cone`) is a Demazure root of `cone`,
/// returning the distinguished ray.
pub fn distinguished_ray(cone: &Cone, theta: &[Rational]) -> Option<QVector> {
    if !cone.is_strongly_convex() {
        return None;
    }
    let mut found = None;
    for r in cone.rays() {
        let p = dot(r, theta);
        if p == q(-1) && found.is_none() {
            found = Some(r.clone());
        } else if p.is_negative() {
            return None;
        }
    }
    found
}

pub fn is_root_of(cone: &Cone, theta: &[Rational]) -> bool {
    distinguished_ray(cone, theta).is_some()
}

/// Roots with `|theta_i| <= bound`, deduplicated and in lexicographic order.
pub fn enumerate_roots(desc: &RootDescription, bound: i64) -> Vec<LatticeVector> {
    let set: BTreeSet<LatticeVector> = desc.families.iter().flat_map(|f| f.enumerate(bound)).collect();
    set.into_iter().collect()
}

/// Roots whose negative is also a root, within the box.
pub fn semisimple_roots(desc: &RootDescription, bound: i64) -> Vec<LatticeVector> {
    let all = enumerate_roots(desc, bound);
    all.iter()
        .filter(|t| {
            let m: LatticeVector = t.iter().map(|x| -x).collect();
            all.binary_search(&m).is_ok()
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthant(n: usize) -> Cone {
        let g: Vec<QVector> = (0..n).map(|i| unit_vec(n, i)).collect();
        Cone::from_generators(Side::N, n, &g).unwrap()
    }

    #[test]
    fn orthant_roots_in_small_box() {
        let d = roots_of_cone(&orthant(2)).unwrap();
        let r = enumerate_roots(&d, 2);
        let want: Vec<LatticeVector> = vec![vec![-1, 0], vec![-1, 1], vec![-1, 2], vec![0, -1], vec![1, -1], vec![2, -1]];
        assert_eq!(r, want);
    }

    #[test]
    fn orthant_semisimple_roots() {
        let d = roots_of_cone(&orthant(2)).unwrap();
        assert_eq!(semisimple_roots(&d, 3), vec![vec![-1, 1], vec![1, -1]]);
    }

    #[test]
    fn non_strongly_convex_rejected() {
        let h = Cone::from_lattice(Side::N, 2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert_eq!(roots_of_cone(&h).unwrap_err(), Error::StronglyConvexRequired);
    }

    #[test]
    fn infeasible_family_pruned() {
        let f = RootFamily {
            distinguished_ray: qv(&[1, 0]),
            equalities: vec![(qv(&[1, 0]), q(0))],
            inequalities: vec![],
            lattice: None,
        };
        assert!(!f.is_feasible());
        assert!(f.enumerate(3).is_empty());
    }
}
