//! Rational polyhedral cones in both representations.
//!
//! Conversion between generators and inequalities is a plain double
//! description pass: constraints are added one at a time, rays are combined
//! across the hyperplane and non-extreme combinations are discarded with the
//! algebraic rank test.

use std::cmp::Ordering;

use num_traits::Zero;

use super::rational::*;
use crate::error::{Error, Result};

/// Generators of `{x : a.x >= 0 (a in ineqs), b.x = 0 (b in eqs)}`:
/// a lineality basis and one representative per extreme ray.
pub(crate) fn hrep_to_vrep(
    n: usize,
    ineqs: &[QVector],
    eqs: &[QVector],
) -> (Vec<QVector>, Vec<QVector>) {
    let mut lin: Vec<QVector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let mut rays: Vec<QVector> = Vec::new();
    let mut seen: Vec<QVector> = Vec::new();

    let constraints = eqs
        .iter()
        .map(|e| (e, true))
        .chain(ineqs.iter().map(|a| (a, false)));
    for (a, is_eq) in constraints {
        if is_zero(a) {
            continue;
        }
        seen.push(a.clone());
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(k);
            if sign(&dot(a, &l0)) < 0 {
                l0 = neg(&l0);
            }
            let al0 = dot(a, &l0);
            for v in lin.iter_mut().chain(rays.iter_mut()) {
                let f = dot(a, v) / &al0;
                if !f.is_zero() {
                    *v = sub(v, &scale(&f, &l0));
                }
            }
            if !is_eq {
                rays.push(l0);
            }
            continue;
        }
        let mut pos = Vec::new();
        let mut negs = Vec::new();
        let mut zero = Vec::new();
        for r in rays.drain(..) {
            match sign(&dot(a, &r)) {
                1 => pos.push(r),
                -1 => negs.push(r),
                _ => zero.push(r),
            }
        }
        let mut fresh = Vec::new();
        for p in &pos {
            let ap = dot(a, p);
            for m in &negs {
                let am = dot(a, m);
                fresh.push(sub(&scale(&ap, m), &scale(&am, p)));
            }
        }
        if !is_eq {
            zero.extend(pos);
        }
        let target = n - lin.len() - 1;
        for r in fresh {
            let tight: Vec<QVector> = seen.iter().filter(|c| dot(c, &r).is_zero()).cloned().collect();
            if rank(&tight) == target {
                zero.push(r);
            }
        }
        rays = dedup_directions(zero);
    }

    let lin = canonical_span(&lin);
    let rays = canonical_rays(&lin, rays);
    (lin, rays)
}

/// Representative of each ray orthogonal to the lineality space, primitive,
/// deduplicated and sorted.
fn canonical_rays(lin: &[QVector], rays: Vec<QVector>) -> Vec<QVector> {
    let projected = rays
        .into_iter()
        .map(|r| project_out(lin, &r))
        .filter(|r| !is_zero(r))
        .map(|r| primitive(&r))
        .collect();
    let mut out = dedup_directions(projected);
    out.sort();
    out
}

/// Orthogonal projection onto the complement of `span(lin)`.
pub(crate) fn project_out(lin: &[QVector], v: &[Rational]) -> QVector {
    if lin.is_empty() {
        return v.to_vec();
    }
    // Gram-Schmidt on the fly; sizes are tiny.
    let mut ortho: Vec<QVector> = Vec::new();
    for l in lin {
        let mut w = l.clone();
        for o in &ortho {
            let f = dot(&w, o) / dot(o, o);
            w = sub(&w, &scale(&f, o));
        }
        if !is_zero(&w) {
            ortho.push(w);
        }
    }
    let mut out = v.to_vec();
    for o in &ortho {
        let f = dot(&out, o) / dot(o, o);
        out = sub(&out, &scale(&f, o));
    }
    out
}

fn dedup_directions(v: Vec<QVector>) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::new();
    for r in v {
        let p = primitive(&r);
        if !is_zero(&p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A cone with both its generators and its facet description.
///
/// `rays` are primitive, one per extreme ray, chosen orthogonal to the
/// lineality space. `facets` and `equations` live on the dual side:
/// `x` is in the cone iff every facet pairs non-negatively and every
/// equation pairs to zero.
#[derive(Debug, Clone)]
pub struct Cone {
    side: Side,
    rank: usize,
    rays: Vec<QVector>,
    lineality: Vec<QVector>,
    facets: Vec<QVector>,
    equations: Vec<QVector>,
}

impl Cone {
    pub fn from_generators(side: Side, rank: usize, gens: &[QVector]) -> Result<Cone> {
        check_dims(rank, gens)?;
        let (equations, facets) = hrep_to_vrep(rank, gens, &[]);
        let (lineality, rays) = hrep_to_vrep(rank, &facets, &equations);
        Ok(Cone { side, rank, rays, lineality, facets, equations })
    }

    pub fn from_lattice(side: Side, rank: usize, gens: &[LatticeVector]) -> Result<Cone> {
        let g: Vec<QVector> = gens.iter().map(|v| qv(v)).collect();
        Cone::from_generators(side, rank, &g)
    }

    /// The cone cut out by dual-side inequalities and equations.
    pub fn from_constraints(
        side: Side,
        rank: usize,
        ineqs: &[QVector],
        eqs: &[QVector],
    ) -> Result<Cone> {
        check_dims(rank, ineqs)?;
        check_dims(rank, eqs)?;
        let (lineality, rays) = hrep_to_vrep(rank, ineqs, eqs);
        let mut gens = rays.clone();
        gens.extend(lineality.iter().cloned());
        gens.extend(lineality.iter().map(|l| neg(l)));
        let (equations, facets) = hrep_to_vrep(rank, &gens, &[]);
        Ok(Cone { side, rank, rays, lineality, facets, equations })
    }

    pub fn zero(side: Side, rank: usize) -> Cone {
        Cone::from_generators(side, rank, &[]).expect("dimensions agree")
    }

    pub fn whole(side: Side, rank: usize) -> Cone {
        Cone::from_constraints(side, rank, &[], &[]).expect("dimensions agree")
    }

    pub fn side(&self) -> Side {
        self.side
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }
    pub fn lineality(&self) -> &[QVector] {
        &self.lineality
    }
    pub fn facets(&self) -> &[QVector] {
        &self.facets
    }
    pub fn equations(&self) -> &[QVector] {
        &self.equations
    }

    /// Rays as machine integers (they are primitive, so this only fails on overflow).
    pub fn rays_lattice(&self) -> Vec<LatticeVector> {
        self.rays.iter().map(|r| to_lattice(r).expect("ray fits in i64")).collect()
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// All generators, lineality included in both directions.
    pub fn generators(&self) -> Vec<QVector> {
        let mut g = self.rays.clone();
        g.extend(self.lineality.iter().cloned());
        g.extend(self.lineality.iter().map(|l| neg(l)));
        g
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.rank
            && self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.facets.iter().all(|f| sign(&dot(f, x)) >= 0)
    }

    pub fn contains_lattice(&self, x: &[i64]) -> bool {
        self.contains(&qv(x))
    }

    /// Interior of the cone relative to its span.
    pub fn in_relative_interior(&self, x: &[Rational]) -> bool {
        self.contains(x) && self.facets.iter().all(|f| sign(&dot(f, x)) > 0)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn dual(&self) -> Cone {
        Cone {
            side: self.side.dual(),
            rank: self.rank,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    /// The largest linear subspace contained in the cone, as a cone.
    pub fn linear_part(&self) -> Cone {
        let eqs: Vec<QVector> = {
            let mut e = self.facets.clone();
            e.extend(self.equations.iter().cloned());
            e
        };
        Cone::from_constraints(self.side, self.rank, &[], &eqs).expect("dimensions agree")
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        self.same_space(other)?;
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_constraints(self.side, self.rank, &ineqs, &eqs)
    }

    pub fn sum(&self, other: &Cone) -> Result<Cone> {
        self.same_space(other)?;
        let mut g = self.generators();
        g.extend(other.generators());
        Cone::from_generators(self.side, self.rank, &g)
    }

    /// Adds generators to the cone.
    pub fn extend(&self, extra: &[QVector]) -> Result<Cone> {
        let mut g = self.generators();
        g.extend(extra.iter().cloned());
        Cone::from_generators(self.side, self.rank, &g)
    }

    /// The face of the cone on which the dual vector `m` vanishes, provided
    /// `m` is in the dual cone.
    pub fn face(&self, m: &[Rational]) -> Result<Cone> {
        let mut eqs = self.equations.clone();
        eqs.push(m.to_vec());
        Cone::from_constraints(self.side, self.rank, &self.facets, &eqs)
    }

    /// A point in the relative interior: the sum of all generators.
    pub fn interior_point(&self) -> QVector {
        self.rays.iter().fold(zero_vec(self.rank), |acc, r| add(&acc, r))
    }

    fn same_space(&self, other: &Cone) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: other.rank });
        }
        if self.side != other.side {
            return Err(Error::SideMismatch(format!("{:?} vs {:?}", self.side, other.side)));
        }
        Ok(())
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.side == other.side
            && self.rank == other.rank
            && self.contains_cone(other)
            && other.contains_cone(self)
    }
}

impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    /// Ordering on the canonical generator lists; used only for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, &self.rays, &self.lineality).cmp(&(other.rank, &other.rays, &other.lineality))
    }
}

fn check_dims(rank: usize, vs: &[QVector]) -> Result<()> {
    match vs.iter().find(|v| v.len() != rank) {
        Some(v) => Err(Error::DimensionMismatch { expected: rank, got: v.len() }),
        None => Ok(()),
    }
}

pub fn cone_from_generators(side: Side, rank: usize, gens: &[QVector]) -> Result<Cone> {
    Cone::from_generators(side, rank, gens)
}

pub fn cone_dual(c: &Cone) -> Cone {
    c.dual()
}

pub fn cone_linear_part(c: &Cone) -> Cone {
    c.linear_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(gens: &[&[i64]]) -> Cone {
        let g: Vec<QVector> = gens.iter().map(|v| qv(v)).collect();
        Cone::from_generators(Side::N, g.first().map_or(2, Vec::len), &g).unwrap()
    }

    #[test]
    fn redundant_generator_is_dropped() {
        let c = cone(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(c.rays(), &[qv(&[0, 1]), qv(&[1, 0])]);
        let d = c.dual();
        assert_eq!(d.side(), Side::M);
        assert_eq!(d.rays(), &[qv(&[0, 1]), qv(&[1, 0])]);
    }

    #[test]
    fn skew_cone_dual() {
        let c = cone(&[&[1, 0], &[1, 2]]);
        assert_eq!(c.dual().rays(), &[qv(&[0, 1]), qv(&[2, -1])]);
    }

    #[test]
    fn half_plane_has_a_line() {
        let c = cone(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(c.lineality(), &[qv(&[1, 0])]);
        assert_eq!(c.rays(), &[qv(&[0, 1])]);
        assert!(!c.is_strongly_convex());
        let lp = c.linear_part();
        assert_eq!(lp.dim(), 1);
        assert!(lp.contains(&qv(&[-5, 0])));
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.equations(), &[qv(&[0, 0, 1])]);
        assert!(!c.contains(&qv(&[1, 1, 1])));
        assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn octahedral_cone_has_four_facets() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.facets().len(), 4);
    }

    #[test]
    fn empty_generator_set_is_origin() {
        let z = Cone::zero(Side::N, 3);
        assert_eq!(z.dim(), 0);
        assert_eq!(z.dual().dim(), 3);
        assert!(z.dual().contains(&qv(&[-1, 2, 3])));
    }
}
