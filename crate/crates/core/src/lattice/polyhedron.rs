//! Polyhedra as `conv(points) + recession cone`, and their normal quasifans.

use num_traits::{One, Zero};

use super::cone::Cone;
use super::rational::*;
use crate::error::{Error, Result};

/// `conv(vertices) + recession`, with `vertices` reduced to the true vertices
/// (minimal faces when the recession cone has lineality) and sorted.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: Vec<QVector>,
    recession: Cone,
}

impl Polyhedron {
    pub fn new(points: &[QVector], recession: Cone) -> Result<Polyhedron> {
        let n = recession.rank();
        if points.is_empty() {
            return Err(Error::StructuralError("polyhedron needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        let vertices = minimal_points(points, &recession);
        Ok(Polyhedron { vertices, recession })
    }

    /// `v + recession`.
    pub fn translate_of(v: QVector, recession: Cone) -> Result<Polyhedron> {
        Polyhedron::new(&[v], recession)
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }
    pub fn recession(&self) -> &Cone {
        &self.recession
    }
    pub fn rank(&self) -> usize {
        self.recession.rank()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        homogenized(&self.vertices, &self.recession).contains(&lift(x, Rational::one()))
    }

    /// Minimum of `m` over the polyhedron, `None` standing for minus infinity.
    pub fn support_min(&self, m: &[Rational]) -> Option<Rational> {
        if !self.recession.dual().contains(m) {
            return None;
        }
        self.vertices.iter().map(|v| dot(v, m)).min()
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        let rec = self.recession.sum(&other.recession)?;
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add(a, b)))
            .collect();
        Polyhedron::new(&pts, rec)
    }

    pub fn scaled(&self, c: &Rational) -> Result<Polyhedron> {
        let pts: Vec<QVector> = self.vertices.iter().map(|v| scale(c, v)).collect();
        Polyhedron::new(&pts, self.recession.clone())
    }

    /// Subset test, via vertices and recession.
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        other.vertices.iter().all(|v| self.contains(v)) && self.recession.contains_cone(&other.recession)
    }

    /// Normal quasifan restricted to `within` (which lives on the dual side).
    pub fn normal_quasifan(&self, within: &Cone) -> Result<QuasiFan> {
        let support = within.intersect(&self.recession.dual())?;
        let mut cones: Vec<Cone> = Vec::new();
        for v in &self.vertices {
            let mut ineqs: Vec<QVector> = self.vertices.iter().filter(|w| *w != v).map(|w| sub(w, v)).collect();
            ineqs.extend(support.facets().iter().cloned());
            let c = Cone::from_constraints(support.side(), support.rank(), &ineqs, support.equations())?;
            if c.dim() == support.dim() && !cones.contains(&c) {
                cones.push(c);
            }
        }
        cones.sort();
        Ok(QuasiFan { cones, support })
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Polyhedron) -> bool {
        self.recession == other.recession && self.contains_polyhedron(other) && other.contains_polyhedron(self)
    }
}

impl Eq for Polyhedron {}

fn lift(v: &[Rational], last: Rational) -> QVector {
    let mut out = v.to_vec();
    out.push(last);
    out
}

fn homogenized(points: &[QVector], recession: &Cone) -> Cone {
    let n = recession.rank();
    let mut gens: Vec<QVector> = points.iter().map(|p| lift(p, Rational::one())).collect();
    gens.extend(recession.generators().iter().map(|r| lift(r, Rational::zero())));
    Cone::from_generators(recession.side(), n + 1, &gens).expect("dimensions agree")
}

fn minimal_points(points: &[QVector], recession: &Cone) -> Vec<QVector> {
    let h = homogenized(points, recession);
    let n = recession.rank();
    let mut out: Vec<QVector> = Vec::new();
    for r in h.rays() {
        if sign(&r[n]) > 0 {
            let p = scale(&r[n].recip(), &r[..n]);
            // Rays are normalised modulo the lineality of the homogenisation,
            // so pick an input point in the same class for a readable answer.
            let rep = points
                .iter()
                .find(|q| {
                    let d = sub(q, &p);
                    recession.lineality().is_empty() && is_zero(&d)
                        || !recession.lineality().is_empty() && solve_in_span(recession.lineality(), &d).is_some()
                })
                .cloned()
                .unwrap_or(p);
            if !out.contains(&rep) {
                out.push(rep);
            }
        }
    }
    out.sort();
    out
}

/// A complete-in-its-support collection of full-dimensional cones.
#[derive(Debug, Clone)]
pub struct QuasiFan {
    cones: Vec<Cone>,
    support: Cone,
}

impl QuasiFan {
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }
    pub fn support(&self) -> &Cone {
        &self.support
    }

    /// Coarsest common refinement.
    pub fn refine(&self, other: &QuasiFan) -> Result<QuasiFan> {
        if self.support != other.support {
            return Err(Error::SupportMismatch);
        }
        let mut cones: Vec<Cone> = Vec::new();
        for a in &self.cones {
            for b in &other.cones {
                let c = a.intersect(b)?;
                if c.dim() == self.support.dim() && !cones.contains(&c) {
                    cones.push(c);
                }
            }
        }
        cones.sort();
        Ok(QuasiFan { cones, support: self.support.clone() })
    }
}

pub fn minkowski_sum(a: &Polyhedron, b: &Polyhedron) -> Result<Polyhedron> {
    a.minkowski_sum(b)
}

pub fn support_min(p: &Polyhedron, m: &[Rational]) -> Option<Rational> {
    p.support_min(m)
}

pub fn normal_quasifan(p: &Polyhedron, within: &Cone) -> Result<QuasiFan> {
    p.normal_quasifan(within)
}

pub fn quasifan_refine(a: &QuasiFan, b: &QuasiFan) -> Result<QuasiFan> {
    a.refine(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Side;

    fn segment(a: &[i64], b: &[i64]) -> Polyhedron {
        Polyhedron::new(&[qv(a), qv(b)], Cone::zero(Side::N, a.len())).unwrap()
    }

    #[test]
    fn square_from_two_segments() {
        let s = segment(&[0, 0], &[-1, 0]).minkowski_sum(&segment(&[0, 0], &[0, -1])).unwrap();
        assert_eq!(s.vertices(), &[qv(&[-1, -1]), qv(&[-1, 0]), qv(&[0, -1]), qv(&[0, 0])]);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let p = Polyhedron::new(&[qv(&[0, 0]), qv(&[2, 0]), qv(&[0, 2]), qv(&[1, 1]), qv(&[0, 1])], Cone::zero(Side::N, 2))
            .unwrap();
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn support_min_unbounded_direction() {
        let rec = Cone::from_lattice(Side::N, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let p = Polyhedron::new(&[qv(&[0, 0]), qv(&[-1, 0]), qv(&[0, -1])], rec).unwrap();
        assert_eq!(p.support_min(&qv(&[-1, 0])), None);
        assert_eq!(p.support_min(&qv(&[1, 1])), Some(q(-1)));
    }

    #[test]
    fn example_quasifan_is_four_quadrants() {
        let whole = Cone::whole(Side::M, 2);
        let f0 = segment(&[0, 0], &[-1, 0]).normal_quasifan(&whole).unwrap();
        let f1 = segment(&[0, 0], &[0, -1]).normal_quasifan(&whole).unwrap();
        assert_eq!(f0.cones().len(), 2);
        let r = f0.refine(&f1).unwrap();
        assert_eq!(r.cones().len(), 4);
        for c in r.cones() {
            assert_eq!(c.rays().len(), 2);
        }
    }

    #[test]
    fn triangle_fan_depends_on_support() {
        let t = Polyhedron::new(&[qv(&[0, 0]), qv(&[-1, 0]), qv(&[0, -1])], Cone::zero(Side::N, 2)).unwrap();
        assert_eq!(t.normal_quasifan(&Cone::whole(Side::M, 2)).unwrap().cones().len(), 3);
        let orthant = Cone::from_lattice(Side::M, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(t.normal_quasifan(&orthant).unwrap().cones().len(), 2);
    }

    #[test]
    fn refine_rejects_mismatched_supports() {
        let t = segment(&[0, 0], &[1, 0]);
        let a = t.normal_quasifan(&Cone::whole(Side::M, 2)).unwrap();
        let orthant = Cone::from_lattice(Side::M, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let b = t.normal_quasifan(&orthant).unwrap();
        assert_eq!(a.refine(&b).unwrap_err(), Error::SupportMismatch);
    }
}
