//! Polyhedral divisors over `A^1` and `P^1`, their section spaces and the
//! divisors of homogeneous rational functions on the variety they define.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::*;
use crate::symbolic::{Derivation, GradedElement, Poly, RatFunc};

/// A rational point of `P^1`. Finite points sort before infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Finite(Rational),
    Infinity,
}

impl CurvePoint {
    pub fn int(z: i64) -> CurvePoint {
        CurvePoint::Finite(q(z))
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Finite(z) => write!(f, "{}", fmt_q(z)),
            CurvePoint::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    A1,
    P1,
}

/// A `Q`-divisor on the curve, zero coefficients dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QDivisor(pub BTreeMap<CurvePoint, Rational>);

impl QDivisor {
    pub fn coefficient(&self, z: &CurvePoint) -> Rational {
        self.0.get(z).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Rational {
        self.0.values().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn floor(&self) -> QDivisor {
        QDivisor(self.0.iter().map(|(z, c)| (z.clone(), c.floor())).filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|c| c.is_integer())
    }

    /// Some positive multiple is principal. On `A^1` every integral divisor
    /// is principal; on `P^1` exactly the degree-zero ones are.
    pub fn has_principal_multiple(&self, curve: Curve) -> bool {
        match curve {
            Curve::A1 => true,
            Curve::P1 => self.degree().is_zero(),
        }
    }
}

/// Outcome of the properness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Properness {
    pub proper: bool,
    pub reason: String,
    /// Degree vertices outside the tail cone, when that is the failure.
    pub violating: Vec<QVector>,
}

/// Orders of `f chi^m` along the invariant prime divisors of the variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorParts {
    /// `(rho, <m, rho>)` for the horizontal divisors `D_rho`.
    pub horizontal: Vec<(QVector, Rational)>,
    /// `(z, v, mu(v) (v(m) + ord_z f))` for the vertical divisors `D_(z,v)`.
    pub vertical: Vec<(CurvePoint, QVector, Rational)>,
    /// `f` also has zeros or poles away from the special points.
    pub residual_zeros: bool,
}

impl DivisorParts {
    pub fn vertical_order(&self, z: &CurvePoint, v: &[Rational]) -> Option<&Rational> {
        self.vertical.iter().find(|(zz, vv, _)| zz == z && vv == v).map(|(_, _, c)| c)
    }

    pub fn horizontal_order(&self, rho: &[Rational]) -> Option<&Rational> {
        self.horizontal.iter().find(|(r, _)| r == rho).map(|(_, c)| c)
    }
}

/// A `sigma`-polyhedral divisor. Points missing from `coefficients` carry
/// the trivial coefficient `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDivisor {
    curve: Curve,
    tail: Cone,
    coefficients: BTreeMap<CurvePoint, Polyhedron>,
}

impl PolyDivisor {
    pub fn new(curve: Curve, tail: Cone, coefficients: BTreeMap<CurvePoint, Polyhedron>) -> Result<PolyDivisor> {
        if !tail.is_strongly_convex() {
            return Err(Error::StronglyConvexRequired);
        }
        for (z, p) in &coefficients {
            if curve == Curve::A1 && *z == CurvePoint::Infinity {
                return Err(Error::StructuralError("infinity is not a point of A^1".into()));
            }
            if *p.recession() != tail {
                return Err(Error::StructuralError(format!("coefficient at {z} has the wrong tail cone")));
            }
        }
        Ok(PolyDivisor { curve, tail, coefficients })
    }

    pub fn curve(&self) -> Curve {
        self.curve
    }
    pub fn tail(&self) -> &Cone {
        &self.tail
    }
    pub fn rank(&self) -> usize {
        self.tail.rank()
    }
    pub fn coefficients(&self) -> &BTreeMap<CurvePoint, Polyhedron> {
        &self.coefficients
    }

    pub fn coefficient(&self, z: &CurvePoint) -> Polyhedron {
        self.coefficients
            .get(z)
            .cloned()
            .unwrap_or_else(|| Polyhedron::translate_of(zero_vec(self.rank()), self.tail.clone()).expect("valid"))
    }

    /// The weight cone `sigma^vee`.
    pub fn weight_cone(&self) -> Cone {
        self.tail.dual()
    }

    /// `D(m) = sum_z min_{v in Delta_z} <v, m> [z]`.
    pub fn evaluate(&self, m: &[Rational]) -> Result<QDivisor> {
        if !self.weight_cone().contains(m) {
            return Err(Error::OutsideWeightCone(fmt_vec(m)));
        }
        let mut out = BTreeMap::new();
        for (z, p) in &self.coefficients {
            let c = p.support_min(m).expect("m is in the dual of the tail");
            if !c.is_zero() {
                out.insert(z.clone(), c);
            }
        }
        Ok(QDivisor(out))
    }

    /// `D(m)` for the lattice-free formula used by roots, which may leave the
    /// weight cone: minimum over vertices only.
    pub fn evaluate_on_vertices(&self, m: &[Rational]) -> QDivisor {
        let mut out = BTreeMap::new();
        for (z, p) in &self.coefficients {
            let c = p.vertices().iter().map(|v| dot(v, m)).min().expect("nonempty");
            if !c.is_zero() {
                out.insert(z.clone(), c);
            }
        }
        QDivisor(out)
    }

    /// Minkowski sum of all coefficients (the tail alone if there are none).
    pub fn degree(&self) -> Polyhedron {
        let mut acc = Polyhedron::translate_of(zero_vec(self.rank()), self.tail.clone()).expect("valid");
        for p in self.coefficients.values() {
            acc = acc.minkowski_sum(p).expect("same tail");
        }
        acc
    }

    /// Properness. Over `A^1` every divisor is proper; over `P^1` the degree
    /// must be strictly inside the tail, and any weight on which the degree
    /// evaluates to zero must lie on the boundary of the weight cone with a
    /// principal multiple. The second condition is checked on the rays of
    /// the weight cone, the sums of rays of each facet, and an interior point.
    pub fn is_proper(&self) -> Properness {
        if self.curve == Curve::A1 {
            return Properness { proper: true, reason: "affine base curve".into(), violating: vec![] };
        }
        let deg = self.degree();
        let violating: Vec<QVector> = deg.vertices().iter().filter(|v| !self.tail.contains(v)).cloned().collect();
        if !violating.is_empty() {
            let names: Vec<String> = violating.iter().map(|v| fmt_vec(v)).collect();
            return Properness {
                proper: false,
                reason: format!("degree vertex {} lies outside the tail cone", names.join(", ")),
                violating,
            };
        }
        if deg.contains(&zero_vec(self.rank())) {
            return Properness { proper: false, reason: "degree equals the tail cone".into(), violating: vec![] };
        }
        let wc = self.weight_cone();
        let mut samples: Vec<QVector> = wc.rays().to_vec();
        for f in wc.facets() {
            let face = wc.face(f).expect("facet normal is in the dual");
            samples.push(face.interior_point());
        }
        let interior = wc.interior_point();
        for m in &samples {
            if deg.support_min(m).is_some_and(|h| h.is_zero()) {
                let on_boundary = wc.facets().iter().any(|f| dot(f, m).is_zero());
                let principal = self.evaluate(m).map(|d| d.has_principal_multiple(self.curve)).unwrap_or(false);
                if !on_boundary || !principal {
                    return Properness {
                        proper: false,
                        reason: format!("degree vanishes at weight {} without a principal multiple", fmt_vec(m)),
                        violating: vec![],
                    };
                }
            }
        }
        if deg.support_min(&interior).is_some_and(|h| h.is_zero()) && !is_zero(&interior) {
            return Properness { proper: false, reason: "degree vanishes inside the weight cone".into(), violating: vec![] };
        }
        Properness { proper: true, reason: "degree strictly inside the tail cone".into(), violating: vec![] }
    }

    /// `g_m = prod_{z finite} (t - z)^{-floor(D(m)_z)}`; the sections of
    /// degree `m` are `g_m` times polynomials (of degree at most
    /// `deg floor D(m)` over `P^1`).
    pub fn canonical_generator(&self, m: &[Rational]) -> Result<RatFunc> {
        let d = self.evaluate(m)?.floor();
        let mut g = RatFunc::one();
        for (z, c) in &d.0 {
            if let CurvePoint::Finite(z) = z {
                let k = c.to_integer().to_i64().expect("small coefficient");
                g = &g * &RatFunc::linear_pow(z, -k);
            }
        }
        Ok(g)
    }

    /// Is `f` in `H^0(C, O(floor D(m)))`?
    pub fn section_contains(&self, m: &[Rational], f: &RatFunc) -> bool {
        if f.is_zero() {
            return self.weight_cone().contains(m);
        }
        let Ok(d) = self.evaluate(m) else { return false };
        let d = d.floor();
        let mut rest_den = f.den().clone();
        for (z, c) in &d.0 {
            if let CurvePoint::Finite(zz) = z {
                let ord = f.ord_at(z).expect("nonzero");
                if ord + c.to_integer().to_i64().expect("small") < 0 {
                    return false;
                }
                let lin = Poly::linear(zz);
                while rest_den.eval(zz).is_zero() {
                    rest_den = rest_den.div_rem(&lin).0;
                }
            }
        }
        // Poles away from the support are never allowed.
        if !rest_den.is_constant() {
            return false;
        }
        match self.curve {
            Curve::A1 => true,
            Curve::P1 => {
                let ord = f.ord_at(&CurvePoint::Infinity).expect("nonzero");
                ord + d.coefficient(&CurvePoint::Infinity).to_integer().to_i64().expect("small") >= 0
            }
        }
    }

    /// A basis of the degree-`m` sections over `P^1`; over `A^1` the
    /// module generators `g_m` and `t g_m`, which together with `t` in
    /// degree zero generate everything.
    pub fn section_basis(&self, m: &[Rational]) -> Vec<RatFunc> {
        let Ok(g) = self.canonical_generator(m) else { return vec![] };
        match self.curve {
            Curve::A1 => vec![g.clone(), &g * &RatFunc::t()],
            Curve::P1 => {
                let deg = self.evaluate(m).expect("checked").floor().degree();
                let top = deg.to_integer().to_i64().expect("small");
                (0..=top).map(|k| &g * &RatFunc::t().pow(k)).collect()
            }
        }
    }

    /// The coarsest quasifan on which `m -> D(m)` is linear.
    pub fn quasifan(&self) -> Result<QuasiFan> {
        let wc = self.weight_cone();
        let mut fan = Polyhedron::translate_of(zero_vec(self.rank()), self.tail.clone())?.normal_quasifan(&wc)?;
        for p in self.coefficients.values() {
            fan = fan.refine(&p.normal_quasifan(&wc)?)?;
        }
        Ok(fan)
    }

    /// Rays of the tail that give horizontal prime divisors: all of them
    /// over `A^1`, those missing the degree over `P^1`.
    pub fn horizontal_rays(&self) -> Vec<QVector> {
        match self.curve {
            Curve::A1 => self.tail.rays().to_vec(),
            Curve::P1 => {
                let deg = self.degree();
                self.tail.rays().iter().filter(|r| !ray_meets(&deg, r)).cloned().collect()
            }
        }
    }

    /// Orders of `f chi^m` along horizontal and special vertical divisors.
    pub fn principal_divisor_parts(&self, m: &[Rational], f: &RatFunc) -> Result<DivisorParts> {
        if f.is_zero() || !self.section_contains(m, f) {
            return Err(Error::NotASection(format!("{f} in degree {}", fmt_vec(m))));
        }
        let horizontal = self.horizontal_rays().into_iter().map(|r| {
            let o = dot(&r, m);
            (r, o)
        });
        let mut vertical = Vec::new();
        let mut residual = f.clone();
        for (z, p) in &self.coefficients {
            let ord = f.ord_at(z).expect("nonzero");
            if let CurvePoint::Finite(zz) = z {
                residual = &residual * &RatFunc::linear_pow(zz, -ord);
            }
            for v in p.vertices() {
                let mu = Rational::from_integer(mu_denominator(v));
                vertical.push((z.clone(), v.clone(), mu * (dot(v, m) + q(ord))));
            }
        }
        let residual_zeros = !(residual.num().is_constant() && residual.den().is_constant());
        Ok(DivisorParts { horizontal: horizontal.collect(), vertical, residual_zeros })
    }
}

/// Whether the ray `R_{>=0} r` meets the polyhedron.
fn ray_meets(p: &Polyhedron, r: &[Rational]) -> bool {
    let n = r.len();
    let mut gens: Vec<QVector> = p.vertices().iter().map(|v| {
        let mut w = v.clone();
        w.push(Rational::one());
        w
    }).collect();
    gens.extend(p.recession().generators().into_iter().map(|mut g| {
        g.push(Rational::zero());
        g
    }));
    let k = Cone::from_generators(p.recession().side(), n + 1, &gens).expect("dims");
    // {(t r, 1)} meets the homogenisation iff the quadrant spanned by (r, 0)
    // and (0, 1) does so off the r-axis.
    let mut e = zero_vec(n);
    e.push(Rational::one());
    let mut rr = r.to_vec();
    rr.push(Rational::zero());
    let plane = Cone::from_generators(p.recession().side(), n + 1, &[rr, e]).expect("dims");
    let meet = k.intersect(&plane).expect("same space");
    meet.generators().iter().any(|g| g[n].is_positive())
}

/// Anything whose homogeneous pieces have a known section space.
pub trait GradedAlgebra {
    fn rank(&self) -> usize;
    fn weight_cone(&self) -> Cone;
    /// Elements spanning (or generating, with `t` in degree zero) the degree-`m` piece.
    fn basis(&self, m: &[Rational]) -> Vec<RatFunc>;
    fn contains(&self, m: &[Rational], f: &RatFunc) -> bool;
}

impl GradedAlgebra for PolyDivisor {
    fn rank(&self) -> usize {
        PolyDivisor::rank(self)
    }
    fn weight_cone(&self) -> Cone {
        PolyDivisor::weight_cone(self)
    }
    fn basis(&self, m: &[Rational]) -> Vec<RatFunc> {
        self.section_basis(m)
    }
    fn contains(&self, m: &[Rational], f: &RatFunc) -> bool {
        self.section_contains(m, f)
    }
}

/// The semigroup algebra `Q[sigma^vee ∩ M]` of an affine toric variety,
/// sitting inside `Q(t)[M]` as the `t`-constant part.
#[derive(Debug, Clone)]
pub struct ToricAlgebra {
    pub sigma: Cone,
}

impl GradedAlgebra for ToricAlgebra {
    fn rank(&self) -> usize {
        self.sigma.rank()
    }
    fn weight_cone(&self) -> Cone {
        self.sigma.dual()
    }
    fn basis(&self, m: &[Rational]) -> Vec<RatFunc> {
        if self.sigma.dual().contains(m) {
            vec![RatFunc::one()]
        } else {
            vec![]
        }
    }
    fn contains(&self, m: &[Rational], f: &RatFunc) -> bool {
        f.is_zero() || (self.sigma.dual().contains(m) && f.as_constant().is_some())
    }
}

/// A degree and basis element that the derivation sends outside the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationWitness {
    pub degree: LatticeVector,
    pub element: RatFunc,
    pub image: GradedElement,
}

/// Lattice points of the weight cone with `|m_i| <= bound`.
pub fn weights_in_box(cone: &Cone, bound: i64) -> Vec<LatticeVector> {
    let n = cone.rank();
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        if cone.contains_lattice(&cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < n {
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Checks `D(A_m) ⊂ A` for every weight `m` in the box of radius `bound`.
pub fn preserves_at_degree<A: GradedAlgebra>(
    d: &Derivation,
    algebra: &A,
    bound: i64,
) -> std::result::Result<(), PreservationWitness> {
    for m in weights_in_box(&algebra.weight_cone(), bound) {
        let mq = qv(&m);
        for b in algebra.basis(&mq) {
            let image = d.apply(&GradedElement::term(m.clone(), b.clone()));
            let bad = image.terms().iter().any(|(k, f)| !algebra.contains(&qv(k), f));
            if bad {
                return Err(PreservationWitness { degree: m, element: b, image });
            }
        }
    }
    Ok(())
}

pub fn pd_evaluate(d: &PolyDivisor, m: &[Rational]) -> Result<QDivisor> {
    d.evaluate(m)
}

pub fn pd_degree(d: &PolyDivisor) -> Polyhedron {
    d.degree()
}

pub fn pd_is_proper(d: &PolyDivisor) -> Properness {
    d.is_proper()
}

pub fn section_contains(d: &PolyDivisor, m: &[Rational], f: &RatFunc) -> bool {
    d.section_contains(m, f)
}

pub fn canonical_generator(d: &PolyDivisor, m: &[Rational]) -> Result<RatFunc> {
    d.canonical_generator(m)
}

pub fn divisor_quasifan(d: &PolyDivisor) -> Result<QuasiFan> {
    d.quasifan()
}

pub fn principal_divisor_parts(d: &PolyDivisor, m: &[Rational], f: &RatFunc) -> Result<DivisorParts> {
    d.principal_divisor_parts(m, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: &[i64], b: &[i64], tail: &Cone) -> Polyhedron {
        Polyhedron::new(&[qv(a), qv(b)], tail.clone()).unwrap()
    }

    /// The homogeneous example: segments to (-1,0) at 0 and (0,-1) at 1.
    fn example(curve: Curve, inf: Option<&[i64]>, tail: Cone) -> PolyDivisor {
        let mut c = BTreeMap::new();
        c.insert(CurvePoint::int(0), seg(&[0, 0], &[-1, 0], &tail));
        c.insert(CurvePoint::int(1), seg(&[0, 0], &[0, -1], &tail));
        if let Some(v) = inf {
            c.insert(CurvePoint::Infinity, Polyhedron::translate_of(qv(v), tail.clone()).unwrap());
        }
        PolyDivisor::new(curve, tail, c).unwrap()
    }

    fn skew_tail() -> Cone {
        Cone::from_lattice(Side::N, 2, &[vec![1, 2], vec![2, 1]]).unwrap()
    }

    #[test]
    fn evaluate_example() {
        let d = example(Curve::A1, None, Cone::zero(Side::N, 2));
        let dm = d.evaluate(&qv(&[1, 1])).unwrap();
        assert_eq!(dm.coefficient(&CurvePoint::int(0)), q(-1));
        assert_eq!(dm.coefficient(&CurvePoint::int(1)), q(-1));
        assert_eq!(d.canonical_generator(&qv(&[1, 1])).unwrap(), &RatFunc::t() * &RatFunc::linear_pow(&q(1), 1));
    }

    #[test]
    fn outside_weight_cone() {
        let tail = Cone::from_lattice(Side::N, 2, &[vec![1, 0]]).unwrap();
        let d = example(Curve::A1, None, tail);
        assert!(matches!(d.evaluate(&qv(&[-1, 0])), Err(Error::OutsideWeightCone(_))));
    }

    #[test]
    fn properness_on_p1() {
        let d = example(Curve::P1, Some(&[3, 3]), skew_tail());
        assert!(d.is_proper().proper);
        let deg = d.degree();
        assert_eq!(deg.vertices(), &[qv(&[2, 2]), qv(&[2, 3]), qv(&[3, 2])]);
        let bad = example(Curve::P1, Some(&[0, 0]), skew_tail());
        let p = bad.is_proper();
        assert!(!p.proper);
        assert!(p.violating.contains(&qv(&[-1, 0])));
        assert!(example(Curve::A1, None, Cone::zero(Side::N, 2)).is_proper().proper);
    }

    #[test]
    fn sections_on_p1() {
        let d = example(Curve::P1, Some(&[2, 2]), skew_tail());
        // D(m) at (1,0): -1 at 0, 0 at 1, 2 at infinity; degree 1.
        let m = qv(&[1, 0]);
        assert_eq!(d.section_basis(&m).len(), 2);
        assert!(d.section_contains(&m, &RatFunc::t()));
        assert!(d.section_contains(&m, &RatFunc::t().pow(2)));
        assert!(!d.section_contains(&m, &RatFunc::t().pow(3)));
        assert!(!d.section_contains(&m, &RatFunc::linear_pow(&q(2), -1)));
    }

    #[test]
    fn horizontal_rays_miss_degree() {
        // Degree vertices (1,2) and (2,1) sit on both rays.
        let d = example(Curve::P1, Some(&[2, 2]), skew_tail());
        assert!(d.horizontal_rays().is_empty());
        let far = example(Curve::P1, Some(&[3, 3]), skew_tail());
        assert_eq!(far.horizontal_rays().len(), 2);
        let a = example(Curve::A1, None, skew_tail());
        assert_eq!(a.horizontal_rays().len(), 2);
    }

    #[test]
    fn quasifan_of_example() {
        let d = example(Curve::A1, None, Cone::zero(Side::N, 2));
        assert_eq!(d.quasifan().unwrap().cones().len(), 4);
    }

    #[test]
    fn weights_box_counts() {
        let orth = Cone::from_lattice(Side::N, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(weights_in_box(&orth.dual(), 1).len(), 4);
    }
}
