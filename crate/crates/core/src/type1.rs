//! Affine SL2-varieties of complexity one, type I.
//!
//! The data is a polyhedral divisor over `A^1` or `P^1` supported at
//! `0`, `1` and possibly `infinity`, together with the weight `e` of the
//! `U`-action. Everything else (colorings, derivations, colored cones) is
//! derived from it.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::divisors::{Curve, CurvePoint, PolyDivisor};
use crate::error::{Error, Result};
use crate::lattice::*;
use crate::roots::{is_root_of, Provenance, RootDescription, RootFamily};
use crate::symbolic::{Derivation, FiniteColoring, GradedElement, RatFunc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Reflexive,
    Skew,
}

/// Which Borel subgroup `B_-` or `B_+` the colors are taken for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BorelSide {
    Minus,
    Plus,
}

impl BorelSide {
    pub fn sign(self) -> i64 {
        match self {
            BorelSide::Minus => -1,
            BorelSide::Plus => 1,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            BorelSide::Minus => "minus",
            BorelSide::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalDataI {
    pub case: Case,
    pub v0: QVector,
    pub v1: QVector,
    pub sigma: Cone,
    /// Present exactly when the base curve is `P^1`.
    pub delta_inf: Option<Polyhedron>,
    pub e: LatticeVector,
}

/// The homogeneous part of the data: enough to rebuild everything from a
/// colored cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousData {
    pub case: Case,
    pub v0: QVector,
    pub v1: QVector,
    pub e: LatticeVector,
}

impl SphericalDataI {
    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn curve(&self) -> Curve {
        if self.delta_inf.is_some() {
            Curve::P1
        } else {
            Curve::A1
        }
    }

    pub fn homogeneous(&self) -> HomogeneousData {
        HomogeneousData { case: self.case, v0: self.v0.clone(), v1: self.v1.clone(), e: self.e.clone() }
    }

    pub fn eq(&self) -> QVector {
        qv(&self.e)
    }

    /// `m` lies in `L = {m : v0(m) in Z}`.
    pub fn in_weight_lattice(&self, m: &[i64]) -> bool {
        dot(&self.v0, &qv(m)).is_integer()
    }

    /// `L` as an explicit sublattice: all of `M` in the reflexive case,
    /// `ker(2 v0) + Z 2e` (index two) in the skew case.
    pub fn weight_lattice(&self) -> Sublattice {
        match self.case {
            Case::Reflexive => Sublattice::full(self.rank()),
            Case::Skew => {
                let w = to_lattice(&scale(&q(2), &self.v0)).expect("2 v0 integral");
                let mut basis = integer_kernel(&[w], self.rank()).basis;
                basis.push(self.e.iter().map(|x| 2 * x).collect());
                Sublattice::new(self.rank(), basis)
            }
        }
    }

    fn segment(&self, v: &QVector) -> Result<Polyhedron> {
        Polyhedron::new(&[zero_vec(self.rank()), v.clone()], self.sigma.clone())
    }

    /// The polyhedral divisor: `Delta_0`, `Delta_1` from the case, plus
    /// `Delta_inf` over `P^1`.
    pub fn divisor(&self) -> Result<PolyDivisor> {
        let mut c = BTreeMap::new();
        let d0 = match self.case {
            Case::Reflexive => self.segment(&self.v0)?,
            Case::Skew => Polyhedron::translate_of(self.v0.clone(), self.sigma.clone())?,
        };
        c.insert(CurvePoint::int(0), d0);
        c.insert(CurvePoint::int(1), self.segment(&self.v1)?);
        if let Some(d) = &self.delta_inf {
            c.insert(CurvePoint::Infinity, d.clone());
        }
        PolyDivisor::new(self.curve(), self.sigma.clone(), c)
    }

    /// `omega_-`, `omega_+` in closed form.
    pub fn omega(&self, side: BorelSide) -> Result<Cone> {
        let s = q(side.sign());
        let gens = match self.case {
            Case::Reflexive => vec![scale(&s, &self.v0), scale(&-s, &self.v1)],
            Case::Skew => vec![scale(&-s, &self.v1)],
        };
        self.sigma.extend(&gens)
    }

    /// Vertex choices of the coloring for `side`, at `0` and `1`.
    fn coloring_vertices(&self, side: BorelSide) -> (QVector, QVector) {
        let z = zero_vec(self.rank());
        match (self.case, side) {
            (_, BorelSide::Minus) => (self.v0.clone(), z),
            (Case::Reflexive, BorelSide::Plus) => (z, self.v1.clone()),
            (Case::Skew, BorelSide::Plus) => (self.v0.clone(), self.v1.clone()),
        }
    }

    /// Degree of the `U_side` derivation: `-e` for minus, `e` for plus.
    pub fn side_degree(&self, side: BorelSide) -> LatticeVector {
        self.e.iter().map(|x| x * side.sign()).collect()
    }
}

/// An AL-coloring: a vertex choice at each finite special point, marked
/// point `0`, and infinity as the point at infinity over `P^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ALColoring {
    pub divisor: PolyDivisor,
    pub colors: BTreeMap<CurvePoint, QVector>,
    pub marked: CurvePoint,
}

impl ALColoring {
    fn rank(&self) -> usize {
        self.divisor.rank()
    }

    pub fn v_marked(&self) -> QVector {
        self.colors.get(&self.marked).cloned().unwrap_or_else(|| zero_vec(self.rank()))
    }

    /// `v_deg`: sum of the chosen vertices over the finite points.
    pub fn v_deg(&self) -> QVector {
        self.colors.values().fold(zero_vec(self.rank()), |a, v| add(&a, v))
    }

    /// Minkowski sum of the finite coefficients.
    fn affine_degree(&self) -> Result<Polyhedron> {
        let mut acc = Polyhedron::translate_of(zero_vec(self.rank()), self.divisor.tail().clone())?;
        for (z, p) in self.divisor.coefficients() {
            if *z != CurvePoint::Infinity {
                acc = acc.minkowski_sum(p)?;
            }
        }
        Ok(acc)
    }

    /// `omega = Cone(deg D - v_deg)` over the affine part.
    pub fn omega(&self) -> Result<Cone> {
        let deg = self.affine_degree()?;
        let vd = self.v_deg();
        let gens: Vec<QVector> = deg.vertices().iter().map(|v| sub(v, &vd)).collect();
        self.divisor.tail().extend(&gens)
    }

    /// The domain in `N + Z`: `(omega, 0)`, `(v_z0, 1)` and over `P^1`
    /// `(Delta_inf + v_deg - v_z0, -1)`.
    pub fn domain(&self) -> Result<Cone> {
        let n = self.rank();
        let lift = |v: &QVector, c: i64| {
            let mut w = v.clone();
            w.push(q(c));
            w
        };
        let mut gens: Vec<QVector> = self.omega()?.generators().iter().map(|g| lift(g, 0)).collect();
        gens.push(lift(&self.v_marked(), 1));
        if self.divisor.curve() == Curve::P1 {
            let shift = sub(&self.v_deg(), &self.v_marked());
            let inf = self.divisor.coefficient(&CurvePoint::Infinity);
            for v in inf.vertices() {
                gens.push(lift(&add(v, &shift), -1));
            }
        }
        Cone::from_generators(Side::N, n + 1, &gens)
    }

    /// The data a horizontal derivation needs, with the marked point at 0.
    pub fn finite_coloring(&self) -> FiniteColoring {
        let z0 = match &self.marked {
            CurvePoint::Finite(z) => z.clone(),
            CurvePoint::Infinity => unreachable!("marked point is finite"),
        };
        let others = self
            .colors
            .iter()
            .filter(|(z, _)| **z != self.marked)
            .map(|(z, v)| match z {
                CurvePoint::Finite(z) => (z.clone(), v.clone()),
                CurvePoint::Infinity => unreachable!("colors live on A^1"),
            })
            .collect();
        FiniteColoring { z0, v_z0: self.v_marked(), others }
    }
}

/// One failed condition of a coherent pair, numbered as in the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceFailure {
    pub bullet: u8,
    pub message: String,
}

/// Checks the four coherence conditions for `(coloring, e)`; an empty
/// list means coherent.
pub fn validate_coherent_pair(c: &ALColoring, e: &[i64]) -> Vec<CoherenceFailure> {
    let mut out = Vec::new();
    let eq = qv(e);
    let fc = c.finite_coloring();
    let d = fc.d(e);
    let s = fc.s(e);
    match c.domain() {
        Ok(dom) => {
            let mut es = eq.clone();
            es.push(s.clone());
            if !is_root_of(&dom, &es) {
                out.push(CoherenceFailure {
                    bullet: 1,
                    message: format!("{} is not a root of the domain", fmt_vec(&es)),
                });
            }
        }
        Err(err) => out.push(CoherenceFailure { bullet: 1, message: err.to_string() }),
    }
    for (z, p) in c.divisor.coefficients() {
        if *z == CurvePoint::Infinity {
            continue;
        }
        let chosen = c.colors.get(z).cloned().unwrap_or_else(|| zero_vec(eq.len()));
        for v in p.vertices().iter().filter(|v| **v != chosen) {
            let ve = dot(v, &eq);
            if *z == c.marked {
                if ve < -s.clone() {
                    out.push(CoherenceFailure {
                        bullet: 3,
                        message: format!("vertex {} at the marked point pairs below -s", fmt_vec(v)),
                    });
                }
            } else if ve < q(1) + dot(&chosen, &eq) {
                out.push(CoherenceFailure {
                    bullet: 2,
                    message: format!("vertex {} at {z} pairs too low with e", fmt_vec(v)),
                });
            }
        }
    }
    if c.divisor.curve() == Curve::P1 {
        let lower = -d.recip() - dot(&c.v_deg(), &eq);
        for v in c.divisor.coefficient(&CurvePoint::Infinity).vertices() {
            if dot(v, &eq) < lower {
                out.push(CoherenceFailure {
                    bullet: 4,
                    message: format!("vertex {} at infinity pairs below the bound", fmt_vec(v)),
                });
            }
        }
    }
    out
}

/// All violated conditions, as readable diagnostics. Empty means valid.
pub fn validate_type1(d: &SphericalDataI) -> Vec<String> {
    let mut out = Vec::new();
    let n = d.rank();
    if d.v0.len() != n || d.v1.len() != n || d.sigma.rank() != n {
        return vec![format!("dimension mismatch: e has rank {n}")];
    }
    if !d.sigma.is_strongly_convex() {
        out.push("sigma must be strongly convex".into());
    }
    let e = d.eq();
    let v0e = dot(&d.v0, &e);
    match d.case {
        Case::Reflexive => {
            if !is_integral(&d.v0) {
                out.push("v0 must be a lattice vector".into());
            }
            if v0e != q(1) {
                out.push("pairing v0(e) must be 1".into());
            }
        }
        Case::Skew => {
            if !is_integral(&scale(&q(2), &d.v0)) {
                out.push("2 v0 must be a lattice vector".into());
            }
            if v0e != qf(1, 2) {
                out.push("pairing 2 v0(e) must be 1".into());
            }
        }
    }
    if !is_integral(&d.v1) {
        out.push("v1 must be a lattice vector".into());
    }
    if dot(&d.v1, &e) != q(-1) {
        out.push("pairing v1(e) must be -1".into());
    }
    if d.sigma.contains(&d.v0) {
        out.push("v0 must lie outside sigma".into());
    }
    if d.sigma.contains(&d.v1) {
        out.push("v1 must lie outside sigma".into());
    }
    if let Some(inf) = &d.delta_inf {
        if *inf.recession() != d.sigma {
            out.push("Delta_inf must have tail cone sigma".into());
        }
        for v in inf.vertices() {
            if !dot(v, &e).is_zero() {
                out.push(format!("Delta_inf vertex {} must lie in e-perp", fmt_vec(v)));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let divisor = match d.divisor() {
        Ok(x) => x,
        Err(err) => return vec![err.to_string()],
    };
    let p = divisor.is_proper();
    if !p.proper {
        out.push(format!("not proper: {}", p.reason));
    }
    for (side, s) in [(BorelSide::Minus, 0), (BorelSide::Plus, -1)] {
        let col = coloring_for(d, &divisor, side);
        let mut theta: QVector = scale(&q(side.sign()), &e);
        theta.push(q(s));
        match col.domain() {
            Ok(dom) if is_root_of(&dom, &theta) => {}
            Ok(_) => out.push(format!(
                "{} is not a root of the {} domain",
                fmt_vec(&theta),
                side.as_str()
            )),
            Err(err) => out.push(err.to_string()),
        }
    }
    out
}

fn coloring_for(d: &SphericalDataI, divisor: &PolyDivisor, side: BorelSide) -> ALColoring {
    let (a, b) = d.coloring_vertices(side);
    let mut colors = BTreeMap::new();
    colors.insert(CurvePoint::int(0), a);
    colors.insert(CurvePoint::int(1), b);
    ALColoring { divisor: divisor.clone(), colors, marked: CurvePoint::int(0) }
}

fn require_valid(d: &SphericalDataI) -> Result<()> {
    let diag = validate_type1(d);
    if diag.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(diag))
    }
}

/// The colorings `D_-` and `D_+`.
pub fn build_colorings(d: &SphericalDataI) -> Result<(ALColoring, ALColoring)> {
    require_valid(d)?;
    let divisor = d.divisor()?;
    Ok((coloring_for(d, &divisor, BorelSide::Minus), coloring_for(d, &divisor, BorelSide::Plus)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple {
    pub minus: Derivation,
    pub delta: Derivation,
    pub plus: Derivation,
}

impl Sl2Triple {
    pub fn side(&self, side: BorelSide) -> &Derivation {
        match side {
            BorelSide::Minus => &self.minus,
            BorelSide::Plus => &self.plus,
        }
    }
}

/// `partial_-`, `delta`, `partial_+` in closed form:
/// reflexive `d-(Q chi^m) = (v0(m) Q + t Q') chi^{m-e}`,
/// `d+(Q chi^m) = (v1(m) Q + (t-1) Q') chi^{m+e}`, `delta = (v0 - v1)(m)`;
/// skew `d- = 2(v0(m) Q + t Q')`, `d+ = 2((v0(m)(1 - 1/t) + v1(m)) Q + (t-1) Q')`,
/// `delta = -2 v1(m)`.
pub fn sl2_triple(d: &SphericalDataI) -> Result<Sl2Triple> {
    require_valid(d)?;
    Ok(sl2_triple_unchecked(d))
}

pub(crate) fn sl2_triple_unchecked(d: &SphericalDataI) -> Sl2Triple {
    let n = d.rank();
    let me: LatticeVector = d.e.iter().map(|x| -x).collect();
    let t = RatFunc::t();
    let t1 = RatFunc::linear_pow(&q(1), 1);
    let k = match d.case {
        Case::Reflexive => q(1),
        Case::Skew => q(2),
    };
    let basis = |i: usize| unit_vec(n, i);
    let minus = Derivation::new(
        n,
        GradedElement::term(me.clone(), t.scale(&k)),
        (0..n).map(|i| GradedElement::term(me.clone(), RatFunc::constant(&k * dot(&d.v0, &basis(i))))).collect(),
    )
    .expect("rank");
    let plus_mult = |i: usize| -> RatFunc {
        let b = basis(i);
        let v1 = RatFunc::constant(dot(&d.v1, &b));
        match d.case {
            Case::Reflexive => v1,
            Case::Skew => {
                let one_minus_inv_t = &RatFunc::one() - &RatFunc::linear_pow(&q(0), -1);
                (&one_minus_inv_t.scale(&dot(&d.v0, &b)) + &v1).scale(&k)
            }
        }
    };
    let plus = Derivation::new(
        n,
        GradedElement::term(d.e.clone(), t1.scale(&k)),
        (0..n).map(|i| GradedElement::term(d.e.clone(), plus_mult(i))).collect(),
    )
    .expect("rank");
    let dv = match d.case {
        Case::Reflexive => sub(&d.v0, &d.v1),
        Case::Skew => scale(&q(-2), &d.v1),
    };
    let delta = Derivation::new(
        n,
        GradedElement::zero(),
        (0..n).map(|i| GradedElement::scalar(n, RatFunc::constant(dot(&dv, &basis(i))))).collect(),
    )
    .expect("rank");
    Sl2Triple { minus, delta, plus }
}

/// A labelled B-stable prime divisor and its image in `N_Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRecord {
    pub label: DivisorLabel,
    pub image: QVector,
    pub is_color: bool,
    pub side: BorelSide,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisorLabel {
    Horizontal(QVector),
    Vertical(CurvePoint, QVector),
}

impl std::fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivisorLabel::Horizontal(r) => write!(f, "D_{}", fmt_vec(r)),
            DivisorLabel::Vertical(z, v) => write!(f, "D_({z},{})", fmt_vec(v)),
        }
    }
}

/// Colors and G-divisors with their images, for both Borel subgroups.
pub fn color_table(d: &SphericalDataI) -> Result<Vec<ColorRecord>> {
    require_valid(d)?;
    let divisor = d.divisor()?;
    let n = d.rank();
    let z = zero_vec(n);
    let mut out = Vec::new();
    let vert = |p: i64, v: &QVector| DivisorLabel::Vertical(CurvePoint::int(p), v.clone());
    for side in [BorelSide::Minus, BorelSide::Plus] {
        let colors: Vec<(DivisorLabel, QVector)> = match (d.case, side) {
            (Case::Reflexive, BorelSide::Minus) => vec![(vert(0, &z), neg(&d.v0)), (vert(1, &d.v1), d.v1.clone())],
            (Case::Reflexive, BorelSide::Plus) => vec![(vert(0, &d.v0), d.v0.clone()), (vert(1, &z), neg(&d.v1))],
            (Case::Skew, BorelSide::Minus) => vec![(vert(1, &d.v1), d.v1.clone())],
            (Case::Skew, BorelSide::Plus) => vec![(vert(1, &z), neg(&d.v1))],
        };
        for (label, image) in colors {
            out.push(ColorRecord { label, image, is_color: true, side });
        }
        for rho in divisor.horizontal_rays() {
            out.push(ColorRecord { label: DivisorLabel::Horizontal(rho.clone()), image: rho, is_color: false, side });
        }
        if let Some(inf) = &d.delta_inf {
            let shift = match (d.case, side) {
                (_, BorelSide::Minus) => d.v0.clone(),
                (Case::Reflexive, BorelSide::Plus) => d.v1.clone(),
                (Case::Skew, BorelSide::Plus) => add(&d.v0, &d.v1),
            };
            for v in inf.vertices() {
                let mu = Rational::from_integer(mu_denominator(v));
                out.push(ColorRecord {
                    label: DivisorLabel::Vertical(CurvePoint::Infinity, v.clone()),
                    image: scale(&mu, &add(&shift, v)),
                    is_color: false,
                    side,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredCone {
    pub cone: Cone,
    pub colors: Vec<ColorRecord>,
    pub side: BorelSide,
}

/// The valuation cone `{v : side * <e, v> >= 0}` is spelled out as the
/// half-space where `-side * <e, v> <= 0`; `B_-` wants `<e, v> >= 0`.
pub fn in_valuation_cone(e: &[i64], side: BorelSide, v: &[Rational]) -> bool {
    let p = dot(&qv(e), v);
    match side {
        BorelSide::Minus => !p.is_negative(),
        BorelSide::Plus => !p.is_positive(),
    }
}

/// `(sigma, {})` over `A^1`; `(omega_side, colors)` over `P^1`.
pub fn colored_cone(d: &SphericalDataI, side: BorelSide) -> Result<ColoredCone> {
    require_valid(d)?;
    match d.curve() {
        Curve::A1 => Ok(ColoredCone { cone: d.sigma.clone(), colors: vec![], side }),
        Curve::P1 => {
            let colors = color_table(d)?.into_iter().filter(|c| c.is_color && c.side == side).collect();
            Ok(ColoredCone { cone: d.omega(side)?, colors, side })
        }
    }
}

/// Conditions on a colored cone: strongly convex, no zero color image, and
/// the relative interior meets the valuation cone.
pub fn colored_cone_diagnostics(cc: &ColoredCone, e: &[i64]) -> Vec<String> {
    let mut out = Vec::new();
    if !cc.cone.is_strongly_convex() {
        out.push("cone is not strongly convex".into());
    }
    if cc.colors.iter().any(|c| is_zero(&c.image)) {
        out.push("a color maps to zero".into());
    }
    for c in &cc.colors {
        if !cc.cone.contains(&c.image) {
            out.push(format!("color image {} is not in the cone", fmt_vec(&c.image)));
        }
    }
    // rel.int meets V: the interior point test is exact because V is a
    // half-space; some relative interior point lies in V iff some ray does
    // or the cone lies in the boundary hyperplane.
    let meets = cc.cone.rays().iter().any(|r| in_valuation_cone(e, cc.side, r) && !dot(&qv(e), r).is_zero())
        || cc.cone.rays().iter().all(|r| dot(&qv(e), r).is_zero());
    if !meets {
        out.push("relative interior misses the valuation cone".into());
    }
    out
}

/// Rebuilds the data from a colored cone and the homogeneous part.
pub fn from_colored_cone(cc: &ColoredCone, h: &HomogeneousData) -> Result<SphericalDataI> {
    let diag = colored_cone_diagnostics(cc, &h.e);
    if !diag.is_empty() {
        return Err(Error::Validation(diag));
    }
    let n = h.e.len();
    let e = qv(&h.e);
    let v = match (h.case, cc.side) {
        (_, BorelSide::Minus) => h.v0.clone(),
        (Case::Reflexive, BorelSide::Plus) => h.v1.clone(),
        (Case::Skew, BorelSide::Plus) => add(&h.v0, &h.v1),
    };
    let ev = dot(&e, &v);
    let beta = |x: &QVector| dot(&e, x) / &ev;
    let s = q(cc.side.sign());
    let rays = cc.cone.rays();
    let mut gens: Vec<QVector> = rays.iter().filter(|r| dot(r, &e).is_zero()).cloned().collect();
    let vertical: Vec<QVector> = rays.iter().filter(|r| beta(r).is_positive()).cloned().collect();
    let mut inf_points = Vec::new();
    for r in &vertical {
        let b = beta(r);
        let c = scale(&b.recip(), r);
        gens.push(c.clone());
        match h.case {
            Case::Reflexive => {
                gens.push(add(&c, &scale(&s, &h.v0)));
                gens.push(sub(&c, &scale(&s, &h.v1)));
                gens.push(sub(&add(&c, &scale(&s, &h.v0)), &scale(&s, &h.v1)));
            }
            Case::Skew => gens.push(sub(&c, &scale(&s, &h.v1))),
        }
        inf_points.push(scale(&b.recip(), &sub(r, &scale(&b, &v))));
    }
    let sigma = Cone::from_generators(Side::N, n, &gens)?;
    if !sigma.is_strongly_convex() {
        return Err(Error::Validation(vec!["assembled sigma is not strongly convex".into()]));
    }
    let a1 = cc.cone.rays().iter().all(|r| dot(r, &e).is_zero());
    let delta_inf = if a1 { None } else { Some(Polyhedron::new(&inf_points, sigma.clone())?) };
    Ok(SphericalDataI { case: h.case, v0: h.v0.clone(), v1: h.v1.clone(), sigma, delta_inf, e: h.e.clone() })
}

/// `phi_m = (t-1)^{-v_1(m)} t^{-floor(v_0(m))}` with the vertices of the
/// coloring for `side`, returned as `phi_m chi^m`.
pub fn kernel_generator(d: &SphericalDataI, side: BorelSide, m: &[i64]) -> Result<GradedElement> {
    let omega = d.omega(side)?;
    let mq = qv(m);
    if !omega.dual().contains(&mq) || !d.in_weight_lattice(m) {
        return Err(Error::KernelDomainError(format!("{} is not in the kernel weight monoid", fmt_vec(&mq))));
    }
    let (a, b) = d.coloring_vertices(side);
    let e1 = dot(&b, &mq).to_integer().to_i64().expect("integral");
    let e0 = dot(&a, &mq).floor().to_integer().to_i64().expect("small");
    let phi = &RatFunc::linear_pow(&q(1), -e1) * &RatFunc::linear_pow(&q(0), -e0);
    Ok(GradedElement::term(m.to_vec(), phi))
}

/// The closed orbit: homogeneous data on the quotient `N / (span sigma ∩ N)`
/// over `A^1`, or a marker that the torus acts transitively over `P^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedOrbit {
    Homogeneous(SphericalDataI),
    TorusOrbit,
}

pub fn closed_orbit(d: &SphericalDataI) -> Result<ClosedOrbit> {
    require_valid(d)?;
    if d.curve() == Curve::P1 {
        return Ok(ClosedOrbit::TorusOrbit);
    }
    let n = d.rank();
    let rays: Vec<LatticeVector> = d.sigma.rays_lattice();
    let basis = integer_kernel(&rays, n).echelon().basis;
    let project = |v: &QVector| -> QVector { basis.iter().map(|b| dot(&qv(b), v)).collect() };
    let v0 = project(&d.v0);
    let v1 = project(&d.v1);
    if is_zero(&v0) || is_zero(&v1) {
        return Err(Error::StructuralError("degenerate projection of v0 or v1".into()));
    }
    let bq: Vec<QVector> = basis.iter().map(|b| qv(b)).collect();
    let coords = solve_in_span(&bq, &d.eq())
        .ok_or_else(|| Error::StructuralError("e is not orthogonal to sigma".into()))?;
    let e = to_lattice(&coords).ok_or_else(|| Error::StructuralError("e has fractional coordinates".into()))?;
    let r = basis.len();
    Ok(ClosedOrbit::Homogeneous(SphericalDataI {
        case: d.case,
        v0,
        v1,
        sigma: Cone::zero(Side::N, r),
        delta_inf: None,
        e,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupSpec {
    Q1(i64),
    Q2,
    N1(i64),
    N2(i64),
}

/// Homogeneous data in the basis `(nu_alpha, nu_e)` of `N`, with `e = (0, 1)`.
pub fn catalog_homogeneous(spec: SubgroupSpec) -> Result<(SphericalDataI, Vec<ColorRecord>)> {
    let (case, v0) = match spec {
        SubgroupSpec::Q1(k) if k >= 1 => (Case::Reflexive, qv(&[k, 1])),
        SubgroupSpec::Q2 => (Case::Reflexive, qv(&[0, 1])),
        SubgroupSpec::N1(h) if h.rem_euclid(2) == 1 => (Case::Skew, vec![qf(h, 2), qf(1, 2)]),
        SubgroupSpec::N2(h) if h.rem_euclid(2) == 0 => (Case::Skew, vec![qf(h, 2), qf(1, 2)]),
        other => return Err(Error::CatalogError(format!("{other:?} is not in the catalog"))),
    };
    let d = SphericalDataI { case, v0, v1: qv(&[0, -1]), sigma: Cone::zero(Side::N, 2), delta_inf: None, e: vec![0, 1] };
    let colors = color_table(&d)?;
    Ok((d, colors))
}

/// Roots of homogeneous data: the two families `v0(theta) = v1(theta) = 1`
/// and `= -1` over `L` when the data is reflexive with independent
/// `v0`, `v1`; nothing otherwise.
pub fn roots_homogeneous(d: &SphericalDataI) -> RootDescription {
    let n = d.rank();
    let mut out = RootDescription::empty(n, Provenance::VarietyInterior);
    if d.case != Case::Reflexive || rank(&[d.v0.clone(), d.v1.clone()]) < 2 {
        return out;
    }
    for c in [1, -1] {
        out.families.push(RootFamily {
            distinguished_ray: scale(&q(-c), &d.v0),
            equalities: vec![(d.v1.clone(), q(c))],
            inequalities: vec![],
            lattice: Some(d.weight_lattice()),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{commutator_vanishes, horizontal_lnd};

    pub(crate) fn example() -> SphericalDataI {
        SphericalDataI {
            case: Case::Reflexive,
            v0: qv(&[-1, 0]),
            v1: qv(&[0, -1]),
            sigma: Cone::zero(Side::N, 2),
            delta_inf: None,
            e: vec![-1, 1],
        }
    }

    #[test]
    fn example_is_valid() {
        assert!(validate_type1(&example()).is_empty());
        let mut bad = example();
        bad.v0 = qv(&[-2, 0]);
        assert!(validate_type1(&bad).iter().any(|s| s.contains("pairing v0(e) must be 1")));
    }

    #[test]
    fn example_operators() {
        let tr = sl2_triple(&example()).unwrap();
        let u1 = GradedElement::chi(vec![-1, 0]);
        let u2 = GradedElement::chi(vec![0, -1]);
        assert_eq!(tr.minus.apply(&u1), u2);
        assert_eq!(tr.plus.apply(&u2), u1);
        let c = tr.plus.commutator(&tr.minus);
        assert_eq!(c, tr.delta);
        assert!(commutator_vanishes(&tr.delta.commutator(&tr.plus), &Derivation::zero(2)).is_ok());
    }

    #[test]
    fn example_kernels() {
        let d = example();
        assert_eq!(kernel_generator(&d, BorelSide::Minus, &[0, -1]).unwrap(), GradedElement::chi(vec![0, -1]));
        assert_eq!(
            kernel_generator(&d, BorelSide::Plus, &[0, 1]).unwrap(),
            GradedElement::term(vec![0, 1], RatFunc::linear_pow(&q(1), 1))
        );
        assert!(matches!(kernel_generator(&d, BorelSide::Minus, &[-1, 0]), Err(Error::KernelDomainError(_))));
    }

    #[test]
    fn omega_minus_of_example() {
        assert_eq!(example().omega(BorelSide::Minus).unwrap().rays(), &[qv(&[0, -1]), qv(&[1, 0])]);
    }

    pub(crate) fn rank3() -> SphericalDataI {
        SphericalDataI {
            case: Case::Reflexive,
            v0: qv(&[-1, 0, 0]),
            v1: qv(&[0, -1, 0]),
            sigma: Cone::from_lattice(Side::N, 3, &[vec![0, 0, 1]]).unwrap(),
            delta_inf: None,
            e: vec![-1, 1, 0],
        }
    }

    pub(crate) fn p1_instance(corner: i64) -> SphericalDataI {
        let sigma = Cone::from_lattice(Side::N, 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        SphericalDataI {
            case: Case::Reflexive,
            v0: qv(&[-1, 0]),
            v1: qv(&[0, -1]),
            delta_inf: Some(Polyhedron::translate_of(qv(&[corner, corner]), sigma.clone()).unwrap()),
            sigma,
            e: vec![-1, 1],
        }
    }

    fn n1() -> SphericalDataI {
        catalog_homogeneous(SubgroupSpec::N1(1)).unwrap().0
    }

    fn sl2_relations_hold(d: &SphericalDataI) {
        let tr = sl2_triple(d).unwrap();
        assert_eq!(tr.plus.commutator(&tr.minus), tr.delta);
        assert_eq!(tr.delta.commutator(&tr.plus), tr.plus.scale(&q(2)));
        assert_eq!(tr.delta.commutator(&tr.minus), tr.minus.scale(&q(-2)));
    }

    #[test]
    fn sl2_relations_on_examples() {
        sl2_relations_hold(&example());
        sl2_relations_hold(&rank3());
        sl2_relations_hold(&n1());
        sl2_relations_hold(&p1_instance(2));
    }

    #[test]
    fn closed_forms_match_horizontal_formula() {
        for d in [example(), n1(), rank3()] {
            let tr = sl2_triple(&d).unwrap();
            let (minus, plus) = build_colorings(&d).unwrap();
            let k = if d.case == Case::Skew { q(2) } else { q(1) };
            let me: LatticeVector = d.e.iter().map(|x| -x).collect();
            let hm = horizontal_lnd(&q(1), &minus.finite_coloring(), &me).unwrap();
            assert_eq!(hm.scale(&(&k / minus.finite_coloring().d(&me))), tr.minus, "{d:?}");
            let moved = plus.finite_coloring();
            let hp = horizontal_lnd(&q(1), &moved, &d.e).unwrap();
            assert_eq!(hp.scale(&(&k / moved.d(&d.e))), tr.plus, "{d:?}");
        }
    }

    #[test]
    fn colorings_of_example() {
        let (m, p) = build_colorings(&example()).unwrap();
        assert_eq!(m.colors[&CurvePoint::int(0)], qv(&[-1, 0]));
        assert_eq!(m.colors[&CurvePoint::int(1)], qv(&[0, 0]));
        assert_eq!(p.colors[&CurvePoint::int(1)], qv(&[0, -1]));
        assert!(validate_coherent_pair(&m, &[1, -1]).is_empty());
        let bad = validate_coherent_pair(&m, &[2, 0]);
        assert!(!bad.is_empty());
        let case2 = ALColoring {
            colors: [(CurvePoint::int(0), qv(&[-1, 0])), (CurvePoint::int(1), qv(&[0, -1]))].into_iter().collect(),
            ..m
        };
        assert!(validate_coherent_pair(&case2, &[1, 1]).is_empty());
    }

    #[test]
    fn rank3_example() {
        let d = rank3();
        assert!(validate_type1(&d).is_empty());
        let table = color_table(&d).unwrap();
        let minus: Vec<&QVector> = table.iter().filter(|c| c.side == BorelSide::Minus && c.is_color).map(|c| &c.image).collect();
        assert_eq!(minus, vec![&qv(&[1, 0, 0]), &qv(&[0, -1, 0])]);
        assert!(table.iter().any(|c| !c.is_color && c.image == qv(&[0, 0, 1])));
        match closed_orbit(&d).unwrap() {
            ClosedOrbit::Homogeneous(h) => {
                assert_eq!(h.v0, qv(&[-1, 0]));
                assert_eq!(h.v1, qv(&[0, -1]));
                assert_eq!(h.e, vec![-1, 1]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(closed_orbit(&example()).unwrap(), ClosedOrbit::Homogeneous(example()));
    }

    #[test]
    fn p1_instance_round_trip() {
        let d = p1_instance(2);
        assert!(validate_type1(&d).is_empty(), "{:?}", validate_type1(&d));
        let cc = colored_cone(&d, BorelSide::Minus).unwrap();
        assert_eq!(cc.cone, Cone::from_lattice(Side::N, 2, &[vec![0, -1], vec![1, 2]]).unwrap());
        assert_eq!(cc.colors.len(), 2);
        for side in [BorelSide::Minus, BorelSide::Plus] {
            let cc = colored_cone(&d, side).unwrap();
            assert_eq!(from_colored_cone(&cc, &d.homogeneous()).unwrap(), d);
        }
        assert_eq!(closed_orbit(&d).unwrap(), ClosedOrbit::TorusOrbit);
    }

    #[test]
    fn corner_three_fails_domain_condition() {
        let diag = validate_type1(&p1_instance(3));
        assert!(diag.iter().any(|s| s.contains("domain")), "{diag:?}");
        assert!(diag.iter().all(|s| !s.contains("proper")));
    }

    #[test]
    fn homogeneous_roots() {
        let r = roots_homogeneous(&example());
        assert_eq!(crate::roots::enumerate_roots(&r, 3), vec![vec![-1, -1], vec![1, 1]]);
        assert!(roots_homogeneous(&n1()).families.is_empty());
        assert!(roots_homogeneous(&catalog_homogeneous(SubgroupSpec::Q2).unwrap().0).families.is_empty());
    }

    #[test]
    fn catalog_rows() {
        let (q1, colors) = catalog_homogeneous(SubgroupSpec::Q1(2)).unwrap();
        assert_eq!(q1.v0, qv(&[2, 1]));
        let minus: Vec<QVector> = colors.iter().filter(|c| c.side == BorelSide::Minus).map(|c| c.image.clone()).collect();
        assert_eq!(minus, vec![qv(&[-2, -1]), qv(&[0, -1])]);
        assert_eq!(n1().v0, vec![qf(1, 2), qf(1, 2)]);
        let (m, p) = build_colorings(&n1()).unwrap();
        assert_eq!(m.colors[&CurvePoint::int(1)], qv(&[0, 0]));
        assert_eq!(p.colors[&CurvePoint::int(1)], qv(&[0, -1]));
    }

    #[test]
    fn catalog_rejects_wrong_parity() {
        assert!(matches!(catalog_homogeneous(SubgroupSpec::N1(2)), Err(Error::CatalogError(_))));
        assert!(matches!(catalog_homogeneous(SubgroupSpec::Q1(0)), Err(Error::CatalogError(_))));
    }
}
