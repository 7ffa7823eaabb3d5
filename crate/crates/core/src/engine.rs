//! Demazure roots of a variety, and certificates that each one really is
//! the degree of a normalized additive group action.

use num_traits::{ToPrimitive, Zero};

use crate::divisors::{preserves_at_degree, weights_in_box, GradedAlgebra, PolyDivisor, ToricAlgebra};
use crate::error::{Error, Result};
use crate::lattice::*;
use crate::roots::{distinguished_ray, enumerate_roots, Provenance, RootDescription, RootFamily};
use crate::symbolic::{commutator_vanishes, vertical_lnd, Derivation, GradedElement, RatFunc};
use crate::type1::{sl2_triple, validate_type1, BorelSide, Case, SphericalDataI};
use crate::type2::{roots_type2, validate_type2, Type2Data};

pub const DEFAULT_PRESERVATION_BOUND: i64 = 3;

/// Iterations allowed before an element counts as not killed.
const NILPOTENCY_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarietyKind {
    TypeI(SphericalDataI),
    TypeII(Type2Data),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub kind: VarietyKind,
    pub side: BorelSide,
}

impl VarietySpec {
    pub fn type1(d: SphericalDataI) -> VarietySpec {
        VarietySpec { kind: VarietyKind::TypeI(d), side: BorelSide::Minus }
    }
    pub fn type2(d: Type2Data) -> VarietySpec {
        VarietySpec { kind: VarietyKind::TypeII(d), side: BorelSide::Minus }
    }
    pub fn rank(&self) -> usize {
        match &self.kind {
            VarietyKind::TypeI(d) => d.rank(),
            VarietyKind::TypeII(d) => d.rank(),
        }
    }
    fn e(&self) -> &LatticeVector {
        match &self.kind {
            VarietyKind::TypeI(d) => &d.e,
            VarietyKind::TypeII(d) => &d.e,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemazureRoots {
    pub exterior: RootDescription,
    pub interior: RootDescription,
    /// The cone whose roots the families are cut from.
    pub gamma: Cone,
}

impl DemazureRoots {
    pub fn enumerate(&self, bound: i64) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
        (enumerate_roots(&self.exterior, bound), enumerate_roots(&self.interior, bound))
    }

    pub fn contains(&self, theta: &[i64]) -> bool {
        self.exterior.contains(theta) || self.interior.contains(theta)
    }
}

/// `Gamma` is `omega_side`: the colored cone plus the color images.
pub fn gamma(d: &SphericalDataI, side: BorelSide) -> Result<Cone> {
    let g = d.omega(side)?;
    if !g.is_strongly_convex() {
        return Err(Error::StructuralError("the cone spanned by the colored cone and the colors is not strongly convex".into()));
    }
    Ok(g)
}

pub fn demazure_roots(x: &VarietySpec) -> Result<DemazureRoots> {
    match &x.kind {
        VarietyKind::TypeII(d) => {
            let (exterior, interior) = roots_type2(d);
            Ok(DemazureRoots { exterior, interior, gamma: d.sigma.clone() })
        }
        VarietyKind::TypeI(d) => {
            let diag = validate_type1(d);
            if !diag.is_empty() {
                return Err(Error::Validation(diag));
            }
            let g = gamma(d, x.side)?;
            let n = d.rank();
            let e = d.eq();
            let l = d.weight_lattice();
            let rays = g.rays();
            let family = |rho: &QVector, equalities: Vec<(QVector, Rational)>| RootFamily {
                distinguished_ray: rho.clone(),
                equalities,
                inequalities: rays.iter().filter(|r| *r != rho).cloned().collect(),
                lattice: Some(l.clone()),
            };
            let ext_eqs = match d.case {
                Case::Reflexive => vec![(d.v0.clone(), q(0)), (d.v1.clone(), q(0))],
                Case::Skew => vec![(d.v1.clone(), q(0))],
            };
            let exterior = RootDescription {
                rank: n,
                families: rays.iter().filter(|r| dot(r, &e).is_zero()).map(|r| family(r, ext_eqs.clone())).collect(),
                provenance: Provenance::VarietyExterior,
            }
            .prune();
            let mut interior = RootDescription::empty(n, Provenance::VarietyInterior);
            if d.case == Case::Reflexive && rank(&[d.v0.clone(), d.v1.clone()]) == 2 {
                // A distinguished ray in e^perp is a G-divisor along which the
                // open-orbit derivation d/dt lowers the order, so only rays
                // off e^perp can carry interior roots.
                for c in [1, -1] {
                    for r in rays.iter().filter(|r| !dot(r, &e).is_zero()) {
                        interior.families.push(family(r, vec![(d.v0.clone(), q(c)), (d.v1.clone(), q(c))]));
                    }
                }
            }
            Ok(DemazureRoots { exterior, interior: interior.prune(), gamma: g })
        }
    }
}

/// Whether the distinguished ray of `theta` in `gamma` lies in `e^perp`:
/// true for exterior roots, false for interior ones.
pub fn ray_in_valuation_lineality(roots: &DemazureRoots, e: &[i64], theta: &[i64]) -> Option<bool> {
    distinguished_ray(&roots.gamma, &qv(theta)).map(|r| dot(&r, &qv(e)).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub root: LatticeVector,
    pub derivation_summary: String,
    pub commutator_results: Vec<BracketResult>,
    pub preservation_bound: i64,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `d(Q chi^m) = Q' chi^{m+theta}`.
fn case_one(n: usize, theta: &[i64]) -> Derivation {
    Derivation::new(n, GradedElement::term(theta.to_vec(), RatFunc::one()), vec![GradedElement::zero(); n]).expect("rank")
}

/// `d(Q chi^m) = ((v0(m)(t-1) + v1(m) t) Q + t(t-1) Q') chi^{m+theta}`.
fn case_two(d: &SphericalDataI, theta: &[i64]) -> Derivation {
    let n = d.rank();
    let t = RatFunc::t();
    let t1 = RatFunc::linear_pow(&q(1), 1);
    let w = (0..n)
        .map(|i| {
            let b = unit_vec(n, i);
            let f = &t1.scale(&dot(&d.v0, &b)) + &t.scale(&dot(&d.v1, &b));
            GradedElement::term(theta.to_vec(), f)
        })
        .collect();
    Derivation::new(n, GradedElement::term(theta.to_vec(), &t * &t1), w).expect("rank")
}

/// `chi^m -> <m, rho> chi^{m+theta}` without requiring `<theta, rho> = -1`.
fn toric_candidate(theta: &[i64], rho: &[Rational]) -> Derivation {
    let n = theta.len();
    let w = rho.iter().map(|r| GradedElement::term(theta.to_vec(), RatFunc::constant(r.clone()))).collect();
    Derivation::new(n, GradedElement::zero(), w).expect("rank")
}

/// The derivation the classification attaches to `theta`, or the closest
/// thing to one when `theta` is not a root.
pub fn candidate_derivation(x: &VarietySpec, gamma: &Cone, theta: &[i64]) -> (Derivation, String) {
    let n = x.rank();
    let tq = qv(theta);
    let ray = distinguished_ray(gamma, &tq)
        .or_else(|| gamma.rays().iter().find(|r| dot(r, &tq) == q(-1)).cloned());
    match &x.kind {
        VarietyKind::TypeII(_) => match ray {
            Some(r) => (vertical_lnd(theta, &r, &RatFunc::one()).expect("pairing -1"), format!("vertical along {}", fmt_vec(&r))),
            None => {
                let r = gamma.rays().first().cloned().unwrap_or_else(|| zero_vec(n));
                (toric_candidate(theta, &r), format!("toric candidate along {}", fmt_vec(&r)))
            }
        },
        VarietyKind::TypeI(d) => {
            let a = dot(&d.v0, &tq);
            let b = dot(&d.v1, &tq);
            if d.case == Case::Reflexive && a == q(-1) && b == q(-1) {
                return (case_two(d, theta), "interior, v0 = v1 = -1".into());
            }
            if a == q(1) && b == q(1) {
                return (case_one(n, theta), "interior, v0 = v1 = 1".into());
            }
            match ray {
                Some(r) if a.is_integer() => {
                    let k = a.to_integer().to_i64().expect("small");
                    let phi = RatFunc::linear_pow(&q(0), -k);
                    (vertical_lnd(theta, &r, &phi).expect("pairing -1"), format!("vertical along {}, t^{}", fmt_vec(&r), -k))
                }
                _ => (case_one(n, theta), "fallback d/dt".into()),
            }
        }
    }
}

enum Algebra {
    Divisor(PolyDivisor),
    Toric(ToricAlgebra),
}

impl Algebra {
    fn of(x: &VarietySpec) -> Result<Algebra> {
        Ok(match &x.kind {
            VarietyKind::TypeI(d) => Algebra::Divisor(d.divisor()?),
            VarietyKind::TypeII(d) => Algebra::Toric(ToricAlgebra { sigma: d.sigma.clone() }),
        })
    }

    fn preserves(&self, d: &Derivation, bound: i64) -> std::result::Result<(), String> {
        let r = match self {
            Algebra::Divisor(a) => preserves_at_degree(d, a, bound),
            Algebra::Toric(a) => preserves_at_degree(d, a, bound),
        };
        r.map_err(|w| format!("image of ({})*chi^{} leaves the algebra: {}", w.element, fmt_vec(&qv(&w.degree)), w.image))
    }

    fn nilpotent(&self, d: &Derivation, bound: i64) -> std::result::Result<(), String> {
        fn check<A: GradedAlgebra>(a: &A, d: &Derivation, bound: i64) -> std::result::Result<(), String> {
            for m in weights_in_box(&a.weight_cone(), bound) {
                for b in a.basis(&qv(&m)) {
                    let mut x = GradedElement::term(m.clone(), b.clone());
                    let mut k = 0;
                    while !x.is_zero() {
                        if k == NILPOTENCY_CAP {
                            return Err(format!("({b})*chi^{} survives {NILPOTENCY_CAP} iterations", fmt_vec(&qv(&m))));
                        }
                        x = d.apply(&x);
                        k += 1;
                    }
                }
            }
            Ok(())
        }
        match self {
            Algebra::Divisor(a) => check(a, d, bound),
            Algebra::Toric(a) => check(a, d, bound),
        }
    }
}

fn sl2_operators(x: &VarietySpec) -> Result<Vec<(&'static str, Derivation)>> {
    Ok(match &x.kind {
        VarietyKind::TypeI(d) => {
            let tr = sl2_triple(d)?;
            vec![("[D, d-]", tr.minus), ("[D, d+]", tr.plus)]
        }
        VarietyKind::TypeII(d) => {
            let (m, p) = d.sl2_pair();
            vec![("[D, d-]", m), ("[D, d+]", p)]
        }
    })
}

/// Certifies one vector: builds its candidate derivation, checks that it is
/// homogeneous of degree `theta`, commutes with the SL2-part, preserves the
/// algebra and is locally nilpotent on it, all up to `preservation_bound`.
pub fn certify(x: &VarietySpec, theta: &[i64], preservation_bound: i64) -> Result<VerificationReport> {
    let g = match &x.kind {
        VarietyKind::TypeI(d) => gamma(d, x.side)?,
        VarietyKind::TypeII(d) => d.sigma.clone(),
    };
    let ops = sl2_operators(x)?;
    let algebra = Algebra::of(x)?;
    Ok(certify_with(x, &g, &ops, &algebra, theta, preservation_bound))
}

fn certify_with(
    x: &VarietySpec,
    g: &Cone,
    ops: &[(&'static str, Derivation)],
    algebra: &Algebra,
    theta: &[i64],
    bound: i64,
) -> VerificationReport {
    let (der, summary) = candidate_derivation(x, g, theta);
    let mut commutator_results = Vec::new();
    for (name, op) in ops {
        let r = commutator_vanishes(&der, op);
        commutator_results.push(BracketResult {
            name: name.to_string(),
            passed: r.is_ok(),
            witness: r.err().map(|w| format!("{} -> {}", w.probe, w.value)),
        });
    }
    let mut failures = Vec::new();
    if der.is_zero() {
        failures.push("candidate derivation is zero".to_string());
    } else if der.degree().as_deref() != Some(theta) {
        failures.push("candidate derivation is not homogeneous of this degree".to_string());
    }
    if let Some(b) = commutator_results.iter().find(|b| !b.passed) {
        failures.push(format!("{} does not vanish", b.name));
    }
    if failures.is_empty() {
        if let Err(w) = algebra.preserves(&der, bound) {
            failures.push(w);
        }
    }
    if failures.is_empty() {
        if let Err(w) = algebra.nilpotent(&der, bound) {
            failures.push(w);
        }
    }
    VerificationReport {
        root: theta.to_vec(),
        derivation_summary: summary,
        commutator_results,
        preservation_bound: bound,
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail(failures.join("; ")) },
    }
}

/// Every root in the box of radius `bound`, each with its certificate,
/// in lexicographic order.
pub fn enumerate_and_certify(
    x: &VarietySpec,
    bound: i64,
    preservation_bound: i64,
) -> Result<Vec<(LatticeVector, VerificationReport)>> {
    let roots = demazure_roots(x)?;
    let (ext, int) = roots.enumerate(bound);
    let mut all: Vec<LatticeVector> = ext.into_iter().chain(int).collect();
    all.sort();
    all.dedup();
    let ops = sl2_operators(x)?;
    let algebra = Algebra::of(x)?;
    Ok(all
        .into_iter()
        .map(|t| {
            let r = certify_with(x, &roots.gamma, &ops, &algebra, &t, preservation_bound);
            (t, r)
        })
        .collect())
}

/// Certifies arbitrary vectors against one spec, sharing the setup.
pub fn certify_many(x: &VarietySpec, thetas: &[LatticeVector], preservation_bound: i64) -> Result<Vec<VerificationReport>> {
    let g = match &x.kind {
        VarietyKind::TypeI(d) => gamma(d, x.side)?,
        VarietyKind::TypeII(d) => d.sigma.clone(),
    };
    let ops = sl2_operators(x)?;
    let algebra = Algebra::of(x)?;
    Ok(thetas.iter().map(|t| certify_with(x, &g, &ops, &algebra, t, preservation_bound)).collect())
}

/// Raw input before the torus is made faithful and of complexity one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSpec {
    pub spec: VarietySpec,
    /// Complexity-two input gets an extra torus factor.
    pub complexity_two: bool,
    /// Generators of the sublattice of `M` acting trivially.
    pub non_effective: Vec<LatticeVector>,
}

/// How roots of the normalized spec map back to the raw input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootMapping {
    Identity,
    /// `theta -> (theta, 0)`.
    AppendZero,
    /// Rows give `theta` in the original coordinates from the new ones.
    Linear(IntMatrix),
}

impl RootMapping {
    pub fn apply(&self, theta: &[i64]) -> LatticeVector {
        match self {
            RootMapping::Identity => theta.to_vec(),
            RootMapping::AppendZero => theta.iter().copied().chain([0]).collect(),
            RootMapping::Linear(a) => mat_vec(a, theta),
        }
    }
}

/// Adds a torus factor for complexity-two input (`e' = (e, -1)`), and
/// restricts `M` to the characters that act effectively otherwise.
pub fn normalize_spec(raw: &RawSpec) -> Result<(VarietySpec, RootMapping)> {
    if raw.spec.e().iter().all(|x| *x == 0) {
        return Err(Error::StructuralError("e = 0: enlarge the torus so that the root part acts with nonzero weight".into()));
    }
    if raw.complexity_two {
        let spec = match &raw.spec.kind {
            VarietyKind::TypeI(d) => {
                let up = |v: &QVector| v.iter().cloned().chain([q(0)]).collect::<QVector>();
                let n = d.rank();
                let sigma = Cone::from_generators(Side::N, n + 1, &d.sigma.generators().iter().map(up).collect::<Vec<_>>())?;
                let delta_inf = match &d.delta_inf {
                    Some(p) => Some(Polyhedron::new(&p.vertices().iter().map(up).collect::<Vec<_>>(), sigma.clone())?),
                    None => None,
                };
                VarietyKind::TypeI(SphericalDataI {
                    case: d.case,
                    v0: up(&d.v0),
                    v1: up(&d.v1),
                    sigma,
                    delta_inf,
                    e: d.e.iter().copied().chain([-1]).collect(),
                })
            }
            VarietyKind::TypeII(_) => {
                return Err(Error::StructuralError("complexity-two input must be given as type I data".into()))
            }
        };
        return Ok((VarietySpec { kind: spec, side: raw.spec.side }, RootMapping::AppendZero));
    }
    if raw.non_effective.is_empty() {
        return Ok((raw.spec.clone(), RootMapping::Identity));
    }
    // M acts through M / K; a faithful model uses the saturation of K.
    let n = raw.spec.rank();
    let k = Sublattice::new(n, raw.non_effective.clone()).saturation();
    let nk = k.basis.len();
    if nk == 0 {
        return Ok((raw.spec.clone(), RootMapping::Identity));
    }
    // The torus that acts is dual to M / K, so N shrinks to K^perp.
    let basis = integer_kernel(&k.basis, n).basis;
    let to_new = |v: &QVector| -> Result<QVector> {
        let b: Vec<QVector> = basis.iter().map(|x| qv(x)).collect();
        solve_in_span(&b, v).ok_or_else(|| Error::StructuralError(format!("{} is not orthogonal to the kernel", fmt_vec(v))))
    };
    // Characters: M' = M / K, coordinates <m, basis_j>.
    let m_coords = |m: &[i64]| -> LatticeVector { basis.iter().map(|b| b.iter().zip(m).map(|(x, y)| x * y).sum()).collect() };
    let spec = match &raw.spec.kind {
        VarietyKind::TypeI(d) => {
            let r = basis.len();
            let sigma = Cone::from_generators(Side::N, r, &d.sigma.generators().iter().map(|g| to_new(g)).collect::<Result<Vec<_>>>()?)?;
            let delta_inf = match &d.delta_inf {
                Some(p) => Some(Polyhedron::new(&p.vertices().iter().map(|v| to_new(v)).collect::<Result<Vec<_>>>()?, sigma.clone())?),
                None => None,
            };
            VarietyKind::TypeI(SphericalDataI {
                case: d.case,
                v0: to_new(&d.v0)?,
                v1: to_new(&d.v1)?,
                sigma,
                delta_inf,
                e: m_coords(&d.e),
            })
        }
        VarietyKind::TypeII(d) => {
            let sigma = Cone::from_generators(
                Side::N,
                basis.len(),
                &d.sigma.generators().iter().map(|g| to_new(g)).collect::<Result<Vec<_>>>()?,
            )?;
            VarietyKind::TypeII(validate_type2(&sigma, &m_coords(&d.e))?)
        }
    };
    // A new character theta' is the class of any m with <m, basis_j> = theta'_j;
    // the dual basis gives a representative.
    let cols: Vec<QVector> = basis.iter().map(|b| qv(b)).collect();
    let dual = dual_basis(&cols, n);
    Ok((VarietySpec { kind: spec, side: raw.spec.side }, RootMapping::Linear(dual)))
}

/// Integer `n x r` matrix `a` with `<a theta, b_j> = theta_j` for the basis `b`.
fn dual_basis(basis: &[QVector], n: usize) -> IntMatrix {
    let r = basis.len();
    let mut out = vec![vec![0i64; r]; n];
    for j in 0..r {
        // Solve <x, b_i> = delta_ij over Z via Smith form.
        let rows: Vec<LatticeVector> = basis.iter().map(|b| to_lattice(b).expect("lattice")).collect();
        let rhs: Vec<i64> = (0..r).map(|i| i64::from(i == j)).collect();
        let x = solve_integer(&rows, &rhs, n).expect("saturated basis has an integral dual");
        for i in 0..n {
            out[i][j] = x[i];
        }
    }
    out
}

/// One integral solution of `rows x = rhs`.
pub(crate) fn solve_integer(rows: &[LatticeVector], rhs: &[i64], n: usize) -> Option<LatticeVector> {
    let snf = smith(&rows.to_vec(), n);
    let ub = mat_vec(&snf.u, rhs);
    let mut y = vec![0i64; n];
    for (i, &c) in ub.iter().enumerate() {
        if i < snf.rank {
            if c % snf.d[i][i] != 0 {
                return None;
            }
            y[i] = c / snf.d[i][i];
        } else if c != 0 {
            return None;
        }
    }
    Some(mat_vec(&snf.v, &y))
}

/// Splits off the torus factor that the SL2-part does not see.
pub fn split_torus_factor(d: &SphericalDataI) -> Result<(SphericalDataI, Sublattice)> {
    let n = d.rank();
    let w0 = match d.case {
        Case::Reflexive => d.v0.clone(),
        Case::Skew => scale(&q(2), &d.v0),
    };
    if rank(&[w0.clone(), d.v1.clone()]) < 2 {
        return Err(Error::SplitError("v0 and v1 are collinear".into()));
    }
    if n == 2 {
        return Ok((d.clone(), Sublattice::new(2, vec![])));
    }
    let gens = vec![to_lattice(&w0).expect("lattice"), to_lattice(&d.v1).expect("lattice")];
    let core = Sublattice::new(n, gens).saturation().echelon();
    // Complement inside e^perp: rays of sigma must live there too.
    let eperp = integer_kernel(&[d.e.clone()], n);
    let mut comp: Vec<LatticeVector> = Vec::new();
    let mut cur: Vec<LatticeVector> = core.basis.clone();
    for b in &eperp.basis {
        let mut trial = cur.clone();
        trial.push(b.clone());
        let s = Sublattice::new(n, trial.clone());
        if rank(&trial.iter().map(|x| qv(x)).collect::<Vec<_>>()) == trial.len() && s.is_saturated() {
            cur = trial;
            comp.push(b.clone());
        }
    }
    if cur.len() != n {
        return Err(Error::SplitError("no complement of the v0, v1 lattice inside e-perp".into()));
    }
    // Coordinates of N' x N'' = N; sigma must split as (0) x sigma''.
    let basis_q: Vec<QVector> = cur.iter().map(|x| qv(x)).collect();
    let coords = |v: &QVector| solve_in_span(&basis_q, v).expect("basis of N");
    let c0 = coords(&d.v0);
    let c1 = coords(&d.v1);
    if c0[2..].iter().chain(&c1[2..]).any(|x| !x.is_zero()) {
        return Err(Error::SplitError("v0, v1 are not in the core lattice".into()));
    }
    for g in d.sigma.generators() {
        if coords(&g)[..2].iter().any(|x| !x.is_zero()) {
            return Err(Error::SplitError("sigma does not lie in the complement".into()));
        }
    }
    if let Some(p) = &d.delta_inf {
        if p.vertices().iter().any(|v| coords(v)[..2].iter().any(|x| !x.is_zero())) {
            return Err(Error::SplitError("Delta_inf does not lie in the complement".into()));
        }
    }
    // e restricted to N' in the dual coordinates.
    let e_core: LatticeVector = cur[..2].iter().map(|b| b.iter().zip(&d.e).map(|(x, y)| x * y).sum()).collect();
    let core_data = SphericalDataI {
        case: d.case,
        v0: c0[..2].to_vec(),
        v1: c1[..2].to_vec(),
        sigma: Cone::zero(Side::N, 2),
        delta_inf: None,
        e: e_core,
    };
    Ok((core_data, Sublattice::new(n, comp)))
}

/// The reflexive double cover of skew data.
pub fn skew_cover(d: &SphericalDataI) -> Result<SphericalDataI> {
    if d.case != Case::Skew {
        return Err(Error::StructuralError("skew data expected".into()));
    }
    let delta_inf = match &d.delta_inf {
        Some(p) => {
            let shift = add(&scale(&q(2), &d.v0), &d.v1);
            let pts: Vec<QVector> = p.vertices().iter().map(|v| add(&scale(&q(2), v), &shift)).collect();
            Some(Polyhedron::new(&pts, d.sigma.clone())?)
        }
        None => None,
    };
    Ok(SphericalDataI { case: Case::Reflexive, v0: neg(&d.v1), v1: d.v1.clone(), sigma: d.sigma.clone(), delta_inf, e: d.e.clone() })
}

/// `tau(t) = 1 - t`, `tau(chi^m) = (-1)^{par(m)} (t/(1-t))^{v1(m)} chi^m`
/// where `par(m) = 2 v0(m) mod 2`, as a ring map on homogeneous elements.
///
/// With the exponent `(1-t)/t` instead, `tau` neither commutes with the
/// cover's operators nor fixes the image of `skew_embedding`.
pub struct Involution<'a> {
    data: &'a SphericalDataI,
    with_sign: bool,
}

impl<'a> Involution<'a> {
    pub fn new(data: &'a SphericalDataI) -> Involution<'a> {
        Involution { data, with_sign: true }
    }

    /// The same map without the parity sign; it is not a symmetry.
    pub fn unsigned(data: &'a SphericalDataI) -> Involution<'a> {
        Involution { data, with_sign: false }
    }

    pub fn apply(&self, f: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        let ratio = &RatFunc::t() * &RatFunc::linear_pow(&q(1), -1).scale(&q(-1));
        for (m, c) in f.terms() {
            let mq = qv(m);
            let par = (dot(&self.data.v0, &mq) * q(2)).to_integer().to_i64().expect("small").rem_euclid(2);
            let sign = if self.with_sign && par == 1 { q(-1) } else { q(1) };
            let k = dot(&self.data.v1, &mq).to_integer().to_i64().expect("integral");
            let c1 = compose_one_minus_t(c);
            out.add_term(m.clone(), (&c1 * &ratio.pow(k)).scale(&sign));
        }
        out
    }
}

/// `f(1 - t)`.
fn compose_one_minus_t(f: &RatFunc) -> RatFunc {
    compose(f, &(&RatFunc::one() - &RatFunc::t()))
}

/// `f(g)`.
fn compose(f: &RatFunc, g: &RatFunc) -> RatFunc {
    let sub = |p: &crate::symbolic::Poly| -> RatFunc {
        p.coeffs().iter().enumerate().fold(RatFunc::zero(), |acc, (i, c)| &acc + &g.pow(i as i64).scale(c))
    };
    &sub(f.num()) * &sub(f.den()).recip()
}

/// `phi(t) = (2t - 1)^2`, `phi(chi^m) = t^{v1(m)} (t - 1/2)^{2 v0(m)} chi^m`:
/// the skew algebra inside the invariants of its cover.
pub fn skew_embedding(d: &SphericalDataI, f: &GradedElement) -> GradedElement {
    let phi_t = RatFunc::linear_pow(&qf(1, 2), 2).scale(&q(4));
    let mut out = GradedElement::zero();
    for (m, c) in f.terms() {
        let mq = qv(m);
        let a = dot(&d.v1, &mq).to_integer().to_i64().expect("integral");
        let b = (dot(&d.v0, &mq) * q(2)).to_integer().to_i64().expect("integral");
        let w = &RatFunc::linear_pow(&q(0), a) * &RatFunc::linear_pow(&qf(1, 2), b);
        out.add_term(m.clone(), &compose(c, &phi_t) * &w);
    }
    out
}

/// Checks on probes and on sections up to `bound` that the involution
/// squares to the identity and commutes with `partial_pm` of the cover, and
/// that the embedding of the skew algebra intertwines the two triples.
pub fn skew_quotient_check(d: &SphericalDataI, bound: i64) -> Result<VerificationReport> {
    skew_quotient_check_with(d, bound, &Involution::new(d))
}

pub fn skew_quotient_check_with(d: &SphericalDataI, bound: i64, tau: &Involution<'_>) -> Result<VerificationReport> {
    if d.case != Case::Skew {
        return Err(Error::StructuralError("skew data expected".into()));
    }
    let cover = skew_cover(d)?;
    let tr = sl2_triple(&cover)?;
    let n = d.rank();
    let mut elements: Vec<(String, GradedElement)> = crate::symbolic::probes(n);
    let algebra = cover.divisor()?;
    for m in weights_in_box(&algebra.weight_cone(), bound) {
        for b in algebra.section_basis(&qv(&m)) {
            elements.push((format!("({b})*chi^{}", fmt_vec(&qv(&m))), GradedElement::term(m.clone(), b)));
        }
    }
    let mut results = Vec::new();
    let mut involutive = BracketResult { name: "tau^2 = id".into(), passed: true, witness: None };
    for (name, p) in crate::symbolic::probes(n) {
        let v = tau.apply(&tau.apply(&p));
        if v != p {
            involutive = BracketResult { name: involutive.name, passed: false, witness: Some(format!("{name} -> {v}")) };
            break;
        }
    }
    results.push(involutive);
    for (label, op) in [("tau d- = d- tau", &tr.minus), ("tau d+ = d+ tau", &tr.plus)] {
        let mut r = BracketResult { name: label.into(), passed: true, witness: None };
        for (name, p) in &elements {
            let lhs = tau.apply(&op.apply(p));
            let rhs = op.apply(&tau.apply(p));
            if lhs != rhs {
                r = BracketResult { name: label.into(), passed: false, witness: Some(format!("{name}: {lhs} != {rhs}")) };
                break;
            }
        }
        results.push(r);
    }
    let skew = sl2_triple(d)?;
    let own = d.divisor()?;
    let mut sections: Vec<(String, GradedElement)> = crate::symbolic::probes(n);
    for m in weights_in_box(&own.weight_cone(), bound) {
        for b in own.section_basis(&qv(&m)) {
            sections.push((format!("({b})*chi^{}", fmt_vec(&qv(&m))), GradedElement::term(m.clone(), b)));
        }
    }
    for (label, cov, own_op) in [("phi d- = d- phi", &tr.minus, &skew.minus), ("phi d+ = d+ phi", &tr.plus, &skew.plus)] {
        let mut r = BracketResult { name: label.into(), passed: true, witness: None };
        for (name, p) in &sections {
            let lhs = cov.apply(&skew_embedding(d, p));
            let rhs = skew_embedding(d, &own_op.apply(p));
            if lhs != rhs {
                r = BracketResult { name: label.into(), passed: false, witness: Some(format!("{name}: {lhs} != {rhs}")) };
                break;
            }
        }
        results.push(r);
    }
    let mut inv = BracketResult { name: "tau phi = phi".into(), passed: true, witness: None };
    for (name, p) in &sections {
        let img = skew_embedding(d, p);
        if tau.apply(&img) != img {
            inv = BracketResult { name: inv.name, passed: false, witness: Some(name.clone()) };
            break;
        }
    }
    results.push(inv);
    let verdict = match results.iter().find(|r| !r.passed) {
        None => Verdict::Pass,
        Some(r) => Verdict::Fail(format!("{} fails", r.name)),
    };
    Ok(VerificationReport {
        root: vec![0; n],
        derivation_summary: "skew double cover involution".into(),
        commutator_results: results,
        preservation_bound: bound,
        verdict,
    })
}
