//! Toric (type II) varieties: `e` is a semisimple root of the cone, and the
//! SL2-part acts through the two vertical derivations of degree `±e`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::*;
use crate::roots::{distinguished_ray, Provenance, RootDescription, RootFamily};
use crate::symbolic::{vertical_lnd, Derivation, RatFunc};
use crate::type1::{BorelSide, ColorRecord, ColoredCone, DivisorLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Data {
    pub sigma: Cone,
    pub e: LatticeVector,
    /// Distinguished ray of `-e`.
    pub rho_minus: LatticeVector,
    /// Distinguished ray of `e`.
    pub rho_plus: LatticeVector,
}

impl Type2Data {
    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn rho(&self, side: BorelSide) -> &LatticeVector {
        match side {
            BorelSide::Minus => &self.rho_minus,
            BorelSide::Plus => &self.rho_plus,
        }
    }

    /// `partial_-`, `partial_+` with `partial_pm(chi^m) = <m, rho_pm> chi^{m pm e}`.
    pub fn sl2_pair(&self) -> (Derivation, Derivation) {
        let me: LatticeVector = self.e.iter().map(|x| -x).collect();
        let minus = vertical_lnd(&me, &qv(&self.rho_minus), &RatFunc::one()).expect("validated");
        let plus = vertical_lnd(&self.e, &qv(&self.rho_plus), &RatFunc::one()).expect("validated");
        (minus, plus)
    }
}

pub fn validate_type2(sigma: &Cone, e: &[i64]) -> Result<Type2Data> {
    if !sigma.is_strongly_convex() {
        return Err(Error::StronglyConvexRequired);
    }
    if sigma.rank() != e.len() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), got: e.len() });
    }
    let eq = qv(e);
    let plus = distinguished_ray(sigma, &eq)
        .ok_or_else(|| Error::NotSemisimpleRoot(format!("{} is not a root", fmt_vec(&eq))))?;
    let minus = distinguished_ray(sigma, &neg(&eq))
        .ok_or_else(|| Error::NotSemisimpleRoot(format!("{} is not a root", fmt_vec(&neg(&eq)))))?;
    let lat = |v: QVector| to_lattice(&v).expect("rays are primitive lattice vectors");
    Ok(Type2Data { sigma: sigma.clone(), e: e.to_vec(), rho_minus: lat(minus), rho_plus: lat(plus) })
}

/// `N / Z rho`, realised as `e^perp ∩ N` with the projection
/// `x -> x + <theta, x> rho` where `theta = ±e` pairs to `-1` with `rho`.
///
/// Lifting goes back into the hyperplane spanned by the other rays of
/// `sigma` when they span one, so that lifting the colored cone and adding
/// `rho` recovers `sigma`; otherwise into `e^perp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub rho: LatticeVector,
    theta: LatticeVector,
    /// Basis of `e^perp ∩ N`; quotient coordinates refer to it.
    pub basis: Vec<LatticeVector>,
    /// Normal of the lifting hyperplane.
    section: QVector,
}

impl Quotient {
    fn new(d: &Type2Data, side: BorelSide) -> Quotient {
        let basis = integer_kernel(&[d.e.clone()], d.rank()).echelon().basis;
        let theta: LatticeVector = d.e.iter().map(|x| x * side.sign()).collect();
        let rho = qv(d.rho(side));
        let others: Vec<QVector> = d.sigma.rays().iter().filter(|r| **r != rho).cloned().collect();
        let normal = nullspace(&others, d.rank());
        let section = match normal.as_slice() {
            [f] if !dot(f, &rho).is_zero() => f.clone(),
            _ => qv(&d.e),
        };
        Quotient { rho: d.rho(side).clone(), theta, basis, section }
    }

    pub fn project(&self, x: &[Rational]) -> QVector {
        let p = add(x, &scale(&dot(&qv(&self.theta), x), &qv(&self.rho)));
        let b: Vec<QVector> = self.basis.iter().map(|b| qv(b)).collect();
        solve_in_span(&b, &p).expect("projection lands in e-perp")
    }

    pub fn lift(&self, y: &[Rational]) -> QVector {
        let x = self.basis.iter().zip(y).fold(zero_vec(self.rho.len()), |acc, (b, c)| add(&acc, &scale(c, &qv(b))));
        let rho = qv(&self.rho);
        let c = dot(&self.section, &x) / dot(&self.section, &rho);
        sub(&x, &scale(&c, &rho))
    }

    pub fn lift_cone(&self, c: &Cone) -> Result<Cone> {
        let gens: Vec<QVector> = c.generators().iter().map(|g| self.lift(g)).collect();
        Cone::from_generators(Side::N, self.rho.len(), &gens)
    }
}

/// The colored cone in `N / Z rho_side` together with the quotient map.
pub fn colored_cone_type2(d: &Type2Data, side: BorelSide) -> Result<(ColoredCone, Quotient)> {
    let quo = Quotient::new(d, side);
    let rho = qv(d.rho(side));
    let gens: Vec<QVector> = d.sigma.rays().iter().filter(|r| **r != rho).map(|r| quo.project(r)).collect();
    let cone = Cone::from_generators(Side::N, d.rank() - 1, &gens)?;
    let other = match side {
        BorelSide::Minus => BorelSide::Plus,
        BorelSide::Plus => BorelSide::Minus,
    };
    let label = DivisorLabel::Horizontal(qv(d.rho(other)));
    let color = ColorRecord { label, image: quo.project(&qv(d.rho(other))), is_color: true, side };
    Ok((ColoredCone { cone, colors: vec![color], side }, quo))
}

/// `sigma = C + Q>=0 rho` for a cone `C` already lifted to `N`.
pub fn from_colored_cone_type2(cc: &Cone, rho: &[i64]) -> Result<Cone> {
    let sigma = cc.extend(&[qv(rho)])?;
    if !sigma.is_strongly_convex() {
        return Err(Error::StronglyConvexRequired);
    }
    Ok(sigma)
}

/// `M ∩ rho_side^perp`.
pub fn weight_sublattice(d: &Type2Data, side: BorelSide) -> Sublattice {
    integer_kernel(&[d.rho(side).clone()], d.rank())
}

/// Exterior roots: rays of `sigma` in `e^perp` other than `rho_pm`, with
/// `theta` orthogonal to both. There are no interior roots.
pub fn roots_type2(d: &Type2Data) -> (RootDescription, RootDescription) {
    let n = d.rank();
    let e = qv(&d.e);
    let (rm, rp) = (qv(&d.rho_minus), qv(&d.rho_plus));
    let rays = d.sigma.rays();
    let families = rays
        .iter()
        .filter(|r| dot(r, &e).is_zero() && **r != rm && **r != rp)
        .map(|rho| RootFamily {
            distinguished_ray: rho.clone(),
            equalities: vec![(rm.clone(), q(0)), (rp.clone(), q(0))],
            inequalities: rays.iter().filter(|r| *r != rho).cloned().collect(),
            lattice: None,
        })
        .collect();
    let ext = RootDescription { rank: n, families, provenance: Provenance::VarietyExterior }.prune();
    (ext, RootDescription::empty(n, Provenance::VarietyInterior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::enumerate_roots;

    fn cone(rays: &[Vec<i64>]) -> Cone {
        Cone::from_lattice(Side::N, rays[0].len(), rays).unwrap()
    }

    #[test]
    fn validation_records_rays() {
        let d = validate_type2(&cone(&[vec![1, 0], vec![1, 2]]), &[-1, 1]).unwrap();
        assert_eq!(d.rho_plus, vec![1, 0]);
        assert_eq!(d.rho_minus, vec![1, 2]);
        let o = validate_type2(&cone(&[vec![1, 0], vec![0, 1]]), &[-1, 1]).unwrap();
        assert_eq!(o.rho_minus, vec![0, 1]);
        assert!(matches!(validate_type2(&cone(&[vec![1, 0]]), &[-1, 1]), Err(Error::NotSemisimpleRoot(_))));
    }

    #[test]
    fn rank_two_quotient() {
        let d = validate_type2(&cone(&[vec![1, 0], vec![1, 2]]), &[-1, 1]).unwrap();
        let (cc, _) = colored_cone_type2(&d, BorelSide::Plus).unwrap();
        assert_eq!(cc.cone, cone(&[vec![1]]));
        assert_eq!(cc.colors[0].image, qv(&[2]));
        assert_eq!(weight_sublattice(&d, BorelSide::Plus).basis, vec![vec![0, 1]]);
        let l = weight_sublattice(&d, BorelSide::Minus);
        assert!(l.contains(&qv(&[2, -1])) && l.basis.len() == 1);
        assert!(enumerate_roots(&roots_type2(&d).0, 5).is_empty());
    }

    #[test]
    fn rank_three_orthant() {
        let o = cone(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let d = validate_type2(&o, &[-1, 1, 0]).unwrap();
        let (cc, quo) = colored_cone_type2(&d, BorelSide::Plus).unwrap();
        assert_eq!(cc.cone, cone(&[vec![1, 0], vec![0, 1]]));
        assert_eq!(cc.colors[0].image, qv(&[1, 0]));
        let lifted = quo.lift_cone(&cc.cone).unwrap();
        assert_eq!(from_colored_cone_type2(&lifted, &d.rho_plus).unwrap(), o);
        let (ext, int) = roots_type2(&d);
        assert_eq!(enumerate_roots(&ext, 3), vec![vec![0, 0, -1]]);
        assert!(int.families.is_empty());
        assert!(from_colored_cone_type2(&cone(&[vec![-1, 0, 0]]), &[1, 0, 0]).is_err());
    }
}
