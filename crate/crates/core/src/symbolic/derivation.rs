//! Derivations of `Q(t)[M]`.
//!
//! A derivation is pinned down by where it sends `t` and each `chi^{b_i}`
//! for the standard basis `b_i` of `M`. We store `D(t)` and the
//! "logarithmic" images `w_i = D(chi^{b_i}) / chi^{b_i}`, so that
//! `D(f chi^m) = f' D(t) chi^m + f chi^m sum_i m_i w_i`.

use num_traits::Zero;

use super::graded::GradedElement;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::lattice::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    rank: usize,
    image_of_t: GradedElement,
    multipliers: Vec<GradedElement>,
}

/// A probe on which a commutator did not vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub probe: String,
    pub value: GradedElement,
}

impl Derivation {
    pub fn new(rank: usize, image_of_t: GradedElement, multipliers: Vec<GradedElement>) -> Result<Derivation> {
        if multipliers.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: multipliers.len() });
        }
        Ok(Derivation { rank, image_of_t, multipliers })
    }

    pub fn zero(rank: usize) -> Derivation {
        Derivation { rank, image_of_t: GradedElement::zero(), multipliers: vec![GradedElement::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn image_of_t(&self) -> &GradedElement {
        &self.image_of_t
    }
    pub fn multipliers(&self) -> &[GradedElement] {
        &self.multipliers
    }

    /// The shift in degree, when every stored image is homogeneous of one
    /// common degree.
    pub fn degree(&self) -> Option<LatticeVector> {
        let mut deg: Option<&LatticeVector> = None;
        for g in std::iter::once(&self.image_of_t).chain(&self.multipliers) {
            if g.is_zero() {
                continue;
            }
            let d = g.homogeneous_degree()?;
            match deg {
                Some(prev) if prev != d => return None,
                _ => deg = Some(d),
            }
        }
        deg.cloned()
    }

    /// `sum_i m_i w_i`.
    fn log_image(&self, m: &[i64]) -> GradedElement {
        let mut out = GradedElement::zero();
        for (mi, w) in m.iter().zip(&self.multipliers) {
            if *mi != 0 {
                out = &out + &w.scale(&q(*mi));
            }
        }
        out
    }

    pub fn apply(&self, f: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (m, c) in f.terms() {
            let dc = c.derivative();
            if !dc.is_zero() {
                out = &out + &self.image_of_t.mul_ratfunc(&dc).shift(m);
            }
            let li = self.log_image(m);
            if !li.is_zero() {
                out = &out + &li.mul_ratfunc(c).shift(m);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            rank: self.rank,
            image_of_t: self.image_of_t.scale(c),
            multipliers: self.multipliers.iter().map(|w| w.scale(c)).collect(),
        }
    }

    pub fn add(&self, o: &Derivation) -> Derivation {
        Derivation {
            rank: self.rank,
            image_of_t: &self.image_of_t + &o.image_of_t,
            multipliers: self.multipliers.iter().zip(&o.multipliers).map(|(a, b)| a + b).collect(),
        }
    }

    /// `[self, o]`, again a derivation.
    pub fn commutator(&self, o: &Derivation) -> Derivation {
        let t = GradedElement::scalar(self.rank, RatFunc::t());
        let image_of_t = &self.apply(&o.apply(&t)) - &o.apply(&self.apply(&t));
        let multipliers = (0..self.rank)
            .map(|i| {
                let b: LatticeVector = (0..self.rank).map(|j| i64::from(i == j)).collect();
                let chi = GradedElement::chi(b.clone());
                let v = &self.apply(&o.apply(&chi)) - &o.apply(&self.apply(&chi));
                let back: LatticeVector = b.iter().map(|x| -x).collect();
                v.shift(&back)
            })
            .collect();
        Derivation { rank: self.rank, image_of_t, multipliers }
    }

    pub fn is_zero(&self) -> bool {
        self.image_of_t.is_zero() && self.multipliers.iter().all(GradedElement::is_zero)
    }

    /// Applies the derivation `k` times.
    pub fn iterate(&self, f: &GradedElement, k: usize) -> GradedElement {
        (0..k).fold(f.clone(), |acc, _| self.apply(&acc))
    }
}

/// Probes `{t, chi^{b_i}}`, which determine any derivation.
pub fn probes(rank: usize) -> Vec<(String, GradedElement)> {
    let mut out = vec![("t".to_string(), GradedElement::scalar(rank, RatFunc::t()))];
    for i in 0..rank {
        let b: LatticeVector = (0..rank).map(|j| i64::from(i == j)).collect();
        out.push((format!("chi^b{i}"), GradedElement::chi(b)));
    }
    out
}

/// `Ok` when `[a, b]` kills every probe; otherwise the first failing probe.
pub fn commutator_vanishes(a: &Derivation, b: &Derivation) -> std::result::Result<(), Witness> {
    for (name, p) in probes(a.rank()) {
        let v = &a.apply(&b.apply(&p)) - &b.apply(&a.apply(&p));
        if !v.is_zero() {
            return Err(Witness { probe: name, value: v });
        }
    }
    Ok(())
}

pub fn derivation_apply(d: &Derivation, f: &GradedElement) -> GradedElement {
    d.apply(f)
}

/// Vertical derivation `f chi^m -> <m, rho> phi f chi^{m+e}`.
pub fn vertical_lnd(e: &[i64], rho: &[Rational], phi: &RatFunc) -> Result<Derivation> {
    let n = e.len();
    if rho.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rho.len() });
    }
    if dot(&qv(e), rho) != q(-1) {
        return Err(Error::NotARoot(format!("<{}, {}> != -1", fmt_vec(&qv(e)), fmt_vec(rho))));
    }
    let multipliers = rho.iter().map(|r| GradedElement::term(e.to_vec(), phi.scale(r))).collect();
    Derivation::new(n, GradedElement::zero(), multipliers)
}

/// Vertex choice at the finite special points, with the distinguished point
/// `z0` singled out. This is all a horizontal derivation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteColoring {
    pub z0: Rational,
    pub v_z0: QVector,
    pub others: Vec<(Rational, QVector)>,
}

impl FiniteColoring {
    /// `d(e)`: denominator of `v_z0(e)`.
    pub fn d(&self, e: &[i64]) -> Rational {
        Rational::from_integer(dot(&self.v_z0, &qv(e)).denom().clone())
    }

    /// `s = -1/d(e) - v_z0(e)`.
    pub fn s(&self, e: &[i64]) -> Rational {
        -self.d(e).recip() - dot(&self.v_z0, &qv(e))
    }

    /// `xi_m = prod_{z != z0} (t - z)^{-v_z(m)}`, when the exponents are integral.
    pub fn xi(&self, m: &[i64]) -> Result<RatFunc> {
        let mm = qv(m);
        let mut out = RatFunc::one();
        for (z, v) in &self.others {
            let k = dot(v, &mm);
            if !k.is_integer() {
                return Err(Error::StructuralError(format!("non-integral exponent {} at {}", fmt_q(&k), fmt_q(z))));
            }
            let k: i64 = k.to_integer().try_into().expect("small exponent");
            out = &out * &RatFunc::linear_pow(z, -k);
        }
        Ok(out)
    }
}

/// Horizontal derivation
/// `(t-z0)^r xi_m chi^m -> lambda d (v_z0(m) + r) (t-z0)^{r+s} xi_{m+e} chi^{m+e}`.
pub fn horizontal_lnd(lambda: &Rational, coloring: &FiniteColoring, e: &[i64]) -> Result<Derivation> {
    let n = e.len();
    let s = coloring.s(e);
    if !s.is_integer() {
        return Err(Error::StructuralError(format!("s = {} is not an integer", fmt_q(&s))));
    }
    let s: i64 = s.to_integer().try_into().expect("small exponent");
    let d = coloring.d(e);
    let z0 = &coloring.z0;
    let xi_e = coloring.xi(e)?;
    let c = lambda * &d;
    let dt_coeff = (&RatFunc::linear_pow(z0, 1 + s) * &xi_e).scale(&c);
    let image_of_t = GradedElement::term(e.to_vec(), dt_coeff.clone());
    let base = (&RatFunc::linear_pow(z0, s) * &xi_e).scale(&c);
    let multipliers = (0..n)
        .map(|i| {
            let b = unit_vec(n, i);
            let mut f = base.scale(&dot(&coloring.v_z0, &b));
            for (z, v) in &coloring.others {
                let k = dot(v, &b);
                if !k.is_zero() {
                    f = &f + &(&RatFunc::linear_pow(z, -1) * &dt_coeff).scale(&k);
                }
            }
            GradedElement::term(e.to_vec(), f)
        })
        .collect();
    Derivation::new(n, image_of_t, multipliers)
}

/// Checks that `D` is locally nilpotent on the probes: some iterate below
/// `max_iter` kills each one.
pub fn nilpotent_on_probes(d: &Derivation, max_iter: usize) -> bool {
    probes(d.rank()).iter().all(|(_, p)| d.iterate(p, max_iter).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(m: &[i64]) -> GradedElement {
        GradedElement::chi(m.to_vec())
    }

    #[test]
    fn vertical_requires_pairing_minus_one() {
        assert!(vertical_lnd(&[0, -1], &qv(&[0, 1]), &RatFunc::one()).is_ok());
        assert!(matches!(vertical_lnd(&[0, 1], &qv(&[0, 1]), &RatFunc::one()), Err(Error::NotARoot(_))));
    }

    #[test]
    fn vertical_leibniz_on_products() {
        let d = vertical_lnd(&[0, -1], &qv(&[0, 1]), &RatFunc::t()).unwrap();
        let a = chi(&[1, 2]);
        let b = GradedElement::term(vec![0, 3], RatFunc::linear_pow(&q(1), 2));
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) + &(&a * &d.apply(&b));
        assert_eq!(lhs, rhs);
        assert_eq!(d.degree(), Some(vec![0, -1]));
    }

    #[test]
    fn case_two_matches_closed_form() {
        // Coloring v0 = (-1,0) at 0, v1 = (0,-1) at 1, degree (1,1).
        let col = FiniteColoring { z0: q(0), v_z0: qv(&[-1, 0]), others: vec![(q(1), qv(&[0, -1]))] };
        let d = horizontal_lnd(&q(1), &col, &[1, 1]).unwrap();
        assert_eq!(d.apply(&chi(&[-1, 0])), GradedElement::term(vec![0, 1], RatFunc::linear_pow(&q(1), 1)));
        let t = GradedElement::scalar(2, RatFunc::t());
        let want = &RatFunc::t() * &RatFunc::linear_pow(&q(1), 1);
        assert_eq!(d.apply(&t), GradedElement::term(vec![1, 1], want));
    }
}
