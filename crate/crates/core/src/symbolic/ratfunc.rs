//! Rational functions in one variable `t`, kept reduced with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::divisors::CurvePoint;
use crate::lattice::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let c = den.leading().recip();
            return RatFunc { num: num.scale(&c), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (n, d) = if g.is_constant() { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let c = d.leading().recip();
        RatFunc { num: n.scale(&c), den: d.scale(&c) }
    }

    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn int(c: i64) -> RatFunc {
        RatFunc::constant(q(c))
    }

    pub fn poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn t() -> RatFunc {
        RatFunc::poly(Poly::t())
    }

    /// `(t - z)^k` for any integer `k`.
    pub fn linear_pow(z: &Rational, k: i64) -> RatFunc {
        let p = Poly::linear(z).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            RatFunc::poly(p)
        } else {
            RatFunc::new(Poly::one(), p)
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.leading())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> RatFunc {
        if self.den.is_constant() {
            return RatFunc::poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn pow(&self, k: i64) -> RatFunc {
        let base = if k >= 0 { self.clone() } else { self.recip() };
        (0..k.unsigned_abs()).fold(RatFunc::one(), |acc, _| &acc * &base)
    }

    /// Order of vanishing at a point of `P^1`; `None` for the zero function.
    pub fn ord_at(&self, z: &CurvePoint) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match z {
            CurvePoint::Finite(z) => self.num.root_multiplicity(z) - self.den.root_multiplicity(z),
            CurvePoint::Infinity => self.den.degree() - self.num.degree(),
        })
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return RatFunc { num: &self.num * &o.num, den: Poly::one() };
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_orders() {
        // t(t-1) / t^2 = (t-1)/t
        let f = &RatFunc::linear_pow(&q(1), 1) * &RatFunc::linear_pow(&q(0), -1);
        assert_eq!(f.ord_at(&CurvePoint::Finite(q(0))), Some(-1));
        assert_eq!(f.ord_at(&CurvePoint::Finite(q(1))), Some(1));
        assert_eq!(f.ord_at(&CurvePoint::Infinity), Some(0));
        let g = &(&RatFunc::t() * &RatFunc::linear_pow(&q(1), 1)) * &RatFunc::linear_pow(&q(0), -2);
        assert_eq!(f, g);
    }

    #[test]
    fn quotient_rule() {
        // d/dt 1/t = -1/t^2
        let f = RatFunc::linear_pow(&q(0), -1);
        assert_eq!(f.derivative(), RatFunc::linear_pow(&q(0), -2).scale(&q(-1)));
    }

    #[test]
    fn zero_has_no_order() {
        assert_eq!(RatFunc::zero().ord_at(&CurvePoint::Infinity), None);
    }
}
