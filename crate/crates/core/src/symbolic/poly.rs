//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::lattice::{fmt_q, q, Rational};

/// Coefficients from the constant term up, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    /// `t`.
    pub fn t() -> Poly {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `t - z`.
    pub fn linear(z: &Rational) -> Poly {
        Poly::new(vec![-z.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree() as usize;
        let lead_inv = d.leading().recip();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `z` as a root.
    pub fn root_multiplicity(&self, z: &Rational) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        let lin = Poly::linear(z);
        let mut p = self.clone();
        let mut k = 0;
        while p.eval(z).is_zero() {
            p = p.div_rem(&lin).0;
            k += 1;
        }
        k
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = fmt_q(c);
            terms.push(match i {
                0 => cs,
                1 => format!("{cs}*t"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::qv;

    fn p(c: &[i64]) -> Poly {
        Poly::new(qv(c))
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[3, 0, -2, 5]);
        let d = p(&[1, 1]);
        let (qq, r) = a.div_rem(&d);
        assert_eq!(&(&qq * &d) + &r, a);
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn multiplicity_and_derivative() {
        let a = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        assert_eq!(a.root_multiplicity(&q(0)), 2);
        assert_eq!(a.root_multiplicity(&q(1)), 1);
        assert_eq!(a.derivative(), p(&[0, -2, 3]));
    }
}
