//! Elements of the graded algebra `Q(t)[M]`: finite sums of `f_m chi^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ratfunc::RatFunc;
use crate::lattice::{LatticeVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedElement {
    terms: BTreeMap<LatticeVector, RatFunc>,
}

impl GradedElement {
    pub fn zero() -> GradedElement {
        GradedElement::default()
    }

    /// `f chi^m`.
    pub fn term(m: LatticeVector, f: RatFunc) -> GradedElement {
        let mut g = GradedElement::zero();
        g.add_term(m, f);
        g
    }

    /// `chi^m`.
    pub fn chi(m: LatticeVector) -> GradedElement {
        GradedElement::term(m, RatFunc::one())
    }

    /// `f chi^0` in rank `n`.
    pub fn scalar(n: usize, f: RatFunc) -> GradedElement {
        GradedElement::term(vec![0; n], f)
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: LatticeVector, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn coefficient(&self, m: &[i64]) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn scale(&self, c: &Rational) -> GradedElement {
        self.map_coeffs(|f| f.scale(c))
    }

    pub fn mul_ratfunc(&self, g: &RatFunc) -> GradedElement {
        self.map_coeffs(|f| f * g)
    }

    /// Multiplies by `chi^e`.
    pub fn shift(&self, e: &[i64]) -> GradedElement {
        let mut out = GradedElement::zero();
        for (m, f) in &self.terms {
            out.add_term(m.iter().zip(e).map(|(a, b)| a + b).collect(), f.clone());
        }
        out
    }

    fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> GradedElement {
        let mut out = GradedElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// The single degree of a homogeneous nonzero element.
    pub fn homogeneous_degree(&self) -> Option<&LatticeVector> {
        match self.terms.len() {
            1 => self.terms.keys().next(),
            _ => None,
        }
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, o: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (m, f) in &o.terms {
            out.add_term(m.clone(), f.clone());
        }
        out
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, o: &GradedElement) -> GradedElement {
        self + &(-o)
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.map_coeffs(|f| -f)
    }
}

impl Mul for &GradedElement {
    type Output = GradedElement;
    fn mul(self, o: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), f * g);
            }
        }
        out
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let ms: Vec<String> = m.iter().map(i64::to_string).collect();
                format!("({c})*chi^({})", ms.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
