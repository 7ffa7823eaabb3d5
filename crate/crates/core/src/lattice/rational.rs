//! Exact rationals and small dense linear algebra over them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
/// A rational vector. Whether it lives in `M` or `N` is tracked by the owner.
pub type QVector = Vec<Rational>;
/// An integral vector.
pub type LatticeVector = Vec<i64>;

/// Which of the two dual lattices a vector or cone lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    M,
    N,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::M => Side::N,
            Side::N => Side::M,
        }
    }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qv(v: &[i64]) -> QVector {
    v.iter().map(|&x| q(x)).collect()
}

pub fn zero_vec(n: usize) -> QVector {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> QVector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> QVector {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Rational]) -> QVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn is_integral(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Least common multiple of the denominators, i.e. the smallest `k > 0`
/// with `k * v` integral.
pub fn mu_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Positive multiple of `v` that is a primitive integer vector. Zero stays zero.
pub fn primitive(v: &[Rational]) -> QVector {
    if is_zero(v) {
        return v.to_vec();
    }
    let l = mu_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Converts an integral rational vector to machine integers.
pub fn to_lattice(v: &[Rational]) -> Option<LatticeVector> {
    v.iter()
        .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
        .collect()
}

pub fn floor(x: &Rational) -> Rational {
    x.floor()
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_q(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<QVector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r] = scale(&inv, &rows[r]);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[QVector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : a.x = 0 for all rows a}` in `Q^n`.
pub fn nullspace(rows: &[QVector], n: usize) -> Vec<QVector> {
    let mut m: Vec<QVector> = rows.iter().filter(|r| !is_zero(r)).cloned().collect();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zero_vec(n);
            v[f] = Rational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of the span of `vecs`: reduced echelon rows made primitive
/// with positive leading entry.
pub fn canonical_span(vecs: &[QVector]) -> Vec<QVector> {
    let mut m: Vec<QVector> = vecs.iter().filter(|r| !is_zero(r)).cloned().collect();
    rref(&mut m);
    m.iter().map(|r| primitive(r)).collect()
}

/// Solves `sum c_i basis_i = v` if `v` is in the rational span.
pub fn solve_in_span(basis: &[QVector], v: &[Rational]) -> Option<QVector> {
    let n = v.len();
    let k = basis.len();
    // Augmented system with unknown coefficients as columns.
    let mut rows: Vec<QVector> = (0..n)
        .map(|i| {
            let mut r: QVector = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = zero_vec(k);
    for (row, &pc) in rows.iter().zip(&pivots) {
        sol[pc] = row[k].clone();
    }
    Some(sol)
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
