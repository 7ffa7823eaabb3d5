//! Smith normal form with unimodular transforms, and sublattices built on it.

use super::rational::*;

pub type IntMatrix = Vec<Vec<i64>>;

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0] | d[1] | ...`, all non-negative.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[i][i]).collect()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &IntMatrix, x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

fn swap_rows(a: &mut IntMatrix, i: usize, j: usize) {
    a.swap(i, j);
}

fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// row_i -= f * row_j
fn row_axpy(a: &mut IntMatrix, i: usize, j: usize, f: i64) {
    let rj = a[j].clone();
    for (x, y) in a[i].iter_mut().zip(rj) {
        *x -= f * y;
    }
}

fn col_axpy(a: &mut IntMatrix, i: usize, j: usize, f: i64) {
    for row in a.iter_mut() {
        let y = row[j];
        row[i] -= f * y;
    }
}

pub fn smith(a: &IntMatrix, ncols: usize) -> Snf {
    let nrows = a.len();
    let mut d = a.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                let f = d[i][t].div_euclid(d[t][t]);
                if f != 0 {
                    row_axpy(&mut d, i, t, f);
                    row_axpy(&mut u, i, t, f);
                }
                if d[i][t] != 0 {
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                let f = d[t][j].div_euclid(d[t][t]);
                if f != 0 {
                    col_axpy(&mut d, j, t, f);
                    col_axpy(&mut v, j, t, f);
                }
                if d[t][j] != 0 {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending entry into row t.
            let bad = (t + 1..nrows)
                .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % d[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    row_axpy(&mut d, t, i, -1);
                    row_axpy(&mut u, t, i, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let rank = (0..nrows.min(ncols)).take_while(|&i| d[i][i] != 0).count();
    Snf { u, d, v, rank }
}

/// Inverse of a unimodular matrix, by exact rational elimination.
pub fn unimodular_inverse(a: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut rows: Vec<QVector> = (0..n)
        .map(|i| {
            let mut r = qv(&a[i]);
            r.extend(unit_vec(n, i));
            r
        })
        .collect();
    rref(&mut rows);
    rows.iter()
        .map(|r| to_lattice(&r[n..]).expect("unimodular inverse is integral"))
        .collect()
}

/// `offset + span_Z(basis)`, or a plain lattice when there is no offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub rank: usize,
    pub basis: Vec<LatticeVector>,
    pub offset: Option<QVector>,
}

impl Sublattice {
    pub fn full(rank: usize) -> Sublattice {
        Sublattice { rank, basis: identity(rank), offset: None }
    }

    pub fn new(rank: usize, basis: Vec<LatticeVector>) -> Sublattice {
        Sublattice { rank, basis, offset: None }
    }

    /// Basis vectors as columns.
    fn column_matrix(&self) -> IntMatrix {
        (0..self.rank).map(|i| self.basis.iter().map(|b| b[i]).collect()).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let shifted = match &self.offset {
            Some(o) => sub(v, o),
            None => v.to_vec(),
        };
        let Some(x) = to_lattice(&shifted) else { return false };
        if self.basis.is_empty() {
            return x.iter().all(|c| *c == 0);
        }
        let snf = smith(&self.column_matrix(), self.basis.len());
        let ux = mat_vec(&snf.u, &x);
        ux.iter().enumerate().all(|(i, &c)| if i < snf.rank { c % snf.d[i][i] == 0 } else { c == 0 })
    }

    /// `span_Q(L) ∩ Z^n`.
    pub fn saturation(&self) -> Sublattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let snf = smith(&self.column_matrix(), self.basis.len());
        let uinv = unimodular_inverse(&snf.u);
        let basis = (0..snf.rank).map(|j| uinv.iter().map(|row| row[j]).collect()).collect();
        Sublattice { rank: self.rank, basis, offset: None }
    }

    /// The same lattice with its reduced echelon basis when that basis
    /// still generates it (always the case for saturated lattices of
    /// small rank in practice); otherwise unchanged.
    pub fn echelon(&self) -> Sublattice {
        let qb: Vec<QVector> = self.basis.iter().map(|b| qv(b)).collect();
        let Some(ech) = canonical_span(&qb).iter().map(|v| to_lattice(v)).collect::<Option<Vec<_>>>() else {
            return self.clone();
        };
        let cand = Sublattice { rank: self.rank, basis: ech, offset: self.offset.clone() };
        if self.basis.iter().all(|b| cand.contains(&qv(b))) {
            cand
        } else {
            self.clone()
        }
    }

    pub fn is_saturated(&self) -> bool {
        let snf = smith(&self.column_matrix(), self.basis.len());
        snf.diagonal().iter().all(|&d| d == 1)
    }
}

/// `{x in Z^n : a.x = 0 for every row a}`, a saturated lattice.
pub fn integer_kernel(rows: &[LatticeVector], n: usize) -> Sublattice {
    if rows.is_empty() {
        return Sublattice::full(n);
    }
    let snf = smith(&rows.to_vec(), n);
    let basis = (snf.rank..n).map(|j| snf.v.iter().map(|row| row[j]).collect()).collect();
    Sublattice::new(n, basis)
}

/// Unimodular `u` with `u * rho = e_0` for a primitive `rho`.
/// Rows `1..n` of `u` then give coordinates on `Z^n / Z rho`.
pub fn complete_primitive(rho: &[i64]) -> IntMatrix {
    let col: IntMatrix = rho.iter().map(|&x| vec![x]).collect();
    let snf = smith(&col, 1);
    assert_eq!(snf.d[0][0], 1, "vector must be primitive");
    // u rho v = e_0 with v = [±1].
    let s = snf.v[0][0];
    snf.u.iter().map(|row| row.iter().map(|x| x * s).collect()).collect()
}

pub fn lattice_member(v: &[Rational], l: &Sublattice) -> bool {
    l.contains(v)
}
