//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x -= q * y;
            }
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let y = r[j].clone();
                r[i] -= q * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if !self.a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        for t in 0..self.rows.min(self.cols) {
            loop {
                let Some((pi, pj)) = self.min_entry(t) else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = &self.a[i][t] / &self.a[t][t];
                        self.row_sub(i, t, &q);
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = &self.a[t][j] / &self.a[t][t];
                        self.col_sub(j, t, &q);
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_sub(t, i, &-BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form by pivoting on the entry of least absolute value.
/// The result is re-multiplied and checked before it is returned.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Snf> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Internal("ragged integer matrix".into()));
    }
    let mut r = Reducer { a: m.clone(), u: identity(rows), v: identity(cols), rows, cols };
    r.reduce();
    let snf = Snf { d: r.a, u: r.u, v: r.v };
    if mul(&mul(&snf.u, m), &snf.v) != snf.d {
        return Err(Error::Internal("Smith form does not satisfy U M V = D".into()));
    }
    let diag = snf.diagonal();
    let off_diagonal = (0..rows).any(|i| (0..cols).any(|j| i != j && !snf.d[i][j].is_zero()));
    let chain = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    if off_diagonal || !chain || diag.iter().any(Signed::is_negative) {
        return Err(Error::Internal("Smith form is not in normal form".into()));
    }
    Ok(snf)
}

/// Determinant of an unimodular matrix must be a unit; used by tests.
pub fn determinant(m: &IntMatrix) -> BigInt {
    // fraction-free Bareiss elimination
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ck::matrix::ck_matrix;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for mut rest in combinations(n, k - 1) {
                if rest.first().is_none_or(|&r| r > first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
        }
        out
    }

    /// Invariant factors as quotients of successive gcds of k-minors.
    fn factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut divisors = vec![BigInt::one()];
        for k in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for rs in combinations(rows, k) {
                for cs in combinations(cols, k) {
                    let sub: IntMatrix =
                        rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    g = g.gcd(&determinant(&sub));
                }
            }
            divisors.push(g);
        }
        (1..divisors.len())
            .map(|k| {
                if divisors[k].is_zero() {
                    BigInt::zero()
                } else {
                    &divisors[k] / &divisors[k - 1]
                }
            })
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_matrix() {
        let m = from_i64(&[vec![0, 0], vec![0, 0], vec![0, 0]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.d, m);
        assert_eq!(s.u, identity(3));
        assert_eq!(s.v, identity(2));
    }

    #[test]
    fn small_example() {
        let s = smith_normal_form(&from_i64(&[vec![2, 4], vec![6, 8]])).unwrap();
        assert_eq!(s.diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn ck_rank_two_has_two_zero_factors() {
        let a = ck_matrix(2).unwrap();
        let m: IntMatrix = (0..4)
            .map(|i| (0..4).map(|j| BigInt::from(i64::from(i == j) - i64::from(a.rows[i][j]))).collect())
            .collect();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), ints(&[1, 1, 0, 0]));
        assert_eq!(factors_by_minors(&m), s.diagonal());
    }

    #[test]
    fn transforms_are_unimodular() {
        let m = from_i64(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5], vec![3, 5, 8]]);
        let s = smith_normal_form(&m).unwrap();
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
        assert_eq!(s.diagonal(), factors_by_minors(&m));
    }

    proptest! {
        #[test]
        fn agrees_with_determinantal_divisors(
            (rows, cols, entries) in (1usize..=4, 1usize..=4)
                .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c)))
        ) {
            let m: Vec<Vec<i64>> = entries.chunks(cols).map(<[i64]>::to_vec).collect();
            prop_assert_eq!(m.len(), rows);
            let m = from_i64(&m);
            let s = smith_normal_form(&m).unwrap();
            prop_assert_eq!(s.diagonal(), factors_by_minors(&m));
            prop_assert!(determinant(&s.u).abs().is_one());
            prop_assert!(determinant(&s.v).abs().is_one());
        }
    }
}
