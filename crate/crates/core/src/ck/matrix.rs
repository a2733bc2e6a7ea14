use std::fmt;

use crate::error::{Error, Result};

/// Square {0,1} matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroOneMatrix {
    pub rows: Vec<Vec<u8>>,
}

impl ZeroOneMatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn identity(n: usize) -> ZeroOneMatrix {
        ZeroOneMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect(),
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &ZeroOneMatrix) -> ZeroOneMatrix {
        let (n, m) = (self.order(), other.order());
        let mut rows = vec![vec![0u8; n + m]; n + m];
        for i in 0..n {
            rows[i][..n].copy_from_slice(&self.rows[i]);
        }
        for i in 0..m {
            rows[n + i][n..].copy_from_slice(&other.rows[i]);
        }
        ZeroOneMatrix { rows }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect()
    }
}

impl fmt::Display for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Transition matrix of reduced words over `x1, x1^-1, ..., xg, xg^-1`:
/// `y` may follow `x` unless `y = x^-1`.
pub fn ck_matrix(gamma: usize) -> Result<ZeroOneMatrix> {
    if gamma < 2 {
        return Err(Error::RankTooSmall(gamma));
    }
    let n = 2 * gamma;
    let rows = (0..n)
        .map(|x| (0..n).map(|y| u8::from(y != (x ^ 1))).collect())
        .collect();
    Ok(ZeroOneMatrix { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub irreducible: bool,
    pub permutation: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.irreducible && !self.permutation
    }
}

pub fn admissibility(a: &ZeroOneMatrix) -> AdmissibilityReport {
    let n = a.order();
    // reach[i][j]: a path of positive length from i to j
    let mut reach: Vec<Vec<bool>> =
        a.rows.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let irreducible = n > 0 && reach.iter().all(|r| r.iter().all(|&x| x));
    let permutation = a.rows.iter().all(|r| r.iter().filter(|&&x| x == 1).count() == 1)
        && (0..n).all(|j| a.rows.iter().filter(|r| r[j] == 1).count() == 1);
    AdmissibilityReport { irreducible, permutation }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_matrix() {
        let a = ck_matrix(2).unwrap();
        assert_eq!(
            a.rows,
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 1], vec![1, 1, 1, 0], vec![1, 1, 0, 1]]
        );
        assert_eq!(ck_matrix(1), Err(Error::RankTooSmall(1)));
        assert_eq!(ck_matrix(3).unwrap().row_sums(), vec![5; 6]);
    }

    #[test]
    fn symmetric_with_constant_row_sums() {
        for gamma in 2..=8 {
            let a = ck_matrix(gamma).unwrap();
            assert!(a.is_symmetric());
            assert!(a.row_sums().iter().all(|&s| s == 2 * gamma - 1));
        }
    }

    #[test]
    fn admissibility_examples() {
        let a = ck_matrix(2).unwrap();
        assert!(admissibility(&a).admissible());
        let id = admissibility(&ZeroOneMatrix::identity(2));
        assert!(id.permutation && !id.admissible());
        let block = admissibility(&a.direct_sum(&a));
        assert!(!block.irreducible && !block.permutation);
    }
}
