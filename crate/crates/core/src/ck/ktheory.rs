use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{ck_matrix, ZeroOneMatrix};
use super::snf::{smith_normal_form, IntMatrix, Snf};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityOrder {
    Finite(BigInt),
    Infinite,
}

/// `K0 = Z^r (+) torsion`, the order of the unit class, and `K1 = Z^r'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KInvariant {
    pub k0_free_rank: usize,
    pub k0_torsion: Vec<BigInt>,
    pub identity_order: IdentityOrder,
    pub k1_rank: usize,
}

impl fmt::Display for KInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.k0_free_rank > 0 {
            parts.push(format!("Z^{}", self.k0_free_rank));
        }
        parts.extend(self.k0_torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        let order = match &self.identity_order {
            IdentityOrder::Finite(n) => n.to_string(),
            IdentityOrder::Infinite => "infinity".into(),
        };
        write!(
            f,
            "K0 = {}, [1] has order {}, K1 = Z^{}",
            parts.join(" (+) "),
            order,
            self.k1_rank
        )
    }
}

fn i_minus(a: &ZeroOneMatrix) -> IntMatrix {
    let n = a.order();
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j) - i64::from(a.rows[i][j]))).collect())
        .collect()
}

/// Cokernel of the row space of `relations` and the order of `element`
/// in it.
fn presented_group(relations: &IntMatrix, element: &[BigInt]) -> Result<(Snf, usize, IdentityOrder)> {
    let snf = smith_normal_form(relations)?;
    let gens = element.len();
    // x lies in the row space of M iff x V lies in the row space of D
    let coords: Vec<BigInt> = (0..gens)
        .map(|j| element.iter().zip(&snf.v).map(|(x, row)| x * &row[j]).sum())
        .collect();
    let diag = snf.diagonal();
    let mut order = BigInt::one();
    let mut infinite = false;
    for (j, w) in coords.iter().enumerate() {
        let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            infinite |= !w.is_zero();
        } else {
            order = order.lcm(&(&d / d.gcd(w)));
        }
    }
    let free = gens - snf.rank();
    let order = if infinite { IdentityOrder::Infinite } else { IdentityOrder::Finite(order) };
    Ok((snf, free, order))
}

/// K-theory of the Cuntz-Krieger algebra of `a`: `K0 = coker(I - A)` on
/// rows, `K1 = ker(I - A)`, and the class of the unit `(1, ..., 1)`.
pub fn k_groups_of_matrix(a: &ZeroOneMatrix) -> Result<KInvariant> {
    let m = i_minus(a);
    let unit = vec![BigInt::one(); a.order()];
    let (snf, free, identity_order) = presented_group(&m, &unit)?;
    Ok(KInvariant {
        k0_free_rank: free,
        k0_torsion: snf.torsion(),
        identity_order,
        k1_rank: a.order() - snf.rank(),
    })
}

/// Relations of `coker(I - A)` rewritten over `x1..xg, e` where `e` is the
/// unit class: the relation for `x` reads `x + x^-1 = e`, which eliminates
/// every inverse letter, and `e = sum of all letters` becomes `(g-1) e = 0`.
fn rewritten_presentation(gamma: usize, m: &IntMatrix) -> IntMatrix {
    let rewrite = |row: &[BigInt]| -> Vec<BigInt> {
        let mut out: Vec<BigInt> = (0..gamma).map(|i| &row[2 * i] - &row[2 * i + 1]).collect();
        let mut e: BigInt = (0..gamma).map(|i| row[2 * i + 1].clone()).sum();
        if row.len() > 2 * gamma {
            e += &row[2 * gamma];
        }
        out.push(e);
        out
    };
    let mut rows: IntMatrix = m.iter().map(|r| rewrite(r)).collect();
    let mut definition = vec![-BigInt::one(); 2 * gamma];
    definition.push(BigInt::one());
    rows.push(rewrite(&definition));
    rows
}

pub fn k_groups(gamma: usize) -> Result<KInvariant> {
    let a = ck_matrix(gamma)?;
    let direct = k_groups_of_matrix(&a)?;

    let relations = rewritten_presentation(gamma, &i_minus(&a));
    let mut unit = vec![BigInt::zero(); gamma];
    unit.push(BigInt::one());
    let (snf, free, order) = presented_group(&relations, &unit)?;
    if free != direct.k0_free_rank || snf.torsion() != direct.k0_torsion || order != direct.identity_order {
        return Err(Error::Internal(format!(
            "K0 routes disagree for rank {gamma}: {direct} versus free rank {free}, torsion {:?}",
            snf.torsion()
        )));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k = k_groups(3).unwrap();
        assert_eq!(k.to_string(), "K0 = Z^3 (+) Z/2, [1] has order 2, K1 = Z^3");
        let k = k_groups(2).unwrap();
        assert_eq!((k.k0_free_rank, k.k0_torsion.len(), k.k1_rank), (2, 0, 2));
        assert_eq!(k.identity_order, IdentityOrder::Finite(BigInt::one()));
        let k = k_groups(5).unwrap();
        assert_eq!(k.identity_order, IdentityOrder::Finite(BigInt::from(4)));
        assert_eq!(k_groups(1), Err(Error::RankTooSmall(1)));
    }

    #[test]
    fn unit_class_order_by_direct_search() {
        // smallest k with k * (1,...,1) in the row space of I - A
        for gamma in 2..=6usize {
            let a = ck_matrix(gamma).unwrap();
            let m = i_minus(&a);
            let snf = smith_normal_form(&m).unwrap();
            let diag = snf.diagonal();
            let in_image = |k: i64| {
                (0..2 * gamma).all(|j| {
                    let w: BigInt = snf.v.iter().map(|row| BigInt::from(k) * &row[j]).sum();
                    let d = &diag[j];
                    if d.is_zero() { w.is_zero() } else { (w % d).is_zero() }
                })
            };
            let order = (1..=gamma as i64).find(|&k| in_image(k)).unwrap();
            assert_eq!(order, (gamma - 1) as i64);
        }
    }

    #[test]
    fn permutation_matrix_has_infinite_unit() {
        let k = k_groups_of_matrix(&ZeroOneMatrix::identity(2)).unwrap();
        assert_eq!(k.k0_free_rank, 2);
        assert_eq!(k.identity_order, IdentityOrder::Infinite);
    }
}
