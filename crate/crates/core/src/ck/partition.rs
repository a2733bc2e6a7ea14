use num_rational::BigRational;

use super::cylinder::{pi_cylinder, CylinderSet};
use crate::covering::{Letter, SpanningData, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiEntry {
    pub letter: Letter,
    pub cylinder: CylinderSet,
    pub measure: Option<BigRational>,
}

/// Outcome of checking that the generator cylinders realise the
/// Cuntz-Krieger relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub entries: Vec<PiEntry>,
    pub disjoint_pairs: usize,
    pub inverse_identities: usize,
    pub product_identities: usize,
    pub total_measure: Option<BigRational>,
}

fn failure(identity: String, cylinder: &CylinderSet, sd: &SpanningData) -> Error {
    Error::CkIdentity { identity, cylinder: cylinder.format(sd.graph()) }
}

/// Checks that the `Pi_x` for the letters `x` are pairwise disjoint and
/// cover the boundary, that `x Pi_{x^-1}` is the complement of `Pi_x`, and
/// that `x Pi_y = Pi_{xy}` whenever `y != x^-1`.
pub fn verify_ck_partition(sd: &SpanningData) -> Result<PartitionReport> {
    let q = sd.graph().branching().ok();
    let letters = sd.letters();
    let pis: Vec<CylinderSet> = letters.iter().map(|&l| pi_cylinder(sd, &Word::letter(l))).collect();
    let name = |l: Letter| sd.letter_name(l);

    let mut disjoint_pairs = 0;
    for i in 0..pis.len() {
        for j in i + 1..pis.len() {
            let common = pis[i].intersect(sd, &pis[j]);
            if !common.is_empty() {
                let id = format!("Pi_{} and Pi_{} disjoint", name(letters[i]), name(letters[j]));
                return Err(failure(id, &common, sd));
            }
            disjoint_pairs += 1;
        }
    }
    let union = pis.iter().fold(CylinderSet::empty(), |acc, p| acc.union(sd, p));
    if !union.is_boundary() {
        return Err(failure("union of Pi_x is the boundary".into(), &union.complement(sd), sd));
    }

    let mut inverse_identities = 0;
    let mut product_identities = 0;
    for (i, &x) in letters.iter().enumerate() {
        let xw = Word::letter(x);
        let xpath = sd.word_path(&xw);
        for (j, &y) in letters.iter().enumerate() {
            let image = pis[j].translate(sd, &xpath);
            if y == x.inv() {
                let expected = pis[i].complement(sd);
                if image != expected {
                    let id = format!("{} Pi_{} = complement of Pi_{}", name(x), name(y), name(x));
                    return Err(failure(id, &image, sd));
                }
                inverse_identities += 1;
            } else {
                let expected = pi_cylinder(sd, &xw.mul(&Word::letter(y)));
                if image != expected {
                    let id = format!("{} Pi_{} = Pi_{{{} {}}}", name(x), name(y), name(x), name(y));
                    return Err(failure(id, &image, sd));
                }
                product_identities += 1;
            }
        }
    }

    let entries: Vec<PiEntry> = letters
        .iter()
        .zip(pis)
        .map(|(&letter, cylinder)| PiEntry {
            letter,
            measure: q.map(|q| cylinder.measure(q)),
            cylinder,
        })
        .collect();
    let total_measure = q.map(|_| entries.iter().filter_map(|e| e.measure.clone()).sum());
    Ok(PartitionReport {
        entries,
        disjoint_pairs,
        inverse_identities,
        product_identities,
        total_measure,
    })
}
