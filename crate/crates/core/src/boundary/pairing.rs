//! Finite approximation of a measure-preserving map `Omega_u -> Omega_v`
//! in the full group of the boundary action.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::measure::BoundaryMeasure;
use crate::ck::cylinder::{translate_cylinder, CylinderSet};
use crate::completion::{complete_to_equal_cycles, CompletionContext};
use crate::covering::{free_reduce, SpanningData, TreeVertex, Word};
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};

/// `word * Omega_source = Omega_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub source: TreeVertex,
    pub target: TreeVertex,
    pub word: Word,
    pub measure: BigRational,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub u: TreeVertex,
    pub v: TreeVertex,
    pub rounds: usize,
    pub q: u32,
    /// Completion bound `K`.
    pub bound: usize,
    pub triples: Vec<Triple>,
    /// Unmatched measure of `Omega_u` after each round.
    pub uncovered: Vec<BigRational>,
}

impl PairingTable {
    pub fn initial_measure(&self) -> BigRational {
        BoundaryMeasure { q: self.q }.cylinder(&self.u)
    }

    /// `(1 - q^(-K-1))^j mu(Omega_u)`.
    pub fn guaranteed(&self, j: usize) -> BigRational {
        let m = BoundaryMeasure { q: self.q };
        let factor = BigRational::one() - m.power(-(self.bound as i64) - 1);
        num_traits::pow(factor, j) * self.initial_measure()
    }
}

/// Vertices of `Omega_top` not under `bottom`: the siblings along the path
/// from `top` down to `bottom`, shallowest first.
fn siblings_along(sd: &SpanningData, top: &TreeVertex, bottom: &TreeVertex) -> Vec<TreeVertex> {
    let g = sd.graph();
    let mut out = Vec::new();
    for depth in top.depth()..bottom.depth() {
        let prefix = &bottom.path[..depth];
        let back = prefix.last().map(|d| d.partner());
        let at = prefix.last().map_or(sd.base(), |&d| g.terminus(d));
        for &d in g.out_darts(at) {
            if Some(d) != back && d != bottom.path[depth] {
                let mut path = Vec::with_capacity(depth + 1);
                path.extend_from_slice(prefix);
                path.push(d);
                out.push(TreeVertex { path });
            }
        }
    }
    out
}

fn first_free_dart(sd: &SpanningData, avoid: &[Dart]) -> Result<Dart> {
    let g = sd.graph();
    g.out_darts(sd.base())
        .iter()
        .copied()
        .find(|d| !avoid.contains(d))
        .ok_or_else(|| Error::Internal("no continuation dart at the base vertex".into()))
}

/// Runs `rounds` rounds of matching subcylinders of `Omega_u` with
/// subcylinders of `Omega_v` by group elements. Each pending pair `(w, z)`
/// is completed to cycles `C_w`, `C_z` of equal length, continued by a
/// common dart `e`, and `Omega_{C_w e}` is sent to `Omega_{C_z e}`; the
/// leftover sibling cylinders are paired by depth for the next round.
pub fn full_group_pairing(
    ctx: &CompletionContext,
    sd: &SpanningData,
    u: &TreeVertex,
    v: &TreeVertex,
    rounds: usize,
) -> Result<PairingTable> {
    let m = BoundaryMeasure::new(sd.graph())?;
    if u.depth() != v.depth() {
        return Err(Error::DepthMismatch(u.depth(), v.depth()));
    }
    if u.depth() == 0 {
        return Err(Error::InvalidPath("pairing needs cylinders of depth at least 1".into()));
    }
    for w in [u, v] {
        sd.check_proper_from_base(&w.path)?;
    }
    let mut table = PairingTable {
        u: u.clone(),
        v: v.clone(),
        rounds,
        q: m.q,
        bound: ctx.bound(),
        triples: Vec::new(),
        uncovered: Vec::new(),
    };
    if u == v {
        if rounds > 0 {
            table.triples.push(Triple {
                source: u.clone(),
                target: v.clone(),
                word: Word::identity(),
                measure: m.cylinder(u),
                round: 1,
            });
        }
        table.uncovered = vec![BigRational::zero(); rounds];
        return Ok(table);
    }

    let mut powers: Vec<BigRational> = Vec::new();
    let mut measure_at = |depth: usize| -> BigRational {
        while powers.len() <= depth {
            powers.push(m.power(1 - powers.len() as i64));
        }
        powers[depth].clone()
    };
    let mut pending = vec![(u.clone(), v.clone())];
    for round in 1..=rounds {
        let mut next = Vec::new();
        for (w, z) in &pending {
            let (cw, cz, _) = complete_to_equal_cycles(ctx, &w.path, &z.path)?;
            let avoid = [cw.last().unwrap().partner(), cz.last().unwrap().partner()];
            let e = first_free_dart(sd, &avoid)?;
            let mut w1 = cw.clone();
            w1.push(e);
            let mut z1 = cz.clone();
            z1.push(e);
            let word = sd.word_of_path(&cz).mul(&sd.word_of_path(&cw).inverse());
            // proper cycles lift to geodesics, so gO lies at the end of C_z C_w^-1
            let mut g_path = cz;
            g_path.extend(Graph::reverse_path(&cw));
            let g_path = free_reduce(&g_path);
            let (w1, z1) = (TreeVertex { path: w1 }, TreeVertex { path: z1 });

            let image = translate_cylinder(sd, &g_path, &w1);
            if image != CylinderSet::cylinder(z1.clone()) {
                return Err(Error::Internal(format!(
                    "{} does not carry {} to {}",
                    sd.format_word(&word),
                    w1.format(sd.graph()),
                    z1.format(sd.graph())
                )));
            }
            let left = siblings_along(sd, w, &w1);
            let right = siblings_along(sd, z, &z1);
            debug_assert!(left.iter().zip(&right).all(|(a, b)| a.depth() == b.depth()));
            next.extend(left.into_iter().zip(right));
            table.triples.push(Triple {
                measure: measure_at(w1.depth()),
                source: w1,
                target: z1,
                word,
                round,
            });
        }
        pending = next;
        let mut by_depth: BTreeMap<usize, u64> = BTreeMap::new();
        for (w, _) in &pending {
            *by_depth.entry(w.depth()).or_default() += 1;
        }
        let uncovered = by_depth
            .iter()
            .map(|(&d, &count)| BigRational::from_integer(count.into()) * m.power(1 - d as i64))
            .sum();
        table.uncovered.push(uncovered);
    }
    Ok(table)
}

/// Checks that sources are disjoint inside `Omega_u`, targets disjoint
/// inside `Omega_v`, each triple is exact, and the uncovered measure
/// accounts for everything not matched.
pub fn verify_pairing(sd: &SpanningData, table: &PairingTable) -> Result<()> {
    let m = BoundaryMeasure { q: table.q };
    for (side, root) in [(0, &table.u), (1, &table.v)] {
        let mut vs: Vec<&TreeVertex> = table
            .triples
            .iter()
            .map(|t| if side == 0 { &t.source } else { &t.target })
            .collect();
        vs.sort();
        if let Some(v) = vs.iter().find(|v| !root.is_prefix_of(v)) {
            return Err(Error::Internal(format!("{} escapes its cylinder", v.format(sd.graph()))));
        }
        if let Some(w) = vs.windows(2).find(|w| w[0].is_prefix_of(w[1])) {
            return Err(Error::Internal(format!("{} overlaps {}", w[0].format(sd.graph()), w[1].format(sd.graph()))));
        }
    }
    let max_depth = table.triples.iter().map(|t| t.source.depth().max(t.target.depth())).max();
    let powers: Vec<BigRational> = (0..=max_depth.unwrap_or(0) as i64).map(|d| m.power(1 - d)).collect();
    for t in &table.triples {
        let image = translate_cylinder(sd, &sd.word_path(&t.word), &t.source);
        if image != CylinderSet::cylinder(t.target.clone())
            || powers[t.source.depth()] != t.measure
            || powers[t.target.depth()] != t.measure
        {
            return Err(Error::Internal(format!("triple at {} is not exact", t.source.format(sd.graph()))));
        }
    }
    let mut matched: BTreeMap<usize, u64> = BTreeMap::new();
    for j in 1..=table.rounds {
        for t in table.triples.iter().filter(|t| t.round == j) {
            *matched.entry(t.source.depth()).or_default() += 1;
        }
        let covered: BigRational = matched
            .iter()
            .map(|(&d, &count)| BigRational::from_integer(count.into()) * m.power(1 - d as i64))
            .sum();
        if covered + &table.uncovered[j - 1] != table.initial_measure() {
            return Err(Error::Internal(format!("measure is not conserved in round {j}")));
        }
    }
    Ok(())
}
