use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::measure::BoundaryMeasure;
use crate::covering::{busemann_from_path, ray_catalog, reduced_words, Ray, SpanningData, TreeVertex, Word};
use crate::error::{Error, Result};
use crate::graph::InvariantReport;

pub const DEFAULT_CATALOG_PREFIX: usize = 3;
pub const DEFAULT_CATALOG_PERIOD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub word_bound: usize,
    pub catalog_prefix: usize,
    pub catalog_period: usize,
}

impl SpectrumOptions {
    /// Words up to `max(6, diam + maxCircuit + 2)`, rays with prefix at
    /// most 3 and period at most 4.
    pub fn defaults(inv: &InvariantReport) -> SpectrumOptions {
        SpectrumOptions {
            word_bound: 6.max(inv.diameter + inv.max_circuit + 2),
            catalog_prefix: DEFAULT_CATALOG_PREFIX,
            catalog_period: DEFAULT_CATALOG_PERIOD,
        }
    }
}

/// A Busemann value together with an open set on which it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaWitness {
    pub word: Word,
    pub ray: Ray,
    pub delta: i64,
    /// `delta(word, .)` is constant on this cylinder.
    pub cylinder: TreeVertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSpectrum {
    pub values: Vec<i64>,
    pub gcd: u64,
    pub words: usize,
    pub rays: usize,
    /// First pair realising each value, in enumeration order.
    pub witnesses: Vec<DeltaWitness>,
}

/// All values `delta(w, omega)` for reduced `w` with `|w| <= word_bound`
/// and `omega` in `rays`.
pub fn delta_spectrum(sd: &SpanningData, word_bound: usize, rays: &[Ray]) -> DeltaSpectrum {
    let words = reduced_words(sd.rank(), word_bound);
    let mut found: BTreeMap<i64, (usize, usize, usize)> = BTreeMap::new();
    for (wi, w) in words.iter().enumerate() {
        let path = sd.word_path(w);
        for (ri, ray) in rays.iter().enumerate() {
            let delta = busemann_from_path(&path, ray);
            found.entry(delta).or_insert((wi, ri, path.len()));
        }
    }
    let gcd = found.keys().fold(0u64, |g, &d| g.gcd(&d.unsigned_abs()));
    let witnesses = found
        .iter()
        .map(|(&delta, &(wi, ri, len))| DeltaWitness {
            word: words[wi].clone(),
            ray: rays[ri].clone(),
            delta,
            cylinder: rays[ri].vertex_at(len + 1),
        })
        .collect();
    DeltaSpectrum {
        values: found.keys().copied().collect(),
        gcd,
        words: words.len(),
        rays: rays.len(),
        witnesses,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioSetReport {
    pub q: u32,
    pub bipartite: bool,
    pub lambda: BigRational,
    pub generator_gcd: u64,
    pub classification: String,
    pub factor: String,
    pub options: SpectrumOptions,
    pub spectrum_size: usize,
    /// Witnesses for the values of absolute value at most 2.
    pub witnesses: Vec<DeltaWitness>,
}

/// Type of the boundary action: `III_lambda` with `lambda = q^-gcd`, where
/// the gcd of the Busemann values is 2 for bipartite quotients and 1
/// otherwise. The empirical gcd must match.
pub fn ratio_set_classification(
    sd: &SpanningData,
    inv: &InvariantReport,
    options: SpectrumOptions,
) -> Result<RatioSetReport> {
    let m = BoundaryMeasure::new(sd.graph())?;
    let bipartite = inv.bipartite();
    let predicted: u64 = if bipartite { 2 } else { 1 };
    let rays = ray_catalog(sd, options.catalog_prefix, options.catalog_period);
    let spectrum = delta_spectrum(sd, options.word_bound, &rays);
    if spectrum.gcd != predicted {
        return Err(Error::Internal(format!(
            "Busemann values have gcd {} but the quotient is {}bipartite (word bound {}, {} rays)",
            spectrum.gcd,
            if bipartite { "" } else { "not " },
            options.word_bound,
            rays.len()
        )));
    }
    let lambda = m.power(-(predicted as i64));
    let classification = format!("III_{{{lambda}}}");
    let factor = format!("hyperfinite factor of type {classification}");
    let witnesses = spectrum.witnesses.iter().filter(|w| w.delta.abs() <= 2).cloned().collect();
    Ok(RatioSetReport {
        q: m.q,
        bipartite,
        lambda,
        generator_gcd: spectrum.gcd,
        classification,
        factor,
        options,
        spectrum_size: spectrum.values.len(),
        witnesses,
    })
}

/// `lambda` as a fraction `1/q^k`.
pub fn lambda_of(q: u32, bipartite: bool) -> BigRational {
    let k = if bipartite { 2 } else { 1 };
    BigRational::new(BigInt::from(1), BigInt::from(q).pow(k))
}
