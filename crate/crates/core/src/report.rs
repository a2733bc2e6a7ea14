//! Serializable reports. Paths are written as dart names, rationals as
//! numerator/denominator strings.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::boundary::{DeltaSpectrum, DeltaWitness, PairingTable, RatioSetReport};
use crate::ck::{IdentityOrder, KInvariant, PartitionReport, ZeroOneMatrix};
use crate::completion::{CompletionCase, CompletionCertificate};
use crate::covering::{Ray, SpanningData, TreeVertex};
use crate::graph::{BipartiteWitness, CovolumeReport, Dart, Graph, InvariantReport, ValidationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Rational {
    fn from(r: &BigRational) -> Rational {
        Rational { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl Rational {
    pub fn to_big(&self) -> Option<BigRational> {
        Some(BigRational::new(self.num.parse().ok()?, self.den.parse().ok()?))
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == "1" {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn names(g: &Graph, path: &[Dart]) -> Vec<String> {
    g.path_names(path)
}

fn vertex_names(g: &Graph, v: &TreeVertex) -> Vec<String> {
    g.path_names(&v.path)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationDto {
    pub passed: bool,
    pub vertices: usize,
    pub edges: usize,
    pub violations: Vec<String>,
}

impl ValidationDto {
    pub fn new(g: &Graph, r: &ValidationReport) -> ValidationDto {
        let violations = r.violations.iter().map(Violation::to_string).collect();
        ValidationDto { passed: r.passed(), vertices: g.vertex_count(), edges: g.edge_count(), violations }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CovolumeDto {
    pub q: usize,
    pub n0: usize,
    pub gamma_minus_one: i64,
    pub half_q_minus_one_times_n0: String,
    pub holds: bool,
}

impl From<&CovolumeReport> for CovolumeDto {
    fn from(c: &CovolumeReport) -> CovolumeDto {
        let rhs = BigRational::new(c.rhs_times_two.into(), 2.into());
        CovolumeDto {
            q: c.q,
            n0: c.n0,
            gamma_minus_one: c.lhs,
            half_q_minus_one_times_n0: rhs.to_string(),
            holds: c.holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantsDto {
    pub n0: usize,
    pub n1: usize,
    pub chi: i64,
    pub gamma: usize,
    pub bipartite: bool,
    /// Vertex ids of colour 0 and colour 1.
    pub coloring: Option<[Vec<String>; 2]>,
    pub odd_circuit: Option<Vec<String>>,
    pub diameter: usize,
    pub max_circuit: usize,
    pub regular_degree: Option<usize>,
    pub q: Option<usize>,
    pub tree_edges: Vec<String>,
    pub generators: Vec<String>,
    pub covolume: Option<CovolumeDto>,
}

impl InvariantsDto {
    pub fn new(g: &Graph, inv: &InvariantReport, sd: &SpanningData, cov: Option<&CovolumeReport>) -> InvariantsDto {
        let (coloring, odd_circuit) = match &inv.witness {
            BipartiteWitness::Coloring(c) => {
                let side = |k: u8| {
                    (0..g.vertex_count()).filter(|&v| c[v] == k).map(|v| g.vertex_id(v).to_string()).collect()
                };
                (Some([side(0), side(1)]), None)
            }
            BipartiteWitness::OddCircuit(c) => (None, Some(names(g, &c.darts))),
        };
        InvariantsDto {
            n0: inv.n0,
            n1: inv.n1,
            chi: inv.chi,
            gamma: inv.gamma,
            bipartite: inv.bipartite(),
            coloring,
            odd_circuit,
            diameter: inv.diameter,
            max_circuit: inv.max_circuit,
            regular_degree: inv.regular_degree,
            q: inv.q(),
            tree_edges: sd.tree_edges().map(|e| g.edge_id(e).to_string()).collect(),
            generators: (0..sd.rank()).map(|i| sd.generator_label(i).to_string()).collect(),
            covolume: cov.map(CovolumeDto::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CkMatrixDto {
    pub gamma: usize,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<u8>>,
    pub irreducible: bool,
    pub permutation: bool,
    pub admissible: bool,
}

impl CkMatrixDto {
    pub fn new(labels: Vec<String>, a: &ZeroOneMatrix) -> CkMatrixDto {
        let adm = crate::ck::admissibility(a);
        CkMatrixDto {
            gamma: a.order() / 2,
            labels,
            rows: a.rows.clone(),
            irreducible: adm.irreducible,
            permutation: adm.permutation,
            admissible: adm.admissible(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KTheoryDto {
    pub gamma: usize,
    pub k0_free_rank: usize,
    pub k0_torsion: Vec<String>,
    /// Decimal order, or `infinite`.
    pub identity_order: String,
    pub k1_rank: usize,
    pub summary: String,
}

impl KTheoryDto {
    pub fn new(gamma: usize, k: &KInvariant) -> KTheoryDto {
        KTheoryDto {
            gamma,
            k0_free_rank: k.k0_free_rank,
            k0_torsion: k.k0_torsion.iter().map(ToString::to_string).collect(),
            identity_order: match &k.identity_order {
                IdentityOrder::Finite(n) => n.to_string(),
                IdentityOrder::Infinite => "infinite".into(),
            },
            k1_rank: k.k1_rank,
            summary: k.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PiDto {
    pub letter: String,
    pub cylinders: Vec<Vec<String>>,
    pub measure: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionDto {
    pub pi: Vec<PiDto>,
    pub disjoint_pairs: usize,
    pub covers_boundary: bool,
    pub inverse_identities: usize,
    pub product_identities: usize,
    pub total_measure: Option<Rational>,
}

impl PartitionDto {
    pub fn new(sd: &SpanningData, r: &PartitionReport) -> PartitionDto {
        let g = sd.graph();
        PartitionDto {
            pi: r
                .entries
                .iter()
                .map(|e| PiDto {
                    letter: sd.letter_name(e.letter),
                    cylinders: e.cylinder.vertices().iter().map(|v| vertex_names(g, v)).collect(),
                    measure: e.measure.as_ref().map(Rational::from),
                })
                .collect(),
            disjoint_pairs: r.disjoint_pairs,
            covers_boundary: true,
            inverse_identities: r.inverse_identities,
            product_identities: r.product_identities,
            total_measure: r.total_measure.as_ref().map(Rational::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RayDto {
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

impl RayDto {
    pub fn new(g: &Graph, r: &Ray) -> RayDto {
        RayDto { prefix: names(g, &r.prefix), period: names(g, &r.period) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessDto {
    pub word: String,
    pub ray: RayDto,
    pub delta: i64,
    pub cylinder: Vec<String>,
}

impl WitnessDto {
    pub fn new(sd: &SpanningData, w: &DeltaWitness) -> WitnessDto {
        WitnessDto {
            word: sd.format_word(&w.word),
            ray: RayDto::new(sd.graph(), &w.ray),
            delta: w.delta,
            cylinder: vertex_names(sd.graph(), &w.cylinder),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioSetDto {
    pub q: u32,
    pub bipartite: bool,
    pub lambda: Rational,
    pub generator_gcd: u64,
    pub classification: String,
    pub factor: String,
    pub word_bound: usize,
    pub catalog_prefix: usize,
    pub catalog_period: usize,
    pub spectrum_size: usize,
    pub witnesses: Vec<WitnessDto>,
}

impl RatioSetDto {
    pub fn new(sd: &SpanningData, r: &RatioSetReport) -> RatioSetDto {
        RatioSetDto {
            q: r.q,
            bipartite: r.bipartite,
            lambda: Rational::from(&r.lambda),
            generator_gcd: r.generator_gcd,
            classification: r.classification.clone(),
            factor: r.factor.clone(),
            word_bound: r.options.word_bound,
            catalog_prefix: r.options.catalog_prefix,
            catalog_period: r.options.catalog_period,
            spectrum_size: r.spectrum_size,
            witnesses: r.witnesses.iter().map(|w| WitnessDto::new(sd, w)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumDto {
    pub word_bound: usize,
    pub words: usize,
    pub rays: usize,
    pub values: Vec<i64>,
    pub gcd: u64,
    pub witnesses: Vec<WitnessDto>,
}

impl SpectrumDto {
    pub fn new(sd: &SpanningData, word_bound: usize, s: &DeltaSpectrum) -> SpectrumDto {
        SpectrumDto {
            word_bound,
            words: s.words,
            rays: s.rays,
            values: s.values.clone(),
            gcd: s.gcd,
            witnesses: s.witnesses.iter().map(|w| WitnessDto::new(sd, w)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BusemannDto {
    pub word: String,
    pub ray: RayDto,
    pub delta: i64,
    pub radon_nikodym: Option<Rational>,
    pub translation_length: Option<usize>,
    pub attracting_end: Option<RayDto>,
    pub repelling_end: Option<RayDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TripleDto {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub word: String,
    pub measure: Rational,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairingDto {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub rounds: usize,
    pub q: u32,
    pub bound: usize,
    pub triples: Vec<TripleDto>,
    pub uncovered: Vec<Rational>,
    pub guaranteed: Vec<Rational>,
}

impl PairingDto {
    pub fn new(sd: &SpanningData, t: &PairingTable) -> PairingDto {
        let g = sd.graph();
        PairingDto {
            u: vertex_names(g, &t.u),
            v: vertex_names(g, &t.v),
            rounds: t.rounds,
            q: t.q,
            bound: t.bound,
            triples: t
                .triples
                .iter()
                .map(|x| TripleDto {
                    source: vertex_names(g, &x.source),
                    target: vertex_names(g, &x.target),
                    word: sd.format_word(&x.word),
                    measure: Rational::from(&x.measure),
                    round: x.round,
                })
                .collect(),
            uncovered: t.uncovered.iter().map(Rational::from).collect(),
            guaranteed: (1..=t.rounds).map(|j| Rational::from(&t.guaranteed(j))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletionDto {
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub c1: Vec<String>,
    pub c2: Vec<String>,
    pub n: usize,
    pub k: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub case: CompletionCase,
    pub distance: usize,
    pub s: usize,
    pub p0: String,
    pub r: Vec<String>,
    pub detours: Vec<Vec<String>>,
    pub odd_circuit: Option<Vec<String>>,
    pub s1: Option<Vec<String>>,
    pub s2: Option<Vec<String>>,
}

impl CompletionDto {
    pub fn new(g: &Graph, p1: &[Dart], p2: &[Dart], c1: &[Dart], c2: &[Dart], c: &CompletionCertificate) -> CompletionDto {
        CompletionDto {
            p1: names(g, p1),
            p2: names(g, p2),
            c1: names(g, c1),
            c2: names(g, c2),
            n: c.n,
            k: c.k,
            bound: c.bound,
            within_bound: c.within_bound(),
            case: c.case,
            distance: c.distance,
            s: c.s,
            p0: g.vertex_id(c.p0).to_string(),
            r: names(g, &c.r),
            detours: c.detours.iter().map(|d| names(g, d)).collect(),
            odd_circuit: c.odd_circuit.as_ref().map(|d| names(g, d)),
            s1: c.s1.as_ref().map(|d| names(g, d)),
            s2: c.s2.as_ref().map(|d| names(g, d)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttachLoopDto {
    pub dart: String,
    pub base: String,
    pub cycle: Vec<String>,
    pub length: usize,
    /// `diam + maxCircuit`.
    pub bound: usize,
    pub within_bound: bool,
}
