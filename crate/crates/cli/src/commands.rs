use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use treelattice::boundary::pairing::verify_pairing;
use treelattice::boundary::{delta_spectrum, full_group_pairing, radon_nikodym, ratio_set_classification, SpectrumOptions};
use treelattice::ck::{ck_matrix, k_groups, verify_ck_partition, ZeroOneMatrix};
use treelattice::completion::{complete_to_equal_cycles, CompletionContext};
use treelattice::covering::{
    busemann, fixed_ends, ray_catalog, translation_length, Letter, Ray, SpanningData, TreeVertex,
};
use treelattice::graph::{
    covolume_identity_check, graph_invariants, validate_lattice_input, Dart, Graph, InvariantReport,
};
use treelattice::report::{
    AttachLoopDto, BusemannDto, CkMatrixDto, CompletionDto, InvariantsDto, KTheoryDto, PairingDto, PartitionDto,
    RatioSetDto, RayDto, Rational, SpectrumDto, ValidationDto,
};

use crate::input::load_graph;
use crate::{Cli, Command, Failure, Format, EXIT_VALIDATION};

/// Report text, or an optional partial report together with the failure.
pub type Outcome = Result<String, (Option<String>, Failure)>;

fn fail<E: Into<Failure>>(e: E) -> (Option<String>, Failure) {
    (None, e.into())
}

fn emit<T: Serialize>(format: Format, dto: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(dto).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(dto),
    }
}

fn join(v: &[String]) -> String {
    if v.is_empty() {
        "O".to_string()
    } else {
        v.join(" ")
    }
}

/// Loads a graph and insists on connectivity and minimum degree 3.
fn lattice_graph(path: &Path) -> Result<Graph, Failure> {
    let g = load_graph(path)?;
    let report = validate_lattice_input(&g);
    if report.passed() {
        Ok(g)
    } else {
        let reasons: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        Err(Failure { code: EXIT_VALIDATION, kind: "validation", message: reasons.join("; ") })
    }
}

fn parse_path(g: &Graph, text: &str) -> Result<Vec<Dart>, Failure> {
    if text.trim() == "O" {
        return Ok(Vec::new());
    }
    Ok(g.parse_darts(text)?)
}

fn options(cli: &Cli, inv: &InvariantReport) -> SpectrumOptions {
    let mut opts = SpectrumOptions::defaults(inv);
    if let Some(l) = cli.word_bound {
        opts.word_bound = l.get();
    }
    opts.catalog_prefix = cli.catalog_prefix.get();
    opts.catalog_period = cli.catalog_period.get();
    opts
}

pub fn run(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Validate { graph } => {
            let g = load_graph(graph).map_err(fail)?;
            let dto = ValidationDto::new(&g, &validate_lattice_input(&g));
            let out = emit(f, &dto, |d| {
                let mut s = format!("vertices={}\nedges={}\n", d.vertices, d.edges);
                for v in &d.violations {
                    let _ = writeln!(s, "violation: {v}");
                }
                let _ = writeln!(s, "validation {}", if d.passed { "passed" } else { "failed" });
                s
            });
            if dto.passed {
                Ok(out)
            } else {
                let message = format!("{} violation(s)", dto.violations.len());
                Err((Some(out), Failure { code: EXIT_VALIDATION, kind: "validation", message }))
            }
        }
        Command::Invariants { graph } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let inv = graph_invariants(&g, cli.budget).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let cov = covolume_identity_check(&g).ok();
            let dto = InvariantsDto::new(&g, &inv, &sd, cov.as_ref());
            Ok(emit(f, &dto, invariants_text))
        }
        Command::CkMatrix { graph, gamma } => {
            let (labels, a) = match graph {
                Some(path) => {
                    let g = lattice_graph(path).map_err(fail)?;
                    let sd = SpanningData::new(&g);
                    let labels = sd.letters().into_iter().map(|l| sd.letter_name(l)).collect();
                    (labels, ck_matrix(sd.rank()).map_err(fail)?)
                }
                None => {
                    let gamma = gamma.expect("clap requires --gamma without a graph");
                    (abstract_labels(gamma), ck_matrix(gamma).map_err(fail)?)
                }
            };
            let dto = CkMatrixDto::new(labels, &a);
            Ok(emit(f, &dto, |d| ck_matrix_text(d, &a)))
        }
        Command::Ktheory { graph, gamma } => {
            let gamma = match graph {
                Some(path) => SpanningData::new(&lattice_graph(path).map_err(fail)?).rank(),
                None => gamma.expect("clap requires --gamma without a graph"),
            };
            let k = k_groups(gamma).map_err(fail)?;
            let dto = KTheoryDto::new(gamma, &k);
            Ok(emit(f, &dto, |d| format!("{}\n", d.summary)))
        }
        Command::CkPartition { graph } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let report = verify_ck_partition(&sd).map_err(fail)?;
            let dto = PartitionDto::new(&sd, &report);
            Ok(emit(f, &dto, partition_text))
        }
        Command::RatioSet { graph } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let inv = graph_invariants(&g, cli.budget).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let report = ratio_set_classification(&sd, &inv, options(cli, &inv)).map_err(fail)?;
            let dto = RatioSetDto::new(&sd, &report);
            Ok(emit(f, &dto, ratio_set_text))
        }
        Command::DeltaSpectrum { graph } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let inv = graph_invariants(&g, cli.budget).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let opts = options(cli, &inv);
            let rays = ray_catalog(&sd, opts.catalog_prefix, opts.catalog_period);
            let spectrum = delta_spectrum(&sd, opts.word_bound, &rays);
            let dto = SpectrumDto::new(&sd, opts.word_bound, &spectrum);
            Ok(emit(f, &dto, spectrum_text))
        }
        Command::Busemann { graph, word, ray } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let w = sd.parse_word(word).map_err(fail)?.reduced();
            let omega = Ray::parse(&sd, ray).map_err(fail)?;
            let ends = fixed_ends(&sd, &w).ok();
            let dto = BusemannDto {
                word: sd.format_word(&w),
                ray: RayDto::new(&g, &omega),
                delta: busemann(&sd, &w, &omega),
                radon_nikodym: radon_nikodym(&sd, &w, &omega).ok().as_ref().map(Rational::from),
                translation_length: translation_length(&sd, &w).ok(),
                attracting_end: ends.as_ref().map(|(a, _)| RayDto::new(&g, a)),
                repelling_end: ends.as_ref().map(|(_, r)| RayDto::new(&g, r)),
            };
            Ok(emit(f, &dto, busemann_text))
        }
        Command::Pairing { graph, u, v } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let ctx = CompletionContext::new(&g, cli.budget).map_err(fail)?;
            let u = TreeVertex { path: parse_path(&g, u).map_err(fail)? };
            let v = TreeVertex { path: parse_path(&g, v).map_err(fail)? };
            let table = full_group_pairing(&ctx, &sd, &u, &v, cli.rounds.get()).map_err(fail)?;
            verify_pairing(&sd, &table).map_err(fail)?;
            let dto = PairingDto::new(&sd, &table);
            Ok(emit(f, &dto, pairing_text))
        }
        Command::CompleteCycles { graph, p1, p2 } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let sd = SpanningData::new(&g);
            let ctx = CompletionContext::new(&g, cli.budget).map_err(fail)?;
            let p1 = parse_path(&g, p1).map_err(fail)?;
            let p2 = parse_path(&g, p2).map_err(fail)?;
            for p in [&p1, &p2] {
                sd.check_proper_from_base(p).map_err(fail)?;
            }
            if p1.len() != p2.len() {
                return Err(fail(treelattice::Error::DepthMismatch(p1.len(), p2.len())));
            }
            let (c1, c2, cert) = complete_to_equal_cycles(&ctx, &p1, &p2).map_err(fail)?;
            let dto = CompletionDto::new(&g, &p1, &p2, &c1, &c2, &cert);
            Ok(emit(f, &dto, completion_text))
        }
        Command::AttachLoop { graph, dart } => {
            let g = lattice_graph(graph).map_err(fail)?;
            let ctx = CompletionContext::new(&g, cli.budget).map_err(fail)?;
            let e = g.parse_dart(dart.trim()).map_err(fail)?;
            let cycle = ctx.loop_at(e);
            let bound = ctx.diameter + ctx.max_circuit;
            let dto = AttachLoopDto {
                dart: g.dart_name(e),
                base: g.vertex_id(g.terminus(e)).to_string(),
                cycle: g.path_names(cycle),
                length: cycle.len(),
                bound,
                within_bound: cycle.len() <= bound,
            };
            Ok(emit(f, &dto, |d| {
                format!(
                    "dart={}\nbase={}\ncycle={}\nlength={}\nbound={}\nwithin_bound={}\n",
                    d.dart,
                    d.base,
                    d.cycle.join(" "),
                    d.length,
                    d.bound,
                    d.within_bound
                )
            }))
        }
    }
}

fn abstract_labels(gamma: usize) -> Vec<String> {
    (0..2 * gamma)
        .map(Letter::from_index)
        .map(|l| {
            let base = format!("x{}", l.generator + 1);
            if l.inverse {
                format!("{base}^-1")
            } else {
                base
            }
        })
        .collect()
}

fn invariants_text(d: &InvariantsDto) -> String {
    let mut s = String::new();
    let opt = |x: Option<usize>| x.map_or("none".to_string(), |v| v.to_string());
    let _ = writeln!(s, "n0={}\nn1={}\nchi={}\ngamma={}\nbipartite={}", d.n0, d.n1, d.chi, d.gamma, d.bipartite);
    if let Some([a, b]) = &d.coloring {
        let _ = writeln!(s, "coloring={} | {}", a.join(" "), b.join(" "));
    }
    if let Some(c) = &d.odd_circuit {
        let _ = writeln!(s, "odd_circuit={}", c.join(" "));
    }
    let _ = writeln!(s, "diameter={}\nmax_circuit={}", d.diameter, d.max_circuit);
    let _ = writeln!(s, "regular_degree={}\nq={}", opt(d.regular_degree), opt(d.q));
    let _ = writeln!(s, "tree_edges={}\ngenerators={}", d.tree_edges.join(" "), d.generators.join(" "));
    if let Some(c) = &d.covolume {
        let _ = writeln!(
            s,
            "covolume: gamma-1={} (q-1)n0/2={} holds={}",
            c.gamma_minus_one, c.half_q_minus_one_times_n0, c.holds
        );
    }
    s
}

fn ck_matrix_text(d: &CkMatrixDto, a: &ZeroOneMatrix) -> String {
    let width = d.labels.iter().map(String::len).max().unwrap_or(1);
    let mut s = format!("{:width$}", "");
    for l in &d.labels {
        let _ = write!(s, " {l:>width$}");
    }
    s.push('\n');
    for (l, row) in d.labels.iter().zip(&a.rows) {
        let _ = write!(s, "{l:>width$}");
        for x in row {
            let _ = write!(s, " {x:>width$}");
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "irreducible={} permutation={} admissible={}",
        d.irreducible, d.permutation, d.admissible
    );
    s
}

fn partition_text(d: &PartitionDto) -> String {
    let mut s = String::new();
    for p in &d.pi {
        let cylinders: Vec<String> = p.cylinders.iter().map(|c| join(c)).collect();
        let measure = p.measure.as_ref().map_or("n/a".to_string(), ToString::to_string);
        let _ = writeln!(s, "Pi({}) = {{{}}} measure={measure}", p.letter, cylinders.join(", "));
    }
    let total = d.total_measure.as_ref().map_or("n/a".to_string(), ToString::to_string);
    let _ = writeln!(
        s,
        "disjoint_pairs={} covers_boundary={} inverse_identities={} product_identities={} total_measure={total}",
        d.disjoint_pairs, d.covers_boundary, d.inverse_identities, d.product_identities
    );
    s
}

fn witness_lines(s: &mut String, witnesses: &[treelattice::report::WitnessDto]) {
    for w in witnesses {
        let ray = format!("{} | {}", w.ray.prefix.join(" "), w.ray.period.join(" "));
        let _ = writeln!(
            s,
            "delta={} word={} ray=({}) constant on {}",
            w.delta,
            w.word,
            ray.trim_start(),
            join(&w.cylinder)
        );
    }
}

fn ratio_set_text(d: &RatioSetDto) -> String {
    let mut s = format!(
        "q={}\nbipartite={}\nlambda={}\ngcd={}\ntype {}\nfactor: {}\n",
        d.q, d.bipartite, d.lambda, d.generator_gcd, d.classification, d.factor
    );
    let _ = writeln!(
        s,
        "word_bound={} catalog_prefix={} catalog_period={} spectrum_size={}",
        d.word_bound, d.catalog_prefix, d.catalog_period, d.spectrum_size
    );
    witness_lines(&mut s, &d.witnesses);
    s
}

fn spectrum_text(d: &SpectrumDto) -> String {
    let values: Vec<String> = d.values.iter().map(ToString::to_string).collect();
    let mut s = format!(
        "word_bound={} words={} rays={}\nvalues={}\ngcd={}\n",
        d.word_bound,
        d.words,
        d.rays,
        values.join(" "),
        d.gcd
    );
    witness_lines(&mut s, &d.witnesses);
    s
}

fn ray_text(r: &RayDto) -> String {
    format!("{} | {}", r.prefix.join(" "), r.period.join(" ")).trim_start().to_string()
}

fn busemann_text(d: &BusemannDto) -> String {
    let mut s = format!("word={}\nray={}\ndelta={}\n", d.word, ray_text(&d.ray), d.delta);
    if let Some(r) = &d.radon_nikodym {
        let _ = writeln!(s, "radon_nikodym={r}");
    }
    if let Some(l) = d.translation_length {
        let _ = writeln!(s, "translation_length={l}");
    }
    if let (Some(a), Some(r)) = (&d.attracting_end, &d.repelling_end) {
        let _ = writeln!(s, "attracting_end={}\nrepelling_end={}", ray_text(a), ray_text(r));
    }
    s
}

fn pairing_text(d: &PairingDto) -> String {
    let mut s = format!("u={}\nv={}\nq={} K={} rounds={}\n", join(&d.u), join(&d.v), d.q, d.bound, d.rounds);
    for t in &d.triples {
        let _ = writeln!(
            s,
            "round {}: {} -> {} by {} measure={}",
            t.round,
            join(&t.source),
            join(&t.target),
            t.word,
            t.measure
        );
    }
    for (j, (u, g)) in d.uncovered.iter().zip(&d.guaranteed).enumerate() {
        let _ = writeln!(s, "after round {}: uncovered={u} bound={g}", j + 1);
    }
    s
}

fn completion_text(d: &CompletionDto) -> String {
    let case = serde_json::to_value(d.case).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut s = format!(
        "p1={}\np2={}\nc1={}\nc2={}\nn={} k={} K={} within_bound={}\ncase={case} distance={} s={} p0={}\n",
        join(&d.p1),
        join(&d.p2),
        join(&d.c1),
        join(&d.c2),
        d.n,
        d.k,
        d.bound,
        d.within_bound,
        d.distance,
        d.s,
        d.p0
    );
    if !d.r.is_empty() {
        let _ = writeln!(s, "r={}", d.r.join(" "));
    }
    for det in &d.detours {
        let _ = writeln!(s, "detour={}", det.join(" "));
    }
    if let Some(c) = &d.odd_circuit {
        let _ = writeln!(s, "odd_circuit={}", c.join(" "));
    }
    if let (Some(a), Some(b)) = (&d.s1, &d.s2) {
        let _ = writeln!(s, "s1={}\ns2={}", join(a), join(b));
    }
    s
}
