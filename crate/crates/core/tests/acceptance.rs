//! Acceptance criteria, one line each. Every check is exact; the only
//! numeric thresholds are the runtime budgets below.

use std::panic;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use treelattice::boundary::pairing::verify_pairing;
use treelattice::boundary::{full_group_pairing, ratio_set_classification, BoundaryMeasure, SpectrumOptions};
use treelattice::ck::{ck_matrix, k_groups, smith_normal_form, verify_ck_partition, IdentityOrder};
use treelattice::completion::{complete_to_equal_cycles, is_proper, CompletionContext};
use treelattice::covering::{
    busemann_from_path, proper_paths, ray_catalog, reduced_words, SpanningData, TreeVertex,
};
use treelattice::fixtures;
use treelattice::graph::{graph_invariants, Dart, Graph, DEFAULT_CIRCUIT_BUDGET};

const CLASSIFICATION_BUDGET: Duration = Duration::from_secs(5);
const KTHEORY_BUDGET: Duration = Duration::from_secs(1);
const COMPLETION_BUDGET: Duration = Duration::from_secs(60);

const SPECTRUM_WORD_BOUND: usize = 6;
const COCYCLE_WORD_BOUND: usize = 3;
const COMPLETION_MAX_LENGTH: usize = 5;
const PAIRING_MAX_DEPTH: usize = 3;
const PAIRING_ROUNDS: usize = 5;
const MEASURE_DEPTH: usize = 6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named(name: &str) -> Graph {
    fixtures::all().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn type_classification() -> Outcome {
    let start = Instant::now();
    let expected = [("theta", 4), ("dumbbell", 2), ("bouquet", 3)];
    let mut seen = Vec::new();
    for (name, den) in expected {
        let g = named(name);
        let inv = graph_invariants(&g, DEFAULT_CIRCUIT_BUDGET).map_err(|e| e.to_string())?;
        let sd = SpanningData::new(&g);
        let r = ratio_set_classification(&sd, &inv, SpectrumOptions::defaults(&inv)).map_err(|e| e.to_string())?;
        let lambda = BigRational::new(BigInt::one(), BigInt::from(den));
        ensure(r.lambda == lambda, || format!("{name}: lambda {} != 1/{den}", r.lambda))?;
        ensure(r.classification == format!("III_{{1/{den}}}"), || format!("{name}: {}", r.classification))?;
        seen.push(format!("{name} {}", r.classification));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CLASSIFICATION_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.2?}", seen.join(", ")))
}

fn k_theory() -> Outcome {
    let start = Instant::now();
    for gamma in 2..=8usize {
        let k = k_groups(gamma).map_err(|e| e.to_string())?;
        let torsion: Vec<BigInt> = if gamma >= 3 { vec![BigInt::from(gamma - 1)] } else { vec![] };
        ensure(k.k0_free_rank == gamma && k.k0_torsion == torsion, || format!("gamma {gamma}: {k}"))?;
        ensure(k.k1_rank == gamma, || format!("gamma {gamma}: nullity {}", k.k1_rank))?;
        ensure(k.identity_order == IdentityOrder::Finite(BigInt::from(gamma - 1)), || {
            format!("gamma {gamma}: {k}")
        })?;
        // invariant factors of I - A: gamma - 1 ones, then gamma - 1, then gamma zeros
        let a = ck_matrix(gamma).map_err(|e| e.to_string())?;
        let n = 2 * gamma;
        let m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j) - i64::from(a.rows[i][j]))).collect())
            .collect();
        let diag = smith_normal_form(&m).map_err(|e| e.to_string())?.diagonal();
        let mut expected = vec![BigInt::one(); gamma - 1];
        expected.push(BigInt::from(gamma - 1));
        expected.extend(vec![BigInt::zero(); gamma]);
        ensure(diag == expected, || format!("gamma {gamma}: invariant factors {diag:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < KTHEORY_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("gamma 2..=8 give Z^g (+) Z/(g-1), nullity g, [1] of order g-1, in {elapsed:.2?}"))
}

fn ck_relations() -> Outcome {
    let mut checked = 0;
    for (name, g) in fixtures::all() {
        let sd = SpanningData::new(&g);
        let r = verify_ck_partition(&sd).map_err(|e| format!("{name}: {e}"))?;
        let q = g.branching().map_err(|e| e.to_string())?;
        let total = BigRational::from_integer(BigInt::from(q + 1));
        ensure(r.total_measure.as_ref() == Some(&total), || format!("{name}: total {:?}", r.total_measure))?;
        checked += r.disjoint_pairs + r.inverse_identities + r.product_identities;
    }
    Ok(format!("5 fixtures, {checked} cylinder identities, total mass q+1 everywhere"))
}

fn busemann_spectrum() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (name, g) in fixtures::all() {
        let inv = graph_invariants(&g, DEFAULT_CIRCUIT_BUDGET).map_err(|e| e.to_string())?;
        let sd = SpanningData::new(&g);
        let mut opts = SpectrumOptions::defaults(&inv);
        opts.word_bound = SPECTRUM_WORD_BOUND;
        let rays = ray_catalog(&sd, opts.catalog_prefix, opts.catalog_period);
        let spectrum = treelattice::boundary::delta_spectrum(&sd, SPECTRUM_WORD_BOUND, &rays);
        let want = if inv.bipartite() { 2 } else { 1 };
        if spectrum.gcd != want {
            failures.push(format!("{name}: gcd {} != {want}", spectrum.gcd));
        }

        // the grid: |g|, |h| <= 3 and every catalog ray
        let words = reduced_words(sd.rank(), COCYCLE_WORD_BOUND);
        let paths: Vec<Vec<Dart>> = words.iter().map(|w| sd.word_path(w)).collect();
        let (mut total, mut literal, mut reversed) = (0u64, 0u64, 0u64);
        let mut example = None;
        for (hi, h) in words.iter().enumerate() {
            let h_inv_path = sd.word_path(&h.inverse());
            for ray in &rays {
                let h_ray = ray.translate(&paths[hi]);
                let d_h = busemann_from_path(&paths[hi], ray);
                for (gi, gw) in words.iter().enumerate() {
                    let gh = sd.word_path(&gw.mul(h));
                    let d_gh = busemann_from_path(&gh, ray);
                    total += 1;
                    // delta(gh, w) = delta(g, h w) + delta(h, w)
                    if d_gh == busemann_from_path(&paths[gi], &h_ray) + d_h {
                        literal += 1;
                    } else if example.is_none() {
                        example = Some(format!(
                            "g={} h={} ray=({}) gives {} vs {}",
                            sd.format_word(gw),
                            sd.format_word(h),
                            ray.format(&g),
                            d_gh,
                            busemann_from_path(&paths[gi], &h_ray) + d_h
                        ));
                    }
                    // delta(hg, w) = delta(h, w) + delta(g, h^-1 w)
                    let hg = sd.word_path(&h.mul(gw));
                    let back = ray.translate(&h_inv_path);
                    if busemann_from_path(&hg, ray) == d_h + busemann_from_path(&paths[gi], &back) {
                        reversed += 1;
                    }
                }
            }
        }
        if literal != total {
            failures.push(format!(
                "{name}: delta(gh,w) = delta(g,hw) + delta(h,w) on {literal}/{total} ({})",
                example.unwrap_or_default()
            ));
        }
        notes.push(format!(
            "{name} gcd {} literal {literal}/{total} with g^-1 acting {reversed}/{total}",
            spectrum.gcd
        ));
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{} | {}", failures.join("; "), notes.join("; ")))
    }
}

/// `ok[k]`: a proper walk of length `k` from the end of `p` to the base
/// continues `p` without backtracking.
fn extension_lengths(g: &Graph, p: &[Dart], max: usize) -> Vec<bool> {
    let start = g.path_end(0, p);
    let mut ok = vec![false; max + 1];
    ok[0] = start == 0;
    let mut layer = vec![false; g.dart_count()];
    for &d in g.out_darts(start) {
        if p.last().is_none_or(|&l| d != l.partner()) {
            layer[d.0 as usize] = true;
        }
    }
    for slot in ok.iter_mut().skip(1) {
        let mut next = vec![false; g.dart_count()];
        for d in g.darts().filter(|d| layer[d.0 as usize]) {
            *slot |= g.terminus(d) == 0;
            for &e in g.out_darts(g.terminus(d)) {
                if e != d.partner() {
                    next[e.0 as usize] = true;
                }
            }
        }
        layer = next;
    }
    ok
}

fn completion_soundness() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0u64;
    let mut worst = (0usize, 0usize);
    let mut loop_failures = Vec::new();
    for (name, g) in fixtures::all() {
        let ctx = CompletionContext::new(&g, DEFAULT_CIRCUIT_BUDGET).map_err(|e| e.to_string())?;
        let loop_bound = ctx.diameter + ctx.max_circuit;
        for e in g.darts() {
            let l = ctx.loop_at(e);
            let sound = is_proper(&g, l).unwrap_or(false)
                && g.origin(l[0]) == g.terminus(e)
                && g.path_end(g.terminus(e), l) == g.terminus(e)
                && l.iter().all(|d| d.edge() != e.edge());
            ensure(sound, || format!("{name}: loop at {} is not a proper cycle avoiding it", g.dart_name(e)))?;
            if l.len() > loop_bound {
                loop_failures.push(format!(
                    "{name} {}: loop {} has length {} > diam + maxCircuit = {loop_bound}",
                    g.dart_name(e),
                    g.format_path(l),
                    l.len()
                ));
            }
        }
        let bound = ctx.bound();
        for n in 0..=COMPLETION_MAX_LENGTH {
            let paths = proper_paths(&g, 0, n);
            let feasible: Vec<Vec<bool>> = paths.iter().map(|p| extension_lengths(&g, p, bound)).collect();
            for (i, p1) in paths.iter().enumerate() {
                for (j, p2) in paths.iter().enumerate() {
                    let (c1, c2, cert) = complete_to_equal_cycles(&ctx, p1, p2).map_err(|e| e.to_string())?;
                    let ok = c1.len() == c2.len()
                        && c1.starts_with(p1)
                        && c2.starts_with(p2)
                        && is_proper(&g, &c1).unwrap_or(false)
                        && is_proper(&g, &c2).unwrap_or(false)
                        && g.path_end(0, &c1) == 0
                        && g.path_end(0, &c2) == 0
                        && cert.k <= bound
                        && feasible[i][cert.k]
                        && feasible[j][cert.k];
                    ensure(ok, || {
                        format!("{name}: {} / {} gave k = {} (K = {bound})", g.format_path(p1), g.format_path(p2), cert.k)
                    })?;
                    let k_star = (0..=bound).find(|&k| feasible[i][k] && feasible[j][k]).unwrap();
                    ensure(k_star <= cert.k, || format!("{name}: oracle minimum {k_star} above {}", cert.k))?;
                    if cert.k > worst.0 {
                        worst = (cert.k, bound);
                    }
                    pairs += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < COMPLETION_BUDGET, || format!("took {elapsed:?}"))?;
    let summary = format!(
        "{pairs} path pairs completed soundly, largest k {} (K {}), in {elapsed:.2?}",
        worst.0, worst.1
    );
    if loop_failures.is_empty() {
        Ok(format!("{summary}; every attached loop within diam + maxCircuit"))
    } else {
        Err(format!("{} | {summary}", loop_failures.join("; ")))
    }
}

fn pairing() -> Outcome {
    let mut runs = 0;
    let mut triples = 0;
    for (name, g) in fixtures::all() {
        let sd = SpanningData::new(&g);
        let ctx = CompletionContext::new(&g, DEFAULT_CIRCUIT_BUDGET).map_err(|e| e.to_string())?;
        for depth in 1..=PAIRING_MAX_DEPTH {
            let vs = proper_paths(&g, 0, depth);
            let first = TreeVertex { path: vs[0].clone() };
            let last = TreeVertex { path: vs[vs.len() - 1].clone() };
            for (u, v) in [(&first, &first), (&first, &last)] {
                let t = full_group_pairing(&ctx, &sd, u, v, PAIRING_ROUNDS).map_err(|e| e.to_string())?;
                verify_pairing(&sd, &t).map_err(|e| format!("{name} depth {depth}: {e}"))?;
                let mut previous = t.initial_measure();
                for j in 1..=PAIRING_ROUNDS {
                    let un = &t.uncovered[j - 1];
                    ensure(*un <= t.guaranteed(j), || format!("{name} depth {depth} round {j}: {un} above bound"))?;
                    ensure(*un <= previous, || format!("{name} depth {depth} round {j}: uncovered grew"))?;
                    previous = un.clone();
                }
                runs += 1;
                triples += t.triples.len();
            }
        }
    }
    Ok(format!("{runs} pairings of depth 1..=3 over {PAIRING_ROUNDS} rounds, {triples} exact triples"))
}

fn measure_consistency() -> Outcome {
    let mut vertices = 0;
    for (name, g) in fixtures::all() {
        let sd = SpanningData::new(&g);
        let m = BoundaryMeasure::new(&g).map_err(|e| e.to_string())?;
        let mut layer = vec![TreeVertex::root()];
        for _ in 0..MEASURE_DEPTH {
            let mut next = Vec::new();
            for v in &layer {
                let children = v.children(&sd);
                let sum: BigRational = children.iter().map(|c| m.cylinder(c)).sum();
                ensure(sum == m.cylinder(v), || format!("{name}: {} is not additive", v.format(&g)))?;
                vertices += 1;
                next.extend(children);
            }
            layer = next;
        }
        ensure(m.cylinder(&TreeVertex::root()) == m.total(), || format!("{name}: total mass"))?;
        ensure(m.total() == BigRational::from_integer(BigInt::from(m.q + 1)), || format!("{name}: q+1"))?;
    }
    Ok(format!("{vertices} vertices to depth {MEASURE_DEPTH} additive, total mass q+1"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("type classification of the three examples", type_classification),
        ("K-theory for ranks 2..=8", k_theory),
        ("Cuntz-Krieger relations as cylinder identities", ck_relations),
        ("Busemann gcd and cocycle identity", busemann_spectrum),
        ("cycle completion and loop attachment", completion_soundness),
        ("full-group pairing", pairing),
        ("measure consistency", measure_consistency),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
