//! Completing two proper paths of equal length to proper cycles of equal
//! length at the base vertex.

use std::collections::VecDeque;

use crate::covering::no_backtracking;
use crate::error::{Error, Result};
use crate::graph::{self, Dart, Graph};

/// True iff `path` is consecutive and has no backtracking.
pub fn is_proper(g: &Graph, path: &[Dart]) -> Result<bool> {
    g.check_consecutive(path, None)?;
    Ok(no_backtracking(path))
}

/// Shortest proper cycle at `t(e)` that avoids the edge of `e`.
pub fn attach_loop(g: &Graph, e: Dart) -> Result<Vec<Dart>> {
    let v = g.terminus(e);
    let n = g.dart_count();
    let mut prev: Vec<Option<Option<Dart>>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &d in g.out_darts(v) {
        if d.edge() != e.edge() && prev[d.0 as usize].is_none() {
            prev[d.0 as usize] = Some(None);
            queue.push_back(d);
        }
    }
    while let Some(d) = queue.pop_front() {
        if g.terminus(d) == v {
            let mut path = vec![d];
            let mut cur = d;
            while let Some(Some(p)) = prev[cur.0 as usize] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Ok(path);
        }
        for &next in g.out_darts(g.terminus(d)) {
            if next != d.partner() && next.edge() != e.edge() && prev[next.0 as usize].is_none() {
                prev[next.0 as usize] = Some(Some(d));
                queue.push_back(next);
            }
        }
    }
    Err(Error::Internal(format!("no loop avoids {} at its terminus", g.dart_name(e))))
}

/// Data shared by every completion on one graph.
#[derive(Clone, Debug)]
pub struct CompletionContext {
    graph: Graph,
    base: usize,
    pub diameter: usize,
    pub max_circuit: usize,
    odd_circuit: Option<Vec<Dart>>,
    loops: Vec<Vec<Dart>>,
    /// `paths[u][v]`: shortest path from `u` to `v`.
    paths: Vec<Vec<Vec<Dart>>>,
}

impl CompletionContext {
    pub fn new(g: &Graph, budget: u64) -> Result<CompletionContext> {
        let loops = g.darts().map(|d| attach_loop(g, d)).collect::<Result<Vec<_>>>()?;
        let paths = (0..g.vertex_count())
            .map(|u| {
                (0..g.vertex_count())
                    .map(|v| g.shortest_path(u, v).ok_or_else(|| Error::Internal("disconnected graph".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompletionContext {
            graph: g.clone(),
            base: 0,
            diameter: g.diameter(),
            max_circuit: graph::max_circuit_length(g, budget)?,
            odd_circuit: graph::odd_circuit(g).map(|c| c.darts),
            loops,
            paths,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// `10 + 10 diam + 6 maxCircuit`.
    pub fn bound(&self) -> usize {
        10 + 10 * self.diameter + 6 * self.max_circuit
    }

    pub fn loop_at(&self, e: Dart) -> &[Dart] {
        &self.loops[e.0 as usize]
    }

    pub fn path(&self, from: usize, to: usize) -> &[Dart] {
        &self.paths[from][to]
    }

    /// `e L e^-1` with `L` the loop attached to `e`.
    fn detour(&self, e: Dart) -> Vec<Dart> {
        let mut d = vec![e];
        d.extend_from_slice(self.loop_at(e));
        d.push(e.partner());
        d
    }

    fn pick_dart(&self, at: usize, avoid: &[Dart]) -> Result<Dart> {
        self.graph
            .out_darts(at)
            .iter()
            .copied()
            .find(|d| !avoid.contains(d))
            .ok_or_else(|| Error::Internal(format!("no free dart at {}", self.graph.vertex_id(at))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionCase {
    /// Endpoints coincide.
    EvenCoincident,
    /// Even distance `2s`, `s > 0`.
    EvenSplit,
    /// Odd distance `2s + 1`, balanced by an odd circuit.
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionCertificate {
    pub n: usize,
    pub k: usize,
    pub bound: usize,
    pub case: CompletionCase,
    pub distance: usize,
    pub s: usize,
    /// Vertex where the two halves meet before returning to the base.
    pub p0: usize,
    pub r: Vec<Dart>,
    /// Shared detours `e L e^-1`, in order of insertion.
    pub detours: Vec<Vec<Dart>>,
    pub odd_circuit: Option<Vec<Dart>>,
    pub s1: Option<Vec<Dart>>,
    pub s2: Option<Vec<Dart>>,
}

impl CompletionCertificate {
    pub fn within_bound(&self) -> bool {
        self.k <= self.bound
    }
}

struct Builder<'a> {
    ctx: &'a CompletionContext,
    c1: Vec<Dart>,
    c2: Vec<Dart>,
    detours: Vec<Vec<Dart>>,
}

impl Builder<'_> {
    fn end(&self) -> usize {
        let g = &self.ctx.graph;
        self.c1.last().map_or(self.ctx.base, |&d| g.terminus(d))
    }

    fn lasts(&self) -> Vec<Dart> {
        self.c1.last().into_iter().chain(self.c2.last()).map(|d| d.partner()).collect()
    }

    fn insert_detour(&mut self, avoid: &[Dart]) -> Result<()> {
        let e = self.ctx.pick_dart(self.end(), avoid)?;
        let d = self.ctx.detour(e);
        self.c1.extend_from_slice(&d);
        self.c2.extend_from_slice(&d);
        self.detours.push(d);
        Ok(())
    }

    /// Appends `a1` to the first cycle and `a2` to the second, inserting a
    /// shared detour first if either junction would backtrack.
    fn append(&mut self, a1: &[Dart], a2: &[Dart]) -> Result<()> {
        let bad1 = matches!((self.c1.last(), a1.first()), (Some(&l), Some(&f)) if f == l.partner());
        let bad2 = matches!((self.c2.last(), a2.first()), (Some(&l), Some(&f)) if f == l.partner());
        if bad1 || bad2 {
            let mut avoid = self.lasts();
            avoid.extend(a1.first().into_iter().chain(a2.first()));
            self.insert_detour(&avoid)?;
        }
        self.c1.extend_from_slice(a1);
        self.c2.extend_from_slice(a2);
        Ok(())
    }
}

/// Extends proper paths `p1`, `p2` of equal length from the base vertex to
/// proper cycles of equal length at the base vertex.
pub fn complete_to_equal_cycles(
    ctx: &CompletionContext,
    p1: &[Dart],
    p2: &[Dart],
) -> Result<(Vec<Dart>, Vec<Dart>, CompletionCertificate)> {
    let g = &ctx.graph;
    if p1.len() != p2.len() {
        return Err(Error::DepthMismatch(p1.len(), p2.len()));
    }
    for p in [p1, p2] {
        g.check_consecutive(p, Some(ctx.base))?;
        if !no_backtracking(p) {
            return Err(Error::InvalidPath(format!("{} backtracks", g.format_path(p))));
        }
    }
    let n = p1.len();
    let end1 = g.path_end(ctx.base, p1);
    let end2 = g.path_end(ctx.base, p2);
    let q = ctx.path(end1, end2).to_vec();
    let distance = q.len();
    let s = distance / 2;
    let mut b = Builder { ctx, c1: p1.to_vec(), c2: p2.to_vec(), detours: Vec::new() };

    let case = if distance == 0 {
        CompletionCase::EvenCoincident
    } else {
        let avoid1: Vec<Dart> = p1.last().map(|d| d.partner()).into_iter().chain([q[0]]).collect();
        let e1 = ctx.pick_dart(end1, &avoid1)?;
        let last_q = q[distance - 1].partner();
        let avoid2: Vec<Dart> = p2.last().map(|d| d.partner()).into_iter().chain([last_q]).collect();
        let e2 = ctx.pick_dart(end2, &avoid2)?;
        let (d1, d2) = (ctx.detour(e1), ctx.detour(e2));
        let back = Graph::reverse_path(&q);
        b.c1.extend(d1.iter().chain(&q).chain(&d2).chain(&Graph::reverse_path(&q[s..])));
        b.c2.extend(d2.iter().chain(&back).chain(&d1).chain(&q[..s]));
        b.detours.push(d1);
        b.detours.push(d2);
        if distance.is_multiple_of(2) {
            CompletionCase::EvenSplit
        } else {
            CompletionCase::Odd
        }
    };
    let p0 = g.path_end(end1, &q[..s]);
    let r = ctx.path(p0, ctx.base).to_vec();
    b.append(&r, &r)?;

    let mut odd = None;
    let (mut s1, mut s2) = (None, None);
    if case == CompletionCase::Odd {
        if r.is_empty() {
            let avoid = b.lasts();
            b.insert_detour(&avoid)?;
        }
        let circuit = ctx
            .odd_circuit
            .clone()
            .ok_or_else(|| Error::Internal("odd distance on a bipartite graph".into()))?;
        let on_circuit: Vec<usize> = circuit.iter().map(|&d| g.origin(d)).collect();
        let v1 = (0..g.vertex_count())
            .filter(|v| on_circuit.contains(v))
            .min_by_key(|&v| (ctx.path(ctx.base, v).len(), v))
            .expect("circuit is nonempty");
        let path1 = ctx.path(ctx.base, v1).to_vec();
        let mut c = circuit;
        let start = c.iter().position(|&d| g.origin(d) == v1).expect("v1 on circuit");
        c.rotate_left(start);
        let t = (c.len() - 1) / 2;
        let plus = c[..=t].to_vec();
        let minus = Graph::reverse_path(&c[t + 1..]);
        let v2 = g.terminus(c[t]);
        let path2 = ctx.path(v2, ctx.base).to_vec();
        b.append(&path1, &path1)?;
        b.append(&minus, &plus)?;
        b.append(&path2, &path2)?;
        odd = Some(c);
        s1 = Some(path1);
        s2 = Some(path2);
    }

    let Builder { c1, c2, detours, .. } = b;
    if c1.len() != c2.len() {
        return Err(Error::Internal("completed cycles differ in length".into()));
    }
    let cert = CompletionCertificate {
        n,
        k: c1.len() - n,
        bound: ctx.bound(),
        case,
        distance,
        s,
        p0,
        r,
        detours,
        odd_circuit: odd,
        s1,
        s2,
    };
    Ok((c1, c2, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::proper_paths;
    use crate::fixtures;

    /// Lengths `k <= max` of proper walks from the end of `p` to the base
    /// vertex that continue `p` without backtracking.
    fn extension_lengths(g: &Graph, p: &[Dart], max: usize) -> Vec<bool> {
        let start = g.path_end(0, p);
        let mut ok = vec![false; max + 1];
        ok[0] = start == 0;
        let mut layer: Vec<bool> = vec![false; g.dart_count()];
        for &d in g.out_darts(start) {
            if p.last().is_none_or(|&l| d != l.partner()) {
                layer[d.0 as usize] = true;
            }
        }
        for k in 1..=max {
            let mut next = vec![false; g.dart_count()];
            for d in g.darts() {
                if !layer[d.0 as usize] {
                    continue;
                }
                if g.terminus(d) == 0 {
                    ok[k] = true;
                }
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

    fn check(ctx: &CompletionContext, p1: &[Dart], p2: &[Dart]) -> CompletionCertificate {
        let g = ctx.graph();
        let (c1, c2, cert) = complete_to_equal_cycles(ctx, p1, p2).unwrap();
        assert_eq!(c1.len(), c2.len());
        for (c, p) in [(&c1, p1), (&c2, p2)] {
            assert!(c.starts_with(p));
            assert!(is_proper(g, c).unwrap());
            assert_eq!(g.path_end(0, c), 0);
        }
        assert!(cert.within_bound(), "k = {} > {}", cert.k, cert.bound);
        let f1 = extension_lengths(g, p1, cert.bound);
        let f2 = extension_lengths(g, p2, cert.bound);
        let k_star = (0..=cert.bound).find(|&k| f1[k] && f2[k]).unwrap();
        assert!(f1[cert.k] && f2[cert.k]);
        assert!(k_star <= cert.k);
        cert
    }

    #[test]
    fn proper_examples() {
        let g = fixtures::theta();
        let d = |s: &str| g.parse_darts(s).unwrap();
        assert!(!is_proper(&g, &d("e1 ~e1")).unwrap());
        assert!(is_proper(&g, &[]).unwrap());
        assert!(is_proper(&g, &d("e1 ~e2")).unwrap());
        assert!(is_proper(&g, &d("e1 e2")).is_err());
    }

    /// Length of the shortest proper closed walk at `t(e)` avoiding the
    /// edge of `e`, by enumerating walks of growing length.
    fn shortest_loop_by_enumeration(g: &Graph, e: Dart) -> usize {
        let v = g.terminus(e);
        (1..)
            .find(|&len| {
                proper_paths(g, v, len)
                    .iter()
                    .any(|p| g.path_end(v, p) == v && p.iter().all(|d| d.edge() != e.edge()))
            })
            .unwrap()
    }

    #[test]
    fn loops_avoid_their_edge() {
        for (name, g) in fixtures::all() {
            let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
            for e in g.darts() {
                let l = ctx.loop_at(e);
                assert!(is_proper(&g, l).unwrap(), "{name}");
                assert_eq!(g.origin(l[0]), g.terminus(e));
                assert_eq!(g.path_end(g.terminus(e), l), g.terminus(e));
                assert!(l.iter().all(|d| d.edge() != e.edge()));
                assert_eq!(l.len(), shortest_loop_by_enumeration(&g, e), "{name} {}", g.dart_name(e));
            }
        }
        let b = fixtures::bouquet();
        let e1 = b.parse_dart("e1").unwrap();
        assert_eq!(b.format_path(&attach_loop(&b, e1).unwrap()), "e2");
    }

    #[test]
    fn dumbbell_loop_darts_need_three_edges() {
        // the only way back to a without its loop crosses the bridge twice
        let g = fixtures::dumbbell();
        let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
        let e2 = g.parse_dart("e2").unwrap();
        assert_eq!(g.format_path(ctx.loop_at(e2)), "e1 e3 ~e1");
        assert_eq!(ctx.diameter + ctx.max_circuit, 2);
        let bridge = g.parse_dart("e1").unwrap();
        assert!(ctx.loop_at(bridge).len() <= ctx.diameter + ctx.max_circuit);
    }

    #[test]
    fn equal_inputs_give_equal_cycles() {
        let g = fixtures::k4();
        let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
        for p in proper_paths(&g, 0, 3) {
            let (c1, c2, _) = complete_to_equal_cycles(&ctx, &p, &p).unwrap();
            assert_eq!(c1, c2);
        }
    }

    #[test]
    fn dumbbell_bridge_against_loop() {
        let g = fixtures::dumbbell();
        let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
        let p1 = g.parse_darts("e1").unwrap();
        let p2 = g.parse_darts("e2").unwrap();
        let cert = check(&ctx, &p1, &p2);
        assert_eq!(cert.case, CompletionCase::Odd);
    }

    #[test]
    fn theta_length_one_pairs() {
        let g = fixtures::theta();
        let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
        let paths = proper_paths(&g, 0, 1);
        assert_eq!(paths.len(), 3);
        for p1 in &paths {
            for p2 in &paths {
                check(&ctx, p1, p2);
            }
        }
    }

    #[test]
    fn all_fixtures_short_paths() {
        for (_, g) in fixtures::all() {
            let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
            for n in 0..=3 {
                let paths = proper_paths(&g, 0, n);
                for p1 in &paths {
                    for p2 in &paths {
                        let cert = check(&ctx, p1, p2);
                        assert_eq!(cert.distance % 2 == 1, cert.case == CompletionCase::Odd);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = fixtures::theta();
        let ctx = CompletionContext::new(&g, graph::DEFAULT_CIRCUIT_BUDGET).unwrap();
        let p = g.parse_darts("e1").unwrap();
        assert_eq!(complete_to_equal_cycles(&ctx, &p, &[]).unwrap_err(), Error::DepthMismatch(1, 0));
        let bad = g.parse_darts("e1 ~e1").unwrap();
        assert!(complete_to_equal_cycles(&ctx, &bad, &bad).is_err());
    }
}
