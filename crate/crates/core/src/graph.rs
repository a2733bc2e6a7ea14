//! Finite connected multigraphs in half-edge form.
//!
//! Every geometric edge `e` contributes two darts: the positive dart `e`
//! (from the first endpoint named in the input to the second) and its
//! reversal `~e`. Loops contribute two darts at the same vertex, so a loop
//! adds 2 to the degree. Vertices and edges are ordered by their input ids
//! (natural order, so `e2 < e10`), and every search in this crate walks
//! darts in that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A directed half-edge. Dart `2i` is the positive dart of edge `i`,
/// dart `2i + 1` its reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub u32);

impl Dart {
    #[inline]
    pub fn partner(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    #[inline]
    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    /// `(origin, terminus)` of the positive dart of each edge.
    ends: Vec<(usize, usize)>,
    /// Outgoing darts per vertex, in dart order.
    out: Vec<Vec<Dart>>,
}

/// Compares ids so that embedded digit runs sort numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (&a[..la], &b[..lb]);
                let ta = da.iter().skip_while(|&&c| c == b'0').count();
                let tb = db.iter().skip_while(|&&c| c == b'0').count();
                let ord = ta
                    .cmp(&tb)
                    .then_with(|| da[la - ta..].cmp(&db[lb - tb..]))
                    .then_with(|| la.cmp(&lb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

impl Graph {
    /// Builds a graph from named vertices and `(edge id, u, v)` triples.
    /// Ids are re-sorted into natural order.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Graph> {
        let mut vertex_ids: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        vertex_ids.sort_by(|a, b| natural_cmp(a, b));
        vertex_ids.dedup();
        let index: BTreeMap<&str, usize> = vertex_ids
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();

        let mut sorted: Vec<(&str, &str, &str)> = edges
            .iter()
            .map(|(e, u, v)| (e.as_ref(), u.as_ref(), v.as_ref()))
            .collect();
        sorted.sort_by(|a, b| natural_cmp(a.0, b.0));
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate edge id `{}`", pair[0].0),
                });
            }
        }

        let mut edge_ids = Vec::with_capacity(sorted.len());
        let mut ends = Vec::with_capacity(sorted.len());
        for (e, u, v) in sorted {
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("unknown vertex id `{name}`"),
                })
            };
            edge_ids.push(e.to_string());
            ends.push((lookup(u)?, lookup(v)?));
        }

        let mut out = vec![Vec::new(); vertex_ids.len()];
        for (i, &(u, v)) in ends.iter().enumerate() {
            out[u].push(Dart(2 * i as u32));
            out[v].push(Dart(2 * i as u32 + 1));
        }
        for darts in &mut out {
            darts.sort();
        }
        Ok(Graph { vertex_ids, edge_ids, ends, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edge_ids.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count() as u32).map(Dart)
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_ids.iter().position(|v| v == name)
    }

    #[inline]
    pub fn origin(&self, d: Dart) -> usize {
        let (u, v) = self.ends[d.edge()];
        if d.is_positive() {
            u
        } else {
            v
        }
    }

    #[inline]
    pub fn terminus(&self, d: Dart) -> usize {
        self.origin(d.partner())
    }

    pub fn is_loop(&self, d: Dart) -> bool {
        let (u, v) = self.ends[d.edge()];
        u == v
    }

    /// Darts with origin `v`, in dart order.
    pub fn out_darts(&self, v: usize) -> &[Dart] {
        &self.out[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// `e3` for a positive dart, `~e3` for its reversal.
    pub fn dart_name(&self, d: Dart) -> String {
        let id = &self.edge_ids[d.edge()];
        if d.is_positive() {
            id.clone()
        } else {
            format!("~{id}")
        }
    }

    pub fn parse_dart(&self, token: &str) -> Result<Dart> {
        let (name, positive) = match token.strip_prefix('~') {
            Some(rest) => (rest, false),
            None => (token, true),
        };
        let e = self
            .edge_ids
            .iter()
            .position(|id| id == name)
            .ok_or_else(|| Error::UnknownDart(token.to_string()))?;
        Ok(Dart(2 * e as u32 + u32::from(!positive)))
    }

    /// Parses a whitespace- or comma-separated dart sequence.
    pub fn parse_darts(&self, text: &str) -> Result<Vec<Dart>> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_dart(t))
            .collect()
    }

    pub fn path_names(&self, path: &[Dart]) -> Vec<String> {
        path.iter().map(|&d| self.dart_name(d)).collect()
    }

    pub fn format_path(&self, path: &[Dart]) -> String {
        if path.is_empty() {
            return "()".to_string();
        }
        self.path_names(path).join(" ")
    }

    /// Checks that consecutive darts meet head to tail and, when given,
    /// that the path starts at `start`.
    pub fn check_consecutive(&self, path: &[Dart], start: Option<usize>) -> Result<()> {
        if let (Some(s), Some(&first)) = (start, path.first()) {
            if self.origin(first) != s {
                return Err(Error::InvalidPath(format!(
                    "path starts at {} instead of {}",
                    self.vertex_id(self.origin(first)),
                    self.vertex_id(s)
                )));
            }
        }
        for (i, w) in path.windows(2).enumerate() {
            if self.terminus(w[0]) != self.origin(w[1]) {
                return Err(Error::InvalidPath(format!(
                    "darts {} and {} at position {} are not consecutive",
                    self.dart_name(w[0]),
                    self.dart_name(w[1]),
                    i
                )));
            }
        }
        Ok(())
    }

    /// End vertex of a path started at `start`.
    pub fn path_end(&self, start: usize, path: &[Dart]) -> usize {
        path.last().map_or(start, |&d| self.terminus(d))
    }

    /// Regular degree `q + 1`, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.degree(0);
        (0..self.vertex_count())
            .all(|v| self.degree(v) == first)
            .then_some(first)
    }

    /// Branching number `q` of a regular graph.
    pub fn branching(&self) -> Result<u32> {
        match self.regular_degree() {
            Some(d) if d >= 2 => Ok(d as u32 - 1),
            _ => Err(Error::NotRegular(
                "the vertex degrees are not all equal".to_string(),
            )),
        }
    }

    /// BFS from `source` in dart order. Returns `(distance, parent dart)`
    /// per vertex.
    pub fn bfs(&self, source: usize) -> (Vec<Option<usize>>, Vec<Option<Dart>>) {
        let n = self.vertex_count();
        let mut dist = vec![None; n];
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &d in self.out_darts(v) {
                let w = self.terminus(d);
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    parent[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// A shortest path from `from` to `to`, ties broken by dart order.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<Dart>> {
        let (dist, parent) = self.bfs(from);
        dist[to]?;
        Some(unwind(self, &parent, from, to))
    }

    /// A shortest path from `from` to the nearest vertex satisfying `target`.
    pub fn shortest_path_to(
        &self,
        from: usize,
        target: impl Fn(usize) -> bool,
    ) -> Option<Vec<Dart>> {
        let (dist, parent) = self.bfs(from);
        let best = (0..self.vertex_count())
            .filter(|&v| target(v) && dist[v].is_some())
            .min_by_key(|&v| (dist[v].unwrap(), v))?;
        Some(unwind(self, &parent, from, best))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return false;
        }
        self.bfs(0).0.iter().all(Option::is_some)
    }

    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.vertex_count()];
        let mut count = 0;
        for v in 0..self.vertex_count() {
            if !seen[v] {
                count += 1;
                for (w, d) in self.bfs(v).0.iter().enumerate() {
                    if d.is_some() {
                        seen[w] = true;
                    }
                }
            }
        }
        count
    }

    /// Graph diameter with unit edge lengths. Assumes connectivity.
    pub fn diameter(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.bfs(v).0.into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Reverse of a path: partners in reverse order.
    pub fn reverse_path(path: &[Dart]) -> Vec<Dart> {
        path.iter().rev().map(|d| d.partner()).collect()
    }
}

fn unwind(g: &Graph, parent: &[Option<Dart>], from: usize, to: usize) -> Vec<Dart> {
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let d = parent[v].expect("vertex reached by bfs");
        path.push(d);
        v = g.origin(d);
    }
    path.reverse();
    path
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertex_count())?;
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            writeln!(
                f,
                "edge {} {} {}",
                self.edge_ids[i], self.vertex_ids[u], self.vertex_ids[v]
            )?;
        }
        Ok(())
    }
}

/// Parses the text edge-list format:
///
/// ```text
/// # theta graph
/// vertices 2
/// edge e1 a b
/// edge e2 a b
/// edge e3 a b
/// ```
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut vertex_names: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut seen_edges: BTreeMap<String, usize> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        match fields[0] {
            "vertices" => {
                if declared.is_some() {
                    return Err(err("repeated `vertices` header".into()));
                }
                if fields.len() != 2 {
                    return Err(err("expected `vertices <count>`".into()));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| err(format!("invalid vertex count `{}`", fields[1])))?;
                if n == 0 {
                    return Err(err("vertex count must be positive".into()));
                }
                declared = Some((n, line_no));
            }
            "edge" => {
                let Some((n, _)) = declared else {
                    return Err(err("`edge` before `vertices` header".into()));
                };
                if fields.len() != 4 {
                    return Err(err("expected `edge <id> <u> <v>`".into()));
                }
                if let Some(prev) = seen_edges.get(fields[1]) {
                    return Err(err(format!(
                        "duplicate edge id `{}` (first defined on line {prev})",
                        fields[1]
                    )));
                }
                if fields[1].starts_with('~') {
                    return Err(err("edge ids may not start with `~`".into()));
                }
                for name in &fields[2..4] {
                    if !vertex_names.iter().any(|v| v == name) {
                        if vertex_names.len() == n {
                            return Err(err(format!(
                                "unknown vertex id `{name}`: all {n} declared vertices are already named"
                            )));
                        }
                        vertex_names.push(name.to_string());
                    }
                }
                seen_edges.insert(fields[1].to_string(), line_no);
                edges.push((
                    fields[1].to_string(),
                    fields[2].to_string(),
                    fields[3].to_string(),
                ));
            }
            other => return Err(err(format!("unrecognised directive `{other}`"))),
        }
    }

    let Some((n, header_line)) = declared else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `vertices` header".into(),
        });
    };
    if edges.is_empty() {
        return Err(Error::Parse {
            line: header_line,
            message: "the edge section is empty".into(),
        });
    }
    if vertex_names.len() != n {
        return Err(Error::Parse {
            line: header_line,
            message: format!(
                "declared {n} vertices but edges name {}",
                vertex_names.len()
            ),
        });
    }
    Graph::from_edges(&vertex_names, &edges)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Disconnected { components: usize },
    LowDegree { vertex: String, degree: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
            Violation::LowDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree} < 3")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Connectivity and minimum degree 3.
pub fn validate_lattice_input(g: &Graph) -> ValidationReport {
    let mut violations = Vec::new();
    let components = g.components();
    if components != 1 {
        violations.push(Violation::Disconnected { components });
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) < 3 {
            violations.push(Violation::LowDegree {
                vertex: g.vertex_id(v).to_string(),
                degree: g.degree(v),
            });
        }
    }
    ValidationReport { violations }
}

/// A closed dart path visiting no vertex twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub darts: Vec<Dart>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BipartiteWitness {
    /// Color (0 or 1) of each vertex.
    Coloring(Vec<u8>),
    OddCircuit(Circuit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub n0: usize,
    pub n1: usize,
    pub chi: i64,
    pub gamma: usize,
    pub witness: BipartiteWitness,
    pub diameter: usize,
    pub max_circuit: usize,
    pub regular_degree: Option<usize>,
}

impl InvariantReport {
    pub fn bipartite(&self) -> bool {
        matches!(self.witness, BipartiteWitness::Coloring(_))
    }

    pub fn q(&self) -> Option<usize> {
        self.regular_degree.map(|d| d - 1)
    }
}

pub const DEFAULT_CIRCUIT_BUDGET: u64 = 10_000_000;

pub fn euler_characteristic(g: &Graph) -> i64 {
    g.vertex_count() as i64 - g.edge_count() as i64
}

/// Rank of the fundamental group, `1 - chi`.
pub fn rank(g: &Graph) -> usize {
    (1 - euler_characteristic(g)) as usize
}

pub fn graph_invariants(g: &Graph, budget: u64) -> Result<InvariantReport> {
    let chi = euler_characteristic(g);
    let witness = match two_coloring(g) {
        Ok(colors) => BipartiteWitness::Coloring(colors),
        Err(c) => BipartiteWitness::OddCircuit(c),
    };
    Ok(InvariantReport {
        n0: g.vertex_count(),
        n1: g.edge_count(),
        chi,
        gamma: (1 - chi) as usize,
        witness,
        diameter: g.diameter(),
        max_circuit: max_circuit_length(g, budget)?,
        regular_degree: g.regular_degree(),
    })
}

/// BFS 2-coloring. On failure returns a vertex-simple odd circuit: a loop,
/// or the fundamental cycle of the first same-colored edge.
fn two_coloring(g: &Graph) -> std::result::Result<Vec<u8>, Circuit> {
    let n = g.vertex_count();
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut parent: Vec<Option<Dart>> = vec![None; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &d in g.out_darts(v) {
                let w = g.terminus(d);
                if color[w].is_none() {
                    color[w] = Some(1 - color[v].unwrap());
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
    }
    for d in g.darts() {
        let (u, w) = (g.origin(d), g.terminus(d));
        if color[u] != color[w] {
            continue;
        }
        if u == w {
            return Err(Circuit { darts: vec![d] });
        }
        // Equal colors in a BFS forest imply equal depths.
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut a, mut b) = (u, w);
        while a != b {
            let da = parent[a].unwrap();
            let db = parent[b].unwrap();
            up.push(da.partner());
            down.push(db);
            a = g.origin(da);
            b = g.origin(db);
        }
        // lca -> ... -> w, then w -> u, then u -> ... -> lca
        let mut darts: Vec<Dart> = down.into_iter().rev().collect();
        darts.push(d.partner());
        darts.extend(up);
        return Err(Circuit { darts });
    }
    Ok(color.into_iter().map(|c| c.unwrap_or(0)).collect())
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_coloring(g).is_ok()
}

/// A vertex-simple odd cycle, or `None` exactly when `g` is bipartite.
pub fn odd_circuit(g: &Graph) -> Option<Circuit> {
    two_coloring(g).err()
}

/// Longest vertex-simple cycle by exhaustive backtracking. Loops have
/// length 1 and two parallel edges form a circuit of length 2.
pub fn max_circuit_length(g: &Graph, budget: u64) -> Result<usize> {
    let n = g.vertex_count();
    let mut best = 0usize;
    let mut steps = 0u64;
    let mut on_path = vec![false; n];

    struct Search<'a> {
        g: &'a Graph,
        start: usize,
        budget: u64,
    }

    fn extend(
        s: &Search<'_>,
        v: usize,
        first: Dart,
        len: usize,
        on_path: &mut [bool],
        best: &mut usize,
        steps: &mut u64,
    ) -> Result<()> {
        for &d in s.g.out_darts(v) {
            *steps += 1;
            if *steps > s.budget {
                return Err(Error::BudgetExceeded { budget: s.budget });
            }
            let w = s.g.terminus(d);
            if w == s.start {
                // Closing a 2-cycle along the same edge is backtracking.
                if d != first.partner() {
                    *best = (*best).max(len + 1);
                }
            } else if w > s.start && !on_path[w] {
                on_path[w] = true;
                extend(s, w, first, len + 1, on_path, best, steps)?;
                on_path[w] = false;
            }
        }
        Ok(())
    }

    for start in 0..n {
        let search = Search { g, start, budget };
        on_path[start] = true;
        for &d in g.out_darts(start) {
            steps += 1;
            if steps > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            let w = g.terminus(d);
            if w == start {
                best = best.max(1);
            } else if w > start {
                on_path[w] = true;
                extend(&search, w, d, 1, &mut on_path, &mut best, &mut steps)?;
                on_path[w] = false;
            }
        }
        on_path[start] = false;
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovolumeReport {
    pub q: usize,
    pub n0: usize,
    /// `gamma - 1`
    pub lhs: i64,
    /// `(q - 1) * n0`, to be divided by 2
    pub rhs_times_two: i64,
    pub holds: bool,
}

/// `gamma - 1 = (q - 1) covol / 2` with covolume equal to the vertex count.
pub fn covolume_identity_check(g: &Graph) -> Result<CovolumeReport> {
    let degree = g.regular_degree().ok_or_else(|| {
        Error::NotRegular("the covolume identity needs a regular graph".into())
    })?;
    let q = degree - 1;
    let lhs = rank(g) as i64 - 1;
    let rhs_times_two = (q as i64 - 1) * g.vertex_count() as i64;
    Ok(CovolumeReport {
        q,
        n0: g.vertex_count(),
        lhs,
        rhs_times_two,
        holds: 2 * lhs == rhs_times_two,
    })
}
