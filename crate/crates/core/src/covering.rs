//! The universal covering tree of a graph, in coordinates.
//!
//! A vertex of the covering tree is named by the unique proper dart path
//! from the base vertex that its geodesic from `O` projects to. The free
//! fundamental group is generated by the non-tree edges of a BFS spanning
//! tree; a word acts on vertices and on boundary rays by prepending its
//! cycle and cancelling backtracks.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Index in the symmetric generating set ordered `x1, x1^-1, x2, ...`.
    pub fn index(self) -> usize {
        2 * self.generator as usize + usize::from(self.inverse)
    }

    pub fn from_index(i: usize) -> Letter {
        Letter { generator: (i / 2) as u32, inverse: i % 2 == 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters).reduced()
    }
}

/// Cancels every dart immediately followed by its partner.
pub fn free_reduce(path: &[Dart]) -> Vec<Dart> {
    let mut out: Vec<Dart> = Vec::with_capacity(path.len());
    for &d in path {
        if out.last() == Some(&d.partner()) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

/// True iff no dart is immediately followed by its partner.
pub fn no_backtracking(path: &[Dart]) -> bool {
    path.windows(2).all(|w| w[1] != w[0].partner())
}

/// Tree of representatives and free generators of the fundamental group.
#[derive(Clone, Debug)]
pub struct SpanningData {
    graph: Graph,
    base: usize,
    tree_edge: Vec<bool>,
    /// Tree dart entering each vertex from its BFS parent.
    parent: Vec<Option<Dart>>,
    /// Edge index of each generator.
    generators: Vec<usize>,
    edge_generator: Vec<Option<u32>>,
    /// Cycle of each letter, by letter index.
    cycles: Vec<Vec<Dart>>,
}

impl SpanningData {
    /// BFS spanning tree from the lowest vertex; generators are the
    /// non-tree edges in edge order.
    pub fn new(graph: &Graph) -> SpanningData {
        let base = 0;
        let (_, parent) = graph.bfs(base);
        let mut tree_edge = vec![false; graph.edge_count()];
        for d in parent.iter().flatten() {
            tree_edge[d.edge()] = true;
        }
        let mut generators = Vec::new();
        let mut edge_generator = vec![None; graph.edge_count()];
        for e in 0..graph.edge_count() {
            if !tree_edge[e] {
                edge_generator[e] = Some(generators.len() as u32);
                generators.push(e);
            }
        }
        let mut sd = SpanningData {
            graph: graph.clone(),
            base,
            tree_edge,
            parent,
            generators,
            edge_generator,
            cycles: Vec::new(),
        };
        sd.cycles = sd.letters().into_iter().map(|l| sd.build_letter_cycle(l)).collect();
        sd
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tree_edge.len()).filter(|&e| self.tree_edge[e])
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree_edge[e]
    }

    /// Edge index carrying generator `i`.
    pub fn generator_edge(&self, i: usize) -> usize {
        self.generators[i]
    }

    pub fn generator_label(&self, i: usize) -> &str {
        self.graph.edge_id(self.generators[i])
    }

    /// All `2 * rank` letters in index order.
    pub fn letters(&self) -> Vec<Letter> {
        (0..2 * self.rank()).map(Letter::from_index).collect()
    }

    /// Group letter crossed by a dart; `None` for tree darts.
    pub fn dart_action(&self, d: Dart) -> Option<Letter> {
        self.edge_generator[d.edge()].map(|generator| Letter {
            generator,
            inverse: !d.is_positive(),
        })
    }

    /// Tree path from the base vertex to `v`.
    pub fn tree_path(&self, v: usize) -> Vec<Dart> {
        let mut path = Vec::new();
        let mut w = v;
        while let Some(d) = self.parent[w] {
            path.push(d);
            w = self.graph.origin(d);
        }
        path.reverse();
        path
    }

    /// The proper cycle at the base vertex representing one letter:
    /// tree path, the letter's dart, tree path back.
    pub fn letter_cycle(&self, l: Letter) -> &[Dart] {
        &self.cycles[l.index()]
    }

    fn build_letter_cycle(&self, l: Letter) -> Vec<Dart> {
        let e = self.generators[l.generator as usize];
        let d = if l.inverse { Dart(2 * e as u32 + 1) } else { Dart(2 * e as u32) };
        let mut path = self.tree_path(self.graph.origin(d));
        path.push(d);
        path.extend(Graph::reverse_path(&self.tree_path(self.graph.terminus(d))));
        free_reduce(&path)
    }

    pub fn word_of_path(&self, path: &[Dart]) -> Word {
        Word(path.iter().filter_map(|&d| self.dart_action(d)).collect()).reduced()
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let label = self.generator_label(l.generator as usize);
        if l.inverse {
            format!("{label}^-1")
        } else {
            label.to_string()
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Parses letters such as `e2 e3^-1`; `1` or an empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*' || c == ',') {
            if token.is_empty() || token == "1" {
                continue;
            }
            let (label, inverse) = match token.strip_suffix("^-1") {
                Some(l) => (l, true),
                None => (token, false),
            };
            let generator = (0..self.rank())
                .find(|&i| self.generator_label(i) == label)
                .ok_or_else(|| Error::UnknownGenerator(token.to_string()))?;
            letters.push(Letter { generator: generator as u32, inverse });
        }
        Ok(Word(letters))
    }

    /// Proper path of the geodesic `[O, gO]`.
    pub fn word_path(&self, w: &Word) -> Vec<Dart> {
        let mut path = Vec::new();
        for &l in &w.0 {
            path.extend_from_slice(self.letter_cycle(l));
        }
        free_reduce(&path)
    }

    /// Checks that a path starts at the base vertex, is consecutive and
    /// proper.
    pub fn check_proper_from_base(&self, path: &[Dart]) -> Result<()> {
        self.graph.check_consecutive(path, Some(self.base))?;
        if let Some(i) = path.windows(2).position(|w| w[1] == w[0].partner()) {
            return Err(Error::InvalidPath(format!(
                "backtracking at position {}: {} then {}",
                i + 1,
                self.graph.dart_name(path[i]),
                self.graph.dart_name(path[i + 1])
            )));
        }
        Ok(())
    }
}

/// A vertex of the covering tree, named by its proper path from `O`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeVertex {
    pub path: Vec<Dart>,
}

impl TreeVertex {
    pub fn root() -> TreeVertex {
        TreeVertex { path: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// Group element `g` with this vertex in `gT`.
    pub fn word(&self, sd: &SpanningData) -> Word {
        sd.word_of_path(&self.path)
    }

    /// Vertex of the quotient graph this vertex projects to.
    pub fn projection(&self, sd: &SpanningData) -> usize {
        sd.graph.path_end(sd.base, &self.path)
    }

    pub fn is_prefix_of(&self, other: &TreeVertex) -> bool {
        other.path.starts_with(&self.path)
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        let mut path = self.path.clone();
        path.pop()?;
        Some(TreeVertex { path })
    }

    /// Neighbours one step further from `O`, in dart order.
    pub fn children(&self, sd: &SpanningData) -> Vec<TreeVertex> {
        let g = &sd.graph;
        let (at, back) = match self.path.last() {
            Some(&d) => (g.terminus(d), Some(d.partner())),
            None => (sd.base, None),
        };
        g.out_darts(at)
            .iter()
            .filter(|&&d| Some(d) != back)
            .map(|&d| {
                let mut path = self.path.clone();
                path.push(d);
                TreeVertex { path }
            })
            .collect()
    }

    pub fn format(&self, g: &Graph) -> String {
        if self.path.is_empty() {
            "O".to_string()
        } else {
            g.format_path(&self.path)
        }
    }
}

/// Lift of a proper path from the base vertex.
pub fn lift_path(sd: &SpanningData, path: &[Dart]) -> Result<TreeVertex> {
    sd.check_proper_from_base(path)?;
    Ok(TreeVertex { path: path.to_vec() })
}

/// The vertex `gO`.
pub fn vertex_of_word(sd: &SpanningData, w: &Word) -> TreeVertex {
    TreeVertex { path: sd.word_path(w) }
}

fn common_prefix(a: &[Dart], b: &[Dart]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> usize {
    u.depth() + v.depth() - 2 * common_prefix(&u.path, &v.path)
}

/// `g v`, given the path of `gO`.
pub fn translate_path(word_path: &[Dart], v: &[Dart]) -> Vec<Dart> {
    let mut path = word_path.to_vec();
    path.extend_from_slice(v);
    free_reduce(&path)
}

pub fn act_on_vertex(sd: &SpanningData, w: &Word, v: &TreeVertex) -> TreeVertex {
    TreeVertex { path: translate_path(&sd.word_path(w), &v.path) }
}

/// An eventually periodic boundary point: the ray from `O` following
/// `prefix` and then `period` forever.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    pub prefix: Vec<Dart>,
    pub period: Vec<Dart>,
}

impl Ray {
    /// Validates seam properness and puts the ray in canonical form: a
    /// primitive period and the shortest prefix.
    pub fn new(sd: &SpanningData, prefix: Vec<Dart>, period: Vec<Dart>) -> Result<Ray> {
        let g = &sd.graph;
        if period.is_empty() {
            return Err(Error::InvalidRay("the period is empty".into()));
        }
        sd.check_proper_from_base(&prefix)
            .map_err(|e| Error::InvalidRay(e.to_string()))?;
        let start = g.path_end(sd.base, &prefix);
        g.check_consecutive(&period, Some(start))
            .map_err(|e| Error::InvalidRay(e.to_string()))?;
        if g.path_end(start, &period) != start {
            return Err(Error::InvalidRay("the period is not closed".into()));
        }
        if !no_backtracking(&period) || period[0] == period[period.len() - 1].partner() {
            return Err(Error::InvalidRay("the period backtracks".into()));
        }
        if let Some(&last) = prefix.last() {
            if period[0] == last.partner() {
                return Err(Error::InvalidRay("backtracking at the prefix seam".into()));
            }
        }
        Ok(Ray::canonical(prefix, period))
    }

    fn canonical(mut prefix: Vec<Dart>, period: Vec<Dart>) -> Ray {
        let n = period.len();
        let root = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| period[i] == period[i - p]))
            .unwrap_or(n);
        let mut period: Vec<Dart> = period[..root].to_vec();
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Ray { prefix, period }
    }

    pub fn dart_at(&self, i: usize) -> Dart {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// First `n` darts, i.e. the vertex at depth `n` on `[O, omega)`.
    pub fn vertex_at(&self, n: usize) -> TreeVertex {
        TreeVertex { path: (0..n).map(|i| self.dart_at(i)).collect() }
    }

    /// True iff the ray passes through `v`.
    pub fn passes(&self, v: &TreeVertex) -> bool {
        v.path.iter().enumerate().all(|(i, &d)| self.dart_at(i) == d)
    }

    /// `g omega` given the path of `gO`.
    pub fn translate(&self, word_path: &[Dart]) -> Ray {
        let mut k = 0;
        while k < word_path.len() && word_path[word_path.len() - 1 - k] == self.dart_at(k).partner() {
            k += 1;
        }
        let mut prefix = word_path[..word_path.len() - k].to_vec();
        let period = if k <= self.prefix.len() {
            prefix.extend_from_slice(&self.prefix[k..]);
            self.period.clone()
        } else {
            let mut p = self.period.clone();
            p.rotate_left((k - self.prefix.len()) % self.period.len());
            p
        };
        Ray::canonical(prefix, period)
    }

    pub fn act(&self, sd: &SpanningData, w: &Word) -> Ray {
        self.translate(&sd.word_path(w))
    }

    pub fn format(&self, g: &Graph) -> String {
        let prefix = g.path_names(&self.prefix).join(" ");
        let period = g.path_names(&self.period).join(" ");
        if prefix.is_empty() {
            format!("| {period}")
        } else {
            format!("{prefix} | {period}")
        }
    }

    /// Parses `prefix | period`.
    pub fn parse(sd: &SpanningData, text: &str) -> Result<Ray> {
        let (prefix, period) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidRay(format!("expected `prefix | period`, got `{text}`")))?;
        let g = &sd.graph;
        Ray::new(sd, g.parse_darts(prefix)?, g.parse_darts(period)?)
    }
}

/// Splits the proper cycle of `gO` into its tail and cyclically proper core.
fn tail_and_core(path: &[Dart]) -> (&[Dart], &[Dart]) {
    let n = path.len();
    let mut t = 0;
    while 2 * t + 1 < n && path[n - 1 - t] == path[t].partner() {
        t += 1;
    }
    (&path[..t], &path[t..n - t])
}

/// Minimal displacement of `w` on the covering tree.
pub fn translation_length(sd: &SpanningData, w: &Word) -> Result<usize> {
    let w = w.reduced();
    if w.is_empty() {
        return Err(Error::IdentityWord);
    }
    let path = sd.word_path(&w);
    Ok(tail_and_core(&path).1.len())
}

/// The two boundary points fixed by `w`: attracting end (towards which
/// `w^n O` converges) first, repelling end second.
pub fn fixed_ends(sd: &SpanningData, w: &Word) -> Result<(Ray, Ray)> {
    let w = w.reduced();
    if w.is_empty() {
        return Err(Error::IdentityWord);
    }
    let path = sd.word_path(&w);
    let (tail, core) = tail_and_core(&path);
    let attracting = Ray::canonical(tail.to_vec(), core.to_vec());
    let repelling = Ray::canonical(tail.to_vec(), Graph::reverse_path(core));
    Ok((attracting, repelling))
}

/// `d(O, v) - d(gO, v)` at the vertex `v` of depth `depth` on `[O, omega)`.
/// Independent of `depth` once `depth > d(O, gO)`.
pub fn busemann_at_depth(word_path: &[Dart], ray: &Ray, depth: usize) -> i64 {
    let v = ray.vertex_at(depth);
    let g_o = TreeVertex { path: word_path.to_vec() };
    depth as i64 - tree_distance(&g_o, &v) as i64
}

/// The Busemann value `delta(g, omega)`.
pub fn busemann(sd: &SpanningData, w: &Word, ray: &Ray) -> i64 {
    let path = sd.word_path(w);
    busemann_at_depth(&path, ray, path.len() + 1)
}

/// Same value as [`busemann`] via the common prefix of `[O, gO]` and the ray.
pub fn busemann_from_path(word_path: &[Dart], ray: &Ray) -> i64 {
    let lcp = word_path
        .iter()
        .enumerate()
        .take_while(|&(i, &d)| ray.dart_at(i) == d)
        .count();
    2 * lcp as i64 - word_path.len() as i64
}

/// Non-backtracking paths of length exactly `len` from `start`.
pub fn proper_paths(g: &Graph, start: usize, len: usize) -> Vec<Vec<Dart>> {
    let mut layer: Vec<Vec<Dart>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &layer {
            let at = g.path_end(start, p);
            for &d in g.out_darts(at) {
                if p.last().is_none_or(|&l| d != l.partner()) {
                    let mut q = p.clone();
                    q.push(d);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every canonical ray with prefix length at most `max_prefix` and period
/// length at most `max_period`, sorted.
pub fn ray_catalog(sd: &SpanningData, max_prefix: usize, max_period: usize) -> Vec<Ray> {
    let g = &sd.graph;
    let mut rays = BTreeSet::new();
    let mut periods_at: Vec<Vec<Vec<Dart>>> = vec![Vec::new(); g.vertex_count()];
    for (v, periods) in periods_at.iter_mut().enumerate() {
        for len in 1..=max_period {
            for p in proper_paths(g, v, len) {
                if g.path_end(v, &p) == v && p[0] != p[len - 1].partner() {
                    periods.push(p);
                }
            }
        }
    }
    for plen in 0..=max_prefix {
        for prefix in proper_paths(g, sd.base, plen) {
            let at = g.path_end(sd.base, &prefix);
            for period in &periods_at[at] {
                if prefix.last().is_none_or(|&l| period[0] != l.partner()) {
                    rays.insert(Ray::canonical(prefix.clone(), period.clone()));
                }
            }
        }
    }
    rays.into_iter().collect()
}

/// Reduced words of length at most `max_len`, shortest first, each length
/// in lexicographic letter order.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..2 * rank {
                let l = Letter::from_index(i);
                if w.0.last() != Some(&l.inv()) {
                    let mut v = w.clone();
                    v.0.push(l);
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.generator + 1)
        } else {
            write!(f, "x{}", self.generator + 1)
        }
    }
}
