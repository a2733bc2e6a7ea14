//! Finite unions of boundary cylinders `Omega_v`.
//!
//! A set is stored as a sorted antichain of tree vertices in which no
//! complete family of siblings appears, so equal sets have equal
//! representations. The whole boundary is `{O}`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::covering::{free_reduce, SpanningData, TreeVertex, Word};
use crate::graph::Graph;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderSet {
    vertices: Vec<TreeVertex>,
}

impl CylinderSet {
    pub fn empty() -> CylinderSet {
        CylinderSet::default()
    }

    pub fn boundary() -> CylinderSet {
        CylinderSet { vertices: vec![TreeVertex::root()] }
    }

    pub fn cylinder(v: TreeVertex) -> CylinderSet {
        CylinderSet { vertices: vec![v] }
    }

    pub fn new(sd: &SpanningData, vertices: impl IntoIterator<Item = TreeVertex>) -> CylinderSet {
        let mut set: BTreeSet<TreeVertex> = BTreeSet::new();
        // lexicographic order puts every vertex right before its descendants
        let mut last: Option<TreeVertex> = None;
        for v in vertices.into_iter().collect::<BTreeSet<_>>() {
            if last.as_ref().is_some_and(|l| l.is_prefix_of(&v)) {
                continue;
            }
            last = Some(v.clone());
            set.insert(v);
        }
        loop {
            let merge = set.iter().find_map(|v| {
                let parent = v.parent()?;
                let children = parent.children(sd);
                children.iter().all(|c| set.contains(c)).then_some((parent, children))
            });
            match merge {
                Some((parent, children)) => {
                    for c in &children {
                        set.remove(c);
                    }
                    set.insert(parent);
                }
                None => break,
            }
        }
        CylinderSet { vertices: set.into_iter().collect() }
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_boundary(&self) -> bool {
        self.vertices.len() == 1 && self.vertices[0].depth() == 0
    }

    pub fn union(&self, sd: &SpanningData, other: &CylinderSet) -> CylinderSet {
        CylinderSet::new(sd, self.vertices.iter().chain(&other.vertices).cloned())
    }

    pub fn intersect(&self, sd: &SpanningData, other: &CylinderSet) -> CylinderSet {
        let mut out = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                if a.is_prefix_of(b) {
                    out.push(b.clone());
                } else if b.is_prefix_of(a) {
                    out.push(a.clone());
                }
            }
        }
        CylinderSet::new(sd, out)
    }

    pub fn complement(&self, sd: &SpanningData) -> CylinderSet {
        let mut out = Vec::new();
        let mut stack = vec![TreeVertex::root()];
        while let Some(v) = stack.pop() {
            if self.vertices.iter().any(|s| s.is_prefix_of(&v)) {
                continue;
            }
            if self.vertices.iter().any(|s| v.is_prefix_of(s)) {
                stack.extend(v.children(sd));
            } else {
                out.push(v);
            }
        }
        CylinderSet::new(sd, out)
    }

    pub fn difference(&self, sd: &SpanningData, other: &CylinderSet) -> CylinderSet {
        self.intersect(sd, &other.complement(sd))
    }

    pub fn is_disjoint(&self, sd: &SpanningData, other: &CylinderSet) -> bool {
        self.intersect(sd, other).is_empty()
    }

    /// Mass under the measure with `mu(Omega_v) = q^(1 - depth)` and total
    /// mass `q + 1`.
    pub fn measure(&self, q: u32) -> BigRational {
        let q = BigInt::from(q);
        self.vertices
            .iter()
            .map(|v| vertex_measure(&q, v.depth()))
            .fold(BigRational::zero(), |acc, m| acc + m)
    }

    /// The image `g S` where `word_path` is the path of `gO`.
    pub fn translate(&self, sd: &SpanningData, word_path: &[crate::graph::Dart]) -> CylinderSet {
        let mut out = CylinderSet::empty();
        for v in &self.vertices {
            let image = translate_cylinder(sd, word_path, v);
            out = out.union(sd, &image);
        }
        out
    }

    pub fn act(&self, sd: &SpanningData, w: &Word) -> CylinderSet {
        self.translate(sd, &sd.word_path(w))
    }

    pub fn format(&self, g: &Graph) -> String {
        if self.is_empty() {
            return "{}".into();
        }
        let parts: Vec<String> = self.vertices.iter().map(|v| v.format(g)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

pub(crate) fn vertex_measure(q: &BigInt, depth: usize) -> BigRational {
    if depth == 0 {
        BigRational::from_integer(q + 1)
    } else {
        BigRational::new(BigInt::from(1), num_traits::pow(q.clone(), depth - 1))
    }
}

/// `g Omega_v`: the rays from `gO` through `gv`, re-expressed from `O`.
pub fn translate_cylinder(
    sd: &SpanningData,
    word_path: &[crate::graph::Dart],
    v: &TreeVertex,
) -> CylinderSet {
    if v.depth() == 0 {
        return CylinderSet::boundary();
    }
    let mut joined = word_path.to_vec();
    joined.extend_from_slice(&v.path);
    let w = free_reduce(&joined);
    let m = word_path.len() + v.depth() - w.len();
    let cancelled = m / 2;
    if cancelled < v.depth() {
        return CylinderSet::cylinder(TreeVertex { path: w });
    }
    // gv lies strictly inside [O, gO]: everything except the branch towards gO
    let toward = TreeVertex { path: word_path[..w.len() + 1].to_vec() };
    CylinderSet::cylinder(toward).complement(sd)
}

/// `Pi_g`: rays from `O` meeting `gT`, i.e. the cylinder at the vertex of
/// `gT` nearest to `O`.
pub fn pi_cylinder(sd: &SpanningData, w: &Word) -> CylinderSet {
    let w = w.reduced();
    if w.is_empty() {
        return CylinderSet::boundary();
    }
    let path = sd.word_path(&w);
    let last = path
        .iter()
        .rposition(|&d| sd.dart_action(d).is_some())
        .expect("a nonidentity word crosses a generator dart");
    CylinderSet::cylinder(TreeVertex { path: path[..=last].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{reduced_words, Ray};
    use crate::fixtures;
    use num_traits::One;

    fn vertex(g: &Graph, s: &str) -> TreeVertex {
        TreeVertex { path: g.parse_darts(s).unwrap() }
    }

    /// Brute-force membership of the rays of a catalog.
    fn members(set: &CylinderSet, rays: &[Ray]) -> Vec<bool> {
        rays.iter().map(|r| set.vertices().iter().any(|v| r.passes(v))).collect()
    }

    #[test]
    fn siblings_merge_to_parent() {
        let g = fixtures::theta();
        let sd = SpanningData::new(&g);
        let s = CylinderSet::new(&sd, [vertex(&g, "e1 ~e2"), vertex(&g, "e1 ~e3")]);
        assert_eq!(s, CylinderSet::cylinder(vertex(&g, "e1")));
        let all = CylinderSet::new(&sd, [vertex(&g, "e1"), vertex(&g, "e2"), vertex(&g, "e3 ~e1")]);
        assert_eq!(all.vertices().len(), 3);
        let all = all.union(&sd, &CylinderSet::cylinder(vertex(&g, "e3 ~e2")));
        assert!(all.is_boundary());
        assert_eq!(all.measure(2), BigRational::from_integer(3.into()));
    }

    #[test]
    fn complement_and_measure() {
        let g = fixtures::bouquet();
        let sd = SpanningData::new(&g);
        let s = CylinderSet::cylinder(vertex(&g, "e1 e2"));
        let c = s.complement(&sd);
        assert_eq!(c.complement(&sd), s);
        assert_eq!(s.measure(3) + c.measure(3), BigRational::from_integer(4.into()));
        assert!(s.is_disjoint(&sd, &c));
        assert!(CylinderSet::empty().complement(&sd).is_boundary());
    }

    #[test]
    fn translation_matches_ray_action() {
        for (_, g) in fixtures::all() {
            let sd = SpanningData::new(&g);
            let rays = crate::covering::ray_catalog(&sd, 3, 3);
            let cylinders: Vec<TreeVertex> = (1..=2)
                .flat_map(|n| crate::covering::proper_paths(&g, sd.base(), n))
                .map(|path| TreeVertex { path })
                .collect();
            for w in reduced_words(sd.rank(), 2) {
                let gp = sd.word_path(&w);
                let inv = sd.word_path(&w.inverse());
                for v in &cylinders {
                    let image = CylinderSet::cylinder(v.clone()).translate(&sd, &gp);
                    // omega in g S iff g^-1 omega in S
                    let expected: Vec<bool> =
                        rays.iter().map(|r| r.translate(&inv).passes(v)).collect();
                    assert_eq!(members(&image, &rays), expected, "{} {:?}", sd.format_word(&w), v);
                }
            }
        }
    }

    #[test]
    fn pi_of_identity_and_generators() {
        let g = fixtures::theta();
        let sd = SpanningData::new(&g);
        assert!(pi_cylinder(&sd, &Word::identity()).is_boundary());
        let x2 = sd.parse_word("e2").unwrap();
        assert_eq!(pi_cylinder(&sd, &x2), CylinderSet::cylinder(vertex(&g, "e2")));
        assert_eq!(pi_cylinder(&sd, &x2).measure(2), BigRational::one());
        let x2i = x2.inverse();
        assert_eq!(pi_cylinder(&sd, &x2i), CylinderSet::cylinder(vertex(&g, "e1 ~e2")));
        assert_eq!(pi_cylinder(&sd, &x2i).measure(2), BigRational::new(1.into(), 2.into()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_set() -> impl Strategy<Value = Vec<Vec<usize>>> {
            prop::collection::vec(prop::collection::vec(0usize..4, 0..4), 0..5)
        }

        /// Turns index choices into proper paths from the base vertex.
        fn build(sd: &SpanningData, choices: &[Vec<usize>]) -> CylinderSet {
            let vs = choices.iter().map(|c| {
                let mut v = TreeVertex::root();
                for &i in c {
                    let kids = v.children(sd);
                    v = kids[i % kids.len()].clone();
                }
                v
            });
            CylinderSet::new(sd, vs.collect::<Vec<_>>())
        }

        proptest! {
            #[test]
            fn algebra_laws(a in arb_set(), b in arb_set(), which in 0usize..5) {
                let (_, g) = &fixtures::all()[which];
                let sd = SpanningData::new(g);
                let q = g.branching().ok();
                let a = build(&sd, &a);
                let b = build(&sd, &b);
                prop_assert_eq!(CylinderSet::new(&sd, a.vertices().to_vec()), a.clone());
                prop_assert_eq!(a.complement(&sd).complement(&sd), a.clone());
                let u = a.union(&sd, &b);
                let i = a.intersect(&sd, &b);
                prop_assert_eq!(u.complement(&sd), a.complement(&sd).intersect(&sd, &b.complement(&sd)));
                prop_assert!(a.difference(&sd, &b).is_disjoint(&sd, &b));
                if let Some(q) = q {
                    prop_assert_eq!(u.measure(q) + i.measure(q), a.measure(q) + b.measure(q));
                    prop_assert_eq!(
                        a.measure(q) + a.complement(&sd).measure(q),
                        BigRational::from_integer((q + 1).into())
                    );
                }
            }
        }
    }
}
