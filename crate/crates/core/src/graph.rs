//! Labeled undirected graphs over vertices `1..=p`, decomposability testing,
//! clique extraction, and exhaustive enumeration of decomposable graphs.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported graph order. Vertex sets are stored as 64-bit masks.
pub const MAX_ORDER: usize = 64;

/// Largest order for which exhaustive graph enumeration is allowed.
pub const ENUMERATION_LIMIT: usize = 7;

/// A vertex label in `1..=p`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(u8);

impl VertexId {
    pub fn new(label: usize) -> Result<Self> {
        if label == 0 || label > MAX_ORDER {
            return Err(Error::VertexOutOfRange(label, MAX_ORDER));
        }
        Ok(VertexId(label as u8))
    }

    /// 1-based label.
    pub fn label(self) -> usize {
        self.0 as usize
    }

    /// 0-based index, for array and matrix addressing.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of vertices, stored as a bitmask. Iteration is always in ascending
/// label order, so equality and hashing are structural.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The full set `{1, .., p}`.
    pub fn full(p: usize) -> Self {
        debug_assert!(p <= MAX_ORDER);
        if p == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << p) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1u64 << v.index())
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 & (1u64 << v.index()) != 0
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v.index();
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1u64 << v.index());
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersect(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending iteration over members.
    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                Some(VertexId(i as u8 + 1))
            }
        })
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<VertexId> {
        if self.0 == 0 {
            None
        } else {
            Some(VertexId(self.0.trailing_zeros() as u8 + 1))
        }
    }

    pub fn last(self) -> Option<VertexId> {
        if self.0 == 0 {
            None
        } else {
            Some(VertexId(64 - self.0.leading_zeros() as u8))
        }
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().map(VertexId::label).collect()
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let mut s = VertexSet::EMPTY;
        for l in labels {
            s.insert(VertexId::new(l)?);
        }
        Ok(s)
    }

    /// Iterate over all subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let mask = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = VertexSet(sub);
            if sub == mask {
                done = true;
            } else {
                sub = sub.wrapping_sub(mask) & mask;
            }
            Some(out)
        })
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        VertexSet::from_labels(labels).map_err(serde::de::Error::custom)
    }
}

/// A labeled undirected graph on an arbitrary subset of the vertices `1..=64`.
///
/// Adjacency is stored as one bitmask per vertex; the structure is immutable
/// once built and cheap to clone, compare, and hash.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    verts: VertexSet,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on vertices `1..=p`.
    pub fn empty(p: usize) -> Result<Self> {
        if p > MAX_ORDER {
            return Err(Error::OrderTooLarge(p));
        }
        Ok(Graph::empty_on(VertexSet::full(p)))
    }

    /// Edgeless graph on an explicit vertex set.
    pub fn empty_on(verts: VertexSet) -> Self {
        let rows = verts.last().map_or(0, |v| v.label());
        Graph { verts, adj: vec![VertexSet::EMPTY; rows] }
    }

    /// Complete graph on vertices `1..=p`.
    pub fn complete(p: usize) -> Result<Self> {
        let mut g = Graph::empty(p)?;
        let all = VertexSet::full(p);
        for v in all.iter() {
            let mut row = all;
            row.remove(v);
            g.adj[v.index()] = row;
        }
        Ok(g)
    }

    /// Graph on `1..=p` from a list of edges given as 1-based label pairs.
    pub fn from_edges(p: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(p)?;
        for &(a, b) in edges {
            let (a, b) = (VertexId::new(a)?, VertexId::new(b)?);
            if a == b {
                return Err(Error::SelfLoop(a.label()));
            }
            if !g.verts.contains(a) || !g.verts.contains(b) {
                return Err(Error::VertexOutOfRange(a.label().max(b.label()), p));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId) {
        debug_assert!(a != b && self.verts.contains(a) && self.verts.contains(b));
        self.adj[a.index()].insert(b);
        self.adj[b.index()].insert(a);
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> VertexSet {
        self.verts
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.adj.get(v.index()).copied().unwrap_or(VertexSet::EMPTY)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbors(a).contains(b)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Edges as 1-based label pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in self.verts.iter() {
            for w in self.adj[v.index()].iter() {
                if v < w {
                    out.push((v.label(), w.label()));
                }
            }
        }
        out
    }

    /// Subgraph induced by `s`, which must be a subset of the vertex set.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph> {
        if !s.is_subset(self.verts) {
            return Err(Error::VertexOutOfRange(
                s.minus(self.verts).first().map_or(0, |v| v.label()),
                self.verts.last().map_or(0, |m| m.label()),
            ));
        }
        let mut g = Graph::empty_on(s);
        for v in s.iter() {
            g.adj[v.index()] = self.adj[v.index()].intersect(s);
        }
        Ok(g)
    }

    /// Is `s` complete in this graph?
    pub fn is_complete_set(&self, s: VertexSet) -> bool {
        s.iter().all(|v| {
            let mut rest = s;
            rest.remove(v);
            rest.is_subset(self.adj[v.index()])
        })
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut remaining = self.verts;
        let mut out = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v.index()]);
                }
                next = next.minus(comp);
                comp = comp.union(next);
                frontier = next;
            }
            remaining = remaining.minus(comp);
            out.push(comp);
        }
        out
    }

    /// Maximum cardinality search. Returns the visit order together with, for
    /// each visited vertex, the set of previously visited neighbors.
    fn mcs_order(&self) -> Vec<(VertexId, VertexSet)> {
        let mut order = Vec::with_capacity(self.order());
        let mut numbered = VertexSet::EMPTY;
        let mut unnumbered = self.verts;
        while !unnumbered.is_empty() {
            let v = unnumbered
                .iter()
                .max_by_key(|v| (self.adj[v.index()].intersect(numbered).len(), std::cmp::Reverse(v.label())))
                .expect("nonempty");
            order.push((v, self.adj[v.index()].intersect(numbered)));
            numbered.insert(v);
            unnumbered.remove(v);
        }
        order
    }

    /// Decomposability (chordality) via maximum cardinality search with a
    /// zero-fill-in check on the induced elimination ordering.
    pub fn is_decomposable(&self) -> bool {
        let order = self.mcs_order();
        let mut pos = [0usize; MAX_ORDER];
        for (i, (v, _)) in order.iter().enumerate() {
            pos[v.index()] = i;
        }
        for (_, pred) in &order {
            if pred.is_empty() {
                continue;
            }
            let w = pred.iter().max_by_key(|u| pos[u.index()]).expect("nonempty");
            let mut rest = *pred;
            rest.remove(w);
            if !rest.is_subset(self.adj[w.index()]) {
                return false;
            }
        }
        true
    }

    /// Maximal cliques. The fast path requires a decomposable graph and is
    /// derived from the MCS ordering; use [`Graph::maximal_complete_sets`] for
    /// arbitrary graphs.
    pub fn cliques(&self) -> Result<Vec<VertexSet>> {
        if !self.is_decomposable() {
            return Err(Error::NotDecomposable);
        }
        let order = self.mcs_order();
        let mut candidates: Vec<VertexSet> = order
            .iter()
            .map(|(v, pred)| {
                let mut c = *pred;
                c.insert(*v);
                c
            })
            .collect();
        candidates.sort();
        candidates.dedup();
        let maximal: Vec<VertexSet> = candidates
            .iter()
            .copied()
            .filter(|c| !candidates.iter().any(|d| *c != *d && c.is_subset(*d)))
            .collect();
        Ok(maximal)
    }

    /// Maximal complete sets by Bron–Kerbosch enumeration. Valid for any
    /// graph; serves as the independent oracle for [`Graph::cliques`].
    pub fn maximal_complete_sets(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        if self.verts.is_empty() {
            return out;
        }
        self.bron_kerbosch(VertexSet::EMPTY, self.verts, VertexSet::EMPTY, &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|v| self.adj[v.index()].intersect(p).len())
            .expect("p or x nonempty");
        for v in p.minus(self.adj[pivot.index()]).iter() {
            let mut r2 = r;
            r2.insert(v);
            self.bron_kerbosch(r2, p.intersect(self.adj[v.index()]), x.intersect(self.adj[v.index()]), out);
            p.remove(v);
            x.insert(v);
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={}, E={:?})", self.verts, self.edges())
    }
}

/// All distinct unordered vertex pairs of `1..=p`, lexicographically.
pub fn vertex_pairs(p: usize) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::with_capacity(p * p.saturating_sub(1) / 2);
    for i in 1..=p {
        for j in (i + 1)..=p {
            out.push((VertexId::new(i).unwrap(), VertexId::new(j).unwrap()));
        }
    }
    out
}

/// Iterate over every decomposable graph on `p` labeled vertices, exactly once.
pub fn decomposable_graphs(p: usize) -> Result<impl Iterator<Item = Graph>> {
    if p > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge(p));
    }
    let pairs = vertex_pairs(p);
    let n_pairs = pairs.len();
    let mut code = 0u64;
    let end = 1u64 << n_pairs;
    Ok(std::iter::from_fn(move || {
        while code < end {
            let mut g = Graph::empty(p).expect("p within bounds");
            for (bit, (a, b)) in pairs.iter().enumerate() {
                if code & (1 << bit) != 0 {
                    g.add_edge(*a, *b);
                }
            }
            code += 1;
            if g.is_decomposable() {
                return Some(g);
            }
        }
        None
    }))
}

/// Number of decomposable graphs on `p` labeled vertices.
pub fn count_decomposable(p: usize) -> Result<u64> {
    Ok(decomposable_graphs(p)?.count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(l: usize) -> VertexId {
        VertexId::new(l).unwrap()
    }

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_labels(labels.iter().copied()).unwrap()
    }

    #[test]
    fn vertex_set_ops() {
        let s = vs(&[3, 1, 5]);
        assert_eq!(s.labels(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(v(3)));
        assert!(!s.contains(v(2)));
        assert_eq!(s.union(vs(&[2])).labels(), vec![1, 2, 3, 5]);
        assert_eq!(s.intersect(vs(&[3, 5, 6])).labels(), vec![3, 5]);
        assert_eq!(s.minus(vs(&[1])).labels(), vec![3, 5]);
        assert!(vs(&[1, 3]).is_subset(s));
        assert_eq!(s.subsets().count(), 8);
        assert_eq!(format!("{}", s), "{1,3,5}");
    }

    #[test]
    fn complete_graph_is_decomposable() {
        assert!(Graph::complete(4).unwrap().is_decomposable());
    }

    #[test]
    fn four_cycle_is_not_decomposable() {
        let c4 = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(!c4.is_decomposable());
    }

    #[test]
    fn decomposable_count_on_four_vertices() {
        let mut total = 0;
        let mut decomposable = 0;
        let pairs = vertex_pairs(4);
        for code in 0u64..(1 << pairs.len()) {
            let mut g = Graph::empty(4).unwrap();
            for (bit, (a, b)) in pairs.iter().enumerate() {
                if code & (1 << bit) != 0 {
                    g.add_edge(*a, *b);
                }
            }
            total += 1;
            if g.is_decomposable() {
                decomposable += 1;
            }
        }
        assert_eq!(total, 64);
        assert_eq!(decomposable, 61);
    }

    #[test]
    fn cliques_of_small_graphs() {
        assert_eq!(Graph::complete(3).unwrap().cliques().unwrap(), vec![vs(&[1, 2, 3])]);
        let path = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(path.cliques().unwrap(), vec![vs(&[1, 2]), vs(&[2, 3])]);
        let empty = Graph::empty(3).unwrap();
        assert_eq!(empty.cliques().unwrap(), vec![vs(&[1]), vs(&[2]), vs(&[3])]);
    }

    #[test]
    fn cliques_reject_non_decomposable() {
        let c4 = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(matches!(c4.cliques(), Err(Error::NotDecomposable)));
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = Graph::complete(4).unwrap();
        let sub = k4.induced_subgraph(vs(&[1, 2])).unwrap();
        assert_eq!(sub.edges(), vec![(1, 2)]);

        let any = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let none = any.induced_subgraph(VertexSet::EMPTY).unwrap();
        assert_eq!(none.order(), 0);
        assert_eq!(none.edge_count(), 0);

        let path = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let iso = path.induced_subgraph(vs(&[1, 3])).unwrap();
        assert_eq!(iso.order(), 2);
        assert_eq!(iso.edge_count(), 0);

        assert!(path.induced_subgraph(vs(&[1, 4])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(count_decomposable(1).unwrap(), 1);
        assert_eq!(count_decomposable(2).unwrap(), 2);
        assert_eq!(count_decomposable(3).unwrap(), 8);
        assert_eq!(count_decomposable(4).unwrap(), 61);
        assert_eq!(count_decomposable(5).unwrap(), 822);
        assert!(matches!(decomposable_graphs(8), Err(Error::EnumerationTooLarge(8))));
    }

    /// Independent decomposability oracle: a graph is chordal iff some vertex
    /// ordering is a perfect elimination ordering.
    fn is_decomposable_by_orderings(g: &Graph) -> bool {
        fn perms(items: &[VertexId]) -> Vec<Vec<VertexId>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for (i, &x) in items.iter().enumerate() {
                let mut rest = items.to_vec();
                rest.remove(i);
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let items: Vec<VertexId> = g.vertices().iter().collect();
        perms(&items).into_iter().any(|order| {
            let mut later = g.vertices();
            for v in &order {
                later.remove(*v);
                let succ = g.neighbors(*v).intersect(later);
                if !g.is_complete_set(succ) {
                    return false;
                }
            }
            true
        })
    }

    #[test]
    fn mcs_matches_ordering_oracle_up_to_p5() {
        for p in 1..=5usize {
            let pairs = vertex_pairs(p);
            for code in 0u64..(1 << pairs.len()) {
                let mut g = Graph::empty(p).unwrap();
                for (bit, (a, b)) in pairs.iter().enumerate() {
                    if code & (1 << bit) != 0 {
                        g.add_edge(*a, *b);
                    }
                }
                assert_eq!(g.is_decomposable(), is_decomposable_by_orderings(&g), "{:?}", g);
            }
        }
    }

    #[test]
    fn mcs_cliques_match_bron_kerbosch_up_to_p5() {
        for p in 1..=5usize {
            for g in decomposable_graphs(p).unwrap() {
                assert_eq!(g.cliques().unwrap(), g.maximal_complete_sets(), "{:?}", g);
            }
        }
    }

    #[test]
    fn induced_subgraphs_of_decomposable_are_decomposable_up_to_p5() {
        for p in 1..=5usize {
            for g in decomposable_graphs(p).unwrap() {
                for s in g.vertices().subsets() {
                    assert!(g.induced_subgraph(s).unwrap().is_decomposable());
                }
            }
        }
    }
}
