//! Junction trees: validation, the underlying-graph map, separator forests,
//! exact counting of junction-tree representations, and uniform redrawing of
//! the links at a separator.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{decomposable_graphs, Graph, VertexId, VertexSet};

/// A junction tree: a tree whose nodes are vertex sets (the cliques of the
/// underlying graph) and whose links carry the intersection of their
/// endpoints as separator.
///
/// Values are immutable once constructed; all mutation happens on private
/// builders inside the kernel code.
#[derive(Clone)]
pub struct JunctionTree {
    p: usize,
    nodes: Vec<VertexSet>,
    adj: Vec<BTreeSet<usize>>,
}

impl JunctionTree {
    /// Build and validate a junction tree from nodes, links (node-index
    /// pairs), and the order of the vertex universe.
    pub fn new(p: usize, nodes: Vec<VertexSet>, links: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        for &(a, b) in links {
            if a >= nodes.len() || b >= nodes.len() || a == b {
                return Err(Error::InvalidTree(format!("bad link ({a},{b})")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let t = JunctionTree { p, nodes, adj };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn from_parts_unchecked(p: usize, nodes: Vec<VertexSet>, adj: Vec<BTreeSet<usize>>) -> Self {
        let t = JunctionTree { p, nodes, adj };
        debug_assert!(t.check().is_ok(), "kernel produced an invalid tree: {:?}", t.check());
        t
    }

    /// The one-node tree `{{v}}`.
    pub fn trivial(p: usize, v: VertexId) -> Self {
        JunctionTree { p, nodes: vec![VertexSet::singleton(v)], adj: vec![BTreeSet::new()] }
    }

    /// Single-node tree on an arbitrary nonempty clique.
    pub fn single_node(p: usize, node: VertexSet) -> Result<Self> {
        JunctionTree::new(p, vec![node], &[])
    }

    /// A junction tree of a decomposable graph, built from the maximal
    /// cliques via a maximum-weight spanning tree of the clique graph.
    pub fn of_graph(g: &Graph) -> Result<Self> {
        let cliques = g.cliques()?;
        let k = cliques.len();
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((cliques[i].intersect(cliques[j]).len(), i, j));
            }
        }
        edges.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut links = Vec::with_capacity(k.saturating_sub(1));
        for (_, i, j) in edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                links.push((i, j));
            }
        }
        let p = g.vertices().last().map_or(0, |v| v.label());
        JunctionTree::new(p, cliques, &links)
    }

    /// Order of the vertex universe the tree lives in.
    pub fn universe(&self) -> usize {
        self.p
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> VertexSet {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[VertexSet] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    pub fn link_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Links as index pairs `(i, j)` with `i < j`.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.link_count());
        for i in 0..self.nodes.len() {
            for &j in &self.adj[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Separator carried by the link `(i, j)`.
    pub fn separator(&self, i: usize, j: usize) -> VertexSet {
        self.nodes[i].intersect(self.nodes[j])
    }

    /// Union of all node sets.
    pub fn vertices(&self) -> VertexSet {
        self.nodes.iter().fold(VertexSet::EMPTY, |acc, n| acc.union(*n))
    }

    /// Distinct separator values.
    pub fn distinct_separators(&self) -> BTreeSet<VertexSet> {
        self.links().into_iter().map(|(i, j)| self.separator(i, j)).collect()
    }

    /// Separator values with link multiplicity.
    pub fn separator_multiset(&self) -> BTreeMap<VertexSet, usize> {
        let mut out = BTreeMap::new();
        for (i, j) in self.links() {
            *out.entry(self.separator(i, j)).or_insert(0) += 1;
        }
        out
    }

    /// Indices of the node containing a given value, if present.
    pub fn find_node(&self, value: VertexSet) -> Option<usize> {
        self.nodes.iter().position(|n| *n == value)
    }

    /// Structural validity check with a diagnostic on failure: the links must
    /// form a tree, no node may contain another, and for every vertex the
    /// nodes containing it must induce a connected subtree.
    pub fn check(&self) -> Result<()> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(Error::InvalidTree("no nodes".into()));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.is_empty() {
                return Err(Error::InvalidTree(format!("node {i} is empty")));
            }
        }
        if self.link_count() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} links on {} nodes do not form a tree",
                self.link_count(),
                n
            )));
        }
        let reached = self.component_of(0, &|_, _| true);
        if reached.len() != n {
            return Err(Error::InvalidTree("links do not connect all nodes".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.nodes[i].is_subset(self.nodes[j]) || self.nodes[j].is_subset(self.nodes[i]) {
                    return Err(Error::InvalidTree(format!(
                        "node {} is nested in node {}",
                        self.nodes[i], self.nodes[j]
                    )));
                }
            }
        }
        for v in self.vertices().iter() {
            let holders: Vec<usize> = (0..n).filter(|&i| self.nodes[i].contains(v)).collect();
            let within = self.component_of(holders[0], &|a, b| {
                self.nodes[a].contains(v) && self.nodes[b].contains(v)
            });
            if !holders.iter().all(|h| within.contains(h)) {
                return Err(Error::InvalidTree(format!(
                    "vertex {v}'s nodes are not connected: {:?} vs component {:?}",
                    holders, within
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> bool {
        self.check().is_ok()
    }

    /// Nodes reachable from `start` through links accepted by `permit`.
    fn component_of(&self, start: usize, permit: &dyn Fn(usize, usize) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in &self.adj[i] {
                if !seen.contains(&j) && permit(i, j) {
                    seen.insert(j);
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// The graph `g(T)`: the union of complete graphs on each node.
    pub fn underlying_graph(&self) -> Graph {
        let mut g = Graph::empty_on(self.vertices());
        for node in &self.nodes {
            let members: Vec<VertexId> = node.iter().collect();
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    g.add_edge(*a, *b);
                }
            }
        }
        g
    }

    /// Node indices of `T_s`, the subtree of nodes containing `s`.
    pub fn nodes_containing(&self, s: VertexSet) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| s.is_subset(self.nodes[i])).collect()
    }

    /// Components of the forest obtained from `T_s` by deleting the links
    /// whose separator equals `s`, as node-index lists in canonical order.
    pub(crate) fn forest_components(&self, s: VertexSet) -> Result<Vec<Vec<usize>>> {
        let holders: BTreeSet<usize> = self.nodes_containing(s).into_iter().collect();
        if !s.is_empty() && !self.distinct_separators().contains(&s) {
            return Err(Error::NotASeparator(format!("{s}")));
        }
        let mut remaining = holders.clone();
        let mut components = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let comp = self.component_of(start, &|a, b| {
                holders.contains(&a) && holders.contains(&b) && self.separator(a, b) != s
            });
            let comp: Vec<usize> = comp.into_iter().collect();
            for i in &comp {
                remaining.remove(i);
            }
            components.push(comp);
        }
        components.sort_by_key(|c| c[0]);
        Ok(components)
    }

    /// Summary of the forest `F_s(T)` used for the reconnection count.
    pub fn separator_forest(&self, s: VertexSet) -> Result<SeparatorForest> {
        let components = self.forest_components(s)?;
        Ok(SeparatorForest { separator: s, component_sizes: components.iter().map(Vec::len).collect() })
    }

    /// Exact number of junction trees representing `g(T)`.
    pub fn mu(&self) -> BigUint {
        self.mu_factorization().product
    }

    /// `log mu` as a float, for weight arithmetic.
    pub fn log_mu(&self) -> f64 {
        self.mu_factorization().log_product()
    }

    /// The per-separator factorization of `mu`.
    pub fn mu_factorization(&self) -> MuFactorization {
        let mut factors = BTreeMap::new();
        for s in self.distinct_separators() {
            let f = self.separator_forest(s).expect("distinct separator");
            factors.insert(s, nu(&f));
        }
        MuFactorization::from_factors(factors)
    }

    /// Redraw the links at separator `s` uniformly at random among the valid
    /// reconnections; the underlying graph is unchanged.
    pub fn randomize_at_separator<R: Rng>(&self, s: VertexSet, rng: &mut R) -> Result<JunctionTree> {
        let components = self.forest_components(s)?;
        let q = components.len();
        if q == 1 {
            return Ok(self.clone());
        }

        let new_links = reconnect_uniform(&components, rng);

        let mut adj = self.adj.clone();
        for (i, j) in self.links() {
            if self.separator(i, j) == s {
                adj[i].remove(&j);
                adj[j].remove(&i);
            }
        }
        for (a, b) in new_links {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(JunctionTree::from_parts_unchecked(self.p, self.nodes.clone(), adj))
    }

    /// Draw a fresh representation of the same graph by randomizing at every
    /// distinct separator in canonical order.
    pub fn shuffle_representation<R: Rng>(&self, rng: &mut R) -> JunctionTree {
        let mut t = self.clone();
        for s in self.distinct_separators() {
            t = t.randomize_at_separator(s, rng).expect("separator of the tree");
        }
        t
    }

    /// Canonical structural key: nodes sorted, links relabeled accordingly.
    pub fn canonical_key(&self) -> CanonicalTree {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| self.nodes[i]);
        let mut rank = vec![0usize; self.nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut links: Vec<(usize, usize)> = self
            .links()
            .into_iter()
            .map(|(i, j)| {
                let (a, b) = (rank[i], rank[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        links.sort();
        CanonicalTree { nodes: order.iter().map(|&i| self.nodes[i]).collect(), links }
    }

    /// Link set as unordered pairs of node values, restricted to links whose
    /// separator is nonempty.
    pub(crate) fn nonempty_separator_link_values(&self) -> BTreeSet<(VertexSet, VertexSet)> {
        self.links()
            .into_iter()
            .filter(|&(i, j)| !self.separator(i, j).is_empty())
            .map(|(i, j)| {
                let (a, b) = (self.nodes[i], self.nodes[j]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

impl PartialEq for JunctionTree {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

impl Eq for JunctionTree {}

impl fmt::Debug for JunctionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JunctionTree(nodes={:?}, links={:?})", self.nodes, self.links())
    }
}

/// Structural identity of a junction tree, usable as a map key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalTree {
    pub nodes: Vec<VertexSet>,
    pub links: Vec<(usize, usize)>,
}

/// Component-size summary of the forest `F_s(T)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparatorForest {
    pub separator: VertexSet,
    pub component_sizes: Vec<usize>,
}

impl SeparatorForest {
    pub fn q(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn total(&self) -> usize {
        self.component_sizes.iter().sum()
    }
}

/// Number of distinct trees connecting the components of a forest: the
/// generalized Cayley count `total^(q-2) * prod r_i` for `q >= 2`, and 1 for
/// a single component.
pub fn nu(forest: &SeparatorForest) -> BigUint {
    let q = forest.q();
    if q <= 1 {
        return BigUint::one();
    }
    let total = BigUint::from(forest.total());
    let mut out = total.pow(q as u32 - 2);
    for &r in &forest.component_sizes {
        out *= BigUint::from(r);
    }
    out
}

pub fn log_nu(forest: &SeparatorForest) -> f64 {
    let q = forest.q();
    if q <= 1 {
        return 0.0;
    }
    (q as f64 - 2.0) * (forest.total() as f64).ln()
        + forest.component_sizes.iter().map(|&r| (r as f64).ln()).sum::<f64>()
}

/// The factorization `mu = prod_S nu(S)` over distinct separators, kept per
/// separator so that a one-vertex expansion can update it incrementally.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuFactorization {
    pub factors: BTreeMap<VertexSet, BigUint>,
    pub product: BigUint,
}

impl MuFactorization {
    pub fn from_factors(factors: BTreeMap<VertexSet, BigUint>) -> Self {
        let product = factors.values().fold(BigUint::one(), |acc, f| acc * f);
        MuFactorization { factors, product }
    }

    pub fn log_product(&self) -> f64 {
        self.factors
            .values()
            .map(|f| f.to_f64().expect("factor fits in f64 range").ln())
            .sum()
    }
}

/// Uniform reconnection of a forest into a tree by the random-list
/// construction: a list `v` of q-2 forest nodes drawn with replacement, one
/// marked node per component, then repeatedly link the highest-indexed
/// unblocked component mark to the head of `v`. Each of the
/// `total^(q-2) * prod r_i` reconnections is equally likely.
pub(crate) fn reconnect_uniform<R: Rng>(components: &[Vec<usize>], rng: &mut R) -> Vec<(usize, usize)> {
    let q = components.len();
    if q <= 1 {
        return Vec::new();
    }
    let all: Vec<(usize, usize)> = components
        .iter()
        .enumerate()
        .flat_map(|(ci, comp)| comp.iter().map(move |&n| (ci, n)))
        .collect();
    let mut v: Vec<(usize, usize)> = (0..q - 2).map(|_| all[rng.random_range(0..all.len())]).collect();
    let mut w: Vec<(usize, usize)> = components
        .iter()
        .enumerate()
        .map(|(ci, comp)| (ci, comp[rng.random_range(0..comp.len())]))
        .collect();

    let mut new_links: Vec<(usize, usize)> = Vec::with_capacity(q - 1);
    while !v.is_empty() {
        let blocked: BTreeSet<usize> = v.iter().map(|(ci, _)| *ci).collect();
        let pos = w
            .iter()
            .enumerate()
            .filter(|(_, (ci, _))| !blocked.contains(ci))
            .map(|(k, _)| k)
            .next_back()
            .expect("at least two unblocked marks");
        let x = w.remove(pos);
        let y = v.remove(0);
        new_links.push((x.1, y.1));
    }
    new_links.push((w[0].1, w[1].1));
    new_links
}

/// Mutable scaffold for building a tree from an existing one; node slots are
/// stable under removal and compacted on `finish`.
pub(crate) struct TreeBuilder {
    p: usize,
    slots: Vec<Option<VertexSet>>,
    adj: Vec<BTreeSet<usize>>,
}

impl TreeBuilder {
    pub(crate) fn from_tree(t: &JunctionTree) -> Self {
        TreeBuilder {
            p: t.p,
            slots: t.nodes.iter().copied().map(Some).collect(),
            adj: t.adj.clone(),
        }
    }

    pub(crate) fn with_universe(mut self, p: usize) -> Self {
        self.p = self.p.max(p);
        self
    }

    pub(crate) fn node(&self, i: usize) -> VertexSet {
        self.slots[i].expect("live node")
    }

    pub(crate) fn add_node(&mut self, value: VertexSet) -> usize {
        self.slots.push(Some(value));
        self.adj.push(BTreeSet::new());
        self.slots.len() - 1
    }

    pub(crate) fn remove_node(&mut self, i: usize) {
        for j in std::mem::take(&mut self.adj[i]) {
            self.adj[j].remove(&i);
        }
        self.slots[i] = None;
    }

    pub(crate) fn add_link(&mut self, a: usize, b: usize) {
        debug_assert!(a != b && self.slots[a].is_some() && self.slots[b].is_some());
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub(crate) fn remove_link(&mut self, a: usize, b: usize) {
        self.adj[a].remove(&b);
        self.adj[b].remove(&a);
    }

    pub(crate) fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    /// Compact live slots into a tree. The result is not validated; callers
    /// either guarantee validity or compare the result against a known tree.
    pub(crate) fn finish(self) -> JunctionTree {
        let mut remap = vec![usize::MAX; self.slots.len()];
        let mut nodes = Vec::new();
        for (i, slot) in self.slots.iter().enumerate() {
            if let Some(v) = slot {
                remap[i] = nodes.len();
                nodes.push(*v);
            }
        }
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        for (i, nbrs) in self.adj.iter().enumerate() {
            if self.slots[i].is_none() {
                continue;
            }
            for &j in nbrs {
                adj[remap[i]].insert(remap[j]);
            }
        }
        JunctionTree { p: self.p, nodes, adj }
    }
}

/// Separator values created by a single expander step from `t_old` to
/// `t_new`, derived from the structure of `t_new` alone: link separators
/// containing the new vertex, plus retained sets `C* \ {y}` on links joining
/// a new node to its origin.
fn created_separators(t_new: &JunctionTree, y: VertexId) -> BTreeSet<VertexSet> {
    let mut out = BTreeSet::new();
    for (i, j) in t_new.links() {
        let sep = t_new.separator(i, j);
        if sep.contains(y) {
            out.insert(sep);
            continue;
        }
        for (a, b) in [(i, j), (j, i)] {
            let (u, w) = (t_new.node(a), t_new.node(b));
            if u.contains(y) && !w.contains(y) {
                let mut retained = u;
                retained.remove(y);
                if sep == retained {
                    out.insert(retained);
                }
            }
        }
    }
    out
}

/// Incremental update of the `mu` factorization across one expander step.
///
/// Factors for separators not contained in any newly created separator are
/// reused from `prev`; the rest are recomputed on `t_new`.
pub fn mu_update(prev: &MuFactorization, t_old: &JunctionTree, t_new: &JunctionTree) -> Result<MuFactorization> {
    let old_verts = t_old.vertices();
    let new_verts = t_new.vertices();
    let added = new_verts.minus(old_verts);
    if added.len() != 1 || !old_verts.is_subset(new_verts) {
        return Err(Error::VertexSetMismatch);
    }
    let y = added.first().expect("one added vertex");
    let fresh = created_separators(t_new, y);
    let dominated = |s: VertexSet| fresh.iter().any(|f| s.is_subset(*f));

    let mut factors = BTreeMap::new();
    for s in t_new.distinct_separators() {
        if dominated(s) {
            factors.insert(s, nu(&t_new.separator_forest(s)?));
        } else {
            let carried = prev
                .factors
                .get(&s)
                .ok_or_else(|| Error::MuBookkeeping(format!("separator {s} missing from previous factors")))?;
            factors.insert(s, carried.clone());
        }
    }
    for s in prev.factors.keys() {
        if !dominated(*s) && !factors.contains_key(s) {
            return Err(Error::MuBookkeeping(format!("separator {s} vanished without being displaced")));
        }
    }
    Ok(MuFactorization::from_factors(factors))
}

/// Edge lists of every labeled tree on `k` nodes (Prüfer enumeration).
pub fn labeled_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    match k {
        0 => vec![],
        1 => vec![vec![]],
        2 => vec![vec![(0, 1)]],
        _ => {
            let seq_len = k - 2;
            let count = (k as u64).pow(seq_len as u32);
            let mut out = Vec::with_capacity(count as usize);
            for code in 0..count {
                let mut seq = Vec::with_capacity(seq_len);
                let mut c = code;
                for _ in 0..seq_len {
                    seq.push((c % k as u64) as usize);
                    c /= k as u64;
                }
                out.push(pruefer_decode(&seq, k));
            }
            out
        }
    }
}

fn pruefer_decode(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    let mut leaves: BTreeSet<usize> = (0..k).filter(|&i| degree[i] == 1).collect();
    for &s in seq {
        let leaf = *leaves.iter().next().expect("leaf available");
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every junction tree of a decomposable graph, by filtering all labeled
/// trees on its cliques through the validity check.
pub fn junction_trees_of(g: &Graph) -> Result<Vec<JunctionTree>> {
    let cliques = g.cliques()?;
    let p = g.vertices().last().map_or(0, |v| v.label());
    let mut out = Vec::new();
    for links in labeled_trees(cliques.len()) {
        if let Ok(t) = JunctionTree::new(p, cliques.clone(), &links) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Every junction tree over every decomposable graph on vertices `1..=p`.
pub fn all_junction_trees(p: usize) -> Result<Vec<JunctionTree>> {
    let mut out = Vec::new();
    for g in decomposable_graphs(p)? {
        out.extend(junction_trees_of(&g)?);
    }
    Ok(out)
}

/// Every junction tree over every decomposable graph on an explicit vertex
/// set (used by exhaustive oracles working on combination prefixes).
pub fn all_junction_trees_on(verts: VertexSet) -> Result<Vec<JunctionTree>> {
    let m = verts.len();
    if m > crate::graph::ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge(m));
    }
    let members: Vec<VertexId> = verts.iter().collect();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            pairs.push((members[i], members[j]));
        }
    }
    let mut out = Vec::new();
    for code in 0u64..(1 << pairs.len()) {
        let mut g = Graph::empty_on(verts);
        for (bit, (a, b)) in pairs.iter().enumerate() {
            if code & (1 << bit) != 0 {
                g.add_edge(*a, *b);
            }
        }
        if g.is_decomposable() {
            out.extend(junction_trees_of(&g)?);
        }
    }
    Ok(out)
}
