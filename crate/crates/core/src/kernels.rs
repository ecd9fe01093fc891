//! Transdimensional junction-tree kernels: a stochastic subtree sampler, the
//! one-vertex tree expander, the matching collapser, and exact transition
//! densities for all three.
//!
//! The expander grows `g(T)` by a single vertex while preserving the
//! junction-tree property and the induced subgraph on the old vertices; the
//! collapser removes one vertex and always lands in the support of the
//! reverse expansion. Both directions expose the total transition
//! probability, summed over every internal randomization that can produce
//! the same output, which is what importance weights require.

use rand::Rng;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSet};
use crate::jtree::{nu, reconnect_uniform, JunctionTree, TreeBuilder};

/// Tuning parameters of the subtree sampler, strictly inside `(0,1)^2`.
/// Boundary values would break the full-support guarantees of the expander.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpanderParams {
    alpha: f64,
    beta: f64,
}

impl ExpanderParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, x) in [("alpha", alpha), ("beta", beta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {x} must lie strictly in (0,1)")));
            }
        }
        Ok(ExpanderParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// A connected (possibly empty) set of node indices of a host tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubtreeSelection {
    node_indices: Vec<usize>,
}

impl SubtreeSelection {
    pub fn empty() -> Self {
        SubtreeSelection { node_indices: Vec::new() }
    }

    pub fn from_indices(mut node_indices: Vec<usize>) -> Self {
        node_indices.sort_unstable();
        node_indices.dedup();
        SubtreeSelection { node_indices }
    }

    pub fn is_empty(&self) -> bool {
        self.node_indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.node_indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.node_indices
    }
}

/// Per-node record of one expander step.
#[derive(Clone, Debug, Serialize)]
pub struct NodeExpansion {
    /// Index of the originating node in the host tree.
    pub host_node: usize,
    pub host_value: VertexSet,
    /// Union of the separators toward subtree neighbors (the forced part).
    pub separator_union: VertexSet,
    /// The freely drawn extra vertices.
    pub extra: VertexSet,
    /// `separator_union | extra`.
    pub retained: VertexSet,
    /// `retained | {new vertex}`.
    pub new_node: VertexSet,
    /// Whether the originating node was swallowed by the new node.
    pub engulfed: bool,
    /// Values of the neighbors relocated onto the new node.
    pub moved_neighbors: Vec<VertexSet>,
}

/// Record of the randomization taken by one expander step.
#[derive(Clone, Debug, Serialize)]
pub enum ExpansionRoute {
    /// The new vertex entered as an isolated node, followed by a uniform
    /// redraw of the empty-separator links.
    Empty { reconnected_links: Vec<(VertexSet, VertexSet)> },
    /// A nonempty subtree was replicated.
    Subtree { selection: SubtreeSelection, nodes: Vec<NodeExpansion> },
}

/// Full debug trace of an expander step; serializable as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionTrace {
    pub new_vertex: VertexId,
    pub route: ExpansionRoute,
}

/// Stochastic breadth-first traversal: with probability `1 - beta` the empty
/// selection; otherwise BFS from a uniform root where each untried link is
/// crossed with probability `alpha`.
pub fn sample_subtree<R: Rng>(t: &JunctionTree, params: &ExpanderParams, rng: &mut R) -> SubtreeSelection {
    if !rng.random_bool(params.beta) {
        return SubtreeSelection::empty();
    }
    let root = rng.random_range(0..t.node_count());
    let mut visited: BTreeSet<usize> = BTreeSet::new();
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        visited.insert(i);
        for &j in t.neighbors(i) {
            if !visited.contains(&j) && rng.random_bool(params.alpha) {
                queue.push_back(j);
            }
        }
    }
    SubtreeSelection::from_indices(visited.into_iter().collect())
}

/// Total probability that [`sample_subtree`] returns `s`, summed over roots
/// and traversal orders: `1 - beta` for the empty selection, otherwise
/// `beta * (n'/n) * alpha^(n'-1) * (1-alpha)^b` with `b` the number of
/// boundary links.
pub fn subtree_probability(t: &JunctionTree, s: &SubtreeSelection, params: &ExpanderParams) -> Result<f64> {
    if s.is_empty() {
        return Ok(1.0 - params.beta);
    }
    let chosen: BTreeSet<usize> = s.indices().iter().copied().collect();
    if chosen.iter().any(|&i| i >= t.node_count()) {
        return Err(Error::InvalidParameter("selection references unknown node".into()));
    }
    let start = *chosen.iter().next().expect("nonempty");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for &j in t.neighbors(i) {
            if chosen.contains(&j) && seen.insert(j) {
                stack.push(j);
            }
        }
    }
    if seen.len() != chosen.len() {
        return Err(Error::DisconnectedSubtree);
    }

    let n = t.node_count() as f64;
    let n_sel = chosen.len();
    let boundary: usize =
        chosen.iter().map(|&i| t.neighbors(i).iter().filter(|j| !chosen.contains(j)).count()).sum();
    Ok(params.beta
        * (n_sel as f64 / n)
        * params.alpha.powi(n_sel as i32 - 1)
        * (1.0 - params.alpha).powi(boundary as i32))
}

/// Subset of `set` by an independent fair coin per element.
fn draw_subset<R: Rng>(set: VertexSet, rng: &mut R) -> VertexSet {
    let mut out = VertexSet::EMPTY;
    for v in set.iter() {
        if rng.random_bool(0.5) {
            out.insert(v);
        }
    }
    out
}

/// Per-node free choices of an expander step, aligned with the selection.
#[derive(Clone, Debug)]
pub(crate) struct NodeChoice {
    pub extra: VertexSet,
    /// Host-tree indices of neighbors relocated onto the new node.
    pub moved: BTreeSet<usize>,
}

/// Components of the tree after cutting every empty-separator link,
/// optionally skipping one removed node; node-index lists in canonical order.
fn empty_cut_components(t: &JunctionTree, skip: Option<usize>) -> Vec<Vec<usize>> {
    let mut remaining: BTreeSet<usize> = (0..t.node_count()).filter(|&i| Some(i) != skip).collect();
    let mut components = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in t.neighbors(i) {
                if Some(j) != skip && !t.separator(i, j).is_empty() && !comp.contains(&j) {
                    comp.insert(j);
                    stack.push(j);
                }
            }
        }
        for i in &comp {
            remaining.remove(i);
        }
        components.push(comp.into_iter().collect());
    }
    components
}

/// Grow the tree by `new_vertex`. Returns the expanded tree together with a
/// trace of every random choice taken.
pub fn expand<R: Rng>(
    t: &JunctionTree,
    new_vertex: VertexId,
    params: &ExpanderParams,
    rng: &mut R,
) -> Result<(JunctionTree, ExpansionTrace)> {
    if t.vertices().contains(new_vertex) {
        return Err(Error::VertexPresent(new_vertex.label()));
    }
    let selection = sample_subtree(t, params, rng);
    if selection.is_empty() {
        let (out, links) = expand_empty_route(t, new_vertex, rng);
        debug_assert!(out.validate());
        return Ok((out, ExpansionTrace { new_vertex, route: ExpansionRoute::Empty { reconnected_links: links } }));
    }

    let sel_set: BTreeSet<usize> = selection.indices().iter().copied().collect();
    let mut choices = Vec::with_capacity(selection.len());
    for &j in selection.indices() {
        let node = t.node(j);
        let sep_union = separator_union(t, j, &sel_set);
        let mandated = sel_set
            .iter()
            .filter(|&&k| t.neighbors(j).contains(&k))
            .any(|&k| t.separator(j, k) == sep_union);
        let free = node.minus(sep_union);
        let extra = loop {
            let m = draw_subset(free, rng);
            if !(mandated && m.is_empty()) {
                break m;
            }
        };
        let retained = sep_union.union(extra);
        let moved = if retained == node {
            BTreeSet::new()
        } else {
            let mut moved = BTreeSet::new();
            for &x in t.neighbors(j) {
                if !sel_set.contains(&x) && t.separator(j, x).is_subset(retained) && rng.random_bool(0.5) {
                    moved.insert(x);
                }
            }
            moved
        };
        choices.push(NodeChoice { extra, moved });
    }
    let (out, records) = apply_expansion(t, &selection, &choices, new_vertex);
    debug_assert!(out.validate(), "expander output invalid: {:?}", out.check());
    Ok((out, ExpansionTrace { new_vertex, route: ExpansionRoute::Subtree { selection, nodes: records } }))
}

fn expand_empty_route<R: Rng>(
    t: &JunctionTree,
    new_vertex: VertexId,
    rng: &mut R,
) -> (JunctionTree, Vec<(VertexSet, VertexSet)>) {
    let mut builder = TreeBuilder::from_tree(t).with_universe(new_vertex.label());
    let fresh = builder.add_node(VertexSet::singleton(new_vertex));
    for (i, j) in t.links() {
        if t.separator(i, j).is_empty() {
            builder.remove_link(i, j);
        }
    }
    let mut components = empty_cut_components(t, None);
    components.push(vec![fresh]);
    let links = reconnect_uniform(&components, rng);
    let mut link_values = Vec::with_capacity(links.len());
    for (a, b) in links {
        builder.add_link(a, b);
        link_values.push((builder.node(a), builder.node(b)));
    }
    (builder.finish(), link_values)
}

fn separator_union(t: &JunctionTree, j: usize, sel: &BTreeSet<usize>) -> VertexSet {
    t.neighbors(j)
        .iter()
        .filter(|k| sel.contains(k))
        .fold(VertexSet::EMPTY, |acc, &k| acc.union(t.separator(j, k)))
}

/// Deterministic part of the expander: replicate the selection with the
/// given choices. Shared by the forward sampler and by density replay.
pub(crate) fn apply_expansion(
    t: &JunctionTree,
    selection: &SubtreeSelection,
    choices: &[NodeChoice],
    new_vertex: VertexId,
) -> (JunctionTree, Vec<NodeExpansion>) {
    let sel_set: BTreeSet<usize> = selection.indices().iter().copied().collect();
    let mut builder = TreeBuilder::from_tree(t).with_universe(new_vertex.label());
    let mut records = Vec::with_capacity(selection.len());
    let mut new_index = vec![usize::MAX; selection.len()];

    for (pos, &j) in selection.indices().iter().enumerate() {
        let node = t.node(j);
        let sep_union = separator_union(t, j, &sel_set);
        let retained = sep_union.union(choices[pos].extra);
        let mut new_node = retained;
        new_node.insert(new_vertex);
        new_index[pos] = builder.add_node(new_node);
        records.push(NodeExpansion {
            host_node: j,
            host_value: node,
            separator_union: sep_union,
            extra: choices[pos].extra,
            retained,
            new_node,
            engulfed: retained == node,
            moved_neighbors: choices[pos].moved.iter().map(|&x| t.node(x)).collect(),
        });
    }

    // Replicate the subtree structure on the new nodes.
    for (pos, &j) in selection.indices().iter().enumerate() {
        for (qos, &k) in selection.indices().iter().enumerate().skip(pos + 1) {
            if t.neighbors(j).contains(&k) {
                builder.remove_link(j, k);
                builder.add_link(new_index[pos], new_index[qos]);
            }
        }
    }
    // Swallowed hosts hand all remaining links to their replacement; the
    // others link to their replica and optionally hand over movable links.
    for (pos, &j) in selection.indices().iter().enumerate() {
        if records[pos].engulfed {
            let nbrs: Vec<usize> = builder.neighbors(j).iter().copied().collect();
            for x in nbrs {
                builder.remove_link(j, x);
                builder.add_link(new_index[pos], x);
            }
            builder.remove_node(j);
        } else {
            builder.add_link(j, new_index[pos]);
            for &x in &choices[pos].moved {
                builder.remove_link(j, x);
                builder.add_link(new_index[pos], x);
            }
        }
    }
    (builder.finish(), records)
}

/// One generating route of a realized transition: the subtree plus the
/// forced per-node choices that reproduce the target tree.
#[derive(Clone, Debug)]
pub(crate) struct GeneratingRoute {
    pub selection: SubtreeSelection,
    pub choices: Vec<NodeChoice>,
}

/// Probability that the subtree route produces its target: the subtree
/// probability times the probability of every forced draw.
pub(crate) fn route_probability(t: &JunctionTree, route: &GeneratingRoute, params: &ExpanderParams) -> f64 {
    let sel_set: BTreeSet<usize> = route.selection.indices().iter().copied().collect();
    let mut prob = match subtree_probability(t, &route.selection, params) {
        Ok(p) => p,
        Err(_) => return 0.0,
    };
    for (pos, &j) in route.selection.indices().iter().enumerate() {
        let node = t.node(j);
        let sep_union = separator_union(t, j, &sel_set);
        let mandated = sel_set
            .iter()
            .filter(|&&k| t.neighbors(j).contains(&k))
            .any(|&k| t.separator(j, k) == sep_union);
        let free = node.minus(sep_union);
        let extra = route.choices[pos].extra;
        if !extra.is_subset(free) || (mandated && extra.is_empty()) {
            return 0.0;
        }
        let outcomes = (1u64 << free.len()) - u64::from(mandated);
        prob /= outcomes as f64;

        let retained = sep_union.union(extra);
        if retained != node {
            let movable: BTreeSet<usize> = t
                .neighbors(j)
                .iter()
                .copied()
                .filter(|x| !sel_set.contains(x) && t.separator(j, *x).is_subset(retained))
                .collect();
            if !route.choices[pos].moved.is_subset(&movable) {
                return 0.0;
            }
            prob *= 0.5f64.powi(movable.len() as i32);
        } else if !route.choices[pos].moved.is_empty() {
            return 0.0;
        }
    }
    prob
}

/// Reconstruct every subtree of `t` from which the expander can produce
/// `t_plus`, together with the forced choices. The route set has size 0, 1,
/// or 2; the two-route case only occurs for single-node selections.
pub(crate) fn generating_routes(t: &JunctionTree, t_plus: &JunctionTree) -> Result<Vec<GeneratingRoute>> {
    let y = added_vertex(t, t_plus)?;
    let vplus: Vec<usize> = (0..t_plus.node_count()).filter(|&i| t_plus.node(i).contains(y)).collect();
    debug_assert!(!vplus.is_empty());
    let vplus_set: BTreeSet<usize> = vplus.iter().copied().collect();

    // Per new node: the retained set and the candidate origins in t.
    let mut candidate_sets: Vec<Vec<usize>> = Vec::with_capacity(vplus.len());
    let mut retained_sets = Vec::with_capacity(vplus.len());
    let mut forced_engulf_values = BTreeSet::new();
    for &i in &vplus {
        let mut retained = t_plus.node(i);
        retained.remove(y);
        retained_sets.push(retained);
        if let Some(origin) = t.find_node(retained) {
            // The host was swallowed: it must reappear as this origin.
            forced_engulf_values.insert(retained);
            candidate_sets.push(vec![origin]);
        } else {
            let mut cands = Vec::new();
            for &x in t_plus.neighbors(i) {
                if vplus_set.contains(&x) || t_plus.node(x).intersect(t_plus.node(i)) != retained {
                    continue;
                }
                if let Some(idx) = t.find_node(t_plus.node(x)) {
                    cands.push(idx);
                }
            }
            if cands.is_empty() {
                return Ok(Vec::new());
            }
            candidate_sets.push(cands);
        }
    }

    // Every node of t that vanished must be accounted for by engulfment.
    let plus_values: BTreeSet<VertexSet> = t_plus.nodes().iter().copied().collect();
    let missing: BTreeSet<VertexSet> = t.nodes().iter().copied().filter(|v| !plus_values.contains(v)).collect();
    if missing != forced_engulf_values {
        return Ok(Vec::new());
    }

    let target_key = t_plus.canonical_key();
    let mut routes = Vec::new();
    let mut assignment = vec![usize::MAX; vplus.len()];
    let ctx = RouteSearch {
        t,
        t_plus,
        y,
        vplus: &vplus,
        vplus_set: &vplus_set,
        candidate_sets: &candidate_sets,
        retained_sets: &retained_sets,
        target_key: &target_key,
    };
    ctx.assign(0, &mut assignment, &mut routes);
    Ok(routes)
}

struct RouteSearch<'a> {
    t: &'a JunctionTree,
    t_plus: &'a JunctionTree,
    y: VertexId,
    vplus: &'a [usize],
    vplus_set: &'a BTreeSet<usize>,
    candidate_sets: &'a [Vec<usize>],
    retained_sets: &'a [VertexSet],
    target_key: &'a crate::jtree::CanonicalTree,
}

impl RouteSearch<'_> {
    fn assign(&self, pos: usize, assignment: &mut Vec<usize>, routes: &mut Vec<GeneratingRoute>) {
        if pos == self.vplus.len() {
            if let Some(route) = self.build_route(assignment) {
                let (candidate, _) = apply_expansion(self.t, &route.selection, &route.choices, self.y);
                if candidate.canonical_key() == *self.target_key {
                    routes.push(route);
                }
            }
            return;
        }
        'cand: for &origin in &self.candidate_sets[pos] {
            if assignment[..pos].contains(&origin) {
                continue;
            }
            // The replicated structure mirrors links among the new nodes.
            for prev in 0..pos {
                let linked_plus = self.t_plus.neighbors(self.vplus[pos]).contains(&self.vplus[prev]);
                let linked_host = self.t.neighbors(origin).contains(&assignment[prev]);
                if linked_plus != linked_host {
                    continue 'cand;
                }
            }
            assignment[pos] = origin;
            self.assign(pos + 1, assignment, routes);
            assignment[pos] = usize::MAX;
        }
    }

    /// Assemble the forced choices for a full origin assignment; `None` if
    /// the assignment is structurally inconsistent.
    fn build_route(&self, assignment: &[usize]) -> Option<GeneratingRoute> {
        let selection = SubtreeSelection::from_indices(assignment.to_vec());
        if selection.len() != assignment.len() {
            return None;
        }
        let sel_set: BTreeSet<usize> = assignment.iter().copied().collect();
        let mut by_origin: Vec<(usize, NodeChoice)> = Vec::with_capacity(assignment.len());
        for (pos, &origin) in assignment.iter().enumerate() {
            let retained = self.retained_sets[pos];
            let sep_union = separator_union(self.t, origin, &sel_set);
            if !sep_union.is_subset(retained) || !retained.is_subset(self.t.node(origin)) {
                return None;
            }
            let mut moved = BTreeSet::new();
            for &x in self.t_plus.neighbors(self.vplus[pos]) {
                if self.vplus_set.contains(&x) {
                    continue;
                }
                let value = self.t_plus.node(x);
                if value == self.t.node(origin) {
                    continue; // the origin link itself
                }
                moved.insert(self.t.find_node(value)?);
            }
            if retained == self.t.node(origin) {
                // Swallowed host: everything is transferred, nothing drawn.
                moved.clear();
            }
            by_origin.push((origin, NodeChoice { extra: retained.minus(sep_union), moved }));
        }
        by_origin.sort_by_key(|(origin, _)| *origin);
        Some(GeneratingRoute { selection, choices: by_origin.into_iter().map(|(_, c)| c).collect() })
    }
}

/// The subtrees of `t` from which the expander can produce `t_plus`.
pub fn generating_subtrees(t: &JunctionTree, t_plus: &JunctionTree) -> Result<Vec<SubtreeSelection>> {
    let mut out: Vec<SubtreeSelection> = generating_routes(t, t_plus)?.into_iter().map(|r| r.selection).collect();
    out.sort_by(|a, b| a.indices().cmp(b.indices()));
    out.dedup();
    Ok(out)
}

fn added_vertex(t: &JunctionTree, t_plus: &JunctionTree) -> Result<VertexId> {
    let old = t.vertices();
    let new = t_plus.vertices();
    let added = new.minus(old);
    if added.len() != 1 || !old.is_subset(new) {
        return Err(Error::VertexSetMismatch);
    }
    Ok(added.first().expect("one added vertex"))
}

/// Total transition probability of the expander from `t` to `t_plus`: the
/// empty route (when applicable) plus every generating-subtree route. Zero
/// when `t_plus` is unreachable.
pub fn expander_density(t: &JunctionTree, t_plus: &JunctionTree, params: &ExpanderParams) -> Result<f64> {
    let y = added_vertex(t, t_plus)?;
    let mut total = 0.0;

    if t_plus.find_node(VertexSet::singleton(y)).is_some() {
        // The empty route can produce t_plus iff, apart from the isolated
        // {y}, the nodes and the nonempty-separator structure are untouched.
        let mut plus_nodes: Vec<VertexSet> = t_plus.nodes().to_vec();
        plus_nodes.retain(|n| *n != VertexSet::singleton(y));
        let mut old_nodes: Vec<VertexSet> = t.nodes().to_vec();
        plus_nodes.sort();
        old_nodes.sort();
        if plus_nodes == old_nodes && t.nonempty_separator_link_values() == t_plus.nonempty_separator_link_values() {
            let forest = t_plus.separator_forest(VertexSet::EMPTY)?;
            total += (1.0 - params.beta()) / biguint_to_f64(&nu(&forest));
        }
    }

    for route in generating_routes(t, t_plus)? {
        total += route_probability(t, &route, params);
    }
    Ok(total)
}

fn biguint_to_f64(x: &num_bigint::BigUint) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("count fits in f64 range")
}

/// Origin choice for one new node during a collapse.
#[derive(Clone, Debug)]
enum OriginChoice {
    /// Reinstate the swallowed host `C* \ {y}` as a fresh node.
    Fresh(VertexSet),
    /// Hand the links to an existing neighbor (node index in `t_plus`).
    Existing(usize),
}

/// Remove `victim` from the tree, reversing one expander step: if `{victim}`
/// is a node it is deleted and the empty-separator links are redrawn
/// uniformly; otherwise each node containing `victim` hands its links to a
/// uniformly chosen origin.
pub fn collapse<R: Rng>(t_plus: &JunctionTree, victim: VertexId, rng: &mut R) -> Result<JunctionTree> {
    if !t_plus.vertices().contains(victim) {
        return Err(Error::VertexAbsent(victim.label()));
    }
    if t_plus.vertices().len() < 2 {
        return Err(Error::InvalidParameter("cannot collapse the only vertex".into()));
    }
    if let Some(singleton) = t_plus.find_node(VertexSet::singleton(victim)) {
        let mut builder = TreeBuilder::from_tree(t_plus);
        builder.remove_node(singleton);
        for (i, j) in t_plus.links() {
            if i != singleton && j != singleton && t_plus.separator(i, j).is_empty() {
                builder.remove_link(i, j);
            }
        }
        let components = empty_cut_components(t_plus, Some(singleton));
        for (a, b) in reconnect_uniform(&components, rng) {
            builder.add_link(a, b);
        }
        let out = builder.finish();
        debug_assert!(out.validate());
        return Ok(out);
    }

    let vplus: Vec<usize> = (0..t_plus.node_count()).filter(|&i| t_plus.node(i).contains(victim)).collect();
    let mut origins = Vec::with_capacity(vplus.len());
    for &i in &vplus {
        let candidates = origin_candidates(t_plus, i, victim);
        if candidates.is_empty() {
            let mut fresh = t_plus.node(i);
            fresh.remove(victim);
            origins.push(OriginChoice::Fresh(fresh));
        } else {
            origins.push(OriginChoice::Existing(candidates[rng.random_range(0..candidates.len())]));
        }
    }
    let out = apply_collapse(t_plus, &vplus, &origins);
    debug_assert!(out.validate(), "collapser output invalid: {:?}", out.check());
    Ok(out)
}

/// Neighbors of node `i` whose separator equals `node(i) \ {victim}`.
fn origin_candidates(t_plus: &JunctionTree, i: usize, victim: VertexId) -> Vec<usize> {
    let mut retained = t_plus.node(i);
    retained.remove(victim);
    t_plus
        .neighbors(i)
        .iter()
        .copied()
        .filter(|&x| t_plus.node(x).intersect(t_plus.node(i)) == retained)
        .collect()
}

fn apply_collapse(t_plus: &JunctionTree, vplus: &[usize], origins: &[OriginChoice]) -> JunctionTree {
    let mut builder = TreeBuilder::from_tree(t_plus);
    let mut origin_index = Vec::with_capacity(vplus.len());
    for choice in origins {
        match choice {
            OriginChoice::Fresh(value) => origin_index.push(builder.add_node(*value)),
            OriginChoice::Existing(idx) => origin_index.push(*idx),
        }
    }
    let position_of = |x: usize| vplus.iter().position(|&i| i == x);
    for (pos, &i) in vplus.iter().enumerate() {
        for &x in t_plus.neighbors(i) {
            let mapped = position_of(x).map_or(x, |q| origin_index[q]);
            if mapped != origin_index[pos] {
                builder.add_link(origin_index[pos], mapped);
            }
        }
    }
    for &i in vplus {
        builder.remove_node(i);
    }
    builder.finish()
}

/// Probability that [`collapse`] of `t_plus` produces `t`, summed over every
/// origin assignment that leads to `t`.
pub fn collapser_density(t_plus: &JunctionTree, t: &JunctionTree) -> Result<f64> {
    let old = t.vertices();
    let new = t_plus.vertices();
    let removed = new.minus(old);
    if removed.len() != 1 || !old.is_subset(new) {
        return Err(Error::VertexSetMismatch);
    }
    let victim = removed.first().expect("one removed vertex");

    if t_plus.find_node(VertexSet::singleton(victim)).is_some() {
        let mut plus_nodes: Vec<VertexSet> = t_plus.nodes().to_vec();
        plus_nodes.retain(|n| *n != VertexSet::singleton(victim));
        let mut out_nodes: Vec<VertexSet> = t.nodes().to_vec();
        plus_nodes.sort();
        out_nodes.sort();
        if plus_nodes == out_nodes && t.nonempty_separator_link_values() == t_plus.nonempty_separator_link_values() {
            let forest = t.separator_forest(VertexSet::EMPTY)?;
            return Ok(1.0 / biguint_to_f64(&nu(&forest)));
        }
        return Ok(0.0);
    }

    let vplus: Vec<usize> = (0..t_plus.node_count()).filter(|&i| t_plus.node(i).contains(victim)).collect();
    let candidate_sets: Vec<Vec<usize>> = vplus.iter().map(|&i| origin_candidates(t_plus, i, victim)).collect();
    let target_key = t.canonical_key();

    let mut total = 0.0;
    let mut stack: Vec<(usize, Vec<OriginChoice>, f64)> = vec![(0, Vec::new(), 1.0)];
    while let Some((pos, chosen, prob)) = stack.pop() {
        if pos == vplus.len() {
            let candidate = apply_collapse(t_plus, &vplus, &chosen);
            if candidate.canonical_key() == target_key {
                total += prob;
            }
            continue;
        }
        if candidate_sets[pos].is_empty() {
            let mut fresh = t_plus.node(vplus[pos]);
            fresh.remove(victim);
            let mut next = chosen.clone();
            next.push(OriginChoice::Fresh(fresh));
            stack.push((pos + 1, next, prob));
        } else {
            let share = 1.0 / candidate_sets[pos].len() as f64;
            for &cand in &candidate_sets[pos] {
                let mut next = chosen.clone();
                next.push(OriginChoice::Existing(cand));
                stack.push((pos + 1, next, prob * share));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::substream;
    use std::collections::BTreeMap;

    fn vid(l: usize) -> VertexId {
        VertexId::new(l).unwrap()
    }

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_labels(labels.iter().copied()).unwrap()
    }

    fn params(alpha: f64, beta: f64) -> ExpanderParams {
        ExpanderParams::new(alpha, beta).unwrap()
    }

    fn trivial() -> JunctionTree {
        JunctionTree::trivial(1, vid(1))
    }

    fn k2_tree() -> JunctionTree {
        JunctionTree::single_node(2, vs(&[1, 2])).unwrap()
    }

    fn two_singletons() -> JunctionTree {
        JunctionTree::new(2, vec![vs(&[1]), vs(&[2])], &[(0, 1)]).unwrap()
    }

    #[test]
    fn params_must_be_interior() {
        assert!(ExpanderParams::new(0.0, 0.5).is_err());
        assert!(ExpanderParams::new(0.5, 1.0).is_err());
        assert!(ExpanderParams::new(0.3, 0.8).is_ok());
    }

    #[test]
    fn empty_subtree_frequency_matches_one_minus_beta() {
        let t = JunctionTree::of_graph(&Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap()).unwrap();
        let pr = params(0.4, 0.7);
        let mut rng = substream(3, 90, 0, 0);
        let draws = 100_000;
        let empties = (0..draws).filter(|_| sample_subtree(&t, &pr, &mut rng).is_empty()).count();
        let expect = (1.0 - pr.beta()) * draws as f64;
        let sigma = (draws as f64 * pr.beta() * (1.0 - pr.beta())).sqrt();
        assert!((empties as f64 - expect).abs() < 4.0 * sigma);
    }

    #[test]
    fn single_node_tree_selection_probabilities() {
        let t = trivial();
        let pr = params(0.3, 0.65);
        let whole = SubtreeSelection::from_indices(vec![0]);
        assert!((subtree_probability(&t, &whole, &pr).unwrap() - pr.beta()).abs() < 1e-12);
        assert!((subtree_probability(&t, &SubtreeSelection::empty(), &pr).unwrap() - (1.0 - pr.beta())).abs() < 1e-12);
    }

    #[test]
    fn two_node_tree_singleton_probability() {
        // Singleton {root} requires the single boundary trial to fail.
        let t = two_singletons();
        let pr = params(0.3, 0.6);
        let s = SubtreeSelection::from_indices(vec![0]);
        let expect = pr.beta() * 0.5 * (1.0 - pr.alpha());
        assert!((subtree_probability(&t, &s, &pr).unwrap() - expect).abs() < 1e-12);
    }

    /// Brute-force oracle for the subtree sampler: walk the whole decision
    /// tree of the traversal (root choice, then one Bernoulli per untried
    /// link in queue order) and accumulate the probability of each outcome.
    fn subtree_distribution_oracle(t: &JunctionTree, pr: &ExpanderParams) -> BTreeMap<Vec<usize>, f64> {
        #[derive(Clone)]
        struct State {
            queue: std::collections::VecDeque<usize>,
            visited: Vec<usize>,
            prob: f64,
        }
        let mut out: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        *out.entry(Vec::new()).or_insert(0.0) += 1.0 - pr.beta();
        let n = t.node_count();
        for root in 0..n {
            let mut stack = vec![State {
                queue: std::collections::VecDeque::from([root]),
                visited: Vec::new(),
                prob: pr.beta() / n as f64,
            }];
            while let Some(mut st) = stack.pop() {
                match st.queue.pop_front() {
                    None => {
                        let mut key = st.visited.clone();
                        key.sort_unstable();
                        *out.entry(key).or_insert(0.0) += st.prob;
                    }
                    Some(i) => {
                        st.visited.push(i);
                        // Branch over the coin for each untried neighbor.
                        let untried: Vec<usize> = t
                            .neighbors(i)
                            .iter()
                            .copied()
                            .filter(|j| !st.visited.contains(j))
                            .collect();
                        let mut branches = vec![st];
                        for j in untried {
                            let mut next = Vec::with_capacity(branches.len() * 2);
                            for b in branches {
                                let mut yes = b.clone();
                                yes.prob *= pr.alpha();
                                yes.queue.push_back(j);
                                next.push(yes);
                                let mut no = b;
                                no.prob *= 1.0 - pr.alpha();
                                next.push(no);
                            }
                            branches = next;
                        }
                        stack.extend(branches);
                    }
                }
            }
        }
        out
    }

    /// Connected node subsets of a tree (nonempty), as sorted index lists.
    fn connected_subsets(t: &JunctionTree) -> Vec<Vec<usize>> {
        let n = t.node_count();
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let sel = SubtreeSelection::from_indices(chosen.clone());
            if subtree_probability(t, &sel, &params(0.5, 0.5)).is_ok() {
                out.push(chosen);
            }
        }
        out
    }

    #[test]
    fn subtree_probability_matches_execution_oracle() {
        // Closed form must agree with the literal execution enumeration on
        // several tree shapes, including a 6-node path and a star.
        let trees = vec![
            trivial(),
            two_singletons(),
            JunctionTree::of_graph(&Graph::from_edges(4, &[(1, 4), (2, 4), (3, 4)]).unwrap()).unwrap(),
            JunctionTree::of_graph(&Graph::empty(6).unwrap()).unwrap(),
            JunctionTree::of_graph(&Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap())
                .unwrap(),
        ];
        for t in trees {
            for (a, b) in [(0.3, 0.5), (0.5, 0.5), (0.8, 0.3)] {
                let pr = params(a, b);
                let oracle = subtree_distribution_oracle(&t, &pr);
                let total: f64 = oracle.values().sum();
                assert!((total - 1.0).abs() < 1e-9);
                for (key, p_oracle) in &oracle {
                    let sel = SubtreeSelection::from_indices(key.clone());
                    let p_formula = subtree_probability(&t, &sel, &pr).unwrap();
                    assert!(
                        (p_formula - p_oracle).abs() < 1e-9,
                        "selection {key:?}: formula {p_formula} vs oracle {p_oracle}"
                    );
                }
                // Formula also sums to one over connected subsets plus empty.
                let mut sum = subtree_probability(&t, &SubtreeSelection::empty(), &pr).unwrap();
                for chosen in connected_subsets(&t) {
                    sum += subtree_probability(&t, &SubtreeSelection::from_indices(chosen), &pr).unwrap();
                }
                assert!((sum - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn disconnected_selection_is_rejected() {
        let path = JunctionTree::new(3, vec![vs(&[1]), vs(&[2]), vs(&[3])], &[(0, 1), (1, 2)]).unwrap();
        let sel = SubtreeSelection::from_indices(vec![0, 2]);
        assert!(matches!(subtree_probability(&path, &sel, &params(0.5, 0.5)), Err(Error::DisconnectedSubtree)));
    }

    #[test]
    fn expander_density_trivial_to_k2() {
        let pr = params(0.4, 0.7);
        let d = expander_density(&trivial(), &k2_tree(), &pr).unwrap();
        assert!((d - pr.beta() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn expander_density_trivial_to_two_singletons() {
        let pr = params(0.4, 0.7);
        let d = expander_density(&trivial(), &two_singletons(), &pr).unwrap();
        assert!((d - ((1.0 - pr.beta()) + pr.beta() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn generating_subtrees_from_trivial() {
        let subs = generating_subtrees(&trivial(), &k2_tree()).unwrap();
        assert_eq!(subs, vec![SubtreeSelection::from_indices(vec![0])]);
        let subs = generating_subtrees(&trivial(), &two_singletons()).unwrap();
        assert_eq!(subs, vec![SubtreeSelection::from_indices(vec![0])]);
    }

    #[test]
    fn expand_rejects_present_vertex() {
        let mut rng = substream(0, 91, 0, 0);
        assert!(matches!(expand(&k2_tree(), vid(1), &params(0.5, 0.5), &mut rng), Err(Error::VertexPresent(1))));
    }

    #[test]
    fn expand_outputs_are_valid_and_preserve_old_graph() {
        let pr = params(0.5, 0.5);
        let mut rng = substream(17, 91, 1, 0);
        for _ in 0..200 {
            let mut t = trivial();
            for m in 2..=6usize {
                let (next, _) = expand(&t, vid(m), &pr, &mut rng).unwrap();
                assert!(next.validate());
                let old = next.underlying_graph().induced_subgraph(t.vertices()).unwrap();
                assert_eq!(old, t.underlying_graph());
                t = next;
            }
        }
    }

    #[test]
    fn expander_frequencies_match_density() {
        // Fixed small tree: empirical transition frequencies vs the density.
        let t = JunctionTree::of_graph(&Graph::from_edges(3, &[(1, 2)]).unwrap()).unwrap();
        let pr = params(0.45, 0.65);
        let mut rng = substream(23, 91, 2, 0);
        let draws = 100_000usize;
        let mut counts: BTreeMap<crate::jtree::CanonicalTree, usize> = BTreeMap::new();
        for _ in 0..draws {
            let (out, _) = expand(&t, vid(4), &pr, &mut rng).unwrap();
            *counts.entry(out.canonical_key()).or_insert(0) += 1;
        }
        let mut total_density = 0.0;
        for (key, count) in &counts {
            let t_plus = JunctionTree::new(4, key.nodes.clone(), &key.links).unwrap();
            let d = expander_density(&t, &t_plus, &pr).unwrap();
            assert!(d > 0.0, "sampled outcome with zero density: {key:?}");
            total_density += d;
            let expect = d * draws as f64;
            let sigma = (draws as f64 * d * (1.0 - d)).sqrt();
            assert!(
                (*count as f64 - expect).abs() < 4.0 * sigma.max(1.0),
                "outcome {key:?}: count {count} expect {expect}"
            );
        }
        assert!(total_density > 0.999, "sampled outcomes cover the support");
    }

    #[test]
    fn collapse_k2_is_deterministic() {
        let mut rng = substream(5, 91, 3, 0);
        let out = collapse(&k2_tree(), vid(2), &mut rng).unwrap();
        assert_eq!(out, trivial());
        assert!((collapser_density(&k2_tree(), &trivial()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collapse_two_singletons() {
        let mut rng = substream(5, 91, 4, 0);
        let out = collapse(&two_singletons(), vid(2), &mut rng).unwrap();
        assert_eq!(out, trivial());
    }

    #[test]
    fn collapse_empty_graph_p3_reconnections() {
        // Removing the singleton {3} from a path of three singletons leaves
        // a two-component forest with a single reconnection.
        let t_plus = JunctionTree::new(3, vec![vs(&[1]), vs(&[3]), vs(&[2])], &[(0, 1), (1, 2)]).unwrap();
        let mut rng = substream(5, 91, 5, 0);
        let out = collapse(&t_plus, vid(3), &mut rng).unwrap();
        assert_eq!(out, two_singletons());
        assert!((collapser_density(&t_plus, &two_singletons()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collapse_rejects_missing_or_last_vertex() {
        let mut rng = substream(5, 91, 6, 0);
        assert!(matches!(collapse(&k2_tree(), vid(3), &mut rng), Err(Error::VertexAbsent(3))));
        assert!(collapse(&trivial(), vid(1), &mut rng).is_err());
    }

    #[test]
    fn collapse_supports_non_terminal_victims() {
        // Any vertex may be removed, not just the last-added one.
        let t_plus = JunctionTree::of_graph(&Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap()).unwrap();
        let mut rng = substream(5, 91, 7, 0);
        for victim in 1..=3usize {
            let out = collapse(&t_plus, vid(victim), &mut rng).unwrap();
            assert!(out.validate());
            let mut kept = t_plus.vertices();
            kept.remove(vid(victim));
            assert_eq!(out.vertices(), kept);
            let expected = t_plus.underlying_graph().induced_subgraph(kept).unwrap();
            assert_eq!(out.underlying_graph(), expected);
        }
    }
}
