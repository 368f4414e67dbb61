//! Feynman graphs, scale assignments and assigned graphs.
//!
//! A graph is stored as a multigraph on vertex indices: internal edges are
//! unordered vertex pairs (self-loops allowed), external legs point at the
//! vertex they hang from. Half-edges are implicit: a vertex of degree `k`
//! owns `k` half-edges, one per edge end or leg. Leg `i` carries the label
//! `x_{i+1}` when the graph is labeled.

mod canon;
mod ops;
pub mod spec;
mod subgraph;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::Canonical;
pub use ops::{GluingData, HalfEdge, InsertionPoint};
pub use subgraph::{EdgeSet, Subgraph};

/// Integer scale of an edge. True external legs carry [`EXTERNAL_SCALE`].
pub type Scale = i32;

/// Sentinel scale of a true external leg.
pub const EXTERNAL_SCALE: Scale = -1;

/// Interaction vertices have the graph valence; biped vertices are the
/// 2-valent marks left behind by shrinking a two-point subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Interaction,
    Biped,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeynmanGraph {
    valence: u32,
    kinds: Vec<VertexKind>,
    edges: Vec<[usize; 2]>,
    legs: Vec<usize>,
}

impl FeynmanGraph {
    pub fn new(
        valence: u32,
        kinds: Vec<VertexKind>,
        edges: Vec<[usize; 2]>,
        legs: Vec<usize>,
    ) -> Result<Self> {
        if valence == 0 {
            return Err(Error::Malformed("valence must be positive".into()));
        }
        let n = kinds.len();
        let mut degree = vec![0u32; n];
        let mut norm = Vec::with_capacity(edges.len());
        for &[a, b] in &edges {
            if a >= n || b >= n {
                return Err(Error::Malformed(format!("edge ({a},{b}) references a missing vertex")));
            }
            degree[a] += 1;
            degree[b] += 1;
            norm.push([a.min(b), a.max(b)]);
        }
        for &v in &legs {
            if v >= n {
                return Err(Error::Malformed(format!("leg attached to missing vertex {v}")));
            }
            degree[v] += 1;
        }
        for (v, (&kind, &d)) in kinds.iter().zip(&degree).enumerate() {
            let want = match kind {
                VertexKind::Interaction => valence,
                VertexKind::Biped => 2,
            };
            if d != want {
                return Err(Error::Malformed(format!(
                    "vertex {v} has {d} incident half-edges, expected {want}"
                )));
            }
        }
        Ok(FeynmanGraph { valence, kinds, edges: norm, legs })
    }

    /// φ⁴ graph with interaction vertices only.
    pub fn phi4(vertices: usize, edges: Vec<[usize; 2]>, legs: Vec<usize>) -> Result<Self> {
        Self::new(4, vec![VertexKind::Interaction; vertices], edges, legs)
    }

    pub(crate) fn from_parts(
        valence: u32,
        kinds: Vec<VertexKind>,
        edges: Vec<[usize; 2]>,
        legs: Vec<usize>,
    ) -> Self {
        let edges = edges.into_iter().map(|[a, b]| [a.min(b), a.max(b)]).collect();
        FeynmanGraph { valence, kinds, edges, legs }
    }

    pub fn valence(&self) -> u32 {
        self.valence
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        let e = self
            .edges
            .iter()
            .map(|&[a, b]| (a == v) as usize + (b == v) as usize)
            .sum::<usize>();
        e + self.legs.iter().filter(|&&l| l == v).count()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(|&[a, b]| a == b)
    }

    /// Connected components as vertex lists (isolated vertices included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.vertex_count());
        for &[a, b] in &self.edges {
            dsu.union(a, b);
        }
        dsu.groups()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    /// True iff removing any single internal edge leaves the graph connected.
    pub fn is_one_pi(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(bridgeless(self.vertex_count(), &self.edges, None))
    }

    /// `E - V + C`; for connected graphs this is `E - V + 1`.
    pub fn loop_number(&self) -> usize {
        self.edge_count() + self.components().len() - self.vertex_count()
    }

    /// Order of the label-preserving automorphism group at the half-edge level.
    pub fn automorphism_order(&self) -> u128 {
        self.as_unassigned(true).automorphism_order()
    }

    /// Number of distinct labeled graphs obtained by labeling the legs.
    pub fn external_labelings(&self) -> u128 {
        self.as_unassigned(false).external_labelings()
    }

    /// Canonical representative; `labeled` keeps leg order significant.
    pub fn canonical(&self, labeled: bool) -> FeynmanGraph {
        self.as_unassigned(labeled).canonical().graph
    }

    /// No connected one-particle-irreducible subgraph with exactly two legs.
    pub fn is_biped_free(&self) -> bool {
        let g = self.as_unassigned(false);
        if g.edge_count() > 64 {
            return false;
        }
        let full = subgraph::full_set(g.edge_count());
        (1..=full).all(|mask| {
            let sub = Subgraph::new_unchecked(&g, mask);
            !(sub.is_connected() && sub.leg_count() == 2 && sub.is_one_pi())
        })
    }

    /// Attach a scale assignment, validating connectivity and 1PI.
    pub fn assign(&self, assignment: &ScaleAssignment) -> Result<AssignedGraph> {
        AssignedGraph::new(self.clone(), assignment)
    }

    /// The same graph with every edge at scale 0 (a plain Connes-Kreimer graph).
    pub(crate) fn as_unassigned(&self, labeled: bool) -> AssignedGraph {
        AssignedGraph {
            scales: vec![0; self.edge_count()],
            leg_scales: vec![EXTERNAL_SCALE; self.leg_count()],
            graph: self.clone(),
            labeled,
        }
    }
}

/// Scales for the internal edges of one graph, bounded by the cutoff `rho`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleAssignment {
    scales: Vec<Scale>,
    rho: Scale,
}

impl ScaleAssignment {
    pub fn new(scales: Vec<Scale>, rho: Scale) -> Result<Self> {
        if rho < 0 {
            return Err(Error::ScaleOutOfRange { scale: rho, rho });
        }
        if let Some(&s) = scales.iter().find(|&&s| s < 0 || s > rho) {
            return Err(Error::ScaleOutOfRange { scale: s, rho });
        }
        Ok(ScaleAssignment { scales, rho })
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn rho(&self) -> Scale {
        self.rho
    }
}

/// A graph together with one scale per internal edge.
///
/// Legs carry a scale too: [`EXTERNAL_SCALE`] for true external legs, or the
/// scale of the parent edge when the graph was cut out of a larger one (this
/// is what gluing checks against). Generators of the Hopf algebra always have
/// sentinel legs and are unlabeled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssignedGraph {
    graph: FeynmanGraph,
    scales: Vec<Scale>,
    leg_scales: Vec<Scale>,
    labeled: bool,
}

impl AssignedGraph {
    /// Unlabeled assigned graph with sentinel legs. The graph must be
    /// connected and 1PI.
    pub fn new(graph: FeynmanGraph, assignment: &ScaleAssignment) -> Result<Self> {
        if assignment.scales.len() != graph.edge_count() {
            return Err(Error::Malformed(format!(
                "{} scales for {} internal edges",
                assignment.scales.len(),
                graph.edge_count()
            )));
        }
        if !graph.is_one_pi()? {
            return Err(Error::NotOnePi);
        }
        Ok(AssignedGraph {
            leg_scales: vec![EXTERNAL_SCALE; graph.leg_count()],
            scales: assignment.scales.clone(),
            graph,
            labeled: false,
        })
    }

    /// Crate-internal constructor without the connectivity/1PI checks.
    pub(crate) fn from_parts(
        graph: FeynmanGraph,
        scales: Vec<Scale>,
        leg_scales: Vec<Scale>,
        labeled: bool,
    ) -> Self {
        debug_assert_eq!(scales.len(), graph.edge_count());
        debug_assert_eq!(leg_scales.len(), graph.leg_count());
        AssignedGraph { graph, scales, leg_scales, labeled }
    }

    /// `g` with every edge at scale 0 and sentinel legs, unlabeled. No
    /// connectivity check.
    pub fn plain(g: &FeynmanGraph) -> Self {
        g.as_unassigned(false)
    }

    /// The single interaction vertex with `legs` sentinel legs.
    pub fn bare_vertex(legs: usize, labeled: bool) -> Self {
        let kind = if legs == 2 { VertexKind::Biped } else { VertexKind::Interaction };
        let valence = if legs == 2 { 4 } else { legs as u32 };
        AssignedGraph {
            graph: FeynmanGraph::from_parts(valence, vec![kind], vec![], vec![0; legs]),
            scales: vec![],
            leg_scales: vec![EXTERNAL_SCALE; legs],
            labeled,
        }
    }

    pub fn graph(&self) -> &FeynmanGraph {
        &self.graph
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn leg_scales(&self) -> &[Scale] {
        &self.leg_scales
    }

    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.graph.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.graph.legs
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn leg_count(&self) -> usize {
        self.graph.leg_count()
    }

    pub fn loop_number(&self) -> usize {
        self.graph.loop_number()
    }

    pub fn max_scale(&self) -> Option<Scale> {
        self.scales.iter().copied().max()
    }

    /// Keep leg order significant (legs become `x_1..x_n`).
    pub fn labeled(mut self) -> Self {
        self.labeled = true;
        self
    }

    /// Forget leg labels.
    pub fn unlabeled(mut self) -> Self {
        self.labeled = false;
        self
    }

    /// Replace leg scales, e.g. to describe an insert for gluing.
    pub fn with_leg_scales(mut self, leg_scales: Vec<Scale>) -> Result<Self> {
        if leg_scales.len() != self.leg_count() {
            return Err(Error::Malformed("leg scale count mismatch".into()));
        }
        self.leg_scales = leg_scales;
        Ok(self)
    }

    /// Reset every leg to the true-external sentinel.
    pub fn rooted(mut self) -> Self {
        self.leg_scales.iter_mut().for_each(|s| *s = EXTERNAL_SCALE);
        self
    }

    /// Scale-blind copy (every edge at scale 0).
    pub fn forget_scales(&self) -> Self {
        let mut g = self.clone();
        g.scales.iter_mut().for_each(|s| *s = 0);
        g
    }

    /// Relabel vertices by `perm` (old index → new index) and permute edges.
    /// Useful to produce isomorphic copies.
    pub fn permuted(&self, vertex_perm: &[usize], edge_order: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if vertex_perm.len() != n || vertex_perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Malformed("not a vertex permutation".into()));
        }
        let m = self.edge_count();
        let mut seen = vec![false; m];
        if edge_order.len() != m || edge_order.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Malformed("not an edge permutation".into()));
        }
        let mut kinds = vec![VertexKind::Interaction; n];
        for (old, &new) in vertex_perm.iter().enumerate() {
            kinds[new] = self.graph.kinds[old];
        }
        let edges = edge_order
            .iter()
            .map(|&e| {
                let [a, b] = self.graph.edges[e];
                [vertex_perm[a], vertex_perm[b]]
            })
            .collect();
        let scales = edge_order.iter().map(|&e| self.scales[e]).collect();
        let legs = self.graph.legs.iter().map(|&v| vertex_perm[v]).collect();
        Ok(AssignedGraph {
            graph: FeynmanGraph::from_parts(self.graph.valence, kinds, edges, legs),
            scales,
            leg_scales: self.leg_scales.clone(),
            labeled: self.labeled,
        })
    }

    /// Canonical representative of the isomorphism class.
    pub fn canonical(&self) -> AssignedGraph {
        canon::canonicalize(self).graph
    }

    /// Canonical representative plus the size of the multigraph-level
    /// automorphism group found along the way.
    pub fn canonical_with_info(&self) -> Canonical {
        canon::canonicalize(self)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    pub fn is_isomorphic(&self, other: &AssignedGraph) -> bool {
        self.canonical() == other.canonical()
    }

    /// σ(G,μ): order of the scale- and label-preserving automorphism group,
    /// counted on half-edges (parallel edges and self-loops contribute their
    /// permutations). Legs are treated as labeled whatever the flag says.
    pub fn automorphism_order(&self) -> u128 {
        let mut g = self.clone();
        g.labeled = true;
        let c = canon::canonicalize(&g);
        c.multigraph_automorphisms * canon::half_edge_kernel(&g, false)
    }

    /// Same group, but legs may be permuted among themselves.
    pub fn unlabeled_automorphism_order(&self) -> u128 {
        let mut g = self.clone();
        g.labeled = false;
        let c = canon::canonicalize(&g);
        c.multigraph_automorphisms * canon::half_edge_kernel(&g, true)
    }

    /// N(G,μ): number of inequivalent labelings of the legs, `n!·σ/σ_unlabeled`.
    pub fn external_labelings(&self) -> u128 {
        let n = self.leg_count() as u128;
        let fact: u128 = (1..=n).product();
        fact * self.automorphism_order() / self.unlabeled_automorphism_order()
    }

    /// Highest scale among the edges and legs at `v`; `EXTERNAL_SCALE` if none.
    pub fn vertex_external_index(&self, v: usize) -> Scale {
        let e = self
            .graph
            .edges
            .iter()
            .zip(&self.scales)
            .filter(|(&[a, b], _)| a == v || b == v)
            .map(|(_, &s)| s);
        let l = self
            .graph
            .legs
            .iter()
            .zip(&self.leg_scales)
            .filter(|(&u, _)| u == v)
            .map(|(_, &s)| s);
        e.chain(l).max().unwrap_or(EXTERNAL_SCALE)
    }

    pub fn is_one_pi(&self) -> bool {
        self.graph.is_one_pi().unwrap_or(false)
    }

    pub fn is_biped_free(&self) -> bool {
        self.graph.is_biped_free()
    }

    pub fn all_edges(&self) -> EdgeSet {
        subgraph::full_set(self.edge_count())
    }

    pub fn subgraph(&self, edges: EdgeSet) -> Result<Subgraph<'_>> {
        Subgraph::new(self, edges)
    }
}

impl fmt::Display for AssignedGraph {
    /// Compact one-line form, e.g. `V4[0-1@1,0-1@2|0,0,1,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.vertex_count())?;
        let biped: Vec<String> = self
            .graph
            .kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == VertexKind::Biped)
            .map(|(i, _)| i.to_string())
            .collect();
        if !biped.is_empty() {
            write!(f, "b{}", biped.join(","))?;
        }
        write!(f, "[")?;
        for (i, (&[a, b], s)) in self.graph.edges.iter().zip(&self.scales).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}@{s}")?;
        }
        write!(f, "|")?;
        for (i, (&v, &s)) in self.graph.legs.iter().zip(&self.leg_scales).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if s == EXTERNAL_SCALE {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}@{s}")?;
            }
        }
        write!(f, "]{}", if self.labeled { "L" } else { "" })
    }
}

/// Bridgeless test on a multigraph restricted to `mask` (all edges if `None`).
/// Vertices not touched by the selected edges are ignored.
pub(crate) fn bridgeless(n: usize, edges: &[[usize; 2]], mask: Option<u64>) -> bool {
    let selected: Vec<usize> = (0..edges.len())
        .filter(|&i| mask.map_or(true, |m| m >> i & 1 == 1))
        .collect();
    for &skip in &selected {
        let [a, b] = edges[skip];
        if a == b {
            continue;
        }
        let mut dsu = Dsu::new(n);
        for &i in &selected {
            if i != skip {
                dsu.union(edges[i][0], edges[i][1]);
            }
        }
        if dsu.find(a) != dsu.find(b) {
            return false;
        }
    }
    true
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = self.find(v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::fixtures::bubble;

    #[test]
    fn rejects_wrong_degree() {
        let err = FeynmanGraph::phi4(2, vec![[0, 1]], vec![0, 0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn one_pi_examples() {
        let bubble = FeynmanGraph::phi4(2, vec![[0, 1], [0, 1]], vec![0, 0, 1, 1]).unwrap();
        assert!(bubble.is_one_pi().unwrap());
        let sunset = FeynmanGraph::phi4(2, vec![[0, 1]; 3], vec![0, 1]).unwrap();
        assert!(sunset.is_one_pi().unwrap());
        // two bubbles joined by a bridge: 0=1 - 2=3
        let bridged = FeynmanGraph::phi4(
            4,
            vec![[0, 1], [0, 1], [1, 2], [2, 3], [2, 3]],
            vec![0, 0, 1, 3, 3, 2],
        )
        .unwrap();
        assert!(!bridged.is_one_pi().unwrap());
        let split = FeynmanGraph::phi4(2, vec![], vec![0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        assert_eq!(split.is_one_pi(), Err(Error::Disconnected));
    }

    #[test]
    fn loop_numbers() {
        assert_eq!(bubble(0, 0).loop_number(), 1);
        let sunset = FeynmanGraph::phi4(2, vec![[0, 1]; 3], vec![0, 1]).unwrap();
        assert_eq!(sunset.loop_number(), 2);
        assert_eq!(AssignedGraph::bare_vertex(4, false).loop_number(), 0);
    }

    #[test]
    fn scale_assignment_bounds() {
        assert!(ScaleAssignment::new(vec![0, 3], 3).is_ok());
        assert_eq!(
            ScaleAssignment::new(vec![4], 3),
            Err(Error::ScaleOutOfRange { scale: 4, rho: 3 })
        );
    }

    #[test]
    fn vertex_external_index_uses_incident_edges() {
        let b = bubble(1, 2);
        assert_eq!(b.vertex_external_index(0), 2);
        assert_eq!(AssignedGraph::bare_vertex(4, true).vertex_external_index(0), EXTERNAL_SCALE);
    }
}
