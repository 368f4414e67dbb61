//! Subgraphs as subsets of internal edges.
//!
//! A subgraph keeps the vertices touched by its edges. Every other half-edge
//! at those vertices (an unselected edge end or a leg) is an external leg of
//! the subgraph; an unselected edge joining two vertices of the subgraph
//! therefore contributes two legs.

use super::{bridgeless, AssignedGraph, Dsu, FeynmanGraph, Scale, EXTERNAL_SCALE};
use crate::error::{Error, Result};

/// Bit `i` set means internal edge `i` is selected.
pub type EdgeSet = u64;

pub(crate) fn full_set(edges: usize) -> EdgeSet {
    if edges >= 64 {
        u64::MAX
    } else {
        (1u64 << edges) - 1
    }
}

pub(crate) fn bits(mask: EdgeSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

#[derive(Clone, Copy, Debug)]
pub struct Subgraph<'a> {
    parent: &'a AssignedGraph,
    edges: EdgeSet,
}

impl<'a> Subgraph<'a> {
    pub fn new(parent: &'a AssignedGraph, edges: EdgeSet) -> Result<Self> {
        let m = parent.edge_count();
        if m > 64 {
            return Err(Error::TooManyEdges(m));
        }
        if edges == 0 {
            return Err(Error::EmptySubgraph);
        }
        if edges & !full_set(m) != 0 {
            return Err(Error::InvalidSubgraph(format!("edge set {edges:#b} exceeds {m} edges")));
        }
        Ok(Subgraph { parent, edges })
    }

    pub(crate) fn new_unchecked(parent: &'a AssignedGraph, edges: EdgeSet) -> Self {
        Subgraph { parent, edges }
    }

    pub fn parent(&self) -> &'a AssignedGraph {
        self.parent
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        bits(self.edges).collect()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges >> e & 1 == 1
    }

    /// Vertices touched by the selected edges, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.parent.vertex_count()];
        for e in bits(self.edges) {
            let [a, b] = self.parent.edges()[e];
            seen[a] = true;
            seen[b] = true;
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        bits(self.edges).any(|e| self.parent.edges()[e].contains(&v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    /// Edge sets of the connected components.
    pub fn components(&self) -> Vec<EdgeSet> {
        let mut dsu = Dsu::new(self.parent.vertex_count());
        for e in bits(self.edges) {
            let [a, b] = self.parent.edges()[e];
            dsu.union(a, b);
        }
        let mut out: Vec<(usize, EdgeSet)> = Vec::new();
        for e in bits(self.edges) {
            let r = dsu.find(self.parent.edges()[e][0]);
            match out.iter_mut().find(|(root, _)| *root == r) {
                Some((_, m)) => *m |= 1 << e,
                None => out.push((r, 1 << e)),
            }
        }
        out.into_iter().map(|(_, m)| m).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.edges != 0 && self.components().len() == 1
    }

    pub fn is_one_pi(&self) -> bool {
        bridgeless(self.parent.vertex_count(), self.parent.edges(), Some(self.edges))
    }

    /// Number of external half-edges.
    pub fn leg_count(&self) -> usize {
        let deg: usize = self.vertices().iter().map(|&v| self.parent.graph().degree(v)).sum();
        deg - 2 * self.edge_count()
    }

    /// External half-edges in the order used for gluing: vertices ascending,
    /// and at each vertex the order of [`AssignedGraph::half_edges_at`].
    pub fn external_half_edges(&self) -> Vec<(usize, super::HalfEdge)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for h in self.parent.half_edges_at(v) {
                match h {
                    super::HalfEdge::Edge { edge, .. } if self.contains_edge(edge) => {}
                    _ => out.push((v, h)),
                }
            }
        }
        out
    }

    /// Scales carried by the external half-edges (sentinel for true legs).
    pub fn external_scales(&self) -> Vec<Scale> {
        self.external_half_edges()
            .into_iter()
            .map(|(_, h)| self.parent.half_edge_scale(h))
            .collect()
    }

    /// `e_g`: largest scale among the external half-edges.
    pub fn external_index(&self) -> Scale {
        self.external_scales().into_iter().max().unwrap_or(EXTERNAL_SCALE)
    }

    /// `i_g`: smallest scale among the internal edges.
    pub fn internal_index(&self) -> Scale {
        bits(self.edges).map(|e| self.parent.scales()[e]).min().unwrap_or(Scale::MAX)
    }

    /// Every internal edge is strictly above every external half-edge.
    pub fn is_high(&self) -> bool {
        self.internal_index() > self.external_index()
    }

    /// Connected, 1PI, with 2 or 4 external legs.
    pub fn is_divergent(&self) -> bool {
        self.is_connected() && matches!(self.leg_count(), 2 | 4) && self.is_one_pi()
    }

    /// The subgraph as a standalone graph. Vertex order follows the parent,
    /// legs follow [`Subgraph::external_half_edges`] and keep the scale of
    /// the parent half-edge they came from. Labels are dropped.
    pub fn to_graph(&self) -> AssignedGraph {
        let verts = self.vertices();
        let mut index = vec![usize::MAX; self.parent.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let kinds = verts.iter().map(|&v| self.parent.graph().kinds()[v]).collect();
        let edges = bits(self.edges)
            .map(|e| {
                let [a, b] = self.parent.edges()[e];
                [index[a], index[b]]
            })
            .collect();
        let scales = bits(self.edges).map(|e| self.parent.scales()[e]).collect();
        let ext = self.external_half_edges();
        let legs = ext.iter().map(|&(v, _)| index[v]).collect();
        let leg_scales = ext.iter().map(|&(_, h)| self.parent.half_edge_scale(h)).collect();
        AssignedGraph::from_parts(
            FeynmanGraph::from_parts(self.parent.graph().valence(), kinds, edges, legs),
            scales,
            leg_scales,
            false,
        )
    }

    /// Canonical generator for this (connected) subgraph: sentinel legs,
    /// unlabeled.
    pub fn generator(&self) -> AssignedGraph {
        self.to_graph().rooted().canonical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bubble_in_chain_has_four_legs() {
        let chain = fixtures::chain();
        // edges 0,1 form the first bubble
        let sub = chain.subgraph(0b0011).unwrap();
        assert!(sub.is_connected());
        assert_eq!(sub.leg_count(), 4);
        assert!(sub.is_one_pi());
        assert!(sub.is_divergent());
    }

    #[test]
    fn single_edge_is_not_one_pi() {
        let chain = fixtures::chain();
        let sub = chain.subgraph(0b0001).unwrap();
        assert!(sub.is_connected());
        assert!(!sub.is_one_pi());
        assert!(!sub.is_divergent());
    }

    #[test]
    fn unselected_edge_inside_counts_twice() {
        // sunset with one edge removed: two vertices, two edges, and the third
        // edge becomes two legs, plus the two true legs.
        let s = fixtures::sunset(0, 0, 0);
        let sub = s.subgraph(0b011).unwrap();
        assert_eq!(sub.leg_count(), 4);
    }

    #[test]
    fn highness_uses_neighbouring_scales() {
        let chain = fixtures::chain_with_scales([2, 2, 1, 1]);
        assert!(chain.subgraph(0b0011).unwrap().is_high());
        assert!(!chain.subgraph(0b1100).unwrap().is_high());
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        let b = fixtures::bubble(0, 0);
        assert_eq!(b.subgraph(0).unwrap_err(), Error::EmptySubgraph);
        assert!(matches!(b.subgraph(0b100).unwrap_err(), Error::InvalidSubgraph(_)));
    }

    #[test]
    fn standalone_graph_keeps_slot_scales() {
        let chain = fixtures::chain_with_scales([2, 2, 1, 1]);
        let g = chain.subgraph(0b0011).unwrap().to_graph();
        let mut ls = g.leg_scales().to_vec();
        ls.sort();
        assert_eq!(ls, vec![-1, -1, 1, 1]);
        assert_eq!(g.edge_count(), 2);
    }
}
