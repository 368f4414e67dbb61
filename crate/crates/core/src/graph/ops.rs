//! Shrinking subgraphs to vertices and gluing graphs into insertion points.

use serde::{Deserialize, Serialize};

use super::subgraph::Subgraph;
use super::{AssignedGraph, EdgeSet, FeynmanGraph, Scale, VertexKind, EXTERNAL_SCALE};
use crate::error::{Error, Result};

/// One half-edge at a vertex: an end of an internal edge or a leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HalfEdge {
    Edge { edge: usize, end: u8 },
    Leg(usize),
}

/// Where an insert goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertionPoint {
    /// Replace a vertex; the insert's legs take over its half-edges.
    Vertex(usize),
    /// Cut an internal edge in two; a two-legged insert bridges the gap.
    Propagator(usize),
}

/// Gluing instructions. `leg_map[i]` is the slot the insert's leg `i` is
/// attached to: an index into [`AssignedGraph::half_edges_at`] for a vertex,
/// or `0`/`1` for the two ends of a propagator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub point: InsertionPoint,
    pub insert: AssignedGraph,
    pub leg_map: Vec<usize>,
}

impl GluingData {
    /// Identity leg map.
    pub fn new(point: InsertionPoint, insert: AssignedGraph) -> Self {
        let leg_map = (0..insert.leg_count()).collect();
        GluingData { point, insert, leg_map }
    }
}

impl AssignedGraph {
    /// Half-edges at `v`: edge ends in edge order (a self-loop gives both
    /// ends), then legs in leg order.
    pub fn half_edges_at(&self, v: usize) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        for (e, &[a, b]) in self.edges().iter().enumerate() {
            if a == v {
                out.push(HalfEdge::Edge { edge: e, end: 0 });
            }
            if b == v {
                out.push(HalfEdge::Edge { edge: e, end: 1 });
            }
        }
        for (i, &u) in self.legs().iter().enumerate() {
            if u == v {
                out.push(HalfEdge::Leg(i));
            }
        }
        out
    }

    pub fn half_edge_scale(&self, h: HalfEdge) -> Scale {
        match h {
            HalfEdge::Edge { edge, .. } => self.scales()[edge],
            HalfEdge::Leg(i) => self.leg_scales()[i],
        }
    }

    /// Contract every connected component of `edges` to a single vertex.
    /// Four-legged components become interaction vertices, two-legged ones
    /// become biped vertices. The result is not canonicalised.
    pub fn shrink(&self, edges: EdgeSet) -> Result<AssignedGraph> {
        let sub = Subgraph::new(self, edges)?;
        let n = self.vertex_count();
        let mut target: Vec<Option<usize>> = vec![None; n];
        let mut new_kind: Vec<(usize, VertexKind)> = Vec::new();
        for comp in sub.components() {
            let c = Subgraph::new_unchecked(self, comp);
            let legs = c.leg_count();
            let kind = if legs == self.graph().valence() as usize {
                VertexKind::Interaction
            } else if legs == 2 {
                VertexKind::Biped
            } else {
                return Err(Error::BadArity(legs));
            };
            let verts = c.vertices();
            let rep = verts[0];
            for v in verts {
                target[v] = Some(rep);
            }
            new_kind.push((rep, kind));
        }
        // surviving vertex positions: representatives and untouched vertices
        let mut index = vec![usize::MAX; n];
        let mut kinds = Vec::new();
        for v in 0..n {
            match target[v] {
                Some(r) if r != v => {}
                Some(_) => {
                    index[v] = kinds.len();
                    kinds.push(new_kind.iter().find(|(r, _)| *r == v).expect("rep").1);
                }
                None => {
                    index[v] = kinds.len();
                    kinds.push(self.graph().kinds()[v]);
                }
            }
        }
        let map = |v: usize| index[target[v].unwrap_or(v)];
        let mut new_edges = Vec::new();
        let mut scales = Vec::new();
        for (e, &[a, b]) in self.edges().iter().enumerate() {
            if edges >> e & 1 == 0 {
                new_edges.push([map(a), map(b)]);
                scales.push(self.scales()[e]);
            }
        }
        let legs = self.legs().iter().map(|&v| map(v)).collect();
        Ok(AssignedGraph::from_parts(
            FeynmanGraph::from_parts(self.graph().valence(), kinds, new_edges, legs),
            scales,
            self.leg_scales().to_vec(),
            self.is_labeled(),
        ))
    }

    /// The residue: every internal edge shrunk, leaving one vertex.
    pub fn residue(&self) -> AssignedGraph {
        if self.edge_count() == 0 {
            return self.clone();
        }
        self.shrink(self.all_edges()).expect("connected graph with 2 or 4 legs")
    }

    /// Glue an insert into this graph.
    pub fn glue(&self, data: &GluingData) -> Result<AssignedGraph> {
        self.glue_with_image(data).map(|(g, _)| g)
    }

    /// Glue and also report which edges of the result came from the insert.
    pub fn glue_with_image(&self, data: &GluingData) -> Result<(AssignedGraph, EdgeSet)> {
        let ins = &data.insert;
        let k = ins.leg_count();
        if data.leg_map.len() != k {
            return Err(Error::Malformed("leg map length differs from insert legs".into()));
        }
        let mut sorted = data.leg_map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::Malformed("leg map is not injective".into()));
        }
        let check = |i: usize, host: Scale| -> Result<()> {
            let s = ins.leg_scales()[i];
            if s != EXTERNAL_SCALE && s != host {
                return Err(Error::ScaleMismatch { leg: i, host, insert: s });
            }
            Ok(())
        };
        match data.point {
            InsertionPoint::Vertex(v) => {
                if v >= self.vertex_count() {
                    return Err(Error::Malformed(format!("no vertex {v}")));
                }
                let slots = self.half_edges_at(v);
                if slots.len() != k {
                    return Err(Error::ArityMismatch { point: slots.len(), insert: k });
                }
                if data.leg_map.iter().any(|&s| s >= k) {
                    return Err(Error::Malformed("leg map out of range".into()));
                }
                for (i, &s) in data.leg_map.iter().enumerate() {
                    check(i, self.half_edge_scale(slots[s]))?;
                }
                let n = self.vertex_count();
                let shift = |u: usize| if u > v { u - 1 } else { u };
                let base = n - 1;
                let mut kinds: Vec<VertexKind> =
                    (0..n).filter(|&u| u != v).map(|u| self.graph().kinds()[u]).collect();
                kinds.extend_from_slice(ins.graph().kinds());
                let mut edges: Vec<[usize; 2]> = self
                    .edges()
                    .iter()
                    .map(|&[a, b]| [if a == v { usize::MAX } else { shift(a) }, if b == v { usize::MAX } else { shift(b) }])
                    .collect();
                let mut legs: Vec<usize> =
                    self.legs().iter().map(|&u| if u == v { usize::MAX } else { shift(u) }).collect();
                for (i, &s) in data.leg_map.iter().enumerate() {
                    let u = base + ins.legs()[i];
                    match slots[s] {
                        HalfEdge::Edge { edge, end } => edges[edge][end as usize] = u,
                        HalfEdge::Leg(j) => legs[j] = u,
                    }
                }
                let mut scales = self.scales().to_vec();
                let first = edges.len();
                for (&[a, b], &s) in ins.edges().iter().zip(ins.scales()) {
                    edges.push([base + a, base + b]);
                    scales.push(s);
                }
                let image = super::subgraph::full_set(edges.len()) & !super::subgraph::full_set(first);
                let g = AssignedGraph::from_parts(
                    FeynmanGraph::from_parts(self.graph().valence(), kinds, edges, legs),
                    scales,
                    self.leg_scales().to_vec(),
                    self.is_labeled(),
                );
                Ok((g, image))
            }
            InsertionPoint::Propagator(e) => {
                if e >= self.edge_count() {
                    return Err(Error::Malformed(format!("no edge {e}")));
                }
                if k != 2 {
                    return Err(Error::ArityMismatch { point: 2, insert: k });
                }
                if data.leg_map.iter().any(|&s| s >= 2) {
                    return Err(Error::Malformed("leg map out of range".into()));
                }
                let s = self.scales()[e];
                check(0, s)?;
                check(1, s)?;
                let [a, b] = self.edges()[e];
                let base = self.vertex_count();
                let mut kinds = self.graph().kinds().to_vec();
                kinds.extend_from_slice(ins.graph().kinds());
                let mut edges = Vec::new();
                let mut scales = Vec::new();
                for (i, (&ed, &sc)) in self.edges().iter().zip(self.scales()).enumerate() {
                    if i != e {
                        edges.push(ed);
                        scales.push(sc);
                    }
                }
                let first = edges.len();
                for (&[x, y], &sc) in ins.edges().iter().zip(ins.scales()) {
                    edges.push([base + x, base + y]);
                    scales.push(sc);
                }
                let image = super::subgraph::full_set(edges.len()) & !super::subgraph::full_set(first);
                for (i, &slot) in data.leg_map.iter().enumerate() {
                    let end = if slot == 0 { a } else { b };
                    edges.push([end, base + ins.legs()[i]]);
                    scales.push(s);
                }
                let g = AssignedGraph::from_parts(
                    FeynmanGraph::from_parts(self.graph().valence(), kinds, edges, self.legs().to_vec()),
                    scales,
                    self.leg_scales().to_vec(),
                    self.is_labeled(),
                );
                Ok((g, image))
            }
        }
    }
}
