//! Gallavotti-Nicolò trees.
//!
//! The nodes at depth `i` are the connected components of the edges with
//! scale `≥ i`, for `0 ≤ i ≤ max scale`. Each node remembers its edge set in
//! the root graph, so the tree is a faithful encoding of the assigned graph.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{AssignedGraph, EdgeSet, Scale, Subgraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GnNode {
    pub depth: Scale,
    pub edges: EdgeSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnTree {
    graph: AssignedGraph,
    nodes: Vec<GnNode>,
}

impl GnTree {
    /// Tree of the canonical form of `g`.
    pub fn build(g: &AssignedGraph) -> Result<GnTree> {
        if !g.graph().is_connected() {
            return Err(Error::Disconnected);
        }
        if g.edge_count() > 64 {
            return Err(Error::TooManyEdges(g.edge_count()));
        }
        let graph = g.canonical();
        let mut nodes = vec![GnNode { depth: 0, edges: graph.all_edges(), parent: None, children: vec![] }];
        let max = graph.max_scale().unwrap_or(0);
        let mut level = vec![0usize];
        for depth in 1..=max {
            let mut next = Vec::new();
            for &p in &level {
                let keep: EdgeSet = Subgraph::new_unchecked(&graph, nodes[p].edges)
                    .edge_indices()
                    .into_iter()
                    .filter(|&e| graph.scales()[e] >= depth)
                    .fold(0, |m, e| m | 1 << e);
                if keep == 0 {
                    continue;
                }
                for comp in Subgraph::new_unchecked(&graph, keep).components() {
                    let id = nodes.len();
                    nodes.push(GnNode { depth, edges: comp, parent: Some(p), children: vec![] });
                    nodes[p].children.push(id);
                    next.push(id);
                }
            }
            level = next;
        }
        Ok(GnTree { graph, nodes })
    }

    /// Extend every leaf with copies of itself down to depth `rho`.
    pub fn padded(&self, rho: Scale) -> GnTree {
        let mut t = self.clone();
        let leaves: Vec<usize> = (0..t.nodes.len()).filter(|&i| t.nodes[i].children.is_empty()).collect();
        for leaf in leaves {
            let mut cur = leaf;
            for depth in t.nodes[leaf].depth + 1..=rho {
                let id = t.nodes.len();
                let edges = t.nodes[leaf].edges;
                t.nodes.push(GnNode { depth, edges, parent: Some(cur), children: vec![] });
                t.nodes[cur].children.push(id);
                cur = id;
            }
        }
        t
    }

    pub fn graph(&self) -> &AssignedGraph {
        &self.graph
    }

    pub fn nodes(&self) -> &[GnNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn depth(&self) -> Scale {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Decoration of a node as a standalone generator (sentinel legs).
    pub fn decoration(&self, node: usize) -> AssignedGraph {
        let edges = self.nodes[node].edges;
        if edges == 0 {
            return self.graph.clone();
        }
        Subgraph::new_unchecked(&self.graph, edges).generator()
    }

    /// The arrow into `node` joins two different decorations.
    pub fn changes_decoration(&self, node: usize) -> bool {
        match self.nodes[node].parent {
            Some(p) => self.nodes[p].edges != self.nodes[node].edges,
            None => false,
        }
    }

    /// `n(T)`: arrows joining different decorations, plus one.
    pub fn grade(&self) -> usize {
        (0..self.nodes.len()).filter(|&i| self.changes_decoration(i)).count() + 1
    }

    /// The arrow into `node` may be cut: its decoration changes and the
    /// farther node is 1PI with two or four legs.
    pub fn is_cuttable(&self, node: usize) -> bool {
        self.changes_decoration(node) && Subgraph::new_unchecked(&self.graph, self.nodes[node].edges).is_divergent()
    }

    /// Nonempty sets of cuttable arrows with at most one on every path from
    /// the root to a leaf (identified by their farther node).
    pub fn admissible_cuts(&self) -> Vec<Vec<usize>> {
        let mut all = self.cuts_below(self.root());
        all.retain(|c| !c.is_empty());
        all.sort();
        all
    }

    fn cuts_below(&self, node: usize) -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![vec![]];
        for &c in &self.nodes[node].children {
            let mut opts = self.cuts_below(c);
            if self.is_cuttable(c) {
                opts.push(vec![c]);
            }
            let mut next = Vec::new();
            for a in &acc {
                for o in &opts {
                    let mut v = a.clone();
                    v.extend_from_slice(o);
                    next.push(v);
                }
            }
            acc = next;
        }
        acc
    }

    /// Scale of every edge, recovered as the deepest node containing it.
    pub fn scales_from_tree(&self) -> Vec<Scale> {
        (0..self.graph.edge_count())
            .map(|e| self.nodes.iter().filter(|n| n.edges >> e & 1 == 1).map(|n| n.depth).max().unwrap_or(0))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "id": i,
                    "depth": n.depth,
                    "edges": (0..64).filter(|b| n.edges >> b & 1 == 1).collect::<Vec<u32>>(),
                    "parent": n.parent,
                    "children": n.children,
                    "decoration": self.decoration(i).to_string(),
                    "cuttable": self.is_cuttable(i),
                })
            })
            .collect();
        serde_json::json!({
            "graph": self.graph.to_string(),
            "depth": self.depth(),
            "grade": self.grade(),
            "nodes": nodes,
        })
    }

    /// Graphviz rendering: one rank per depth, nodes labelled by a hash of
    /// their decoration.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph gn {\n  rankdir=TB;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label = format!("{:08x}", fnv1a(self.decoration(i).to_string().as_bytes()) as u32);
            let _ = writeln!(s, "  n{i} [label=\"{label}\\nd={}\\ne={:#b}\"];", n.depth, n.edges);
        }
        let max = self.depth();
        for d in 0..=max {
            let ids: Vec<String> =
                (0..self.nodes.len()).filter(|&i| self.nodes[i].depth == d).map(|i| format!("n{i}")).collect();
            let _ = writeln!(s, "  {{ rank=same; {} }}", ids.join("; "));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let style = if self.changes_decoration(i) { "" } else { " [style=dashed]" };
                let _ = writeln!(s, "  n{p} -> n{i}{style};");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
