//! Scale indices, high subgraphs and their enumeration.

mod gn;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AssignedGraph, EdgeSet, Scale, Subgraph};

pub use gn::{GnNode, GnTree};

/// `(i_g, e_g)`: lowest internal scale and highest external scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleIndices {
    pub internal_index: Scale,
    pub external_index: Scale,
}

pub fn indices(g: &Subgraph<'_>) -> Result<ScaleIndices> {
    if g.edge_set() == 0 {
        return Err(Error::EmptySubgraph);
    }
    Ok(ScaleIndices { internal_index: g.internal_index(), external_index: g.external_index() })
}

/// Connected and `e_g < i_g`.
pub fn is_high(g: &Subgraph<'_>) -> bool {
    g.is_connected() && g.is_high()
}

/// Which subgraphs the coproduct extracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoproductKind {
    /// Components must be high, 1PI, with 2 or 4 legs.
    High,
    /// Same without the high condition (the Connes-Kreimer variant).
    AllDivergent,
}

impl CoproductKind {
    pub fn accepts(self, g: &Subgraph<'_>) -> bool {
        g.is_divergent() && (self == CoproductKind::AllDivergent || g.is_high())
    }
}

fn check_size(g: &AssignedGraph) -> Result<()> {
    if g.edge_count() > 30 {
        return Err(Error::BoundExceeded(format!("{} internal edges is beyond exhaustive subset scans", g.edge_count())));
    }
    Ok(())
}

/// Connected subgraphs accepted by `kind`, including `G` itself when
/// `include_full` is set. Sorted by edge mask.
pub fn connected_divergent(g: &AssignedGraph, kind: CoproductKind, include_full: bool) -> Result<Vec<EdgeSet>> {
    check_size(g)?;
    let full = g.all_edges();
    let mut out = Vec::new();
    for mask in 1..=full {
        if mask == full && !include_full {
            continue;
        }
        let sub = Subgraph::new(g, mask)?;
        if kind.accepts(&sub) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Proper nonempty subgraphs whose every connected component is accepted by
/// `kind`. Components of such a subgraph are vertex-disjoint by construction.
pub fn divergent_subgraphs(g: &AssignedGraph, kind: CoproductKind) -> Result<Vec<EdgeSet>> {
    let good: HashSet<EdgeSet> = connected_divergent(g, kind, true)?.into_iter().collect();
    let full = g.all_edges();
    let mut out = Vec::new();
    for mask in 1..full {
        let sub = Subgraph::new(g, mask)?;
        if sub.components().iter().all(|c| good.contains(c)) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// The set 〈G,μ〉: proper subgraphs whose components are high, 1PI and have
/// two or four legs.
pub fn enumerate_high_divergent(g: &AssignedGraph) -> Result<Vec<EdgeSet>> {
    divergent_subgraphs(g, CoproductKind::High)
}

/// All connected high subgraphs (any number of legs, 1PI or not).
pub fn high_subgraphs(g: &AssignedGraph) -> Result<Vec<EdgeSet>> {
    check_size(g)?;
    let mut out = Vec::new();
    for mask in 1..=g.all_edges() {
        if is_high(&Subgraph::new(g, mask)?) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Two subgraphs are nested or share no vertex.
pub fn nested_or_disjoint(g: &AssignedGraph, a: EdgeSet, b: EdgeSet) -> bool {
    if a & b == a || a & b == b {
        return true;
    }
    let va = Subgraph::new_unchecked(g, a).vertices();
    let vb = Subgraph::new_unchecked(g, b).vertices();
    !va.iter().any(|v| vb.contains(v))
}

/// Every pair of connected high subgraphs is nested or vertex-disjoint.
pub fn check_forest(g: &AssignedGraph) -> Result<bool> {
    let hs = high_subgraphs(g)?;
    for (i, &a) in hs.iter().enumerate() {
        for &b in &hs[i + 1..] {
            if !nested_or_disjoint(g, a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{FeynmanGraph, ScaleAssignment};

    /// Bubbles on edges 0,1 and 2,3, closed into a ring through vertex 4,
    /// which also carries a self-loop.
    fn two_bubble_host(s: [Scale; 8]) -> AssignedGraph {
        let g = FeynmanGraph::phi4(
            5,
            vec![[0, 1], [0, 1], [2, 3], [2, 3], [1, 2], [3, 4], [4, 0], [4, 4]],
            vec![0, 1, 2, 3],
        )
        .unwrap();
        g.assign(&ScaleAssignment::new(s.to_vec(), 3).unwrap()).unwrap()
    }

    #[test]
    fn indices_by_definition() {
        let chain = fixtures::chain_with_scales([3, 4, 1, 2]);
        let sub = chain.subgraph(0b0011).unwrap();
        assert_eq!(indices(&sub).unwrap(), ScaleIndices { internal_index: 3, external_index: 2 });
        let whole = chain.subgraph(chain.all_edges()).unwrap();
        assert_eq!(indices(&whole).unwrap().external_index, -1);
    }

    #[test]
    fn high_is_strict() {
        let chain = fixtures::chain_with_scales([2, 2, 2, 1]);
        assert!(!is_high(&chain.subgraph(0b0011).unwrap()));
        let chain = fixtures::chain_with_scales([3, 3, 2, 1]);
        assert!(is_high(&chain.subgraph(0b0011).unwrap()));
    }

    #[test]
    fn primitive_bubble_has_no_divergent_subgraphs() {
        assert!(enumerate_high_divergent(&fixtures::bubble(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn chain_with_high_inner_bubble() {
        let chain = fixtures::chain_with_scales([3, 3, 2, 1]);
        assert_eq!(enumerate_high_divergent(&chain).unwrap(), vec![0b0011]);
    }

    #[test]
    fn two_disjoint_high_bubbles() {
        let g = two_bubble_host([3, 3, 2, 2, 0, 0, 0, 0]);
        let mut got = enumerate_high_divergent(&g).unwrap();
        got.sort();
        assert_eq!(got, vec![0b0011, 0b1100, 0b1111]);
        // the union is not connected, hence not high as a whole
        assert!(!is_high(&g.subgraph(0b1111).unwrap()));
    }

    #[test]
    fn all_divergent_ignores_scales() {
        let chain = fixtures::chain_with_scales([1, 1, 2, 2]);
        assert_eq!(divergent_subgraphs(&chain, CoproductKind::High).unwrap(), vec![0b1100]);
        assert_eq!(divergent_subgraphs(&chain, CoproductKind::AllDivergent).unwrap(), vec![0b0011, 0b1100]);
    }

    #[test]
    fn forest_lemma_on_fixtures() {
        for g in fixtures::zoo() {
            assert!(check_forest(&g).unwrap(), "{g}");
        }
    }

    #[test]
    fn overlapping_subgraphs_are_never_both_high() {
        // the chain's two bubbles share vertex 1
        let chain = fixtures::chain_with_scales([2, 2, 2, 2]);
        let hs = high_subgraphs(&chain).unwrap();
        assert!(!hs.contains(&0b0011) && !hs.contains(&0b1100));
        assert!(hs.contains(&0b1111));
    }
}
