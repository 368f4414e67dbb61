//! Canonical forms by exhaustive minimisation over colour-respecting vertex
//! orderings. Colours come from iterated neighbourhood refinement, so only
//! vertices that refinement cannot separate are permuted against each other.
//! Graphs at desk scale have at most a handful of vertices per colour.

use std::collections::BTreeMap;

use super::{AssignedGraph, FeynmanGraph, Scale, VertexKind};

/// Result of canonicalisation.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub graph: AssignedGraph,
    /// Vertex permutations (respecting kinds, legs and scales) that map the
    /// multigraph onto itself. Half-edge swaps are not included.
    pub multigraph_automorphisms: u128,
    /// `vertex_order[new] = old`.
    pub vertex_order: Vec<usize>,
    /// `edge_order[new] = old`.
    pub edge_order: Vec<usize>,
}

type Code = (Vec<VertexKind>, Vec<(usize, Scale)>, Vec<(usize, usize, Scale)>);

pub(crate) fn canonicalize(g: &AssignedGraph) -> Canonical {
    let n = g.vertex_count();
    let colors = refine(g);

    // cells in colour order
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colors[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let cell_perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c)).collect();

    let mut best: Option<(Code, Vec<usize>)> = None;
    let mut ties: u128 = 0;
    let mut idx = vec![0usize; cells.len()];
    let mut pos = vec![0usize; n];
    loop {
        let mut next = 0;
        for (c, perms) in cell_perms.iter().enumerate() {
            for &v in &perms[idx[c]] {
                pos[v] = next;
                next += 1;
            }
        }
        let code = encode(g, &pos);
        match &best {
            Some((b, _)) if code > *b => {}
            Some((b, _)) if code == *b => ties += 1,
            _ => {
                best = Some((code, pos.clone()));
                ties = 1;
            }
        }
        // odometer
        let mut c = 0;
        loop {
            if c == idx.len() {
                let (_, pos) = best.expect("at least one ordering");
                return build(g, &pos, ties);
            }
            idx[c] += 1;
            if idx[c] < cell_perms[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

fn encode(g: &AssignedGraph, pos: &[usize]) -> Code {
    let n = pos.len();
    let mut kinds = vec![VertexKind::Interaction; n];
    for (v, &p) in pos.iter().enumerate() {
        kinds[p] = g.graph.kinds[v];
    }
    let mut legs: Vec<(usize, Scale)> =
        g.graph.legs.iter().zip(&g.leg_scales).map(|(&v, &s)| (pos[v], s)).collect();
    if !g.labeled {
        legs.sort_unstable();
    }
    let mut edges: Vec<(usize, usize, Scale)> = g
        .graph
        .edges
        .iter()
        .zip(&g.scales)
        .map(|(&[a, b], &s)| {
            let (x, y) = (pos[a], pos[b]);
            (x.min(y), x.max(y), s)
        })
        .collect();
    edges.sort_unstable();
    (kinds, legs, edges)
}

fn build(g: &AssignedGraph, pos: &[usize], automorphisms: u128) -> Canonical {
    let n = pos.len();
    let mut vertex_order = vec![0; n];
    for (v, &p) in pos.iter().enumerate() {
        vertex_order[p] = v;
    }
    let kinds = vertex_order.iter().map(|&v| g.graph.kinds[v]).collect();

    let mut edge_order: Vec<usize> = (0..g.edge_count()).collect();
    let key = |e: usize| {
        let [a, b] = g.graph.edges[e];
        let (x, y) = (pos[a], pos[b]);
        (x.min(y), x.max(y), g.scales[e])
    };
    edge_order.sort_by_key(|&e| (key(e), e));
    let edges = edge_order
        .iter()
        .map(|&e| {
            let (x, y, _) = key(e);
            [x, y]
        })
        .collect();
    let scales = edge_order.iter().map(|&e| g.scales[e]).collect();

    let mut legs: Vec<(usize, Scale)> =
        g.graph.legs.iter().zip(&g.leg_scales).map(|(&v, &s)| (pos[v], s)).collect();
    if !g.labeled {
        legs.sort_unstable();
    }
    let graph = AssignedGraph {
        graph: FeynmanGraph::from_parts(
            g.graph.valence,
            kinds,
            edges,
            legs.iter().map(|l| l.0).collect(),
        ),
        scales,
        leg_scales: legs.iter().map(|l| l.1).collect(),
        labeled: g.labeled,
    };
    Canonical { graph, multigraph_automorphisms: automorphisms, vertex_order, edge_order }
}

/// Iterated colour refinement. Colours are ranks of sorted signatures, hence
/// invariant under isomorphism.
fn refine(g: &AssignedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut sig0: Vec<(VertexKind, Vec<(usize, Scale)>, Vec<(Scale, bool)>)> = Vec::with_capacity(n);
    for v in 0..n {
        let mut legs: Vec<(usize, Scale)> = g
            .graph
            .legs
            .iter()
            .zip(&g.leg_scales)
            .enumerate()
            .filter(|(_, (&u, _))| u == v)
            .map(|(i, (_, &s))| (if g.labeled { i + 1 } else { 0 }, s))
            .collect();
        legs.sort_unstable();
        let mut inc: Vec<(Scale, bool)> = g
            .graph
            .edges
            .iter()
            .zip(&g.scales)
            .filter(|(&[a, b], _)| a == v || b == v)
            .map(|(&[a, b], &s)| (s, a == b))
            .collect();
        inc.sort_unstable();
        sig0.push((g.graph.kinds[v], legs, inc));
    }
    let mut colors = rank(&sig0);
    let mut classes = count_classes(&colors);
    loop {
        let mut sig: Vec<(usize, Vec<(usize, Scale)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<(usize, Scale)> = Vec::new();
            for (&[a, b], &s) in g.graph.edges.iter().zip(&g.scales) {
                if a == v {
                    nb.push((colors[b], s));
                }
                if b == v {
                    nb.push((colors[a], s));
                }
            }
            nb.sort_unstable();
            sig.push((colors[v], nb));
        }
        let next = rank(&sig);
        let k = count_classes(&next);
        colors = next;
        if k == classes {
            return colors;
        }
        classes = k;
    }
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Half-edge permutations that fix every vertex yet preserve the pairing:
/// parallel edges of equal scale permute, self-loops permute and flip, and
/// (for unlabeled legs) legs of equal scale at one vertex permute.
pub(crate) fn half_edge_kernel(g: &AssignedGraph, permute_legs: bool) -> u128 {
    let mut classes: BTreeMap<(usize, usize, Scale), usize> = BTreeMap::new();
    for (&[a, b], &s) in g.graph.edges.iter().zip(&g.scales) {
        *classes.entry((a, b, s)).or_default() += 1;
    }
    let mut k: u128 = 1;
    for (&(a, b, _), &m) in &classes {
        k *= factorial(m);
        if a == b {
            k *= 1u128 << m;
        }
    }
    if permute_legs {
        let mut legs: BTreeMap<(usize, Scale), usize> = BTreeMap::new();
        for (&v, &s) in g.graph.legs.iter().zip(&g.leg_scales) {
            *legs.entry((v, s)).or_default() += 1;
        }
        for &m in legs.values() {
            k *= factorial(m);
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::ScaleAssignment;

    /// Brute-force isomorphism test over all vertex permutations and all edge
    /// matchings (edges compared as multisets).
    fn brute_isomorphic(a: &AssignedGraph, b: &AssignedGraph) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let n = a.vertex_count();
        permutations(&(0..n).collect::<Vec<_>>()).into_iter().any(|p| {
            let kinds_ok = (0..n).all(|v| a.graph.kinds[v] == b.graph.kinds[p[v]]);
            let mut ea: Vec<_> = a
                .edges()
                .iter()
                .zip(a.scales())
                .map(|(&[x, y], &s)| (p[x].min(p[y]), p[x].max(p[y]), s))
                .collect();
            let mut eb: Vec<_> =
                b.edges().iter().zip(b.scales()).map(|(&[x, y], &s)| (x, y, s)).collect();
            ea.sort();
            eb.sort();
            let mut la: Vec<_> = a.legs().iter().zip(a.leg_scales()).map(|(&v, &s)| (p[v], s)).collect();
            let mut lb: Vec<_> = b.legs().iter().zip(b.leg_scales()).map(|(&v, &s)| (v, s)).collect();
            if !a.labeled {
                la.sort();
                lb.sort();
            }
            kinds_ok && ea == eb && la == lb
        })
    }

    fn brute_automorphisms(a: &AssignedGraph) -> u128 {
        let n = a.vertex_count();
        permutations(&(0..n).collect::<Vec<_>>())
            .into_iter()
            .filter(|p| {
                let mut inv = vec![0; n];
                for (i, &x) in p.iter().enumerate() {
                    inv[x] = i;
                }
                let q: Vec<usize> = (0..n).map(|v| p[v]).collect();
                let moved = a.permuted(&q, &(0..a.edge_count()).collect::<Vec<_>>()).unwrap();
                let _ = inv;
                let mut ea: Vec<_> = moved.edges().iter().zip(moved.scales()).map(|(e, s)| (*e, *s)).collect();
                let mut eb: Vec<_> = a.edges().iter().zip(a.scales()).map(|(e, s)| (*e, *s)).collect();
                ea.sort();
                eb.sort();
                let kinds_ok = moved.graph.kinds == a.graph.kinds;
                let legs_ok = if a.labeled {
                    moved.legs() == a.legs()
                } else {
                    let mut x: Vec<_> = moved.legs().iter().zip(moved.leg_scales()).collect();
                    let mut y: Vec<_> = a.legs().iter().zip(a.leg_scales()).collect();
                    x.sort();
                    y.sort();
                    x == y
                };
                kinds_ok && ea == eb && legs_ok
            })
            .count() as u128
    }

    #[test]
    fn bubble_is_invariant_under_vertex_swap() {
        let b = fixtures::bubble(1, 2);
        let moved = b.permuted(&[1, 0], &[1, 0]).unwrap();
        assert_eq!(b.canonical(), moved.canonical());
    }

    #[test]
    fn bubble_scale_order_irrelevant() {
        assert_eq!(fixtures::bubble(1, 2).canonical(), fixtures::bubble(2, 1).canonical());
        assert!(brute_isomorphic(&fixtures::bubble(1, 2), &fixtures::bubble(2, 1)));
    }

    #[test]
    fn order_three_quadrupeds_differ() {
        let chain = fixtures::chain().forget_scales();
        let other = fixtures::eye().forget_scales();
        assert!(!brute_isomorphic(&chain, &other));
        assert_ne!(chain.canonical(), other.canonical());
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(AssignedGraph::bare_vertex(4, true).automorphism_order(), 1);
        assert_eq!(fixtures::bubble(0, 0).automorphism_order(), 2);
        assert_eq!(fixtures::bubble(1, 2).automorphism_order(), 1);
        assert_eq!(fixtures::chain().forget_scales().automorphism_order(), 4);
        assert_eq!(fixtures::eye().forget_scales().automorphism_order(), 2);
    }

    #[test]
    fn external_labelings_match_known_values() {
        assert_eq!(fixtures::bubble(0, 0).external_labelings(), 3);
        assert_eq!(fixtures::chain().forget_scales().external_labelings(), 3);
        assert_eq!(fixtures::eye().forget_scales().external_labelings(), 6);
    }

    #[test]
    fn tadpole_kernel_counts_flips() {
        // one vertex, one self-loop, two legs
        let g = FeynmanGraph::phi4(1, vec![[0, 0]], vec![0, 0]).unwrap();
        assert_eq!(g.automorphism_order(), 2);
        // figure eight vacuum graph: 2 loops, each flippable, and swappable
        let g = FeynmanGraph::phi4(1, vec![[0, 0], [0, 0]], vec![]).unwrap();
        assert_eq!(g.automorphism_order(), 8);
    }

    #[test]
    fn multigraph_automorphisms_agree_with_brute_force() {
        for g in fixtures::zoo() {
            for labeled in [false, true] {
                let g = if labeled { g.clone().labeled() } else { g.clone().unlabeled() };
                assert_eq!(
                    canonicalize(&g).multigraph_automorphisms,
                    brute_automorphisms(&g),
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn canonical_is_idempotent() {
        for g in fixtures::zoo() {
            let c = g.canonical();
            assert_eq!(c.canonical(), c);
            assert!(brute_isomorphic(&c, &g));
        }
    }

    #[test]
    fn labeled_canonical_respects_labels() {
        let g = FeynmanGraph::phi4(2, vec![[0, 1], [0, 1]], vec![0, 0, 1, 1]).unwrap();
        let a = g.assign(&ScaleAssignment::new(vec![0, 0], 0).unwrap()).unwrap().labeled();
        let h = FeynmanGraph::phi4(2, vec![[0, 1], [0, 1]], vec![0, 1, 0, 1]).unwrap();
        let b = h.assign(&ScaleAssignment::new(vec![0, 0], 0).unwrap()).unwrap().labeled();
        assert_ne!(a.canonical(), b.canonical());
        assert_eq!(a.clone().unlabeled().canonical(), b.clone().unlabeled().canonical());
    }
}
