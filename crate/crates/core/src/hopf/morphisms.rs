//! Morphisms out of ℋ: to Gallavotti-Nicolò trees, to rooted trees, and the
//! sum over scale assignments from unassigned graphs.
//!
//! π_GN is a bijection on generators, so monomials of GN trees are stored
//! through the graphs they encode; `GnTree::build` recovers the trees.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use super::engine::split;
use super::trees::{RootedTree, RtElement, RtMonomial, RtTensor};
use super::{AlgebraElement, HopfAlgebra, Monomial, TensorElement};
use crate::error::{Error, Result};
use crate::graph::{AssignedGraph, FeynmanGraph, Scale, ScaleAssignment};
use crate::multiscale::{CoproductKind, GnTree};
use crate::poly::{int, Rational};

/// `π_GN(G,μ) = T_(G,μ)`.
pub fn pi_gn(g: &AssignedGraph) -> Result<GnTree> {
    GnTree::build(g)
}

/// Coproduct of ℋ_GN on one tree: a sum over admissible cuts of the pruned
/// subtrees' completions tensored with the completion of the trunk.
pub fn gn_coproduct(t: &GnTree) -> Result<TensorElement> {
    let g = t.graph();
    let whole = Monomial::from_graphs([g.clone()]);
    let mut out = TensorElement::zero();
    out.add_pair(whole.clone(), Monomial::one(), Rational::one());
    out.add_pair(Monomial::one(), whole, Rational::one());
    for cut in t.admissible_cuts() {
        let left = Monomial::from_graphs(cut.iter().map(|&c| t.decoration(c)));
        let mask = cut.iter().fold(0, |m, &c| m | t.nodes()[c].edges);
        let trunk = GnTree::build(&g.shrink(mask)?)?;
        out.add_pair(left, Monomial::from_graphs([trunk.graph().clone()]), Rational::one());
    }
    Ok(out)
}

fn collapse(t: &GnTree, keep: impl Fn(usize) -> bool) -> RootedTree {
    let n = t.nodes().len();
    // index among kept nodes, root first
    let kept: Vec<usize> = (0..n).filter(|&i| i == t.root() || keep(i)).collect();
    let pos: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let parents: Vec<usize> = kept
        .iter()
        .map(|&i| {
            let mut p = t.nodes()[i].parent;
            while let Some(x) = p {
                if let Some(&k) = pos.get(&x) {
                    return k;
                }
                p = t.nodes()[x].parent;
            }
            0
        })
        .collect();
    RootedTree::from_parents(&parents)
}

/// Contract every arrow joining two nodes with the same decoration.
pub fn skeleton(t: &GnTree) -> RootedTree {
    collapse(t, |i| t.changes_decoration(i))
}

/// Rooted tree of the root and the nodes sitting below a cuttable arrow.
/// Arrows into the remaining nodes are contracted, so that admissible cuts
/// of the GN tree and of the rooted tree correspond.
pub fn pi_rt(t: &GnTree) -> RootedTree {
    collapse(t, |i| t.is_cuttable(i))
}

pub fn pi_rt_graph(g: &AssignedGraph) -> Result<RootedTree> {
    Ok(pi_rt(&GnTree::build(g)?))
}

pub fn pi_rt_monomial(m: &Monomial) -> Result<RtMonomial> {
    let trees = m.factors().iter().map(pi_rt_graph).collect::<Result<Vec<_>>>()?;
    Ok(RtMonomial::from_trees(trees))
}

pub fn pi_rt_element(x: &AlgebraElement) -> Result<RtElement> {
    let mut out = RtElement::zero();
    for (m, c) in x.terms() {
        out.add_term(pi_rt_monomial(m)?, c.clone());
    }
    Ok(out)
}

pub fn pi_rt_tensor(t: &TensorElement) -> Result<RtTensor> {
    let mut out = RtTensor::zero();
    for (k, c) in t.terms() {
        out.add_term(pi_rt_monomial(&k[0])?, pi_rt_monomial(&k[1])?, c.clone());
    }
    Ok(out)
}

const MAX_ASSIGNMENTS: u128 = 5_000_000;

fn assignments(edges: usize, rho: Scale) -> Result<Vec<Vec<Scale>>> {
    if rho < 0 {
        return Err(Error::ScaleOutOfRange { scale: rho, rho });
    }
    let base = rho as u128 + 1;
    let total = base.checked_pow(edges as u32).unwrap_or(u128::MAX);
    if total > MAX_ASSIGNMENTS {
        return Err(Error::BoundExceeded(format!("{total} scale assignments")));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0; edges];
    loop {
        out.push(cur.clone());
        let mut i = 0;
        loop {
            if i == edges {
                return Ok(out);
            }
            if cur[i] < rho {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// `π^ρ_CK(G) = Σ_{μ} (G,μ)` over all scale assignments in `[0, ρ]`,
/// collected by isomorphism class. Edgeless graphs map to 1.
pub fn pi_ck(g: &FeynmanGraph, rho: Scale) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    for scales in assignments(g.edge_count(), rho)? {
        let a = g.assign(&ScaleAssignment::new(scales, rho)?)?;
        out.add_term(Monomial::generator(&a), Rational::one());
    }
    Ok(out)
}

pub fn pi_ck_monomial(m: &Monomial, rho: Scale) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::one();
    for f in m.factors() {
        out = &out * &pi_ck(f.graph(), rho)?;
    }
    Ok(out)
}

/// Classes of `π^ρ_CK(G)` grouped by the order pattern of their scales and
/// their coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CkPattern {
    /// Dense ranks of the sorted scales, e.g. `[0,0,1]` for `i₁ = i₂ < i₃`.
    pub pattern: Vec<usize>,
    pub coefficient: u64,
    pub classes: usize,
}

fn dense_ranks(scales: &[Scale]) -> Vec<usize> {
    let mut s = scales.to_vec();
    s.sort_unstable();
    let mut out = Vec::with_capacity(s.len());
    let mut rank = 0;
    for (i, &x) in s.iter().enumerate() {
        if i > 0 && x != s[i - 1] {
            rank += 1;
        }
        out.push(rank);
    }
    out
}

pub fn pi_ck_patterns(g: &FeynmanGraph, rho: Scale) -> Result<Vec<CkPattern>> {
    let sum = pi_ck(g, rho)?;
    let mut groups: BTreeMap<(Vec<usize>, u64), usize> = BTreeMap::new();
    for (m, c) in sum.terms() {
        let pattern = match m.factors() {
            [a] => dense_ranks(a.scales()),
            _ => Vec::new(),
        };
        let coefficient = c.to_integer().try_into().map_err(|_| Error::BoundExceeded("coefficient".into()))?;
        *groups.entry((pattern, coefficient)).or_default() += 1;
    }
    Ok(groups.into_iter().map(|((pattern, coefficient), classes)| CkPattern { pattern, coefficient, classes }).collect())
}

/// Compare `Δ̃(π_CK(G))` with `(π_CK⊗π_CK)Δ_CK(G)`, where `Δ_CK` extracts
/// every divergent subgraph of the unassigned graph.
pub fn check_pi_ck_morphism(g: &FeynmanGraph, rho: Scale) -> Result<bool> {
    let h = HopfAlgebra::new(CoproductKind::AllDivergent);
    let lhs = h.coproduct(&pi_ck(g, rho)?)?;
    let flat = g.assign(&ScaleAssignment::new(vec![0; g.edge_count()], rho)?)?;
    let mut rhs = TensorElement::zero();
    let mut add = |l: &Monomial, r: &Monomial| -> Result<()> {
        let (a, b) = (pi_ck_monomial(l, rho)?, pi_ck_monomial(r, rho)?);
        for (x, c) in a.terms() {
            for (y, d) in b.terms() {
                rhs.add_pair(x.clone(), y.clone(), c * d);
            }
        }
        Ok(())
    };
    let whole = Monomial::generator(&flat);
    add(&whole, &Monomial::one())?;
    add(&Monomial::one(), &whole)?;
    for mask in h.extracted(&flat)? {
        let (l, r) = split(&flat, mask)?;
        add(&l, &r)?;
    }
    Ok(lhs == rhs)
}

/// `Δ_GN∘π_GN = (π_GN⊗π_GN)∘Δ` on one generator.
pub fn check_pi_gn_morphism(g: &AssignedGraph) -> Result<bool> {
    let h = HopfAlgebra::new(CoproductKind::High);
    Ok(gn_coproduct(&pi_gn(g)?)? == *h.coproduct_generator(g)?)
}

/// `Δ_CK∘π_RT = (π_RT⊗π_RT)∘Δ` on one generator.
pub fn check_pi_rt_morphism(g: &AssignedGraph) -> Result<bool> {
    let h = HopfAlgebra::new(CoproductKind::High);
    let lhs = pi_rt_tensor(&*h.coproduct_generator(g)?)?;
    Ok(lhs == pi_rt_graph(g)?.coproduct())
}

/// `n(T)` of every factor adds up across each coproduct term.
pub fn gn_grading_is_additive(t: &GnTree) -> Result<bool> {
    let n = t.grade();
    for (k, _) in gn_coproduct(t)?.terms() {
        let grade = |m: &Monomial| -> Result<usize> {
            m.factors().iter().map(|g| GnTree::build(g).map(|t| t.grade())).sum()
        };
        let (l, r) = (grade(&k[0])?, grade(&k[1])?);
        if !k[0].is_one() && !k[1].is_one() && l + r != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Total coefficient of `π^ρ_CK(G)`, which is `(ρ+1)^E`.
pub fn pi_ck_total(g: &FeynmanGraph, rho: Scale) -> Result<Rational> {
    Ok(pi_ck(g, rho)?.terms().fold(int(0), |a, (_, c)| a + c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sunset() -> FeynmanGraph {
        fixtures::sunset(0, 0, 0).graph().clone()
    }

    #[test]
    fn sunset_patterns() {
        let p = pi_ck_patterns(&sunset(), 2).unwrap();
        let got: Vec<(Vec<usize>, u64, usize)> = p.into_iter().map(|c| (c.pattern, c.coefficient, c.classes)).collect();
        assert_eq!(
            got,
            vec![(vec![0, 0, 0], 1, 3), (vec![0, 0, 1], 3, 3), (vec![0, 1, 1], 3, 3), (vec![0, 1, 2], 6, 1)]
        );
        assert_eq!(pi_ck_total(&sunset(), 2).unwrap(), int(27));
        assert_eq!(pi_ck_total(&sunset(), 3).unwrap(), int(64));
    }

    #[test]
    fn gn_intertwines_on_fixtures() {
        for g in fixtures::zoo() {
            if g.edge_count() == 0 {
                continue;
            }
            assert!(check_pi_gn_morphism(&g).unwrap(), "{g}");
            assert!(check_pi_rt_morphism(&g).unwrap(), "{g}");
            assert!(gn_grading_is_additive(&pi_gn(&g).unwrap()).unwrap(), "{g}");
        }
    }

    #[test]
    fn chain_with_inner_bubble_has_one_cut() {
        let t = pi_gn(&fixtures::chain_with_scales([3, 3, 2, 1])).unwrap();
        assert_eq!(t.admissible_cuts().len(), 1);
        assert_eq!(gn_coproduct(&t).unwrap().len(), 3);
    }

    #[test]
    fn constant_decoration_collapses_to_a_point() {
        let t = pi_gn(&fixtures::eye_with_scales([1, 1, 1, 1])).unwrap();
        assert_eq!(skeleton(&t), RootedTree::leaf());
        assert_eq!(pi_rt(&t), RootedTree::leaf());
        assert_eq!(gn_coproduct(&t).unwrap().len(), 2);
    }

    #[test]
    fn ck_morphism_on_small_graphs() {
        for g in [fixtures::bubble(0, 0), fixtures::chain(), fixtures::eye()] {
            assert!(check_pi_ck_morphism(g.graph(), 1).unwrap(), "{g}");
        }
        assert!(check_pi_ck_morphism(&sunset(), 2).unwrap());
    }
}
