//! Coproduct, counit and the three antipode formulas.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::One;

use super::{AlgebraElement, Monomial, TensorElement};
use crate::error::Result;
use crate::graph::{AssignedGraph, EdgeSet, Subgraph};
use crate::multiscale::{connected_divergent, divergent_subgraphs, nested_or_disjoint, CoproductKind};
use crate::poly::Rational;

/// Canonical generator form: unlabeled, sentinel legs, canonical.
pub fn generator_key(g: &AssignedGraph) -> AssignedGraph {
    g.clone().unlabeled().rooted().canonical()
}

/// A forest of connected divergent subgraphs, as edge masks of the root
/// graph. Always contains the full edge set.
pub type Forest = Vec<EdgeSet>;

/// Hopf algebra operations with memoised coproducts and antipodes of
/// generators. Shareable across threads.
pub struct HopfAlgebra {
    kind: CoproductKind,
    coproducts: RwLock<HashMap<AssignedGraph, Arc<TensorElement>>>,
    antipodes: RwLock<HashMap<AssignedGraph, Arc<AlgebraElement>>>,
}

impl HopfAlgebra {
    pub fn new(kind: CoproductKind) -> Self {
        HopfAlgebra { kind, coproducts: RwLock::default(), antipodes: RwLock::default() }
    }

    /// The multiscale Hopf algebra (high subgraphs only).
    pub fn high() -> Arc<Self> {
        Arc::new(Self::new(CoproductKind::High))
    }

    /// The variant extracting every divergent subgraph.
    pub fn all_divergent() -> Arc<Self> {
        Arc::new(Self::new(CoproductKind::AllDivergent))
    }

    pub fn kind(&self) -> CoproductKind {
        self.kind
    }

    /// Proper subgraphs extracted by the coproduct.
    pub fn extracted(&self, g: &AssignedGraph) -> Result<Vec<EdgeSet>> {
        divergent_subgraphs(g, self.kind)
    }

    /// `Δ(G) = G⊗1 + 1⊗G + Σ_g g⊗G/g` on one generator.
    pub fn coproduct_generator(&self, g: &AssignedGraph) -> Result<Arc<TensorElement>> {
        let key = generator_key(g);
        if let Some(t) = self.coproducts.read().expect("lock").get(&key) {
            return Ok(t.clone());
        }
        let mut t = TensorElement::zero();
        if key.edge_count() == 0 {
            t.add_pair(Monomial::one(), Monomial::one(), Rational::one());
        } else {
            let gm = Monomial::from_keys(vec![key.clone()]);
            t.add_pair(gm.clone(), Monomial::one(), Rational::one());
            t.add_pair(Monomial::one(), gm, Rational::one());
            for mask in self.extracted(&key)? {
                let (left, right) = split(&key, mask)?;
                t.add_pair(left, right, Rational::one());
            }
        }
        let t = Arc::new(t);
        self.coproducts.write().expect("lock").insert(key, t.clone());
        Ok(t)
    }

    pub fn coproduct_monomial(&self, m: &Monomial) -> Result<TensorElement> {
        let mut acc = TensorElement::zero();
        acc.add_pair(Monomial::one(), Monomial::one(), Rational::one());
        for g in m.factors() {
            let d = self.coproduct_generator(g)?;
            let mut next = TensorElement::zero();
            for (a, x) in acc.terms() {
                for (b, y) in d.terms() {
                    next.add_pair(a[0].times(&b[0]), a[1].times(&b[1]), x * y);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn coproduct(&self, x: &AlgebraElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (m, c) in x.terms() {
            out.add(&self.coproduct_monomial(m)?.scale(c));
        }
        Ok(out)
    }

    /// `Δ̄(x) = Δ(x) − x⊗1 − 1⊗x` for `x` without constant term.
    pub fn reduced_coproduct_monomial(&self, m: &Monomial) -> Result<TensorElement> {
        let mut t = self.coproduct_monomial(m)?;
        if !m.is_one() {
            t.add_pair(m.clone(), Monomial::one(), -Rational::one());
            t.add_pair(Monomial::one(), m.clone(), -Rational::one());
        }
        Ok(t)
    }

    pub fn counit(&self, x: &AlgebraElement) -> Rational {
        x.counit()
    }

    /// Apply Δ to tensor factor `pos`, producing a tensor with one more
    /// factor.
    pub fn coproduct_at(&self, t: &TensorElement, pos: usize) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (k, c) in t.terms() {
            let d = self.coproduct_monomial(&k[pos])?;
            for (pair, y) in d.terms() {
                let mut f = k[..pos].to_vec();
                f.push(pair[0].clone());
                f.push(pair[1].clone());
                f.extend_from_slice(&k[pos + 1..]);
                out.add_term(f, c * y);
            }
        }
        Ok(out)
    }

    /// Recursive antipode `S(G) = −G − Σ_g S(g)·G/g` on a generator.
    pub fn antipode_generator(&self, g: &AssignedGraph) -> Result<Arc<AlgebraElement>> {
        let key = generator_key(g);
        if let Some(s) = self.antipodes.read().expect("lock").get(&key) {
            return Ok(s.clone());
        }
        let s = if key.edge_count() == 0 {
            AlgebraElement::one()
        } else {
            let mut s = AlgebraElement::from_monomial(Monomial::from_keys(vec![key.clone()]), -Rational::one());
            for mask in self.extracted(&key)? {
                let (left, right) = split(&key, mask)?;
                let sl = self.antipode_monomial(&left)?;
                let r = AlgebraElement::from_monomial(right, -Rational::one());
                s = s + &sl * &r;
            }
            s
        };
        let s = Arc::new(s);
        self.antipodes.write().expect("lock").insert(key, s.clone());
        Ok(s)
    }

    pub fn antipode_monomial(&self, m: &Monomial) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::one();
        for g in m.factors() {
            acc = &acc * &*self.antipode_generator(g)?;
        }
        Ok(acc)
    }

    pub fn antipode(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            out = out + self.antipode_monomial(m)?.scale(c);
        }
        Ok(out)
    }

    /// Forests containing `G`: sets of connected extracted subgraphs, pairwise
    /// nested or vertex-disjoint.
    pub fn forests(&self, g: &AssignedGraph) -> Result<Vec<Forest>> {
        let full = g.all_edges();
        let cands = connected_divergent(g, self.kind, false)?;
        let mut out = Vec::new();
        let mut current = Vec::new();
        collect_forests(g, &cands, 0, &mut current, &mut out);
        for f in &mut out {
            f.push(full);
            f.sort();
        }
        out.sort();
        Ok(out)
    }

    /// Non-recursive antipode: `Σ_F ∏_{γ∈F} (−γ/children)`.
    pub fn antipode_by_forests(&self, g: &AssignedGraph) -> Result<AlgebraElement> {
        let key = generator_key(g);
        if key.edge_count() == 0 {
            return Ok(AlgebraElement::one());
        }
        let mut out = AlgebraElement::zero();
        for forest in self.forests(&key)? {
            let mut m = Monomial::one();
            for &gamma in &forest {
                let children = maximal_below(&forest, gamma);
                m = m.times(&Monomial::from_keys(vec![quotient(&key, gamma, children)?]));
            }
            let sign = if forest.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
            out.add_term(m, sign);
        }
        Ok(out)
    }

    /// `S = Σ_{n≥1} (−1)^n m^{(n−1)} Δ̄^{(n−1)}`, a third route to the antipode.
    pub fn antipode_iterated(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            if m.is_one() {
                out.add_term(Monomial::one(), c.clone());
                continue;
            }
            // state: (product of split-off factors, remaining factor)
            let mut state = TensorElement::zero();
            state.add_pair(Monomial::one(), m.clone(), c.clone());
            let mut sign = -Rational::one();
            while !state.is_empty() {
                out = out + state.multiply_out().scale(&sign);
                let mut next = TensorElement::zero();
                for (k, y) in state.terms() {
                    for (pair, z) in self.reduced_coproduct_monomial(&k[1])?.terms() {
                        next.add_pair(k[0].times(&pair[0]), pair[1].clone(), y * z);
                    }
                }
                state = next;
                sign = -sign;
            }
        }
        Ok(out)
    }

    /// `(Δ⊗id)Δ(x) = (id⊗Δ)Δ(x)`.
    pub fn check_coassociativity(&self, x: &AlgebraElement) -> Result<bool> {
        let d = self.coproduct(x)?;
        Ok(self.coproduct_at(&d, 0)? == self.coproduct_at(&d, 1)?)
    }

    /// `(ε⊗id)Δ(x) = x = (id⊗ε)Δ(x)`.
    pub fn check_counit(&self, x: &AlgebraElement) -> Result<bool> {
        let d = self.coproduct(x)?;
        let mut left = AlgebraElement::zero();
        let mut right = AlgebraElement::zero();
        for (k, c) in d.terms() {
            if k[0].is_one() {
                left.add_term(k[1].clone(), c.clone());
            }
            if k[1].is_one() {
                right.add_term(k[0].clone(), c.clone());
            }
        }
        Ok(left == *x && right == *x)
    }

    /// `m(S⊗id)Δ(x) = ε(x)1 = m(id⊗S)Δ(x)`.
    pub fn check_antipode(&self, x: &AlgebraElement) -> Result<bool> {
        let d = self.coproduct(x)?;
        let mut left = AlgebraElement::zero();
        let mut right = AlgebraElement::zero();
        for (k, c) in d.terms() {
            let a = AlgebraElement::from_monomial(k[0].clone(), c.clone());
            let b = AlgebraElement::from_monomial(k[1].clone(), Rational::one());
            left = left + &self.antipode(&a)? * &b;
            right = right + &a * &self.antipode(&b)?;
        }
        let unit = AlgebraElement::from_monomial(Monomial::one(), x.counit());
        Ok(left == unit && right == unit)
    }

    /// Every term `a⊗b` of `Δ(G)` has `grade(a) + grade(b) = grade(G)`.
    pub fn check_grading(&self, g: &AssignedGraph) -> Result<bool> {
        let n = generator_key(g).loop_number();
        let n = if g.edge_count() == 0 { 0 } else { n };
        Ok(self.coproduct_generator(g)?.terms().all(|(k, _)| k[0].grade() + k[1].grade() == n))
    }
}

/// Left factor (component generators) and right factor (cograph) of one
/// coproduct term.
pub(crate) fn split(g: &AssignedGraph, mask: EdgeSet) -> Result<(Monomial, Monomial)> {
    let sub = Subgraph::new(g, mask)?;
    let left = Monomial::from_keys(
        sub.components().into_iter().map(|c| Subgraph::new_unchecked(g, c).generator()).collect(),
    );
    let right = Monomial::from_keys(vec![generator_key(&g.shrink(mask)?)]);
    Ok((left, right))
}

fn collect_forests(g: &AssignedGraph, cands: &[EdgeSet], from: usize, current: &mut Vec<EdgeSet>, out: &mut Vec<Forest>) {
    out.push(current.clone());
    for i in from..cands.len() {
        if current.iter().all(|&c| nested_or_disjoint(g, c, cands[i])) {
            current.push(cands[i]);
            collect_forests(g, cands, i + 1, current, out);
            current.pop();
        }
    }
}

/// Union of the maximal forest members strictly inside `gamma`.
pub(crate) fn maximal_below(forest: &[EdgeSet], gamma: EdgeSet) -> EdgeSet {
    let inside: Vec<EdgeSet> = forest.iter().copied().filter(|&f| f != gamma && f & gamma == f).collect();
    inside
        .iter()
        .copied()
        .filter(|&f| !inside.iter().any(|&h| h != f && f & h == f))
        .fold(0, |a, f| a | f)
}

/// `γ / children` as a generator.
pub(crate) fn quotient(g: &AssignedGraph, gamma: EdgeSet, children: EdgeSet) -> Result<AssignedGraph> {
    let standalone = Subgraph::new(g, gamma)?.to_graph().rooted();
    if children == 0 {
        return Ok(generator_key(&standalone));
    }
    let mut local: EdgeSet = 0;
    for (i, e) in Subgraph::new_unchecked(g, gamma).edge_indices().into_iter().enumerate() {
        if children >> e & 1 == 1 {
            local |= 1 << i;
        }
    }
    Ok(generator_key(&standalone.shrink(local)?))
}
