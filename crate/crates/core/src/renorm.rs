//! Toy amplitudes, the τ projection, useful counterterms, the coaction on
//! labeled graphs and usefully renormalized amplitudes.
//!
//! Conventions: the coaction of a labeled graph `G` with `n` legs is
//! `δ(G) = Ḡ⊗V_n + 1⊗G + Σ_g g⊗G/g`, where `V_n` is the bare vertex with
//! the labels of `G` and the leading term is present only when `G` itself is
//! divergent. On a primitive `G` this gives `A_UR(G) = A(G) − τA(G)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AssignedGraph, Subgraph, VertexKind};
use crate::hopf::{generator_key, AlgebraElement, Character, HopfAlgebra, Monomial, TensorElement};
use crate::poly::{q_power, symbol, Rational, Target};

/// Evaluation rule standing in for analytic Feynman rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ToyAmplitude {
    /// `A(G,μ) = q^{Σ_ℓ μ(ℓ)}`.
    ScalePower,
    /// An independent formal symbol per canonical generator.
    Symbols,
}

impl ToyAmplitude {
    pub fn tag(self) -> &'static str {
        match self {
            ToyAmplitude::ScalePower => "toy-q",
            ToyAmplitude::Symbols => "toy-sym",
        }
    }

    pub fn value(self, g: &AssignedGraph) -> Target {
        if g.edge_count() == 0 {
            return Target::one();
        }
        match self {
            ToyAmplitude::ScalePower => q_power(g.scales().iter().sum::<i32>() as u32),
            ToyAmplitude::Symbols => symbol(format!("A{}", generator_key(g))),
        }
    }

    pub fn character(self) -> Character {
        Character::new(self.tag(), move |g| self.value(g))
    }
}

impl fmt::Display for ToyAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToyAmplitude::ScalePower => write!(f, "toy"),
            ToyAmplitude::Symbols => write!(f, "symbols"),
        }
    }
}

/// Projection applied to amplitude values before subtraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tau {
    /// Toy amplitudes are already scalars.
    #[default]
    Identity,
    /// `q ↦ 1`, a genuine projection onto constants.
    Constant,
}

impl Tau {
    pub fn apply(self, v: &Target) -> Target {
        match self {
            Tau::Identity => v.clone(),
            Tau::Constant => v.at_q_one(),
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Identity => write!(f, "identity"),
            Tau::Constant => write!(f, "constant"),
        }
    }
}

/// `τA` as a character.
pub fn tau_character(amp: ToyAmplitude, tau: Tau) -> Character {
    Character::new(amp.tag(), move |g| tau.apply(&amp.value(g)))
}

/// Labeled-graph tensor `ℋ⊗𝒦`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coaction {
    terms: BTreeMap<(Monomial, AssignedGraph), Rational>,
}

impl Coaction {
    pub fn add_term(&mut self, left: Monomial, right: AssignedGraph, c: Rational) {
        let e = self.terms.entry((left, right)).or_insert_with(Rational::zero);
        *e += c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, AssignedGraph), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.terms
            .iter()
            .map(|((l, r), c)| {
                serde_json::json!({
                    "left": l.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "right": r.to_string(),
                    "coeff": crate::poly::rational_json(c),
                })
            })
            .collect()
    }
}

/// Canonical form of an element of 𝒦: labels and leg scales kept.
fn k_key(g: &AssignedGraph) -> AssignedGraph {
    g.clone().labeled().canonical()
}

fn divergent(g: &AssignedGraph) -> bool {
    g.edge_count() > 0 && Subgraph::new_unchecked(g, g.all_edges()).is_divergent()
}

/// Multiscale renormalization of one amplitude model, with memoised
/// counterterms.
pub struct Renormalizer {
    hopf: Arc<HopfAlgebra>,
    amp: ToyAmplitude,
    tau: Tau,
    memo: RwLock<HashMap<AssignedGraph, Target>>,
}

impl Renormalizer {
    pub fn new(amp: ToyAmplitude, tau: Tau) -> Self {
        Renormalizer { hopf: HopfAlgebra::high(), amp, tau, memo: RwLock::default() }
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn amplitude(&self) -> ToyAmplitude {
        self.amp
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn tau_amplitude(&self, g: &AssignedGraph) -> Target {
        self.tau.apply(&self.amp.value(g))
    }

    fn check_sector(&self, g: &AssignedGraph) -> Result<()> {
        if g.leg_count() != 4 {
            return Err(Error::UnsupportedSector(format!("{} external legs", g.leg_count())));
        }
        if !g.is_biped_free() {
            return Err(Error::UnsupportedSector("graph contains a two-point subgraph".into()));
        }
        if g.graph().kinds().contains(&VertexKind::Biped) {
            return Err(Error::UnsupportedSector("graph contains a biped vertex".into()));
        }
        Ok(())
    }

    /// `C_U(G) = −τA(G) − Σ_g C_U(g)·τA(G/g)`, `C_U` multiplicative over the
    /// components of `g`.
    pub fn useful_counterterm(&self, g: &AssignedGraph) -> Result<Target> {
        if g.edge_count() == 0 {
            return Ok(Target::one());
        }
        let key = generator_key(g);
        if let Some(v) = self.memo.read().expect("lock").get(&key) {
            return Ok(v.clone());
        }
        self.check_sector(&key)?;
        let mut out = -self.tau_amplitude(&key);
        for mask in self.hopf.extracted(&key)? {
            let sub = Subgraph::new(&key, mask)?;
            let mut c = Target::one();
            for comp in sub.components() {
                c = c * self.useful_counterterm(&Subgraph::new_unchecked(&key, comp).generator())?;
            }
            out = out - c * self.tau_amplitude(&key.shrink(mask)?);
        }
        self.memo.write().expect("lock").insert(key, out.clone());
        Ok(out)
    }

    pub fn counterterm_on_monomial(&self, m: &Monomial) -> Result<Target> {
        m.factors().iter().try_fold(Target::one(), |acc, g| Ok(acc * self.useful_counterterm(g)?))
    }

    /// `(τA)∘S` through the recursive antipode.
    pub fn counterterm_via_antipode(&self, g: &AssignedGraph) -> Result<Target> {
        self.check_sector(g)?;
        let s = self.hopf.antipode_generator(g)?;
        Ok(tau_character(self.amp, self.tau).eval(&s))
    }

    /// `(τA)∘S` through the forest formula.
    pub fn counterterm_via_forests(&self, g: &AssignedGraph) -> Result<Target> {
        self.check_sector(g)?;
        Ok(tau_character(self.amp, self.tau).eval(&self.hopf.antipode_by_forests(g)?))
    }

    /// `C_U` as a character; panics outside the biped-free quadruped sector,
    /// so use it only on graphs that passed the sector check.
    pub fn counterterm_character(self: &Arc<Self>) -> Character {
        let me = self.clone();
        Character::new(self.amp.tag(), move |g| me.useful_counterterm(g).expect("biped-free quadruped"))
    }

    /// `δ(G)` on a labeled graph.
    pub fn coaction(&self, g: &AssignedGraph) -> Result<Coaction> {
        coaction(&self.hopf, g)
    }

    /// `A_UR(G) = (C_U·A)(G) = m(C_U⊗A)δ(G)`.
    pub fn renormalized_amplitude(&self, g: &AssignedGraph) -> Result<Target> {
        self.check_sector(g)?;
        let mut out = Target::zero();
        for ((l, r), c) in self.coaction(g)?.terms() {
            out += (self.counterterm_on_monomial(l)? * self.amp.value(r)).scale_rational(c);
        }
        Ok(out)
    }

    /// Forest form of `A_UR`: every forest of proper high divergent
    /// subgraphs, with the whole graph optionally adjoined, contributes
    /// `∏_γ (−τA(γ/children)) · A(G/maximal)`.
    pub fn renormalized_by_forests(&self, g: &AssignedGraph) -> Result<Target> {
        self.check_sector(g)?;
        let key = generator_key(g);
        let full = key.all_edges();
        let mut out = Target::zero();
        for forest in self.hopf.forests(&key)? {
            let proper: Vec<_> = forest.iter().copied().filter(|&f| f != full).collect();
            let mut weight = Target::one();
            for &gamma in &proper {
                let children = crate::hopf::maximal_below(&proper, gamma);
                weight = -(weight * self.tau_amplitude(&crate::hopf::quotient(&key, gamma, children)?));
            }
            let top = crate::hopf::maximal_below(&forest, full);
            out += weight.clone() * self.amp.value(&crate::hopf::quotient(&key, full, top)?);
            if divergent(&key) {
                out += -(weight * self.tau_amplitude(&crate::hopf::quotient(&key, full, top)?));
            }
        }
        Ok(out)
    }
}

/// `δ(G) = Ḡ⊗V_n + 1⊗G + Σ_g g⊗G/g`, right factors keeping labels.
pub fn coaction(hopf: &HopfAlgebra, g: &AssignedGraph) -> Result<Coaction> {
    let g = g.clone().labeled();
    let mut out = Coaction::default();
    if g.edge_count() == 0 {
        out.add_term(Monomial::one(), k_key(&g), Rational::one());
        return Ok(out);
    }
    if divergent(&g) {
        out.add_term(Monomial::generator(&g), k_key(&g.residue()), Rational::one());
    }
    out.add_term(Monomial::one(), k_key(&g), Rational::one());
    for mask in hopf.extracted(&g)? {
        let sub = Subgraph::new(&g, mask)?;
        let left = Monomial::from_graphs(sub.components().into_iter().map(|c| Subgraph::new_unchecked(&g, c).generator()));
        out.add_term(left, k_key(&g.shrink(mask)?), Rational::one());
    }
    Ok(out)
}

fn coaction_of_tensor(hopf: &HopfAlgebra, t: &Coaction) -> Result<BTreeMap<(Monomial, Monomial, AssignedGraph), Rational>> {
    let mut out = BTreeMap::new();
    for ((l, r), c) in t.terms() {
        for ((a, b), d) in coaction(hopf, r)?.terms() {
            let e = out.entry((l.clone(), a.clone(), b.clone())).or_insert_with(Rational::zero);
            *e += c * d;
        }
    }
    out.retain(|_, c: &mut Rational| !c.is_zero());
    Ok(out)
}

/// `(Δ⊗id)∘δ = (id⊗δ)∘δ` on one labeled graph.
pub fn check_coaction_axiom(hopf: &HopfAlgebra, g: &AssignedGraph) -> Result<bool> {
    let d = coaction(hopf, g)?;
    let right = coaction_of_tensor(hopf, &d)?;
    let mut left: BTreeMap<(Monomial, Monomial, AssignedGraph), Rational> = BTreeMap::new();
    for ((l, r), c) in d.terms() {
        let dl: TensorElement = hopf.coproduct_monomial(l)?;
        for (k, e) in dl.terms() {
            let x = left.entry((k[0].clone(), k[1].clone(), r.clone())).or_insert_with(Rational::zero);
            *x += c * e;
        }
    }
    left.retain(|_, c| !c.is_zero());
    Ok(left == right)
}

/// `m∘(ε⊗id)∘δ = id`.
pub fn check_coaction_counit(hopf: &HopfAlgebra, g: &AssignedGraph) -> Result<bool> {
    let d = coaction(hopf, g)?;
    let kept: Vec<_> = d.terms().filter(|((l, _), _)| l.is_one()).collect();
    Ok(kept.len() == 1 && kept[0].0 .1 == k_key(&g.clone().labeled()) && kept[0].1.is_one())
}

/// In every forest, a member nested in another has all its edges above the
/// scales of the surrounding edges that touch it.
pub fn check_forest_nesting(hopf: &HopfAlgebra, g: &AssignedGraph) -> Result<bool> {
    let key = generator_key(g);
    for forest in hopf.forests(&key)? {
        for &inner in &forest {
            for &outer in &forest {
                if inner == outer || inner & outer != inner {
                    continue;
                }
                let sub = Subgraph::new(&key, inner)?;
                let verts = sub.vertices();
                let low = sub.internal_index();
                let touching = Subgraph::new_unchecked(&key, outer & !inner)
                    .edge_indices()
                    .into_iter()
                    .filter(|&e| key.edges()[e].iter().any(|v| verts.contains(v)));
                if touching.map(|e| key.scales()[e]).any(|s| s >= low) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `C_U ∗ τA = ε` on `g`.
pub fn check_inverse_law(r: &Arc<Renormalizer>, g: &AssignedGraph) -> Result<bool> {
    r.check_sector(g)?;
    let h = r.hopf().clone();
    let prod = r.counterterm_character().convolve(&tau_character(r.amp, r.tau), &h)?;
    Ok(prod.on_graph(g).is_zero())
}

/// Evaluate a character-valued sum `Σ c·x` for an algebra element.
pub fn eval_counterterm(r: &Renormalizer, x: &AlgebraElement) -> Result<Target> {
    let mut out = Target::zero();
    for (m, c) in x.terms() {
        out += r.counterterm_on_monomial(m)?.scale_rational(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn models() -> Vec<(ToyAmplitude, Tau)> {
        vec![
            (ToyAmplitude::ScalePower, Tau::Identity),
            (ToyAmplitude::ScalePower, Tau::Constant),
            (ToyAmplitude::Symbols, Tau::Identity),
        ]
    }

    fn quadrupeds() -> Vec<AssignedGraph> {
        fixtures::zoo()
            .into_iter()
            .filter(|g| {
                g.leg_count() == 4
                    && g.edge_count() > 0
                    && g.is_biped_free()
                    && !g.graph().kinds().contains(&VertexKind::Biped)
            })
            .collect()
    }

    #[test]
    fn tau_is_a_projection() {
        let v = q_power(3);
        assert_eq!(Tau::Identity.apply(&v), v);
        let once = Tau::Constant.apply(&v);
        assert_eq!(Tau::Constant.apply(&once), once);
    }

    #[test]
    fn primitive_counterterm() {
        let r = Renormalizer::new(ToyAmplitude::ScalePower, Tau::Identity);
        assert_eq!(r.useful_counterterm(&fixtures::bubble(1, 2)).unwrap(), -q_power(3));
    }

    #[test]
    fn one_nested_bubble() {
        let r = Renormalizer::new(ToyAmplitude::Symbols, Tau::Identity);
        let g = fixtures::chain_with_scales([3, 3, 2, 1]);
        let b = fixtures::bubble(3, 3);
        let cograph = fixtures::bubble(2, 1);
        let expected = -r.tau_amplitude(&g) + r.tau_amplitude(&cograph) * r.tau_amplitude(&b);
        assert_eq!(r.useful_counterterm(&g).unwrap(), expected);
    }

    #[test]
    fn recursion_matches_antipode_and_forests() {
        for (amp, tau) in models() {
            let r = Renormalizer::new(amp, tau);
            for g in quadrupeds() {
                let c = r.useful_counterterm(&g).unwrap();
                assert_eq!(c, r.counterterm_via_antipode(&g).unwrap(), "{g}");
                assert_eq!(c, r.counterterm_via_forests(&g).unwrap(), "{g}");
            }
        }
    }

    #[test]
    fn renormalized_amplitude_two_ways() {
        for (amp, tau) in models() {
            let r = Renormalizer::new(amp, tau);
            for g in quadrupeds() {
                let g = g.labeled();
                assert_eq!(r.renormalized_amplitude(&g).unwrap(), r.renormalized_by_forests(&g).unwrap(), "{g}");
            }
        }
    }

    #[test]
    fn one_nested_bubble_renormalized() {
        // A_UR(G) = A(G) − τA(b)A(G/b) + C_U(G), the last term from Ḡ⊗V
        let r = Renormalizer::new(ToyAmplitude::Symbols, Tau::Identity);
        let g = fixtures::chain_with_scales([3, 3, 2, 1]).labeled();
        let b = fixtures::bubble(3, 3);
        let cograph = fixtures::bubble(2, 1);
        let expected =
            r.amplitude().value(&g) - r.tau_amplitude(&b) * r.amplitude().value(&cograph) + r.useful_counterterm(&g).unwrap();
        assert_eq!(r.renormalized_amplitude(&g).unwrap(), expected);
    }

    #[test]
    fn identity_tau_cancels_everything() {
        let r = Renormalizer::new(ToyAmplitude::ScalePower, Tau::Identity);
        for g in quadrupeds() {
            assert!(r.renormalized_amplitude(&g.labeled()).unwrap().is_zero());
        }
    }

    #[test]
    fn coaction_axioms() {
        let h = HopfAlgebra::high();
        for g in fixtures::zoo() {
            let g = g.labeled();
            assert!(check_coaction_axiom(&h, &g).unwrap(), "{g}");
            assert!(check_coaction_counit(&h, &g).unwrap(), "{g}");
            assert!(check_forest_nesting(&h, &g).unwrap(), "{g}");
        }
        let d = coaction(&h, &fixtures::bubble(1, 1)).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn inverse_law_and_multiplicativity() {
        let r = Arc::new(Renormalizer::new(ToyAmplitude::Symbols, Tau::Identity));
        for g in quadrupeds() {
            assert!(check_inverse_law(&r, &g).unwrap(), "{g}");
        }
        let m = Monomial::from_graphs([fixtures::bubble(1, 1), fixtures::chain_with_scales([2, 2, 1, 0])]);
        let prod = r.useful_counterterm(&m.factors()[0]).unwrap() * r.useful_counterterm(&m.factors()[1]).unwrap();
        assert_eq!(r.counterterm_on_monomial(&m).unwrap(), prod);
    }

    #[test]
    fn bipeds_are_rejected() {
        let r = Renormalizer::new(ToyAmplitude::ScalePower, Tau::Identity);
        let err = r.useful_counterterm(&fixtures::sunset(1, 1, 1)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSector(_)));
        let err = r.useful_counterterm(&fixtures::bubble_with_biped([2, 2, 1])).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSector(_)));
    }
}
