//! Effective couplings: formal series in `λ₋₁,…,λ_ρ`, the map Ψ from
//! characters to coupling transformations, the insertion-counting lemma and
//! the bare-versus-effective expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{AssignedGraph, Scale, EXTERNAL_SCALE};
use crate::hopf::{generator_key, Character, HopfAlgebra, InfinitesimalCharacter};
use crate::poly::{rational_json, PowerProduct, Poly, Rational, Target};
use crate::renorm::{coaction, tau_character, Renormalizer, Tau, ToyAmplitude};
use crate::wick::{self, CatalogFilter, Oracle};

/// Default depth of the generator catalogs, in vertices.
pub const CATALOG_DEPTH: usize = 4;

/// Truncated power series in the couplings, indexed by scale.
pub type Series = Poly<Scale, Target>;

pub fn lambda(i: Scale) -> Series {
    Series::var(i)
}

fn constant(t: Target) -> Series {
    Series::constant(t)
}

/// One series per scale `−1..=ρ`, all truncated at the same total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTuple {
    rho: Scale,
    order: u32,
    components: Vec<Series>,
}

impl SeriesTuple {
    /// `λ_i ↦ λ_i`.
    pub fn identity(rho: Scale, order: u32) -> Self {
        SeriesTuple { rho, order, components: (EXTERNAL_SCALE..=rho).map(lambda).collect() }
    }

    pub fn rho(&self) -> Scale {
        self.rho
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Component for scale `i ∈ [−1, ρ]`.
    pub fn component(&self, i: Scale) -> &Series {
        &self.components[(i - EXTERNAL_SCALE) as usize]
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    /// Substitute `inner` into the variables of `self`.
    pub fn compose(&self, inner: &SeriesTuple) -> Result<SeriesTuple> {
        if self.order != inner.order {
            return Err(Error::TruncationMismatch(self.order, inner.order));
        }
        if self.rho != inner.rho {
            return Err(Error::Malformed(format!("cutoffs differ: {} vs {}", self.rho, inner.rho)));
        }
        let map = |v: &Scale| Some(inner.component(*v).clone());
        let components = self.components.iter().map(|s| s.substitute(&map, self.order)).collect();
        Ok(SeriesTuple { rho: self.rho, order: self.order, components })
    }

    /// Set every variable to `λ_ρ`.
    pub fn on_bare_coupling(&self) -> SeriesTuple {
        let rho = self.rho;
        let map = |_: &Scale| Some(lambda(rho));
        let components = self.components.iter().map(|s| s.substitute(&map, self.order)).collect();
        SeriesTuple { rho, order: self.order, components }
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = (EXTERNAL_SCALE..=self.rho)
            .map(|i| json!({ "scale": i, "series": series_json(self.component(i)) }))
            .collect();
        json!({ "rho": self.rho, "order": self.order, "components": comps })
    }
}

pub fn series_json(s: &Series) -> Value {
    Value::Array(
        s.terms()
            .map(|(m, c)| {
                let vars: serde_json::Map<String, Value> =
                    m.factors().map(|(v, &k)| (format!("lambda_{v}"), json!(k))).collect();
                json!({ "monomial": vars, "coeff": c.to_json() })
            })
            .collect(),
    )
}

impl fmt::Display for SeriesTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in EXTERNAL_SCALE..=self.rho {
            writeln!(f, "λ'_{i} = {}", fmt_series(self.component(i)))?;
        }
        Ok(())
    }
}

pub fn fmt_series(s: &Series) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = s
        .terms()
        .map(|(m, c)| {
            let vars: Vec<String> = m
                .factors()
                .map(|(v, &k)| if k == 1 { format!("λ{v}") } else { format!("λ{v}^{k}") })
                .collect();
            let mono = if vars.is_empty() { "1".to_string() } else { vars.join("·") };
            format!("({c})·{mono}")
        })
        .collect();
    parts.join(" + ")
}

/// `∏_v λ_{e_v(μ)}`.
pub fn vertex_monomial(g: &AssignedGraph) -> Series {
    let mut m = PowerProduct::one();
    for v in 0..g.vertex_count() {
        m = m.times(&PowerProduct::var(g.vertex_external_index(v)));
    }
    Series::term(m, Target::one())
}

/// Biped-free quadrupeds with at most `order` vertices and scales in
/// `[0, ρ]`, with their weights `N/σ`.
#[derive(Clone, Debug)]
pub struct EffectiveCatalog {
    rho: Scale,
    order: u32,
    graphs: Vec<(AssignedGraph, Rational)>,
}

impl EffectiveCatalog {
    pub fn new(rho: Scale, order: u32) -> Result<Self> {
        Self::with_depth(rho, order, CATALOG_DEPTH)
    }

    pub fn with_depth(rho: Scale, order: u32, depth: usize) -> Result<Self> {
        if order as usize > depth.min(wick::MAX_VERTICES) {
            return Err(Error::CatalogDepth { needed: order as usize, available: depth.min(wick::MAX_VERTICES) });
        }
        if rho < 0 {
            return Err(Error::ScaleOutOfRange { scale: rho, rho });
        }
        let graphs = wick::assigned_catalog(order as usize, 4, rho, CatalogFilter::biped_free())?
            .into_iter()
            .map(|g| {
                let w = Rational::new(g.external_labelings().into(), g.automorphism_order().into());
                (g, w)
            })
            .collect();
        Ok(EffectiveCatalog { rho, order, graphs })
    }

    pub fn rho(&self) -> Scale {
        self.rho
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `(G,μ)` with `N/σ`.
    pub fn graphs(&self) -> &[(AssignedGraph, Rational)] {
        &self.graphs
    }
}

fn internal_index(g: &AssignedGraph) -> Scale {
    g.scales().iter().copied().min().unwrap_or(Scale::MAX)
}

/// `Ψ(α)_i = λ_i + Σ_{i_G(μ) > i} N/σ · α(G,μ) · ∏_v λ_{e_v(μ)}`.
pub fn psi(alpha: &Character, catalog: &EffectiveCatalog) -> SeriesTuple {
    psi_with(|g| alpha.on_graph(g), catalog)
}

fn psi_with(value: impl Fn(&AssignedGraph) -> Target, catalog: &EffectiveCatalog) -> SeriesTuple {
    let mut t = SeriesTuple::identity(catalog.rho, catalog.order);
    for (g, w) in &catalog.graphs {
        let a = value(g);
        if a.is_zero() {
            continue;
        }
        let term = vertex_monomial(g) * constant(a.scale_rational(w));
        for i in EXTERNAL_SCALE..internal_index(g) {
            let k = (i - EXTERNAL_SCALE) as usize;
            t.components[k] = t.components[k].clone() + term.clone();
        }
    }
    t
}

/// `Ψ(β)∘Ψ(α) = Ψ(α∗β)`.
pub fn check_antimorphism(alpha: &Character, beta: &Character, catalog: &EffectiveCatalog) -> Result<bool> {
    let h = HopfAlgebra::high();
    let left = psi(beta, catalog).compose(&psi(alpha, catalog))?;
    let right = psi(&alpha.convolve(beta, &h)?, catalog);
    Ok(left == right)
}

/// Infinitesimal form on delta characters: the series of `δ₁∗δ₂` equals
/// `N/σ(G₁)·∏λ(G₁) · Σ_{i<i_{G₁}} ∂/∂λ_i (N/σ(G₂)·∏λ(G₂))`.
pub fn check_infinitesimal_antimorphism(g1: &AssignedGraph, g2: &AssignedGraph, catalog: &EffectiveCatalog) -> Result<bool> {
    let h = HopfAlgebra::high();
    let k1 = generator_key(g1);
    let k2 = generator_key(g2);
    let d1 = InfinitesimalCharacter::new("δ", move |g| if generator_key(g) == k1 { Target::one() } else { Target::zero() });
    let d2 = InfinitesimalCharacter::new("δ", move |g| if generator_key(g) == k2 { Target::one() } else { Target::zero() });
    let mut lhs = Series::zero();
    for (g, w) in catalog.graphs() {
        let mut c = Target::zero();
        for (k, x) in h.coproduct_generator(g)?.terms() {
            c += (d1.on_monomial(&k[0]) * d2.on_monomial(&k[1])).scale_rational(x);
        }
        if !c.is_zero() {
            lhs = lhs + vertex_monomial(g) * constant(c.scale_rational(w));
        }
    }
    let weight = |g: &AssignedGraph| Rational::new(g.external_labelings().into(), g.automorphism_order().into());
    let m2 = vertex_monomial(g2);
    let mut deriv = Series::zero();
    for i in EXTERNAL_SCALE..internal_index(g1) {
        deriv = deriv + m2.derivative(&i);
    }
    let rhs = (vertex_monomial(g1) * deriv).scale_rational(&(weight(g1) * weight(g2)));
    let order = catalog.order();
    Ok(lhs.truncate(order) == rhs.truncate(order))
}

/// Both sides of the insertion identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub lhs: Rational,
    pub rhs: Rational,
    /// Per graph `G`: (graph, N, σ, N(G₁,G₂,G)) for nonzero counts.
    pub terms: Vec<(AssignedGraph, u128, u128, usize)>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lhs": rational_json(&self.lhs),
            "rhs": rational_json(&self.rhs),
            "holds": self.holds(),
            "terms": self.terms.iter().map(|(g, n, s, c)| json!({
                "graph": g.to_string(), "N": n.to_string(), "sigma": s.to_string(), "insertions": c,
            })).collect::<Vec<_>>(),
        })
    }
}

fn ratio(n: u128, d: u128) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `Σ_G N(G)/σ(G)·N(G₁,G₂,G) = N(G₁)/σ(G₁) · N(G₂)/σ(G₂) · v(G₂)` with
/// every σ, N and insertion count taken from the Wick oracle.
pub fn check_combinatorial_lemma(g1: &AssignedGraph, g2: &AssignedGraph, max_v: usize) -> Result<LemmaReport> {
    let o = Oracle::shared();
    for g in [g1, g2] {
        if g.leg_count() != 4 || !g.is_biped_free() {
            return Err(Error::UnsupportedSector("lemma takes biped-free quadrupeds".into()));
        }
    }
    let v = g1.vertex_count() + g2.vertex_count() - 1;
    if v > max_v {
        return Err(Error::CatalogDepth { needed: v, available: max_v });
    }
    let mut lhs = Rational::zero();
    let mut terms = Vec::new();
    let k2 = g2.graph().canonical(false);
    for g in wick::catalog(v, 4, CatalogFilter::biped_free())? {
        if g.vertex_count() != v {
            continue;
        }
        let count = if g1.edge_count() == 0 {
            if g.canonical(false) == k2 { v } else { 0 }
        } else {
            let a = AssignedGraph::plain(&g);
            wick::insertion_count(g1, g2, &a, false)?
        };
        if count == 0 {
            continue;
        }
        let (n, s) = (o.labelings(&g)?, o.sigma(&g)?);
        lhs += ratio(n, s) * Rational::from_integer(count.into());
        terms.push((AssignedGraph::plain(&g), n, s, count));
    }
    let w = |g: &AssignedGraph| -> Result<Rational> { Ok(ratio(o.labelings(g.graph())?, o.sigma(g.graph())?)) };
    let rhs = w(g1)? * w(g2)? * Rational::from_integer(g2.vertex_count().into());
    Ok(LemmaReport { lhs, rhs, terms })
}

/// Assigned version: only high insertions of `(G₁,μ₁)` into `(G₂,μ₂)`
/// count, i.e. at vertices `w` with `e_w(μ₂) < i_{G₁}(μ₁)`.
pub fn check_assigned_lemma(g1: &AssignedGraph, g2: &AssignedGraph, rho: Scale) -> Result<LemmaReport> {
    let v = g1.vertex_count() + g2.vertex_count() - 1;
    let weight = |g: &AssignedGraph| ratio(g.external_labelings(), g.automorphism_order());
    let g1 = generator_key(g1);
    let g2 = generator_key(g2);
    let mut lhs = Rational::zero();
    let mut terms = Vec::new();
    for g in wick::assigned_catalog(v, 4, rho, CatalogFilter::biped_free())? {
        if g.vertex_count() != v {
            continue;
        }
        let count = wick::insertion_count(&g1, &g2, &g, true)?;
        if count == 0 {
            continue;
        }
        lhs += weight(&g) * Rational::from_integer(count.into());
        terms.push((g.clone(), g.external_labelings(), g.automorphism_order(), count));
    }
    let i1 = internal_index(&g1);
    let slots = (0..g2.vertex_count()).filter(|&w| g2.vertex_external_index(w) < i1).count();
    let rhs = weight(&g1) * weight(&g2) * Rational::from_integer(slots.into());
    Ok(LemmaReport { lhs, rhs, terms })
}

/// Coefficients of `λ_ρ^k`, `k = 0..=order`.
pub type CouplingSeries = Vec<Target>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub bare: CouplingSeries,
    pub effective: CouplingSeries,
}

impl CorollaryReport {
    pub fn holds(&self) -> bool {
        self.bare == self.effective
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds(),
            "bare": self.bare.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "effective": self.effective.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn coefficients(s: &Series, rho: Scale, order: u32) -> Result<CouplingSeries> {
    let mut out = vec![Target::zero(); order as usize + 1];
    for (m, c) in s.terms() {
        if m.factors().any(|(v, _)| *v != rho) {
            return Err(Error::Malformed("series in more than the bare coupling".into()));
        }
        out[m.exponent(&rho) as usize] += c.clone();
    }
    Ok(out)
}

fn bare_side(amp: ToyAmplitude, catalog: &EffectiveCatalog) -> Result<CouplingSeries> {
    let rho = catalog.rho;
    let mut s = lambda(rho);
    for (g, w) in catalog.graphs() {
        let k = g.vertex_count() as u32;
        let term = Series::term(PowerProduct::power(rho, k), amp.value(g).scale_rational(w));
        s = s + term;
    }
    coefficients(&s, rho, catalog.order)
}

/// `Σ_G N/σ·(C·A)(G)·∏_v λ_{e_v}` with the couplings given by `couplings`
/// (series in `λ_ρ` only), plus the bare vertex `λ₋₁`.
fn effective_side(
    amp: ToyAmplitude,
    counterterm: &Character,
    couplings: &SeriesTuple,
    catalog: &EffectiveCatalog,
) -> Result<CouplingSeries> {
    let rho = catalog.rho;
    let order = catalog.order;
    let h = HopfAlgebra::high();
    let subst = |v: &Scale| Some(couplings.component(*v).clone());
    let mut s = couplings.component(EXTERNAL_SCALE).clone();
    for (g, w) in catalog.graphs() {
        let mut ur = Target::zero();
        for ((l, r), c) in coaction(&h, &g.clone().labeled())?.terms() {
            ur += (counterterm.on_monomial(l) * amp.value(r)).scale_rational(c);
        }
        if ur.is_zero() {
            continue;
        }
        let mono = vertex_monomial(g).substitute(&subst, order);
        s = s + mono * constant(ur.scale_rational(w));
    }
    coefficients(&s.truncate(order), rho, order)
}

/// Bare expansion `Σ N/σ·A(G)·λ_ρ^{v(G)}` against the effective expansion
/// `Σ N/σ·A_UR(G)·∏_v λ_{e_v}` with `λ_i = Ψ(τA)_i(λ_ρ,…,λ_ρ)`.
pub fn check_effective_corollary(amp: ToyAmplitude, tau: Tau, rho: Scale, order: u32) -> Result<CorollaryReport> {
    let catalog = EffectiveCatalog::new(rho, order)?;
    let r = std::sync::Arc::new(Renormalizer::new(amp, tau));
    let couplings = psi(&tau_character(amp, tau), &catalog).on_bare_coupling();
    let effective = effective_side(amp, &r.counterterm_character(), &couplings, &catalog)?;
    Ok(CorollaryReport { bare: bare_side(amp, &catalog)?, effective })
}

/// Change of scheme: counterterms `α∗C_U` together with couplings
/// `Ψ(α∘S)∘Ψ(τA)` reproduce the bare expansion.
pub fn check_scheme_covariance(
    amp: ToyAmplitude,
    tau: Tau,
    alpha: &Character,
    rho: Scale,
    order: u32,
) -> Result<CorollaryReport> {
    let catalog = EffectiveCatalog::new(rho, order)?;
    let h = HopfAlgebra::high();
    let r = std::sync::Arc::new(Renormalizer::new(amp, tau));
    let c_new = alpha.convolve(&r.counterterm_character(), &h)?;
    let couplings = psi(&alpha.inverse(&h), &catalog).compose(&psi(&tau_character(amp, tau), &catalog))?;
    let effective = effective_side(amp, &c_new, &couplings.on_bare_coupling(), &catalog)?;
    Ok(CorollaryReport { bare: bare_side(amp, &catalog)?, effective })
}

/// A character supported on one generator (and its powers).
pub fn delta_character(tag: &str, g: &AssignedGraph, value: Target) -> Character {
    Character::delta(tag, g, value)
}

/// Sum of delta characters seen as one character.
pub fn table_character(tag: &str, values: &[(AssignedGraph, Target)]) -> Character {
    let map: BTreeMap<AssignedGraph, Target> = values.iter().map(|(g, v)| (generator_key(g), v.clone())).collect();
    Character::new(tag, move |g| map.get(&generator_key(g)).cloned().unwrap_or_else(Target::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{int, rat, symbol};

    #[test]
    fn top_component_is_bare() {
        let cat = EffectiveCatalog::new(1, 3).unwrap();
        let a = ToyAmplitude::Symbols.character();
        let t = psi(&a, &cat);
        assert_eq!(t.component(1), &lambda(1));
        assert_eq!(psi(&Character::counit("x"), &cat), SeriesTuple::identity(1, 3));
    }

    #[test]
    fn one_bubble_weight() {
        let cat = EffectiveCatalog::new(1, 2).unwrap();
        let b = fixtures::bubble(1, 1);
        let t = psi(&delta_character("x", &b, Target::one()), &cat);
        // both vertices of the bubble see only scale-1 edges
        let expect = lambda(-1) + Series::term(PowerProduct::power(1, 2), Target::from_rational(&rat(3, 2)));
        assert_eq!(t.component(-1), &expect);
        assert_eq!(t.component(0), &(lambda(0) + Series::term(PowerProduct::power(1, 2), Target::from_rational(&rat(3, 2)))));
    }

    #[test]
    fn compose_identity_and_associativity() {
        let cat = EffectiveCatalog::new(1, 3).unwrap();
        let x = psi(&ToyAmplitude::ScalePower.character(), &cat);
        let id = SeriesTuple::identity(1, 3);
        assert_eq!(x.compose(&id).unwrap(), x);
        assert_eq!(id.compose(&x).unwrap(), x);
        let y = psi(&delta_character("x", &fixtures::bubble(0, 1), symbol("b")), &cat);
        assert_eq!(x.compose(&y).unwrap().compose(&x).unwrap(), x.compose(&y.compose(&x).unwrap()).unwrap());
        assert!(matches!(x.compose(&SeriesTuple::identity(1, 2)), Err(Error::TruncationMismatch(3, 2))));
    }

    #[test]
    fn antimorphism_on_bubbles() {
        let cat = EffectiveCatalog::new(2, 3).unwrap();
        let a = delta_character("x", &fixtures::bubble(2, 2), symbol("a"));
        let b = delta_character("x", &fixtures::bubble(1, 0), symbol("b"));
        assert!(check_antimorphism(&a, &b, &cat).unwrap());
        assert!(check_antimorphism(&b, &a, &cat).unwrap());
        let h = HopfAlgebra::high();
        let inv = psi(&a.inverse(&h), &cat).compose(&psi(&a, &cat)).unwrap();
        assert_eq!(inv, SeriesTuple::identity(2, 3));
    }

    #[test]
    fn infinitesimal_form() {
        let cat = EffectiveCatalog::new(2, 3).unwrap();
        for (g1, g2) in [(fixtures::bubble(2, 2), fixtures::bubble(1, 0)), (fixtures::bubble(1, 2), fixtures::bubble(0, 0))] {
            assert!(check_infinitesimal_antimorphism(&g1, &g2, &cat).unwrap());
        }
    }

    #[test]
    fn lemma_on_two_bubbles() {
        let b = fixtures::bubble(0, 0);
        let r = check_combinatorial_lemma(&b, &b, 4).unwrap();
        assert_eq!(r.lhs, rat(9, 2));
        assert!(r.holds());
        let v = AssignedGraph::bare_vertex(4, false);
        assert!(check_combinatorial_lemma(&v, &b, 4).unwrap().holds());
    }

    #[test]
    fn assigned_lemma() {
        let r = check_assigned_lemma(&fixtures::bubble(2, 2), &fixtures::bubble(1, 0), 2).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.lhs > int(0));
    }

    #[test]
    fn corollary_small() {
        for tau in [Tau::Identity, Tau::Constant] {
            for amp in [ToyAmplitude::ScalePower, ToyAmplitude::Symbols] {
                let r = check_effective_corollary(amp, tau, 1, 2).unwrap();
                assert!(r.holds(), "{amp} {tau:?}");
            }
        }
    }

    #[test]
    fn catalog_depth_is_enforced() {
        assert!(matches!(EffectiveCatalog::new(1, 9), Err(Error::CatalogDepth { .. })));
    }
}
