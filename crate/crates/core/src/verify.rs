//! Invariant suites over a generator set drawn from the Wick catalog.
//!
//! Each suite checks a handful of named properties and records the graphs
//! that fail them. Reports are deterministic for fixed [`Bounds`]: graphs
//! are visited in catalog order and the random pairs use a fixed seed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::{self, EffectiveCatalog};
use crate::error::{Error, Result};
use crate::graph::spec::GraphSpec;
use crate::graph::{AssignedGraph, Scale};
use crate::hopf::{self, AlgebraElement, Character, HopfAlgebra};
use crate::multiscale;
use crate::poly::{rat, Rational, Target};
use crate::renorm::{self, Renormalizer, Tau, ToyAmplitude};
use crate::wick::{self, CatalogFilter, Oracle, PairingUniverse};

/// Catalog bounds for the generator set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_loops: usize,
    pub rho: Scale,
    pub max_vertices: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_loops: 3, rho: 3, max_vertices: 4 }
    }
}

/// Leg counts covered by the generator set.
pub const LEG_COUNTS: [usize; 3] = [0, 2, 4];

/// Seed for the random character pairs.
pub const SEED: u64 = 0x5eed_0f_1a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hopf,
    Forest,
    Antipode,
    Morphisms,
    Lemma,
    Oracle,
    Counterterms,
    Antimorphism,
    Corollary,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Hopf,
        Suite::Forest,
        Suite::Antipode,
        Suite::Morphisms,
        Suite::Lemma,
        Suite::Oracle,
        Suite::Counterterms,
        Suite::Antimorphism,
        Suite::Corollary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Forest => "forest",
            Suite::Antipode => "antipode",
            Suite::Morphisms => "morphisms",
            Suite::Lemma => "lemma",
            Suite::Oracle => "oracle",
            Suite::Counterterms => "counterterms",
            Suite::Antimorphism => "antimorphism",
            Suite::Corollary => "corollary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Graph in the text format, when the failure is about one graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub checked: usize,
    pub failures: Vec<Counterexample>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub bounds: Bounds,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed())
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == name)
    }
}

fn spec_text(g: &AssignedGraph) -> String {
    GraphSpec::from_assigned("counterexample", g).to_text()
}

/// Runs `check` on every graph in parallel, keeping input order.
fn over_graphs(
    property: &str,
    graphs: &[AssignedGraph],
    check: impl Fn(&AssignedGraph) -> Result<Option<String>> + Sync,
) -> PropertyReport {
    let failures = graphs
        .par_iter()
        .map(|g| match check(g) {
            Ok(None) => None,
            Ok(Some(detail)) => Some(Counterexample { graph: Some(spec_text(g)), detail }),
            Err(e) => Some(Counterexample { graph: Some(spec_text(g)), detail: format!("error: {e}") }),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    PropertyReport { property: property.to_string(), checked: graphs.len(), failures }
}

fn single(property: &str, outcome: Result<Option<String>>) -> PropertyReport {
    let failures = match outcome {
        Ok(None) => vec![],
        Ok(Some(detail)) => vec![Counterexample { graph: None, detail }],
        Err(e) => vec![Counterexample { graph: None, detail: format!("error: {e}") }],
    };
    PropertyReport { property: property.to_string(), checked: 1, failures }
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

/// Connected 1PI graphs without self-loops, `v ≤ max_vertices`, legs in
/// {0, 2, 4}, `L ≤ max_loops`, under every assignment in `[0, ρ]`, as
/// deduplicated canonical generators.
pub fn generators(bounds: &Bounds) -> Result<Vec<AssignedGraph>> {
    let mut out = Vec::new();
    for n in LEG_COUNTS {
        let gs = wick::assigned_catalog(bounds.max_vertices, n, bounds.rho, CatalogFilter::one_pi())?;
        out.extend(gs.into_iter().filter(|g| g.loop_number() <= bounds.max_loops));
    }
    out.sort_by_key(|g| (g.loop_number(), g.leg_count(), g.edge_count(), g.clone()));
    Ok(out)
}

/// The renormalization sector of the generator set.
pub fn biped_free_quadrupeds(gens: &[AssignedGraph]) -> Vec<AssignedGraph> {
    gens.iter().filter(|g| g.leg_count() == 4 && g.is_biped_free()).cloned().collect()
}

/// Runs one suite. The generator set is built when the suite needs it.
pub fn run(suite: Suite, bounds: &Bounds) -> Result<SuiteReport> {
    run_with(suite, bounds, || generators(bounds))
}

/// As [`run`], with the generator set supplied by `gens` (e.g. from a cache).
pub fn run_with(
    suite: Suite,
    bounds: &Bounds,
    gens: impl FnOnce() -> Result<Vec<AssignedGraph>>,
) -> Result<SuiteReport> {
    let properties = match suite {
        Suite::Hopf => hopf_suite(&gens()?),
        Suite::Forest => forest_suite(&gens()?),
        Suite::Antipode => antipode_suite(&gens()?),
        Suite::Morphisms => morphisms_suite(&gens()?, bounds),
        Suite::Lemma => lemma_suite(bounds)?,
        Suite::Oracle => oracle_suite(bounds),
        Suite::Counterterms => counterterm_suite(&gens()?),
        Suite::Antimorphism => antimorphism_suite(bounds)?,
        Suite::Corollary => corollary_suite(),
    };
    Ok(SuiteReport { suite, bounds: *bounds, properties })
}

pub fn hopf_suite(gens: &[AssignedGraph]) -> Vec<PropertyReport> {
    let h = HopfAlgebra::high();
    let x = |g: &AssignedGraph| AlgebraElement::generator(g);
    vec![
        over_graphs("coassociativity", gens, |g| {
            Ok(expect(h.check_coassociativity(&x(g))?, || "(Δ⊗id)Δ ≠ (id⊗Δ)Δ".into()))
        }),
        over_graphs("counit", gens, |g| Ok(expect(h.check_counit(&x(g))?, || "counit law fails".into()))),
        over_graphs("antipode", gens, |g| {
            Ok(expect(h.check_antipode(&x(g))?, || "m(S⊗id)Δ or m(id⊗S)Δ ≠ ηε".into()))
        }),
        over_graphs("grading", gens, |g| Ok(expect(h.check_grading(g)?, || "Δ does not preserve loop grading".into()))),
    ]
}

pub fn forest_suite(gens: &[AssignedGraph]) -> Vec<PropertyReport> {
    let h = HopfAlgebra::high();
    vec![
        over_graphs("high-subgraphs-form-forest", gens, |g| {
            Ok(expect(multiscale::check_forest(g)?, || "two high subgraphs overlap".into()))
        }),
        over_graphs("forest-nesting", gens, |g| {
            Ok(expect(renorm::check_forest_nesting(&h, g)?, || "forest members not nested or disjoint".into()))
        }),
    ]
}

pub fn antipode_suite(gens: &[AssignedGraph]) -> Vec<PropertyReport> {
    let h = HopfAlgebra::high();
    let quads = biped_free_quadrupeds(gens);
    vec![
        over_graphs("recursive=forest-sum", &quads, |g| {
            let a = h.antipode_generator(g)?;
            let b = h.antipode_by_forests(g)?;
            Ok(expect(*a == b, || format!("recursive {} terms vs forest sum {} terms", a.len(), b.len())))
        }),
        over_graphs("recursive=iterated", &quads, |g| {
            let a = h.antipode_generator(g)?;
            let b = h.antipode_iterated(&AlgebraElement::generator(g))?;
            Ok(expect(*a == b, || "iterated antipode differs".into()))
        }),
    ]
}

/// π_CK coefficient pattern of the sunset at `rho`: (pattern, coefficient,
/// classes) plus the total.
pub fn sunset_pi_ck(rho: Scale) -> Result<(Vec<hopf::CkPattern>, Rational)> {
    let g = crate::fixtures::sunset(0, 0, 0);
    Ok((hopf::pi_ck_patterns(g.graph(), rho)?, hopf::pi_ck_total(g.graph(), rho)?))
}

fn sunset_check(bounds: &Bounds) -> Result<Option<String>> {
    let (patterns, _) = sunset_pi_ck(2)?;
    let mut coeffs: Vec<u64> = patterns.iter().map(|p| p.coefficient).collect();
    coeffs.sort_unstable();
    if coeffs != [1, 3, 3, 6] {
        return Ok(Some(format!("sunset coefficients {coeffs:?}, expected [1, 3, 3, 6]")));
    }
    for rho in 2..=bounds.rho.max(3) {
        let (_, total) = sunset_pi_ck(rho)?;
        let want = Rational::from_integer(((rho + 1).pow(3)).into());
        if total != want {
            return Ok(Some(format!("sunset total at ρ={rho} is {total}, expected {want}")));
        }
    }
    Ok(None)
}

pub fn morphisms_suite(gens: &[AssignedGraph], bounds: &Bounds) -> Vec<PropertyReport> {
    let plain: Vec<AssignedGraph> = {
        let mut seen = std::collections::BTreeSet::new();
        gens.iter().map(|g| g.forget_scales()).filter(|g| seen.insert(g.clone())).collect()
    };
    let ck_rho = bounds.rho.min(2);
    vec![
        single("sunset-pi-ck", sunset_check(bounds)),
        over_graphs("pi-gn", gens, |g| Ok(expect(hopf::check_pi_gn_morphism(g)?, || "π_GN does not intertwine Δ".into()))),
        over_graphs("pi-rt", gens, |g| Ok(expect(hopf::check_pi_rt_morphism(g)?, || "π_RT does not intertwine Δ".into()))),
        over_graphs("gn-grading", gens, |g| {
            Ok(expect(hopf::gn_grading_is_additive(&hopf::pi_gn(g)?)?, || "GN grading not additive".into()))
        }),
        over_graphs("pi-ck", &plain, |g| {
            Ok(expect(hopf::check_pi_ck_morphism(g.graph(), ck_rho)?, || format!("π_CK not a morphism at ρ={ck_rho}")))
        }),
    ]
}

pub fn lemma_suite(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let bubble = AssignedGraph::plain(crate::fixtures::bubble(0, 0).graph());
    let worked = effective::check_combinatorial_lemma(&bubble, &bubble, bounds.max_vertices).map(|r| {
        let want = rat(9, 2);
        expect(r.lhs == want && r.rhs == want, || format!("bubble/bubble gives {} = {}, expected 9/2", r.lhs, r.rhs))
    });

    let shapes: Vec<AssignedGraph> = wick::catalog(bounds.max_vertices, 4, CatalogFilter::biped_free())?
        .iter()
        .map(AssignedGraph::plain)
        .collect();
    let pairs: Vec<(AssignedGraph, AssignedGraph)> = shapes
        .iter()
        .flat_map(|a| shapes.iter().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| a.vertex_count() + b.vertex_count() - 1 <= bounds.max_vertices)
        .collect();
    let pair_failures: Vec<Counterexample> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let detail = match effective::check_combinatorial_lemma(a, b, bounds.max_vertices) {
                Ok(r) if r.holds() => return None,
                Ok(r) => format!("lhs {} ≠ rhs {}", r.lhs, r.rhs),
                Err(e) => format!("error: {e}"),
            };
            Some(Counterexample { graph: Some(format!("{}{}", spec_text(a), spec_text(b))), detail })
        })
        .collect();

    // Assigned refinement on pairs that fit in three vertices.
    let rho = bounds.rho.min(2);
    let small = wick::assigned_catalog(2, 4, rho, CatalogFilter::biped_free())?;
    let mut assigned = vec![AssignedGraph::bare_vertex(4, false)];
    assigned.extend(small);
    let apairs: Vec<(AssignedGraph, AssignedGraph)> = assigned
        .iter()
        .filter(|a| a.edge_count() > 0)
        .flat_map(|a| assigned.iter().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| a.vertex_count() + b.vertex_count() - 1 <= 3)
        .collect();
    let assigned_failures: Vec<Counterexample> = apairs
        .par_iter()
        .filter_map(|(a, b)| {
            let detail = match effective::check_assigned_lemma(a, b, rho) {
                Ok(r) if r.holds() => return None,
                Ok(r) => format!("lhs {} ≠ rhs {}", r.lhs, r.rhs),
                Err(e) => format!("error: {e}"),
            };
            Some(Counterexample { graph: Some(format!("{}{}", spec_text(a), spec_text(b))), detail })
        })
        .collect();

    Ok(vec![
        single("bubble-bubble-9/2", worked),
        PropertyReport { property: "all-pairs".into(), checked: pairs.len(), failures: pair_failures },
        PropertyReport { property: "assigned-pairs".into(), checked: apairs.len(), failures: assigned_failures },
    ])
}

/// Graph-core σ and N against the Wick counts on every labeled class, and
/// the pairing totals per universe.
pub fn oracle_suite(bounds: &Bounds) -> Vec<PropertyReport> {
    let o = Oracle::shared();
    let mut universes = Vec::new();
    for v in 1..=bounds.max_vertices.min(wick::MAX_VERTICES) {
        for n in LEG_COUNTS {
            universes.push((v, n));
        }
    }
    let enums: Vec<_> = universes
        .par_iter()
        .map(|&(v, n)| o.enumeration(v, n).map(|e| (v, n, e)))
        .collect();

    let mut totals = PropertyReport { property: "pairing-totals".into(), checked: 0, failures: vec![] };
    let mut sigma = PropertyReport { property: "sigma".into(), checked: 0, failures: vec![] };
    let mut labelings = PropertyReport { property: "N".into(), checked: 0, failures: vec![] };
    for r in enums {
        let (v, n, e) = match r {
            Ok(x) => x,
            Err(err) => {
                totals.failures.push(Counterexample { graph: None, detail: format!("error: {err}") });
                continue;
            }
        };
        totals.checked += 1;
        let want = wick::perfect_matchings(4 * v + n);
        if e.total() != want {
            totals.failures.push(Counterexample {
                graph: None,
                detail: format!("v={v} n={n}: {} contractions, expected {want}", e.total()),
            });
        }
        let classes: Vec<_> = e.classes.keys().cloned().collect();
        let rows: Vec<_> = classes
            .par_iter()
            .map(|g| {
                let s = o.sigma(g).map(|s| (s, g.automorphism_order()));
                let l = o.labelings(g).map(|l| (l, g.external_labelings()));
                (g.clone(), s, l)
            })
            .collect();
        for (g, s, l) in rows {
            let text = || spec_text(&AssignedGraph::plain(&g));
            sigma.checked += 1;
            match s {
                Ok((a, b)) if a == b => {}
                Ok((a, b)) => sigma.failures.push(Counterexample {
                    graph: Some(text()),
                    detail: format!("oracle σ={a}, graph-core σ={b}"),
                }),
                Err(err) => sigma.failures.push(Counterexample { graph: Some(text()), detail: format!("error: {err}") }),
            }
            labelings.checked += 1;
            match l {
                Ok((a, b)) if a == b => {}
                Ok((a, b)) => labelings.failures.push(Counterexample {
                    graph: Some(text()),
                    detail: format!("oracle N={a}, graph-core N={b}"),
                }),
                Err(err) => {
                    labelings.failures.push(Counterexample { graph: Some(text()), detail: format!("error: {err}") })
                }
            }
        }
    }

    // The grouped walk against slot-level enumeration where that is cheap.
    let mut brute = PropertyReport { property: "grouped=slot-level".into(), checked: 0, failures: vec![] };
    for (v, n) in [(1, 0), (1, 2), (1, 4), (2, 0), (2, 2), (2, 4), (3, 0)] {
        if v > bounds.max_vertices {
            continue;
        }
        brute.checked += 1;
        let outcome = PairingUniverse::new(v, n).and_then(|u| {
            let a = o.enumeration(v, n)?;
            let b = u.brute_force()?;
            Ok(a.classes == b.classes && a.through_lines == b.through_lines)
        });
        match outcome {
            Ok(true) => {}
            Ok(false) => brute.failures.push(Counterexample { graph: None, detail: format!("v={v} n={n} differ") }),
            Err(e) => brute.failures.push(Counterexample { graph: None, detail: format!("error: {e}") }),
        }
    }
    vec![totals, sigma, labelings, brute]
}

pub fn counterterm_suite(gens: &[AssignedGraph]) -> Vec<PropertyReport> {
    let quads = biped_free_quadrupeds(gens);
    let mut out = Vec::new();
    for amp in [ToyAmplitude::ScalePower, ToyAmplitude::Symbols] {
        for tau in [Tau::Identity, Tau::Constant] {
            let r = Arc::new(Renormalizer::new(amp, tau));
            let tag = format!("{amp}/{tau}");
            out.push(over_graphs(&format!("recursion=(τA)∘S [{tag}]"), &quads, |g| {
                let a = r.useful_counterterm(g)?;
                let b = r.counterterm_via_antipode(g)?;
                Ok(expect(a == b, || format!("recursion {a} vs antipode {b}")))
            }));
            out.push(over_graphs(&format!("recursion=forests [{tag}]"), &quads, |g| {
                let a = r.useful_counterterm(g)?;
                let b = r.counterterm_via_forests(g)?;
                Ok(expect(a == b, || format!("recursion {a} vs forests {b}")))
            }));
            out.push(over_graphs(&format!("renormalized=forests [{tag}]"), &quads, |g| {
                let a = r.renormalized_amplitude(g)?;
                let b = r.renormalized_by_forests(g)?;
                Ok(expect(a == b, || format!("coaction {a} vs forests {b}")))
            }));
        }
    }
    let h = HopfAlgebra::high();
    out.push(over_graphs("coaction-coassociative", &quads, |g| {
        Ok(expect(renorm::check_coaction_axiom(&h, g)?, || "(Δ⊗id)δ ≠ (id⊗δ)δ".into()))
    }));
    out.push(over_graphs("coaction-counit", &quads, |g| {
        Ok(expect(renorm::check_coaction_counit(&h, g)?, || "(ε⊗id)δ ≠ id".into()))
    }));
    out
}

/// Random nonzero rational with small numerator and denominator.
fn small_rational(rng: &mut StdRng) -> Rational {
    let n: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=3))
}

/// Ten seeded pairs of delta-supported characters per `ρ ∈ {1, 2}`.
pub fn random_delta_pairs(rho: Scale, order: u32, seed: u64) -> Result<Vec<(AssignedGraph, Rational, AssignedGraph, Rational)>> {
    let catalog = EffectiveCatalog::new(rho, order)?;
    let support: Vec<&AssignedGraph> = catalog.graphs().iter().map(|(g, _)| g).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    Ok((0..10)
        .map(|_| {
            let a = support[rng.gen_range(0..support.len())].clone();
            let x = small_rational(&mut rng);
            let b = support[rng.gen_range(0..support.len())].clone();
            let y = small_rational(&mut rng);
            (a, x, b, y)
        })
        .collect())
}

pub fn antimorphism_suite(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    const ORDER: u32 = 3;
    let mut out = Vec::new();
    for rho in 1..=bounds.rho.clamp(1, 2) {
        let catalog = EffectiveCatalog::new(rho, ORDER)?;
        let pairs = random_delta_pairs(rho, ORDER, SEED + rho as u64)?;
        let failures: Vec<Counterexample> = pairs
            .par_iter()
            .filter_map(|(a, x, b, y)| {
                let alpha = Character::delta("x", a, Target::from_rational(x));
                let beta = Character::delta("x", b, Target::from_rational(y));
                let detail = match effective::check_antimorphism(&alpha, &beta, &catalog) {
                    Ok(true) => return None,
                    Ok(false) => format!("Ψ(β)∘Ψ(α) ≠ Ψ(α∗β) with α={x}·δ, β={y}·δ"),
                    Err(e) => format!("error: {e}"),
                };
                Some(Counterexample { graph: Some(format!("{}{}", spec_text(a), spec_text(b))), detail })
            })
            .collect();
        out.push(PropertyReport { property: format!("Ψ(β)∘Ψ(α)=Ψ(α∗β) [ρ={rho}]"), checked: pairs.len(), failures });
    }
    Ok(out)
}

/// Order through which the corollary suite compares the two expansions.
pub const COROLLARY_ORDER: u32 = 3;

pub fn corollary_suite() -> Vec<PropertyReport> {
    let mut cases = Vec::new();
    for amp in [ToyAmplitude::ScalePower, ToyAmplitude::Symbols] {
        for tau in [Tau::Identity, Tau::Constant] {
            cases.push((amp, tau));
        }
    }
    let mut out: Vec<PropertyReport> = cases
        .par_iter()
        .map(|&(amp, tau)| {
            let outcome = effective::check_effective_corollary(amp, tau, 1, COROLLARY_ORDER).map(|r| {
                expect(r.holds(), || {
                    let first = r.bare.iter().zip(&r.effective).position(|(a, b)| a != b).unwrap_or(0);
                    format!("λ_ρ^{first}: bare {} vs effective {}", r.bare[first], r.effective[first])
                })
            });
            single(&format!("bare=effective [{amp}/{tau}, ρ=1]"), outcome)
        })
        .collect();

    // A finite change of scheme on top of the constant subtraction.
    let bubble = crate::fixtures::bubble(1, 1);
    let alpha = Character::delta(ToyAmplitude::ScalePower.tag(), &bubble, Target::from_rational(&rat(1, 2)));
    let covariance = effective::check_scheme_covariance(ToyAmplitude::ScalePower, Tau::Constant, &alpha, 1, 2)
        .map(|r| expect(r.holds(), || "scheme change breaks the expansion".into()));
    out.push(single("scheme-covariance [toy/constant, ρ=1]", covariance));
    out
}

/// Every suite, sharing one generator set.
pub fn run_all(bounds: &Bounds) -> Result<BTreeMap<Suite, SuiteReport>> {
    let gens = generators(bounds)?;
    Suite::ALL.into_iter().map(|s| run_with(s, bounds, || Ok(gens.clone())).map(|r| (s, r))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Bounds {
        Bounds { max_loops: 2, rho: 1, max_vertices: 3 }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn generators_are_one_pi_and_bounded() {
        let gens = generators(&tiny()).unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            assert!(g.is_one_pi());
            assert!(g.loop_number() <= 2);
            assert!(g.vertex_count() <= 3);
            assert!(g.scales().iter().all(|&s| (0..=1).contains(&s)));
        }
    }

    #[test]
    fn small_suites_pass() {
        for s in [Suite::Hopf, Suite::Forest, Suite::Antipode, Suite::Counterterms] {
            let r = run(s, &tiny()).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.properties);
        }
    }

    #[test]
    fn delta_pairs_are_seeded() {
        let a = random_delta_pairs(1, 2, 7).unwrap();
        let b = random_delta_pairs(1, 2, 7).unwrap();
        assert_eq!(a, b);
    }
}
