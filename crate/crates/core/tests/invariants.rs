//! Property tests over random generators and independent test-side oracles.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use mshopf_core::effective::{check_antimorphism, EffectiveCatalog};
use mshopf_core::fixtures;
use mshopf_core::graph::{AssignedGraph, FeynmanGraph, ScaleAssignment};
use mshopf_core::hopf::{self, AlgebraElement, Character, HopfAlgebra, Monomial};
use mshopf_core::multiscale::check_forest;
use mshopf_core::poly::{int, rat, Target};
use mshopf_core::verify::{generators, Bounds};
use mshopf_core::wick::{self, CatalogFilter, PairingUniverse};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn pool() -> &'static [AssignedGraph] {
    static POOL: OnceLock<Vec<AssignedGraph>> = OnceLock::new();
    POOL.get_or_init(|| generators(&Bounds { max_loops: 2, rho: 2, max_vertices: 3 }).unwrap())
}

fn generator() -> impl Strategy<Value = AssignedGraph> {
    prop::sample::select(pool().to_vec())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn permuted_copy() -> impl Strategy<Value = (AssignedGraph, AssignedGraph)> {
    generator().prop_flat_map(|g| {
        let (v, e) = (g.vertex_count(), g.edge_count());
        (Just(g), permutation(v), permutation(e))
            .prop_map(|(g, pv, pe)| {
                let h = g.permuted(&pv, &pe).unwrap();
                (g, h)
            })
    })
}

/// σ by direct search: vertex permutations preserving adjacency and leg
/// attachments, times the half-edge symmetries of parallel lines and loops.
fn sigma_by_search(g: &FeynmanGraph) -> u128 {
    let n = g.vertex_count();
    let mut mult = vec![vec![0u32; n]; n];
    for &[a, b] in g.edges() {
        mult[a][b] += 1;
        if a != b {
            mult[b][a] += 1;
        }
    }
    let legs = g.legs().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count: u128 = 0;
    permute_all(&mut perm, 0, &mut |p| {
        let ok = (0..n).all(|a| (0..n).all(|b| mult[a][b] == mult[p[a]][p[b]]))
            && legs.iter().all(|&v| p[v] == v);
        if ok {
            count += 1;
        }
    });
    let fact = |k: u32| (1..=k as u128).product::<u128>();
    let mut lines: u128 = 1;
    for a in 0..n {
        lines *= fact(mult[a][a]) * 2u128.pow(mult[a][a]);
        for b in a + 1..n {
            lines *= fact(mult[a][b]);
        }
    }
    count * lines
}

fn permute_all(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute_all(p, k + 1, f);
        p.swap(k, i);
    }
}

fn double_factorial_by_recursion(points: usize) -> u128 {
    match points {
        0 => 1,
        p if p % 2 == 1 => 0,
        p => (p as u128 - 1) * double_factorial_by_recursion(p - 2),
    }
}

#[test]
fn sigma_matches_direct_search() {
    for v in 1..=3 {
        for n in [0, 2, 4] {
            let e = wick::Oracle::shared().enumeration(v, n).unwrap();
            for g in e.classes.keys() {
                assert_eq!(g.automorphism_order(), sigma_by_search(g), "{g:?}");
            }
        }
    }
}

#[test]
fn contraction_totals_are_double_factorials() {
    for v in 0..=4 {
        for n in [0, 2, 4] {
            let u = PairingUniverse::new(v, n).unwrap();
            assert_eq!(u.total_matchings(), double_factorial_by_recursion(4 * v + n));
            if v >= 1 {
                let e = wick::Oracle::shared().enumeration(v, n).unwrap();
                assert_eq!(e.total(), double_factorial_by_recursion(4 * v + n));
            }
        }
    }
}

#[test]
fn sunset_patterns_by_hand() {
    // Group the 27 ordered triples in {0,1,2}³ by their sorted value.
    let mut classes: BTreeMap<Vec<i32>, u64> = BTreeMap::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut t = vec![a, b, c];
                t.sort();
                *classes.entry(t).or_default() += 1;
            }
        }
    }
    let mut by_pattern: BTreeMap<(Vec<usize>, u64), usize> = BTreeMap::new();
    for (t, k) in classes {
        let pattern = vec![0, (t[1] > t[0]) as usize, (t[1] > t[0]) as usize + (t[2] > t[1]) as usize];
        *by_pattern.entry((pattern, k)).or_default() += 1;
    }
    let g = fixtures::sunset(0, 0, 0);
    let got: BTreeMap<(Vec<usize>, u64), usize> = hopf::pi_ck_patterns(g.graph(), 2)
        .unwrap()
        .into_iter()
        .map(|p| ((p.pattern, p.coefficient), p.classes))
        .collect();
    assert_eq!(got, by_pattern);
}

#[test]
fn pi_ck_total_counts_assignments() {
    for g in wick::catalog(3, 4, CatalogFilter::one_pi()).unwrap() {
        if g.edge_count() == 0 || g.edge_count() > 5 {
            continue;
        }
        for rho in 0..=2 {
            let want = (rho as i64 + 1).pow(g.edge_count() as u32);
            assert_eq!(hopf::pi_ck_total(&g, rho).unwrap(), int(want));
        }
    }
}

#[test]
fn bubble_weights_from_contractions() {
    // 2!·24² / #contractions = σ; three ways to split the four legs.
    let o = wick::Oracle::shared();
    let b = fixtures::bubble(0, 0);
    assert_eq!(o.sigma(b.graph()).unwrap(), 2);
    assert_eq!(o.labelings(b.graph()).unwrap(), 3);
    assert_eq!(o.pairing_count(&b.graph().canonical(true)).unwrap(), 2 * 24 * 24 / 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_numbering((g, h) in permuted_copy()) {
        prop_assert_eq!(g.canonical(), h.canonical());
        prop_assert_eq!(g.automorphism_order(), h.automorphism_order());
        prop_assert_eq!(hopf::generator_key(&g), hopf::generator_key(&h));
    }

    #[test]
    fn coproduct_is_numbering_independent((g, h) in permuted_copy()) {
        let hopf = HopfAlgebra::high();
        prop_assert_eq!(hopf.coproduct_generator(&g).unwrap(), hopf.coproduct_generator(&h).unwrap());
    }

    #[test]
    fn axioms_on_random_generators(g in generator()) {
        let h = HopfAlgebra::high();
        let x = AlgebraElement::generator(&g);
        prop_assert!(h.check_coassociativity(&x).unwrap());
        prop_assert!(h.check_counit(&x).unwrap());
        prop_assert!(h.check_antipode(&x).unwrap());
        prop_assert!(check_forest(&g).unwrap());
    }

    #[test]
    fn all_divergent_axioms(g in generator()) {
        let h = HopfAlgebra::all_divergent();
        let x = AlgebraElement::generator(&g);
        prop_assert!(h.check_coassociativity(&x).unwrap());
        prop_assert!(h.check_antipode(&x).unwrap());
    }

    #[test]
    fn antipode_is_multiplicative(a in generator(), b in generator()) {
        let h = HopfAlgebra::high();
        let m = Monomial::from_graphs([a.clone(), b.clone()]);
        let lhs = h.antipode_monomial(&m).unwrap();
        let rhs = &*h.antipode_generator(&a).unwrap() * &*h.antipode_generator(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coproduct_is_multiplicative(a in generator(), b in generator()) {
        let h = HopfAlgebra::high();
        let m = Monomial::from_graphs([a.clone(), b.clone()]);
        let lhs = h.coproduct_monomial(&m).unwrap();
        let da = h.coproduct_generator(&a).unwrap();
        let db = h.coproduct_generator(&b).unwrap();
        let mut rhs = hopf::TensorElement::zero();
        for (x, c) in da.terms() {
            for (y, d) in db.terms() {
                rhs.add_pair(x[0].times(&y[0]), x[1].times(&y[1]), c * d);
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn convolution_inverse(g in generator(), k in 1i64..5) {
        let h = HopfAlgebra::high();
        let alpha = Character::new("t", move |x: &AssignedGraph| Target::from_rational(&int(k * x.edge_count() as i64 + 1)));
        let id = alpha.convolve(&alpha.inverse(&h), &h).unwrap();
        let expected = if g.edge_count() == 0 { Target::one() } else { Target::zero() };
        prop_assert_eq!(id.on_graph(&g), expected);
    }

    #[test]
    fn assignment_changes_only_scales(g in generator(), s in prop::collection::vec(0i32..=2, 0..8)) {
        let plain = g.graph().clone();
        if s.len() == plain.edge_count() {
            let a = plain.assign(&ScaleAssignment::new(s.clone(), 2).unwrap()).unwrap();
            prop_assert_eq!(a.forget_scales(), g.forget_scales());
            prop_assert_eq!(a.scales(), &s[..]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn antimorphism_on_random_deltas(i in 0usize..64, j in 0usize..64, x in 1i64..4, y in 1i64..4) {
        let catalog = EffectiveCatalog::new(1, 2).unwrap();
        let gs = catalog.graphs();
        let a = &gs[i % gs.len()].0;
        let b = &gs[j % gs.len()].0;
        let alpha = Character::delta("x", a, Target::from_rational(&rat(x, 1)));
        let beta = Character::delta("x", b, Target::from_rational(&rat(1, y)));
        prop_assert!(check_antimorphism(&alpha, &beta, &catalog).unwrap());
    }
}
