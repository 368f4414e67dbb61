//! Brute-force ground truth from Wick contractions.
//!
//! A universe has `v` four-valent vertices (four labeled slots each) and
//! `n` labeled external points. Every perfect matching of the slots is a
//! Wick contraction and determines a graph with labeled legs. Collecting
//! contractions by labeled isomorphism class gives `v!·(4!)^v/σ` per class,
//! from which σ and N are read off without touching automorphism code.
//!
//! The default enumerator walks matchings one half-edge at a time and
//! weights each choice of partner vertex by its number of free slots; all
//! slots of a vertex lead to the same graph, so this is an exact regrouping
//! of the slot-level sum. [`PairingUniverse::brute_force`] does the
//! slot-level sum itself and is used to validate the regrouping.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::spec::{self, GraphSpec};
use crate::graph::{AssignedGraph, FeynmanGraph, Scale, Subgraph, VertexKind, EXTERNAL_SCALE};

const VALENCE: usize = 4;
/// Largest vertex count accepted by the enumerators.
pub const MAX_VERTICES: usize = 5;

/// `(2m−1)!!` for `2m` points; `1` for no points, `0` for an odd count.
pub fn perfect_matchings(points: usize) -> u128 {
    if points % 2 == 1 {
        return 0;
    }
    (1..points as u128).step_by(2).product()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `v!·(4!)^v`, the order of the group relabeling vertices and slots.
pub fn relabelings(v: usize) -> u128 {
    factorial(v) * 24u128.pow(v as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairingUniverse {
    pub vertices: usize,
    pub n_ext: usize,
}

/// Contractions of one universe collected by class.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub vertices: usize,
    pub n_ext: usize,
    /// Labeled canonical graph → number of contractions.
    pub classes: BTreeMap<FeynmanGraph, u128>,
    /// Contractions pairing two external points directly.
    pub through_lines: u128,
}

impl Enumeration {
    pub fn total(&self) -> u128 {
        self.classes.values().sum::<u128>() + self.through_lines
    }

    /// Unlabeled canonical shape → (contraction count, labeled classes).
    pub fn shapes(&self) -> BTreeMap<FeynmanGraph, (u128, u128)> {
        let mut out: BTreeMap<FeynmanGraph, (u128, u128)> = BTreeMap::new();
        for (g, &c) in &self.classes {
            let e = out.entry(g.canonical(false)).or_default();
            e.0 += c;
            e.1 += 1;
        }
        out
    }
}

type RawKey = (Vec<[usize; 2]>, Vec<usize>);

const THROUGH: usize = usize::MAX;

impl PairingUniverse {
    pub fn new(vertices: usize, n_ext: usize) -> Result<Self> {
        if vertices > MAX_VERTICES {
            return Err(Error::BoundExceeded(format!("{vertices} vertices (at most {MAX_VERTICES})")));
        }
        if (VALENCE * vertices + n_ext) % 2 == 1 {
            return Err(Error::Malformed(format!("{} half-edges cannot be paired", VALENCE * vertices + n_ext)));
        }
        Ok(PairingUniverse { vertices, n_ext })
    }

    pub fn points(&self) -> usize {
        VALENCE * self.vertices + self.n_ext
    }

    /// `(2m−1)!!` with `2m = 4v + n`.
    pub fn total_matchings(&self) -> u128 {
        perfect_matchings(self.points())
    }

    fn classify(&self, raw: HashMap<RawKey, u128>) -> Enumeration {
        let mut out = Enumeration { vertices: self.vertices, n_ext: self.n_ext, ..Default::default() };
        for ((mut edges, legs), w) in raw {
            if legs.contains(&THROUGH) {
                out.through_lines += w;
                continue;
            }
            edges.sort_unstable();
            let g = FeynmanGraph::from_parts(4, vec![VertexKind::Interaction; self.vertices], edges, legs);
            *out.classes.entry(g.canonical(true)).or_default() += w;
        }
        out
    }

    /// Grouped enumeration (see the module docs).
    pub fn enumerate(&self) -> Enumeration {
        let mut raw: HashMap<RawKey, u128> = HashMap::new();
        let mut free = vec![VALENCE; self.vertices];
        let mut legs = vec![THROUGH - 1; self.n_ext];
        let mut edges = Vec::new();
        self.walk(&mut free, &mut legs, &mut edges, 1, &mut raw);
        self.classify(raw)
    }

    fn walk(
        &self,
        free: &mut [usize],
        legs: &mut [usize],
        edges: &mut Vec<[usize; 2]>,
        weight: u128,
        raw: &mut HashMap<RawKey, u128>,
    ) {
        // externals first
        if let Some(i) = legs.iter().position(|&l| l == THROUGH - 1) {
            for j in i + 1..legs.len() {
                if legs[j] == THROUGH - 1 {
                    legs[i] = THROUGH;
                    legs[j] = THROUGH;
                    self.walk(free, legs, edges, weight, raw);
                    legs[i] = THROUGH - 1;
                    legs[j] = THROUGH - 1;
                }
            }
            for u in 0..free.len() {
                if free[u] == 0 {
                    continue;
                }
                let w = free[u] as u128;
                free[u] -= 1;
                legs[i] = u;
                self.walk(free, legs, edges, weight * w, raw);
                legs[i] = THROUGH - 1;
                free[u] += 1;
            }
            return;
        }
        let Some(a) = free.iter().position(|&f| f > 0) else {
            let mut key = edges.clone();
            key.sort_unstable();
            *raw.entry((key, legs.to_vec())).or_default() += weight;
            return;
        };
        free[a] -= 1;
        for u in a..free.len() {
            if free[u] == 0 {
                continue;
            }
            let w = free[u] as u128;
            free[u] -= 1;
            edges.push([a, u]);
            self.walk(free, legs, edges, weight * w, raw);
            edges.pop();
            free[u] += 1;
        }
        free[a] += 1;
    }

    /// Slot-level enumeration of every perfect matching. Exponential; meant
    /// for small universes only.
    pub fn brute_force(&self) -> Result<Enumeration> {
        if self.total_matchings() > 5_000_000 {
            return Err(Error::BoundExceeded(format!("{} matchings", self.total_matchings())));
        }
        let mut raw: HashMap<RawKey, u128> = HashMap::new();
        let mut partner = vec![usize::MAX; self.points()];
        self.match_all(&mut partner, &mut raw);
        Ok(self.classify(raw))
    }

    fn match_all(&self, partner: &mut [usize], raw: &mut HashMap<RawKey, u128>) {
        let Some(p) = partner.iter().position(|&x| x == usize::MAX) else {
            let slots = VALENCE * self.vertices;
            let mut edges = Vec::new();
            let mut legs = vec![0; self.n_ext];
            for (i, &j) in partner.iter().enumerate() {
                match (i < slots, j < slots) {
                    (true, true) if i < j => edges.push([i / VALENCE, j / VALENCE]),
                    (false, true) => legs[i - slots] = j / VALENCE,
                    (false, false) => legs[i - slots] = THROUGH,
                    _ => {}
                }
            }
            let edges = edges.into_iter().map(|[a, b]| [a.min(b), a.max(b)]).collect::<Vec<_>>();
            let mut edges = edges;
            edges.sort_unstable();
            *raw.entry((edges, legs)).or_default() += 1;
            return;
        };
        for q in p + 1..partner.len() {
            if partner[q] == usize::MAX {
                partner[p] = q;
                partner[q] = p;
                self.match_all(partner, raw);
                partner[p] = usize::MAX;
                partner[q] = usize::MAX;
            }
        }
    }
}

/// Subsets of graphs a catalog keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatalogFilter {
    pub connected: bool,
    pub one_pi: bool,
    pub biped_free: bool,
    pub allow_self_loops: bool,
}

impl CatalogFilter {
    pub fn everything() -> Self {
        CatalogFilter { connected: false, one_pi: false, biped_free: false, allow_self_loops: true }
    }

    /// Connected, 1PI, biped-free, no tadpoles: the renormalization sector.
    pub fn biped_free() -> Self {
        CatalogFilter { connected: true, one_pi: true, biped_free: true, allow_self_loops: false }
    }

    /// Connected and 1PI, self-loops excluded.
    pub fn one_pi() -> Self {
        CatalogFilter { connected: true, one_pi: true, biped_free: false, allow_self_loops: false }
    }

    pub fn accepts(&self, g: &FeynmanGraph) -> bool {
        if self.connected && !g.is_connected() {
            return false;
        }
        if self.one_pi && !g.is_one_pi().unwrap_or(false) {
            return false;
        }
        if self.biped_free && !g.is_biped_free() {
            return false;
        }
        self.allow_self_loops || !g.has_self_loops()
    }
}

/// Cached enumerations and the quantities read off them.
#[derive(Default)]
pub struct Oracle {
    cache: Mutex<HashMap<(usize, usize), Arc<Enumeration>>>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide instance.
    pub fn shared() -> &'static Oracle {
        static ORACLE: OnceLock<Oracle> = OnceLock::new();
        ORACLE.get_or_init(Oracle::new)
    }

    pub fn enumeration(&self, vertices: usize, n_ext: usize) -> Result<Arc<Enumeration>> {
        let u = PairingUniverse::new(vertices, n_ext)?;
        if let Some(e) = self.cache.lock().expect("lock").get(&(vertices, n_ext)) {
            return Ok(e.clone());
        }
        let e = Arc::new(u.enumerate());
        self.cache.lock().expect("lock").insert((vertices, n_ext), e.clone());
        Ok(e)
    }

    fn universe_of(&self, g: &FeynmanGraph) -> Result<Arc<Enumeration>> {
        if g.valence() != 4 || g.kinds().contains(&VertexKind::Biped) {
            return Err(Error::NotInUniverse);
        }
        self.enumeration(g.vertex_count(), g.leg_count())
    }

    /// Contractions producing the labeled class of `g`.
    pub fn pairing_count(&self, g: &FeynmanGraph) -> Result<u128> {
        let e = self.universe_of(g)?;
        e.classes.get(&g.canonical(true)).copied().ok_or(Error::NotInUniverse)
    }

    /// σ(G) = v!(4!)^v / #contractions of the labeled class.
    pub fn sigma(&self, g: &FeynmanGraph) -> Result<u128> {
        Ok(relabelings(g.vertex_count()) / self.pairing_count(g)?)
    }

    /// N(G): labeled classes sharing the unlabeled shape of `g`.
    pub fn labelings(&self, g: &FeynmanGraph) -> Result<u128> {
        self.labeled_versions(g).map(|v| v.len() as u128)
    }

    fn labeled_versions(&self, g: &FeynmanGraph) -> Result<Vec<FeynmanGraph>> {
        let e = self.universe_of(g)?;
        let shape = g.canonical(false);
        let v: Vec<FeynmanGraph> = e.classes.keys().filter(|k| k.canonical(false) == shape).cloned().collect();
        if v.is_empty() {
            return Err(Error::NotInUniverse);
        }
        Ok(v)
    }

    /// σ(G,μ): σ(G) divided by the number of assignments of the contraction's
    /// lines that reproduce `(G,μ)`.
    pub fn sigma_assigned(&self, g: &AssignedGraph) -> Result<u128> {
        let labeled = g.clone().labeled().rooted();
        let target = labeled.canonical();
        let rho = g.max_scale().unwrap_or(0);
        let orbit = assignments_matching(labeled.graph(), rho, |a| a.canonical() == target)?;
        Ok(self.sigma(g.graph())? / orbit.len() as u128)
    }

    /// N(G,μ): labeled assigned classes with the unlabeled class of `(G,μ)`.
    pub fn labelings_assigned(&self, g: &AssignedGraph) -> Result<u128> {
        let shape = g.clone().unlabeled().rooted().canonical();
        let rho = g.max_scale().unwrap_or(0);
        let mut found: BTreeSet<AssignedGraph> = BTreeSet::new();
        for lab in self.labeled_versions(g.graph())? {
            for a in assignments_matching(&lab, rho, |a| a.clone().unlabeled().canonical() == shape)? {
                found.insert(a.canonical());
            }
        }
        Ok(found.len() as u128)
    }
}

/// Labeled assignments of `g` (sentinel legs) satisfying `keep`.
fn assignments_matching(
    g: &FeynmanGraph,
    rho: Scale,
    keep: impl Fn(&AssignedGraph) -> bool,
) -> Result<Vec<AssignedGraph>> {
    let e = g.edge_count();
    let base = rho as u128 + 1;
    if base.checked_pow(e as u32).is_none_or(|t| t > 1 << 22) {
        return Err(Error::BoundExceeded(format!("{e} edges at cutoff {rho}")));
    }
    let mut out = Vec::new();
    let mut cur = vec![0; e];
    loop {
        let a = AssignedGraph::from_parts(g.clone(), cur.clone(), vec![EXTERNAL_SCALE; g.leg_count()], true);
        if keep(&a) {
            out.push(a);
        }
        let mut i = 0;
        loop {
            if i == e {
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

/// Unlabeled canonical shapes with `1..=v_max` vertices and `n_ext` legs
/// that pass `filter`, ordered by vertex count then canonical form.
pub fn catalog(v_max: usize, n_ext: usize, filter: CatalogFilter) -> Result<Vec<FeynmanGraph>> {
    let mut out = Vec::new();
    for v in 1..=v_max {
        if (VALENCE * v + n_ext) % 2 == 1 {
            continue;
        }
        let e = Oracle::shared().enumeration(v, n_ext)?;
        out.extend(e.shapes().into_keys().filter(|g| filter.accepts(g)));
    }
    Ok(out)
}

/// Every scale assignment in `[0, ρ]` of every catalog graph with at least
/// one edge, as canonical generators (unlabeled, sentinel legs), deduplicated.
pub fn assigned_catalog(v_max: usize, n_ext: usize, rho: Scale, filter: CatalogFilter) -> Result<Vec<AssignedGraph>> {
    let mut seen = BTreeSet::new();
    for g in catalog(v_max, n_ext, filter)? {
        if g.edge_count() == 0 {
            continue;
        }
        for a in assignments_matching(&g, rho, |_| true)? {
            seen.insert(a.unlabeled().canonical());
        }
    }
    let mut out: Vec<AssignedGraph> = seen.into_iter().collect();
    out.sort_by_key(|g| (g.vertex_count(), g.edge_count(), g.clone()));
    Ok(out)
}

/// A catalog as a JSON list of graph-spec documents.
pub fn export_catalog(graphs: &[AssignedGraph]) -> String {
    let docs: Vec<GraphSpec> =
        graphs.iter().enumerate().map(|(i, g)| GraphSpec::from_assigned(&format!("g{i}"), g)).collect();
    serde_json::to_string(&docs).expect("graph specs serialize")
}

/// Inverse of [`export_catalog`]: canonical generators with cutoff `rho`.
pub fn import_catalog(src: &str, rho: Scale) -> Result<Vec<AssignedGraph>> {
    spec::parse_json(src)?
        .iter()
        .map(|d| d.to_assigned(rho).map(|g| g.unlabeled().canonical()))
        .collect()
}

/// `N(G₁,G₂,G)`: subgraphs of `G` isomorphic to `G₁` whose cograph is
/// isomorphic to `G₂`, by a scan over all edge subsets. Scales and leg
/// scales are compared as given (use sentinel legs for plain graphs).
pub fn insertion_count(g1: &AssignedGraph, g2: &AssignedGraph, g: &AssignedGraph, high_only: bool) -> Result<usize> {
    let k1 = g1.clone().unlabeled().rooted().canonical();
    let k2 = g2.clone().unlabeled().rooted().canonical();
    let g = g.clone().unlabeled().rooted();
    if g.edge_count() > 24 {
        return Err(Error::TooManyEdges(g.edge_count()));
    }
    let mut count = 0;
    for mask in 1..=g.all_edges() {
        let sub = Subgraph::new(&g, mask)?;
        if sub.edge_count() != g1.edge_count() || !sub.is_connected() || sub.leg_count() != g1.leg_count() {
            continue;
        }
        if high_only && !sub.is_high() {
            continue;
        }
        if sub.generator() != k1 {
            continue;
        }
        if g.shrink(mask)?.unlabeled().rooted().canonical() == k2 {
            count += 1;
        }
    }
    Ok(count)
}
