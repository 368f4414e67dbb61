//! Python bindings: graphs, the Hopf algebra operations, counterterms,
//! effective couplings and the verification suites.
//!
//! Structured results come back as plain dicts and lists. Rationals and
//! polynomial values are rendered as strings (`"9/2"`, `"q^3 - 1"`).

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};
use serde_json::Value;

use mshopf_core::effective;
use mshopf_core::fixtures;
use mshopf_core::graph::spec::{self, GraphSpec};
use mshopf_core::graph::{AssignedGraph, FeynmanGraph, Scale, ScaleAssignment};
use mshopf_core::hopf::{self, AlgebraElement, HopfAlgebra as CoreHopf};
use mshopf_core::multiscale;
use mshopf_core::poly::Rational;
use mshopf_core::renorm::{Renormalizer as CoreRenormalizer, Tau, ToyAmplitude};
use mshopf_core::verify::{self, Bounds, Suite};
use mshopf_core::wick::Oracle;

create_exception!(mshopf, MshopfError, PyValueError);

fn err(e: mshopf_core::Error) -> PyErr {
    MshopfError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn rational(r: &Rational) -> String {
    r.to_string()
}

fn element_terms(x: &AlgebraElement) -> Vec<(Vec<String>, String)> {
    x.terms()
        .map(|(m, c)| (m.factors().iter().map(|g| g.to_string()).collect(), rational(c)))
        .collect()
}

/// A φ⁴ graph with a scale on every internal line.
#[pyclass(name = "Graph", module = "mshopf", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: AssignedGraph,
    #[pyo3(get)]
    name: String,
}

#[pymethods]
impl Graph {
    /// Parse every graph in a text or JSON graph spec.
    #[staticmethod]
    #[pyo3(signature = (src, rho=None))]
    fn parse(src: &str, rho: Option<Scale>) -> PyResult<Vec<Graph>> {
        spec::parse_any(src)
            .map_err(err)?
            .into_iter()
            .map(|d| {
                let max = d.internal.iter().filter_map(|e| e.scale).max().unwrap_or(0);
                let inner = d.to_assigned(rho.unwrap_or(max)).map_err(err)?;
                Ok(Graph { inner, name: d.name })
            })
            .collect()
    }

    /// Four-valent graph from vertex count, edge list, leg attachments and
    /// line scales.
    #[staticmethod]
    #[pyo3(signature = (vertices, edges, legs, scales, rho=None))]
    fn from_edges(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
        scales: Vec<Scale>,
        rho: Option<Scale>,
    ) -> PyResult<Graph> {
        let g = FeynmanGraph::phi4(vertices, edges.into_iter().map(|(a, b)| [a, b]).collect(), legs).map_err(err)?;
        let rho = rho.unwrap_or_else(|| scales.iter().copied().max().unwrap_or(0));
        let a = g.assign(&ScaleAssignment::new(scales, rho).map_err(err)?).map_err(err)?;
        Ok(Graph { inner: a.labeled(), name: "graph".into() })
    }

    /// Named fixture: bubble, sunset, chain, eye, tadpole, triple_chain.
    #[staticmethod]
    #[pyo3(signature = (name, scales=None))]
    fn fixture(name: &str, scales: Option<Vec<Scale>>) -> PyResult<Graph> {
        let s = |n: usize| -> PyResult<Vec<Scale>> {
            let v = scales.clone().unwrap_or_else(|| vec![0; n]);
            if v.len() != n {
                return Err(MshopfError::new_err(format!("{name} has {n} lines, got {} scales", v.len())));
            }
            Ok(v)
        };
        let inner = match name {
            "bubble" => {
                let v = s(2)?;
                fixtures::bubble(v[0], v[1])
            }
            "sunset" => {
                let v = s(3)?;
                fixtures::sunset(v[0], v[1], v[2])
            }
            "chain" => fixtures::chain_with_scales(s(4)?.try_into().expect("four scales")),
            "eye" => fixtures::eye_with_scales(s(4)?.try_into().expect("four scales")),
            "tadpole" => fixtures::tadpole(s(1)?[0]),
            "triple_chain" => fixtures::triple_chain(s(6)?.try_into().expect("six scales")),
            other => return Err(MshopfError::new_err(format!("unknown fixture `{other}`"))),
        };
        Ok(Graph { inner: inner.labeled(), name: name.into() })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn leg_count(&self) -> usize {
        self.inner.leg_count()
    }

    #[getter]
    fn loops(&self) -> usize {
        self.inner.loop_number()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().map(|&[a, b]| (a, b)).collect()
    }

    #[getter]
    fn legs(&self) -> Vec<usize> {
        self.inner.legs().to_vec()
    }

    #[getter]
    fn scales(&self) -> Vec<Scale> {
        self.inner.scales().to_vec()
    }

    /// Automorphisms fixing the labeled legs.
    fn sigma(&self) -> u128 {
        self.inner.automorphism_order()
    }

    /// Distinct leg labelings of the same shape.
    fn labelings(&self) -> u128 {
        self.inner.external_labelings()
    }

    fn is_one_pi(&self) -> bool {
        self.inner.is_one_pi()
    }

    fn is_biped_free(&self) -> bool {
        self.inner.is_biped_free()
    }

    /// Canonical generator (unlabeled legs) of this graph.
    fn generator(&self) -> Graph {
        Graph { inner: hopf::generator_key(&self.inner), name: self.name.clone() }
    }

    fn with_scales(&self, scales: Vec<Scale>) -> PyResult<Graph> {
        let rho = scales.iter().copied().max().unwrap_or(0);
        let a = self.inner.graph().assign(&ScaleAssignment::new(scales, rho).map_err(err)?).map_err(err)?;
        Ok(Graph { inner: a.labeled(), name: self.name.clone() })
    }

    fn to_text(&self) -> String {
        GraphSpec::from_assigned(&self.name, &self.inner).to_text()
    }

    fn high_subgraphs_form_forest(&self) -> PyResult<bool> {
        multiscale::check_forest(&self.inner).map_err(err)
    }

    /// Gallavotti-Nicolò tree as a dict; padded down to `pad_to` if given.
    #[pyo3(signature = (pad_to=None))]
    fn gn_tree<'py>(&self, py: Python<'py>, pad_to: Option<Scale>) -> PyResult<Bound<'py, PyAny>> {
        let t = hopf::pi_gn(&self.inner).map_err(err)?;
        let t = match pad_to {
            Some(r) => t.padded(r),
            None => t,
        };
        to_py(py, &t.to_json())
    }

    fn gn_dot(&self) -> PyResult<String> {
        Ok(hopf::pi_gn(&self.inner).map_err(err)?.to_dot())
    }

    /// Rooted tree of the GN tree, bracket notation.
    fn pi_rt(&self) -> PyResult<String> {
        Ok(hopf::pi_rt_graph(&self.inner).map_err(err)?.to_string())
    }

    /// Coefficient patterns of the sum over all assignments in `[0, rho]`.
    fn pi_ck<'py>(&self, py: Python<'py>, rho: Scale) -> PyResult<Bound<'py, PyAny>> {
        let g = self.inner.graph();
        let patterns = hopf::pi_ck_patterns(g, rho).map_err(err)?;
        let total = hopf::pi_ck_total(g, rho).map_err(err)?;
        let v = serde_json::json!({
            "patterns": serde_json::to_value(&patterns).expect("patterns serialize"),
            "total": rational(&total),
        });
        to_py(py, &v)
    }

    fn __repr__(&self) -> String {
        format!("Graph({:?}, {})", self.name, self.inner)
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.inner.canonical() == other.inner.canonical()
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.canonical().hash(&mut h);
        h.finish()
    }
}

/// Coproduct, antipode and forests, with high or all-divergent extraction.
#[pyclass(name = "HopfAlgebra", module = "mshopf", frozen)]
struct HopfAlgebra {
    inner: Arc<CoreHopf>,
}

#[pymethods]
impl HopfAlgebra {
    #[new]
    #[pyo3(signature = (all_divergent=false))]
    fn new(all_divergent: bool) -> Self {
        let inner = if all_divergent { CoreHopf::all_divergent() } else { CoreHopf::high() };
        HopfAlgebra { inner }
    }

    /// Terms `(left, right, coefficient)` of `Δ(g)`; each side is a list of
    /// generator strings, empty for the unit.
    fn coproduct(&self, g: &Graph) -> PyResult<Vec<(Vec<String>, Vec<String>, String)>> {
        let d = self.inner.coproduct_generator(&g.inner).map_err(err)?;
        Ok(d.terms()
            .map(|(k, c)| {
                let side = |i: usize| k[i].factors().iter().map(|x| x.to_string()).collect();
                (side(0), side(1), rational(c))
            })
            .collect())
    }

    /// `S(g)` as `(monomial, coefficient)` terms. `method` is `recursive`,
    /// `forests` or `iterated`.
    #[pyo3(signature = (g, method="recursive"))]
    fn antipode(&self, g: &Graph, method: &str) -> PyResult<Vec<(Vec<String>, String)>> {
        let x = match method {
            "recursive" => (*self.inner.antipode_generator(&g.inner).map_err(err)?).clone(),
            "forests" => self.inner.antipode_by_forests(&g.inner).map_err(err)?,
            "iterated" => self.inner.antipode_iterated(&AlgebraElement::generator(&g.inner)).map_err(err)?,
            other => return Err(MshopfError::new_err(format!("unknown method `{other}`"))),
        };
        Ok(element_terms(&x))
    }

    /// Forests as lists of edge-index lists, edges numbered in the
    /// canonical generator.
    fn forests(&self, g: &Graph) -> PyResult<Vec<Vec<Vec<u32>>>> {
        let key = hopf::generator_key(&g.inner);
        let fs = self.inner.forests(&key).map_err(err)?;
        Ok(fs
            .iter()
            .map(|f| f.iter().map(|&m| (0..64).filter(|b| m >> b & 1 == 1).collect()).collect())
            .collect())
    }

    /// Axiom checks on one generator.
    fn check<'py>(&self, py: Python<'py>, g: &Graph) -> PyResult<Bound<'py, PyDict>> {
        let x = AlgebraElement::generator(&g.inner);
        let d = PyDict::new(py);
        d.set_item("coassociativity", self.inner.check_coassociativity(&x).map_err(err)?)?;
        d.set_item("counit", self.inner.check_counit(&x).map_err(err)?)?;
        d.set_item("antipode", self.inner.check_antipode(&x).map_err(err)?)?;
        d.set_item("grading", self.inner.check_grading(&g.inner).map_err(err)?)?;
        Ok(d)
    }
}

fn parse_amplitude(s: &str) -> PyResult<ToyAmplitude> {
    match s {
        "toy" => Ok(ToyAmplitude::ScalePower),
        "symbols" => Ok(ToyAmplitude::Symbols),
        other => Err(MshopfError::new_err(format!("unknown amplitude `{other}`"))),
    }
}

fn parse_tau(s: &str) -> PyResult<Tau> {
    match s {
        "identity" => Ok(Tau::Identity),
        "constant" => Ok(Tau::Constant),
        other => Err(MshopfError::new_err(format!("unknown tau `{other}`"))),
    }
}

/// Useful counterterms and renormalized amplitudes for a toy model.
#[pyclass(name = "Renormalizer", module = "mshopf", frozen)]
struct Renormalizer {
    inner: Arc<CoreRenormalizer>,
}

#[pymethods]
impl Renormalizer {
    #[new]
    #[pyo3(signature = (amplitude="toy", tau="identity"))]
    fn new(amplitude: &str, tau: &str) -> PyResult<Self> {
        Ok(Renormalizer { inner: Arc::new(CoreRenormalizer::new(parse_amplitude(amplitude)?, parse_tau(tau)?)) })
    }

    fn amplitude(&self, g: &Graph) -> String {
        self.inner.amplitude().value(&g.inner).to_string()
    }

    /// `C_U(g)` by `recursion`, `antipode` or `forests`.
    #[pyo3(signature = (g, method="recursion"))]
    fn counterterm(&self, g: &Graph, method: &str) -> PyResult<String> {
        let v = match method {
            "recursion" => self.inner.useful_counterterm(&g.inner),
            "antipode" => self.inner.counterterm_via_antipode(&g.inner),
            "forests" => self.inner.counterterm_via_forests(&g.inner),
            other => return Err(MshopfError::new_err(format!("unknown method `{other}`"))),
        };
        Ok(v.map_err(err)?.to_string())
    }

    fn renormalized(&self, g: &Graph) -> PyResult<String> {
        Ok(self.inner.renormalized_amplitude(&g.inner).map_err(err)?.to_string())
    }

    fn coaction<'py>(&self, py: Python<'py>, g: &Graph) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.coaction(&g.inner).map_err(err)?.to_json())
    }
}

/// σ from Wick contraction counts.
#[pyfunction]
fn oracle_sigma(g: &Graph) -> PyResult<u128> {
    Oracle::shared().sigma(g.inner.graph()).map_err(err)
}

/// N from Wick contraction counts.
#[pyfunction]
fn oracle_labelings(g: &Graph) -> PyResult<u128> {
    Oracle::shared().labelings(g.inner.graph()).map_err(err)
}

/// Both sides of the insertion identity; the assigned form when `rho` is
/// given.
#[pyfunction]
#[pyo3(signature = (g1, g2, rho=None))]
fn lemma<'py>(py: Python<'py>, g1: &Graph, g2: &Graph, rho: Option<Scale>) -> PyResult<Bound<'py, PyAny>> {
    let r = match rho {
        Some(rho) => effective::check_assigned_lemma(&g1.inner, &g2.inner, rho),
        None => effective::check_combinatorial_lemma(
            &AssignedGraph::plain(g1.inner.graph()),
            &AssignedGraph::plain(g2.inner.graph()),
            Bounds::default().max_vertices,
        ),
    }
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lhs", rational(&r.lhs))?;
    d.set_item("rhs", rational(&r.rhs))?;
    d.set_item("holds", r.holds())?;
    d.set_item("terms", to_py(py, &r.to_json()["terms"])?)?;
    Ok(d.into_any())
}

/// Effective couplings `Ψ(τA)` and the bare/effective expansions in `λ_ρ`.
#[pyfunction]
#[pyo3(signature = (rho=1, order=3, amplitude="toy", tau="identity"))]
fn effective_expansion<'py>(
    py: Python<'py>,
    rho: Scale,
    order: u32,
    amplitude: &str,
    tau: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let (amp, t) = (parse_amplitude(amplitude)?, parse_tau(tau)?);
    let catalog = effective::EffectiveCatalog::new(rho, order).map_err(err)?;
    let psi = effective::psi(&mshopf_core::renorm::tau_character(amp, t), &catalog);
    let report = effective::check_effective_corollary(amp, t, rho, order).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("couplings", psi.to_string())?;
    d.set_item("bare", report.bare.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
    d.set_item("effective", report.effective.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
    d.set_item("holds", report.holds())?;
    Ok(d.into_any())
}

/// Run one suite (or `all`) and return the reports.
#[pyfunction]
#[pyo3(signature = (suite="all", max_loops=3, rho=3, max_vertices=4))]
fn run_verify<'py>(
    py: Python<'py>,
    suite: &str,
    max_loops: usize,
    rho: Scale,
    max_vertices: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let bounds = Bounds { max_loops, rho, max_vertices };
    let reports: Vec<_> = if suite == "all" {
        py.detach(|| verify::run_all(&bounds)).map_err(err)?.into_values().collect()
    } else {
        let s: Suite = suite.parse().map_err(err)?;
        vec![py.detach(|| verify::run(s, &bounds)).map_err(err)?]
    };
    let v = serde_json::json!({
        "passed": reports.iter().all(|r| r.passed()),
        "suites": serde_json::to_value(&reports).expect("reports serialize"),
    });
    to_py(py, &v)
}

#[pymodule]
fn mshopf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MshopfError", m.py().get_type::<MshopfError>())?;
    m.add_class::<Graph>()?;
    m.add_class::<HopfAlgebra>()?;
    m.add_class::<Renormalizer>()?;
    m.add_function(wrap_pyfunction!(oracle_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_labelings, m)?)?;
    m.add_function(wrap_pyfunction!(lemma, m)?)?;
    m.add_function(wrap_pyfunction!(effective_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
