//! Python bindings. Reports cross the boundary as plain dicts (via JSON), so
//! their keys match the CLI's `--format json` output.

use funnelmatch::distance::{self, Mode};
use funnelmatch::funnel::{self, Cap, Count};
use funnelmatch::generators::{self, GenSpec};
use funnelmatch::matcher::{self, Algorithm, PS_DEFAULT_CAP};
use funnelmatch::{parse_graph, Digraph, LabeledDag, PatternIndex};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: funnelmatch::Error) -> PyErr {
    match e {
        funnelmatch::Error::Overflow | funnelmatch::Error::Exceeded(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// `None` for counts only known to exceed the cap.
fn count(c: Count) -> Option<u64> {
    c.exact()
}

/// Vertex-labeled directed graph; cycles are allowed until an operation
/// needs a DAG.
#[pyclass(name = "Graph", module = "funnelmatch", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: Digraph,
}

impl PyGraph {
    fn dag(&self) -> PyResult<LabeledDag> {
        LabeledDag::new(self.inner.clone()).map_err(err)
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(labels: &str, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: Digraph::new(labels.as_bytes().to_vec(), edges).map_err(err)?,
        })
    }

    /// Parse the text graph format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_graph(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> String {
        String::from_utf8_lossy(self.inner.labels()).into_owned()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn reverse(&self) -> Self {
        PyGraph {
            inner: self.inner.reverse(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Failure-function index of a pattern.
#[pyclass(name = "Pattern", module = "funnelmatch", frozen)]
pub struct PyPattern {
    inner: PatternIndex,
}

#[pymethods]
impl PyPattern {
    #[new]
    fn new(pattern: &str) -> PyResult<Self> {
        Ok(PyPattern {
            inner: PatternIndex::new(pattern.as_bytes()).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Leaves of the failure tree.
    #[getter]
    fn w(&self) -> usize {
        self.inner.w()
    }

    /// `f(1) .. f(m)`.
    #[getter]
    fn failure(&self) -> Vec<usize> {
        self.inner.failure()
    }

    fn parentheses(&self) -> String {
        self.inner.bp_string()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", String::from_utf8_lossy(self.inner.pattern()))
    }
}

/// Match `pattern` in `graph`. `algo` is one of baseline, w, sk, tk, stk;
/// `None` picks one by cost.
#[pyfunction(name = "match")]
#[pyo3(signature = (graph, pattern, algo = None, ps_cap = PS_DEFAULT_CAP))]
fn match_<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    pattern: &str,
    algo: Option<&str>,
    ps_cap: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let algo = match algo {
        None | Some("auto") => None,
        Some(name) => Some(name.parse::<Algorithm>().map_err(PyValueError::new_err)?),
    };
    let g = graph.dag()?;
    let idx = PatternIndex::for_graph(pattern.as_bytes(), &g).map_err(err)?;
    let report = py.detach(|| matcher::run(&g, &idx, algo, ps_cap)).map_err(err)?;
    to_py(py, &report)
}

/// Path from a source spelling `pattern` and ending at `end`.
#[pyfunction]
fn witness_path(graph: &PyGraph, pattern: &str, end: usize) -> Option<Vec<usize>> {
    matcher::witness_path(&graph.inner, pattern.as_bytes(), end)
}

/// Class parameters `(k_S, k_T, k_ST)`; entries above `cap` come back `None`.
#[pyfunction]
#[pyo3(signature = (graph, cap = None))]
fn class_params(graph: &PyGraph, cap: Option<u64>) -> PyResult<(Option<u64>, Option<u64>, Option<u64>)> {
    let p = funnel::class_min_k(&graph.dag()?, cap.map_or(Cap::Exact, Cap::Saturate)).map_err(err)?;
    Ok((count(p.k_s), count(p.k_t), count(p.k_st)))
}

/// `(mu_s, mu_t)` per vertex.
#[pyfunction]
fn path_counts(graph: &PyGraph) -> PyResult<(Vec<u64>, Vec<u64>)> {
    let g = graph.dag()?;
    let p = funnel::path_counts(&g, Cap::Exact).map_err(err)?;
    let exact = |c: Count| c.exact().expect("exact arithmetic");
    Ok(((0..g.n()).map(|v| exact(p.mu_s(v))).collect(), (0..g.n()).map(|v| exact(p.mu_t(v))).collect()))
}

#[pyfunction]
fn min_k_funnel(graph: &PyGraph) -> PyResult<u64> {
    funnel::min_k_funnel_search(&graph.dag()?).map_err(err)
}

/// Funnel test on any graph; cyclic graphs are not funnels.
#[pyfunction]
fn is_funnel(graph: &PyGraph) -> bool {
    distance::is_funnel(&graph.inner)
}

#[pyfunction]
fn is_k_funnel(graph: &PyGraph, k: u64) -> PyResult<bool> {
    Ok(funnel::is_k_funnel(&graph.dag()?, k))
}

#[pyfunction]
fn minimal_forbidden_path(graph: &PyGraph) -> Option<Vec<usize>> {
    funnel::find_minimal_forbidden_path(&graph.inner)
}

/// `(V1, V2)` split witnessing ST_k membership, or `None`.
#[pyfunction]
fn st_partition(graph: &PyGraph, k: u64) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
    match funnel::st_partition(&graph.dag()?, k) {
        Ok(p) => Ok(Some((p.v1, p.v2))),
        Err(funnelmatch::Error::NotInClass { .. }) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

/// Fewest vertex or edge deletions making `graph` a funnel, as a dict with
/// the certificate; `None` past `max_d`.
#[pyfunction]
#[pyo3(signature = (graph, mode = "vertex", max_d = 5))]
fn deletion_distance<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    mode: &str,
    max_d: usize,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let mode: Mode = mode.parse().map_err(PyValueError::new_err)?;
    let g = graph.inner.clone();
    match py.detach(|| distance::deletion_distance(&g, mode, max_d)) {
        Ok(r) => Ok(Some(to_py(py, &r)?)),
        Err(funnelmatch::Error::Exceeded(_)) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

/// Build an instance from a spec dict such as
/// `{"kind": {"kind": "out-tree", "n": 10}, "seed": 1, "sigma": 2}`.
/// Returns `(graph, pattern, planted_path)`.
#[pyfunction]
fn generate(py: Python<'_>, spec: &Bound<'_, PyAny>) -> PyResult<(PyGraph, Option<String>, Option<Vec<usize>>)> {
    let text: String = py.import("json")?.call_method1("dumps", (spec,))?.extract()?;
    let spec: GenSpec = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let inst = generators::generate(&spec).map_err(err)?;
    Ok((
        PyGraph { inner: inst.graph },
        inst.pattern.map(|s| String::from_utf8_lossy(&s).into_owned()),
        inst.planted_path,
    ))
}

/// Add every class and function to `m`; also used to embed the module.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPattern>()?;
    m.add_function(wrap_pyfunction!(match_, m)?)?;
    m.add_function(wrap_pyfunction!(witness_path, m)?)?;
    m.add_function(wrap_pyfunction!(class_params, m)?)?;
    m.add_function(wrap_pyfunction!(path_counts, m)?)?;
    m.add_function(wrap_pyfunction!(min_k_funnel, m)?)?;
    m.add_function(wrap_pyfunction!(is_funnel, m)?)?;
    m.add_function(wrap_pyfunction!(is_k_funnel, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_forbidden_path, m)?)?;
    m.add_function(wrap_pyfunction!(st_partition, m)?)?;
    m.add_function(wrap_pyfunction!(deletion_distance, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "funnelmatch")]
fn funnelmatch_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
