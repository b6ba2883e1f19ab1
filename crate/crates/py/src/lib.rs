//! Python bindings. Vertices are the same 1-based ids as in Rust; per-vertex
//! lists are in vertex order, so `colors[v - 1]` is the color of `v`.

use std::collections::BTreeMap;

use arbcolor::graph::{degeneracy, generate_graph};
use arbcolor::verify::{check_coloring, validate_orientation, Claim, OrientationClaims};
use arbcolor::{decomposition, legal, orientation, recolor, VertexId, VertexMap};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: arbcolor::Error) -> PyErr {
    match e {
        arbcolor::Error::InvalidParameter(m) => PyValueError::new_err(m),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_py_json(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(frozen, skip_from_py_object, module = "pyarbcolor")]
#[derive(Clone)]
struct Graph {
    inner: arbcolor::Graph,
    /// Known arboricity bound for generated graphs.
    #[pyo3(get)]
    arboricity_bound: Option<usize>,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> PyResult<Self> {
        Ok(Self {
            inner: arbcolor::Graph::from_edges(n, edges).map_err(err)?,
            arboricity_bound: None,
        })
    }

    /// `Graph.generate("forest_union", 1000, seed=3, a=4)`.
    #[staticmethod]
    #[pyo3(signature = (kind, n, seed = 0, **params))]
    fn generate(kind: &str, n: usize, seed: u64, params: Option<BTreeMap<String, u64>>) -> PyResult<Self> {
        let mut spec = serde_json::json!({ "kind": kind, "n": n, "seed": seed });
        for (k, v) in params.unwrap_or_default() {
            spec[k] = v.into();
        }
        let spec: arbcolor::GraphSpec =
            serde_json::from_value(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let generated = generate_graph(&spec).map_err(err)?;
        Ok(Self {
            inner: generated.graph,
            arboricity_bound: Some(spec.arboricity_bound()),
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: arbcolor::io::parse_edge_list(text).map_err(err)?,
            arboricity_bound: None,
        })
    }

    fn to_text(&self) -> String {
        arbcolor::io::format_edge_list(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, v: VertexId) -> PyResult<Vec<VertexId>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn degeneracy(&self) -> usize {
        degeneracy(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

impl Graph {
    fn check(&self, v: VertexId) -> PyResult<()> {
        if v == 0 || v > self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(())
    }

    fn a(&self, a: Option<usize>) -> PyResult<usize> {
        a.or(self.arboricity_bound)
            .ok_or_else(|| PyValueError::new_err("pass an arboricity bound `a`"))
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyarbcolor")]
#[derive(Clone)]
struct Coloring {
    inner: arbcolor::Coloring,
}

#[pymethods]
impl Coloring {
    #[new]
    fn new(colors: Vec<u32>) -> PyResult<Self> {
        Ok(Self {
            inner: arbcolor::Coloring::from_colors(VertexMap::from_vec(colors)).map_err(err)?,
        })
    }

    #[getter]
    fn colors(&self) -> Vec<u32> {
        self.inner.colors().values().to_vec()
    }

    fn color(&self, v: VertexId) -> PyResult<u32> {
        if v == 0 || v > self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.color(v))
    }

    #[getter]
    fn palette_size(&self) -> u32 {
        self.inner.palette_size()
    }

    fn distinct_colors(&self) -> usize {
        self.inner.distinct_colors()
    }

    fn classes(&self) -> BTreeMap<u32, Vec<VertexId>> {
        self.inner.classes()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Coloring(n={}, palette_size={})",
            self.inner.n(),
            self.inner.palette_size()
        )
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyarbcolor")]
#[derive(Clone)]
struct Orientation {
    inner: arbcolor::PartialOrientation,
}

#[pymethods]
impl Orientation {
    /// Oriented edges as `(from, to)`.
    fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.arcs().collect()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.find_cycle().is_none()
    }

    fn max_out_degree(&self) -> usize {
        self.inner.max_out_degree()
    }

    fn max_deficit(&self) -> usize {
        self.inner.max_deficit()
    }

    /// Longest directed path, in edges.
    fn length(&self) -> PyResult<usize> {
        Ok(self.inner.metrics().map_err(err)?.length)
    }

    fn parents(&self, v: VertexId) -> Vec<VertexId> {
        self.inner.parents(v)
    }

    fn __repr__(&self) -> String {
        format!(
            "Orientation(arcs={}, unoriented={})",
            self.inner.arcs().count(),
            self.inner.max_deficit()
        )
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyarbcolor")]
#[derive(Clone)]
struct Trace {
    #[pyo3(get)]
    rounds: usize,
    #[pyo3(get)]
    messages: u64,
    inner: arbcolor::RoundTrace,
}

#[pymethods]
impl Trace {
    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py_json(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Trace(rounds={}, messages={})", self.rounds, self.messages)
    }
}

fn trace(t: arbcolor::RoundTrace) -> Trace {
    Trace {
        rounds: t.rounds,
        messages: t.messages_sent,
        inner: t,
    }
}

fn coloring(c: arbcolor::Coloring) -> Coloring {
    Coloring { inner: c }
}

fn orient(o: arbcolor::PartialOrientation) -> Orientation {
    Orientation { inner: o }
}

/// H-partition levels in vertex order.
#[pyfunction]
#[pyo3(signature = (g, a = None, epsilon = 1.0))]
fn h_partition(g: &Graph, a: Option<usize>, epsilon: f64) -> PyResult<(Vec<usize>, Trace)> {
    let (hp, t) = decomposition::h_partition(&g.inner, g.a(a)?, epsilon).map_err(err)?;
    Ok((hp.level.into_vec(), trace(t)))
}

/// Forest index of every edge, parallel to `g.edges()`.
#[pyfunction]
#[pyo3(signature = (g, a = None, epsilon = 1.0))]
fn forests_decomposition(g: &Graph, a: Option<usize>, epsilon: f64) -> PyResult<(Vec<usize>, Trace)> {
    let (fd, t) = decomposition::forests_decomposition(&g.inner, g.a(a)?, epsilon).map_err(err)?;
    Ok((fd.forest_index, trace(t)))
}

#[pyfunction]
#[pyo3(signature = (g, a = None, epsilon = 1.0))]
fn be08_coloring(g: &Graph, a: Option<usize>, epsilon: f64) -> PyResult<(Coloring, Trace)> {
    let (c, t) = decomposition::be08_legal_coloring(&g.inner, g.a(a)?, epsilon).map_err(err)?;
    Ok((coloring(c), trace(t)))
}

#[pyfunction]
#[pyo3(signature = (g, a = None, epsilon = 1.0))]
fn complete_orientation(g: &Graph, a: Option<usize>, epsilon: f64) -> PyResult<(Orientation, Trace)> {
    let run = orientation::complete_orientation(&g.inner, g.a(a)?, epsilon).map_err(err)?;
    Ok((orient(run.orientation), trace(run.trace)))
}

#[pyfunction]
#[pyo3(signature = (g, t, a = None, epsilon = 1.0))]
fn partial_orientation(
    g: &Graph,
    t: usize,
    a: Option<usize>,
    epsilon: f64,
) -> PyResult<(Orientation, Trace)> {
    let run = orientation::partial_orientation(&g.inner, g.a(a)?, t, epsilon).map_err(err)?;
    Ok((orient(run.orientation), trace(run.trace)))
}

#[pyfunction]
fn color_from_orientation(sigma: &Orientation) -> PyResult<(Coloring, Trace)> {
    let (c, t) = orientation::color_from_orientation(&sigma.inner).map_err(err)?;
    Ok((coloring(c), trace(t)))
}

/// Coloring with defect at most `delta // p`.
#[pyfunction]
#[pyo3(signature = (g, p, delta = None))]
fn defective_coloring(g: &Graph, p: usize, delta: Option<usize>) -> PyResult<(Coloring, Trace)> {
    let delta = delta.unwrap_or_else(|| g.inner.max_degree());
    let run = recolor::defective_coloring(&g.inner, delta, p).map_err(err)?;
    Ok((coloring(run.coloring), trace(run.trace)))
}

/// Recolors along `sigma` so every class has at most `d` same-colored parents.
#[pyfunction]
fn arb_kuhn(g: &Graph, sigma: &Orientation, d: usize) -> PyResult<(Coloring, Trace)> {
    let out = sigma.inner.max_out_degree();
    let run = recolor::arb_kuhn(&g.inner, &sigma.inner, out, d).map_err(err)?;
    Ok((coloring(run.coloring), trace(run.trace)))
}

/// Returns the coloring, the arboricity bound per class, the witness
/// orientation of intra-class edges and the trace.
#[pyfunction]
#[pyo3(signature = (g, k, t, a = None, epsilon = 1.0))]
fn arbdefective_coloring(
    g: &Graph,
    k: usize,
    t: usize,
    a: Option<usize>,
    epsilon: f64,
) -> PyResult<(Coloring, usize, Orientation, Trace)> {
    let (res, tr) =
        arbcolor::arbdefective::arbdefective_coloring(&g.inner, g.a(a)?, k, t, epsilon).map_err(err)?;
    Ok((coloring(res.coloring), res.bound, orient(res.witness), trace(tr)))
}

#[pyfunction]
#[pyo3(signature = (g, p, a = None, epsilon = 1.0))]
fn legal_coloring(g: &Graph, p: usize, a: Option<usize>, epsilon: f64) -> PyResult<(Coloring, Trace)> {
    let run = legal::legal_coloring(&g.inner, g.a(a)?, p, epsilon).map_err(err)?;
    Ok((coloring(run.coloring), trace(run.trace)))
}

/// Runs a driver given as keyword arguments, e.g. `mode="eta", eta=0.5`.
/// Returns the coloring, the trace and the driver log as a dict.
#[pyfunction]
#[pyo3(signature = (g, a = None, **config))]
fn coloring_driver(
    py: Python<'_>,
    g: &Graph,
    a: Option<usize>,
    config: Option<&Bound<'_, PyDict>>,
) -> PyResult<(Coloring, Trace, Py<PyAny>)> {
    let config = config.ok_or_else(|| PyValueError::new_err("pass a driver `mode`"))?;
    let text: String = py.import("json")?.call_method1("dumps", (config,))?.extract()?;
    let config: legal::DriverConfig =
        serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let run = legal::coloring_driver(&g.inner, g.a(a)?, &config).map_err(err)?;
    let log = to_py_json(py, &run.log)?;
    Ok((coloring(run.coloring), trace(run.trace), log))
}

#[pyfunction]
fn mis(g: &Graph, c: &Coloring) -> PyResult<(Vec<VertexId>, Trace)> {
    let (set, t) = legal::mis_from_coloring(&g.inner, &c.inner).map_err(err)?;
    Ok((set, trace(t)))
}

/// Certificate for the given claims as a dict; `report["failures"]` lists
/// the claims that did not hold.
#[pyfunction]
#[pyo3(signature = (g, c, legal = true, defect = None, arbdefect = None, witness = None))]
fn check(
    py: Python<'_>,
    g: &Graph,
    c: &Coloring,
    legal: bool,
    defect: Option<usize>,
    arbdefect: Option<usize>,
    witness: Option<&Orientation>,
) -> PyResult<Py<PyAny>> {
    let mut claims = Vec::new();
    if legal {
        claims.push(Claim::Legal);
    }
    if let Some(d) = defect {
        claims.push(Claim::Defect(d));
    }
    if let Some(bound) = arbdefect {
        claims.push(Claim::Arbdefect {
            bound,
            witness: witness.map(|w| &w.inner),
        });
    }
    let report = check_coloring(&g.inner, &c.inner, &claims).map_err(err)?;
    to_py_json(py, &report)
}

#[pyfunction]
#[pyo3(signature = (g, sigma, acyclic = true, complete = false, out_degree = None, deficit = None, length = None))]
#[allow(clippy::too_many_arguments)]
fn check_orientation(
    py: Python<'_>,
    g: &Graph,
    sigma: &Orientation,
    acyclic: bool,
    complete: bool,
    out_degree: Option<usize>,
    deficit: Option<usize>,
    length: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let claims = OrientationClaims {
        acyclic,
        complete,
        out_degree,
        deficit,
        length,
    };
    to_py_json(py, &validate_orientation(&g.inner, &sigma.inner, &claims))
}

#[pyfunction]
#[pyo3(signature = (a, epsilon = 1.0))]
fn degree_bound(a: usize, epsilon: f64) -> usize {
    arbcolor::degree_bound(a, epsilon)
}

#[pymodule]
fn pyarbcolor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Coloring>()?;
    m.add_class::<Orientation>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(h_partition, m)?)?;
    m.add_function(wrap_pyfunction!(forests_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(be08_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(complete_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(partial_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(color_from_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(defective_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(arb_kuhn, m)?)?;
    m.add_function(wrap_pyfunction!(arbdefective_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(legal_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(coloring_driver, m)?)?;
    m.add_function(wrap_pyfunction!(mis, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_orientation, m)?)?;
    m.add_function(wrap_pyfunction!(degree_bound, m)?)?;
    Ok(())
}
