//! Python bindings for `mpoly-core`.
//!
//! Matrices are built from nested lists. Entries that are `int`/`float`
//! give a float matrix; any `str` or `fractions.Fraction` entry (or
//! `exact=True`) gives an exact rational matrix. Reports and search outcomes
//! come back as plain dictionaries, in the same shape as the CLI's JSON.

use mpoly_core::cert;
use mpoly_core::linalg::{self, parse_rational, AnyMatrix, Rational, Tolerance};
use mpoly_core::oracle;
use mpoly_core::reduction::{self, Graph as CoreGraph, SimplexPoint};
use mpoly_core::search::{self, SearchConfig, SymmetricConfig};
use mpoly_core::Matrix as CoreMatrix;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyFloat, PyInt};
use serde::Serialize;

fn err(e: mpoly_core::Error) -> PyErr {
    match e {
        mpoly_core::Error::NoConvergence(_) | mpoly_core::Error::BudgetExceeded(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn fraction(py: Python<'_>, q: &Rational) -> PyResult<Py<PyAny>> {
    Ok(py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))?.unbind())
}

fn is_number(obj: &Bound<'_, PyAny>) -> bool {
    obj.is_instance_of::<PyFloat>() || obj.is_instance_of::<PyInt>()
}

fn exact_entry(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<PyInt>() {
        return Ok(Rational::from_integer(obj.str()?.to_string().parse().map_err(|_| PyValueError::new_err("bad int"))?));
    }
    let text = obj.str()?.to_string();
    parse_rational(&text).ok_or_else(|| PyValueError::new_err(format!("bad rational {text:?}")))
}

fn weights_exact(items: &[Bound<'_, PyAny>]) -> PyResult<SimplexPoint<Rational>> {
    let w = items.iter().map(exact_entry).collect::<PyResult<Vec<_>>>()?;
    SimplexPoint::new(w).map_err(err)
}

/// A square matrix over `f64` or exact rationals.
#[pyclass(frozen, from_py_object, module = "mpoly")]
#[derive(Clone)]
pub struct Matrix {
    inner: AnyMatrix,
}

#[pymethods]
impl Matrix {
    #[new]
    #[pyo3(signature = (rows, exact = false))]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>, exact: bool) -> PyResult<Self> {
        let any_exact = exact || rows.iter().flatten().any(|e| !is_number(e));
        let inner = if any_exact {
            let rows = rows.iter().map(|r| r.iter().map(exact_entry).collect::<PyResult<Vec<_>>>()).collect::<PyResult<Vec<_>>>()?;
            AnyMatrix::Exact(CoreMatrix::from_rows(rows).map_err(err)?)
        } else {
            let rows = rows.iter().map(|r| r.iter().map(|e| e.extract::<f64>()).collect::<PyResult<Vec<_>>>()).collect::<PyResult<Vec<_>>>()?;
            AnyMatrix::Float(CoreMatrix::from_rows(rows).map_err(err)?)
        };
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.is_exact()
    }

    /// Entries as nested lists of `float` or `Fraction`.
    fn to_list(&self, py: Python<'_>) -> PyResult<Vec<Vec<Py<PyAny>>>> {
        match &self.inner {
            AnyMatrix::Float(m) => {
                Ok(m.rows().map(|r| r.iter().map(|x| PyFloat::new(py, *x).into_any().unbind()).collect()).collect())
            }
            AnyMatrix::Exact(m) => m.rows().map(|r| r.iter().map(|q| fraction(py, q)).collect()).collect(),
        }
    }

    fn det(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        match &self.inner {
            AnyMatrix::Float(m) => Ok(PyFloat::new(py, m.det()).into_any().unbind()),
            AnyMatrix::Exact(m) => fraction(py, &m.det()),
        }
    }

    fn leading_principal_minors(&self, py: Python<'_>) -> PyResult<Vec<Py<PyAny>>> {
        match &self.inner {
            AnyMatrix::Float(m) => {
                Ok(m.leading_principal_minors().into_iter().map(|x| PyFloat::new(py, x).into_any().unbind()).collect())
            }
            AnyMatrix::Exact(m) => m.leading_principal_minors().iter().map(|q| fraction(py, q)).collect(),
        }
    }

    fn schur_complement(&self, k: usize) -> PyResult<Self> {
        let inner = match &self.inner {
            AnyMatrix::Float(m) => AnyMatrix::Float(m.schur_complement(k).map_err(err)?),
            AnyMatrix::Exact(m) => AnyMatrix::Exact(m.schur_complement(k).map_err(err)?),
        };
        Ok(Self { inner })
    }

    fn eigenvalues(&self) -> PyResult<Vec<(f64, f64)>> {
        Ok(linalg::eigenvalues(&self.inner.to_f64()).map_err(err)?.into_iter().map(|z| (z.re, z.im)).collect())
    }

    fn spectral_radius(&self) -> PyResult<f64> {
        linalg::spectral_radius(&self.inner.to_f64()).map_err(err)
    }

    fn is_z_matrix(&self) -> bool {
        self.inner.is_z_matrix()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner: AnyMatrix::from_json(&value).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Matrix(dim={}, exact={})", self.inner.dim(), self.inner.is_exact())
    }
}

/// Undirected simple graph. Vertices are 1-based at this boundary.
#[pyclass(frozen, from_py_object, module = "mpoly")]
#[derive(Clone)]
pub struct Graph {
    inner: CoreGraph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        if edges.iter().any(|&(u, v)| u == 0 || v == 0) {
            return Err(PyValueError::new_err("vertices are 1-based"));
        }
        let inner = CoreGraph::from_edges(n, edges.into_iter().map(|(u, v)| (u - 1, v - 1))).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(Self { inner: CoreGraph::from_dimacs(text).map_err(err)? })
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().map(|(u, v)| (u + 1, v + 1)).collect()
    }

    /// `(alpha, witness)` from the exact branch-and-bound oracle.
    fn max_independent_set(&self) -> PyResult<(usize, Vec<usize>)> {
        let r = oracle::max_independent_set(&self.inner).map_err(err)?;
        Ok((r.alpha, r.witness.into_iter().map(|v| v + 1).collect()))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

fn unwrap_all(ms: &[PyRef<'_, Matrix>]) -> Vec<AnyMatrix> {
    ms.iter().map(|m| m.inner.clone()).collect()
}

fn tolerance(tol: Option<f64>) -> PyResult<Tolerance> {
    tol.map(Tolerance::new).transpose().map_err(err).map(Option::unwrap_or_default)
}

/// Full five-condition certification report as a dict.
#[pyfunction]
#[pyo3(signature = (m, tol = None))]
fn certify(py: Python<'_>, m: PyRef<'_, Matrix>, tol: Option<f64>) -> PyResult<Py<PyAny>> {
    to_py(py, &cert::certify(&m.inner, tolerance(tol)?))
}

/// The `n` gadget matrices of the reduction for `(g, j)`.
#[pyfunction]
fn build_instance(g: PyRef<'_, Graph>, j: usize) -> PyResult<Vec<Matrix>> {
    let inst = reduction::build_instance(&g.inner, j).map_err(err)?;
    Ok(inst.as_any().into_iter().map(|inner| Matrix { inner }).collect())
}

#[pyfunction]
fn nonneg_parts(g: PyRef<'_, Graph>, j: usize) -> PyResult<Vec<Matrix>> {
    let parts = reduction::nonneg_parts(&g.inner, j).map_err(err)?;
    Ok(parts.into_iter().map(|m| Matrix { inner: AnyMatrix::Exact(m) }).collect())
}

/// `1/j - pi^T (I + C) pi` as a `Fraction`; `pi` entries are exact.
#[pyfunction]
fn det_closed_form(py: Python<'_>, g: PyRef<'_, Graph>, j: usize, pi: Vec<Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let pi = weights_exact(&pi)?;
    fraction(py, &reduction::det_closed_form(&g.inner, j, &pi).map_err(err)?)
}

/// Exact convex combination when every input and weight is exact, float otherwise.
#[pyfunction]
fn convex_combination(ms: Vec<PyRef<'_, Matrix>>, pi: Vec<Bound<'_, PyAny>>) -> PyResult<Matrix> {
    let ms = unwrap_all(&ms);
    let exact = weights_exact(&pi)?;
    let all_exact = ms.iter().all(AnyMatrix::is_exact);
    let inner = reduction::convex_combination_any(&ms, &exact.to_f64(), all_exact.then_some(&exact)).map_err(err)?;
    Ok(Matrix { inner })
}

#[pyfunction]
#[pyo3(signature = (g, restarts = None, iters = 10_000, seed = 0))]
fn motzkin_straus_min(py: Python<'_>, g: PyRef<'_, Graph>, restarts: Option<usize>, iters: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let restarts = restarts.unwrap_or(20 * g.inner.vertex_count());
    to_py(py, &oracle::motzkin_straus_min(&g.inner, restarts, iters, seed).map_err(err)?)
}

fn config(budget: u64, seed: u64, tol: Option<f64>) -> PyResult<SearchConfig> {
    Ok(SearchConfig { budget, seed, tol: tolerance(tol)?, ..SearchConfig::default() })
}

#[pyfunction]
#[pyo3(signature = (ms, budget = 50_000, seed = 0, tol = None))]
fn search_general(py: Python<'_>, ms: Vec<PyRef<'_, Matrix>>, budget: u64, seed: u64, tol: Option<f64>) -> PyResult<Py<PyAny>> {
    let (inputs, cfg) = (unwrap_all(&ms), config(budget, seed, tol)?);
    let out = py.detach(|| search::search_general(&inputs, &cfg)).map_err(err)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (ms, tol = 1e-6))]
fn search_symmetric(py: Python<'_>, ms: Vec<PyRef<'_, Matrix>>, tol: f64) -> PyResult<Py<PyAny>> {
    let cfg = SymmetricConfig { tol, ..SymmetricConfig::default() };
    to_py(py, &search::search_symmetric(&unwrap_all(&ms), &cfg).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (ms, budget = 50_000, seed = 0, tol = None))]
fn minimize_spectral_radius(py: Python<'_>, ms: Vec<PyRef<'_, Matrix>>, budget: u64, seed: u64, tol: Option<f64>) -> PyResult<Py<PyAny>> {
    to_py(py, &search::minimize_spectral_radius(&unwrap_all(&ms), &config(budget, seed, tol)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (ms, budget = 50_000, seed = 0, tol = None))]
fn hurwitz_search(py: Python<'_>, ms: Vec<PyRef<'_, Matrix>>, budget: u64, seed: u64, tol: Option<f64>) -> PyResult<Py<PyAny>> {
    to_py(py, &search::hurwitz_search(&unwrap_all(&ms), &config(budget, seed, tol)?).map_err(err)?)
}

#[pymodule]
fn mpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(build_instance, m)?)?;
    m.add_function(wrap_pyfunction!(nonneg_parts, m)?)?;
    m.add_function(wrap_pyfunction!(det_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(convex_combination, m)?)?;
    m.add_function(wrap_pyfunction!(motzkin_straus_min, m)?)?;
    m.add_function(wrap_pyfunction!(search_general, m)?)?;
    m.add_function(wrap_pyfunction!(search_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_search, m)?)?;
    Ok(())
}
