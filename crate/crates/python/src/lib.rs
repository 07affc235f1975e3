use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use weaklam::harness::{run_suite as run, GenConfig};
use weaklam::marked::marked_redexes;
use weaklam::{Barrier, Error, LTerm, MTerm, Position, Term};

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownSuite(s) => PyKeyError::new_err(s),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn barrier(vars: Option<Vec<String>>) -> Barrier {
    Barrier::new(vars.unwrap_or_default().iter().map(String::as_str))
}

fn position(p: Vec<u8>) -> PyResult<Position> {
    if p.iter().any(|d| *d > 1) {
        return Err(PyValueError::new_err("positions are lists of 0 and 1"));
    }
    Ok(Position::from(p))
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A plain lambda term; equality is alpha-equivalence.
#[pyclass(name = "Term", skip_from_py_object, frozen, eq, hash, module = "weaklam")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTerm(Term);

#[pymethods]
impl PyTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        weaklam::parse_term(text).map(PyTerm).map_err(|e| err(e.into()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.0.to_string())
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn free_vars(&self) -> Vec<String> {
        self.0.free_vars().iter().map(|x| x.to_string()).collect()
    }

    fn positions(&self) -> Vec<Vec<u8>> {
        self.0.positions().iter().map(|p| p.dirs().to_vec()).collect()
    }

    fn subterm_at(&self, p: Vec<u8>) -> PyResult<PyTerm> {
        self.0.subterm_at(&position(p)?).map(|t| PyTerm(t.clone())).map_err(err)
    }

    fn replace_at(&self, p: Vec<u8>, n: &PyTerm) -> PyResult<PyTerm> {
        self.0.replace_at(&position(p)?, n.0.clone()).map(PyTerm).map_err(err)
    }

    fn subst(&self, x: &str, n: &PyTerm) -> PyTerm {
        PyTerm(self.0.subst(&x.into(), &n.0))
    }

    fn label(&self) -> PyLTerm {
        PyLTerm(weaklam::label_initial(&self.0))
    }

    fn mark(&self) -> PyMTerm {
        PyMTerm(weaklam::mark_initial(&self.0))
    }
}

/// A labeled term.
#[pyclass(name = "LabeledTerm", skip_from_py_object, frozen, eq, hash, module = "weaklam")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyLTerm(LTerm);

#[pymethods]
impl PyLTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        weaklam::parse_labeled(text).map(PyLTerm).map_err(|e| err(e.into()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LabeledTerm({:?})", self.0.to_string())
    }

    fn erase(&self) -> PyTerm {
        PyTerm(self.0.erase())
    }

    fn free_vars(&self) -> Vec<String> {
        self.0.free_vars().iter().map(|x| x.to_string()).collect()
    }

    fn is_initially_labeled(&self) -> bool {
        self.0.is_initially_labeled()
    }
}

/// A term whose starred redexes are the ones that may be contracted.
#[pyclass(name = "MarkedTerm", skip_from_py_object, frozen, eq, hash, module = "weaklam")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMTerm(MTerm);

#[pymethods]
impl PyMTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        weaklam::parse_marked(text).map(PyMTerm).map_err(|e| err(e.into()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MarkedTerm({:?})", self.0.to_string())
    }

    fn erase(&self) -> PyTerm {
        PyTerm(self.0.erase_stars())
    }

    fn redexes(&self) -> Vec<Vec<u8>> {
        marked_redexes(&self.0).iter().map(|p| p.dirs().to_vec()).collect()
    }

    fn contract(&self, p: Vec<u8>) -> PyResult<PyMTerm> {
        weaklam::marked_contract(&self.0, &position(p)?).map(PyMTerm).map_err(err)
    }

    /// Created redexes as dicts with keys `case`, `created` and `contracted`.
    fn creations(&self, py: Python<'_>, p: Vec<u8>) -> PyResult<Vec<Py<PyAny>>> {
        let found = weaklam::detect_creations(&self.0, &position(p)?).map_err(err)?;
        found.iter().map(|c| to_py(py, &c.to_json())).collect()
    }
}

#[pyfunction]
#[pyo3(signature = (m, barrier=None))]
fn weak_redexes(m: &PyTerm, barrier: Option<Vec<String>>) -> Vec<Vec<u8>> {
    weaklam::weak_redexes(&m.0, &self::barrier(barrier))
        .iter()
        .map(|p| p.dirs().to_vec())
        .collect()
}

#[pyfunction]
#[pyo3(signature = (m, p, barrier=None))]
fn weak_contract(m: &PyTerm, p: Vec<u8>, barrier: Option<Vec<String>>) -> PyResult<PyTerm> {
    weaklam::weak_contract(&m.0, &position(p)?, &self::barrier(barrier))
        .map(PyTerm)
        .map_err(err)
}

/// The normalization trace as a list of step dicts.
#[pyfunction]
#[pyo3(signature = (m, barrier=None, fuel=1000))]
fn weak_normalize(py: Python<'_>, m: &PyTerm, barrier: Option<Vec<String>>, fuel: usize) -> PyResult<Py<PyAny>> {
    let n = weaklam::weak_normalize(&m.0, &self::barrier(barrier), fuel);
    to_py(py, &n.trace.to_json(Some(n.status)))
}

#[pyfunction]
#[pyo3(signature = (a, barrier=None))]
fn labeled_normalize(a: &PyLTerm, barrier: Option<Vec<String>>) -> PyLTerm {
    PyLTerm(weaklam::labeled_normalize(&a.0, &self::barrier(barrier)).result().clone())
}

#[pyfunction]
#[pyo3(signature = (m, barrier=None, k=0))]
fn enumerate_supersteps(m: &PyTerm, barrier: Option<Vec<String>>, k: usize) -> PyResult<Vec<PyTerm>> {
    let out = weaklam::enumerate_supersteps(&m.0, &self::barrier(barrier), k).map_err(err)?;
    Ok(out.into_iter().map(PyTerm).collect())
}

/// The derivation as a dict, or None when `m` does not superstep to `n`.
#[pyfunction]
#[pyo3(signature = (m, n, barrier=None, k=0))]
fn derive_superstep(py: Python<'_>, m: &PyTerm, n: &PyTerm, barrier: Option<Vec<String>>, k: usize) -> PyResult<Option<Py<PyAny>>> {
    let d = weaklam::derive_superstep(&m.0, &n.0, &self::barrier(barrier), k).map_err(err)?;
    d.map(|d| to_py(py, &d.to_json())).transpose()
}

/// `A⇓{S,k}`; a plain term is labeled initially first.
#[pyfunction]
#[pyo3(signature = (a, barrier=None, k=0))]
fn full_superdev(a: &Bound<'_, PyAny>, barrier: Option<Vec<String>>, k: usize) -> PyResult<Option<PyLTerm>> {
    let a = if let Ok(t) = a.cast::<PyTerm>() {
        weaklam::label_initial(&t.get().0)
    } else {
        a.cast::<PyLTerm>()?.get().0.clone()
    };
    Ok(weaklam::full_superdev(&a, &self::barrier(barrier), k).map(PyLTerm))
}

#[pyfunction]
#[pyo3(signature = (m, barrier=None))]
fn complete_superstep(m: &PyTerm, barrier: Option<Vec<String>>) -> PyTerm {
    PyTerm(weaklam::complete_superstep(&m.0, &self::barrier(barrier)))
}

#[pyfunction]
fn suites() -> Vec<(&'static str, &'static str)> {
    weaklam::harness::suites().iter().map(|s| (s.name, s.description)).collect()
}

/// Runs a property suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (name, count=1000, seed=1, max_size=12))]
fn run_suite(py: Python<'_>, name: &str, count: usize, seed: u64, max_size: usize) -> PyResult<Py<PyAny>> {
    let cfg = GenConfig {
        count,
        seed,
        max_size,
        ..GenConfig::default()
    };
    let report = py.detach(|| run(name, &cfg)).map_err(err)?;
    to_py(py, &report.to_json(false))
}

#[pymodule]
#[pyo3(name = "weaklam")]
fn weaklam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyLTerm>()?;
    m.add_class::<PyMTerm>()?;
    m.add_function(wrap_pyfunction!(weak_redexes, m)?)?;
    m.add_function(wrap_pyfunction!(weak_contract, m)?)?;
    m.add_function(wrap_pyfunction!(weak_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(labeled_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_supersteps, m)?)?;
    m.add_function(wrap_pyfunction!(derive_superstep, m)?)?;
    m.add_function(wrap_pyfunction!(full_superdev, m)?)?;
    m.add_function(wrap_pyfunction!(complete_superstep, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
