//! Python bindings for `unimod`.
//!
//! Integers cross the boundary as Python `int` (arbitrary size), exact
//! rationals as `fractions.Fraction`, and fixed-point densities as decimal
//! strings alongside a float approximation.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use unimod::experiments::DEFAULT_BUDGET;
use unimod::{BoxSpec, DensityReport, Error, IntMatrix, PrimeSet, Rational};

create_exception!(pyunimod, NotUnimodularError, PyValueError, "Matrix cannot be completed to GL_n(Z).");
create_exception!(pyunimod, BudgetExceededError, PyRuntimeError, "Enumeration would exceed its budget.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotUnimodular { ref gcd } => NotUnimodularError::new_err((e.to_string(), gcd.clone())),
        Error::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        Error::Domain(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

/// Integer matrix with at most as many rows as columns for most operations.
#[pyclass(name = "Matrix", module = "pyunimod", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatrix {
    inner: IntMatrix,
}

impl From<IntMatrix> for PyMatrix {
    fn from(inner: IntMatrix) -> Self {
        PyMatrix { inner }
    }
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<BigInt>>) -> PyResult<Self> {
        IntMatrix::from_rows(rows).map(Into::into).map_err(to_py)
    }

    /// Parses the `k n` header plus rows text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        unimod::matrix_file::parse(text).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        IntMatrix::identity(n).into()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<BigInt>> {
        self.inner.to_rows()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    fn determinant(&self) -> PyResult<BigInt> {
        self.inner.determinant().map_err(to_py)
    }

    fn is_unimodular(&self, py: Python<'_>) -> PyResult<bool> {
        py.detach(|| unimod::is_unimodular(&self.inner)).map_err(to_py)
    }

    /// gcd of the full-rank minors; 1 exactly when unimodular.
    fn minor_gcd(&self, py: Python<'_>) -> PyResult<BigInt> {
        py.detach(|| unimod::full_rank_minor_gcd(&self.inner)).map_err(to_py)
    }

    /// All `t × t` minors in lexicographic (rows, columns) order.
    fn minors(&self, py: Python<'_>, t: usize) -> PyResult<Vec<BigInt>> {
        py.detach(|| unimod::minors(&self.inner, t)).map(|m| m.values).map_err(to_py)
    }

    /// Returns `(H, U, det_u)` with `self == H @ U`.
    fn hnf(&self, py: Python<'_>) -> PyResult<(PyMatrix, PyMatrix, i32)> {
        let res = py.detach(|| unimod::hnf(&self.inner)).map_err(to_py)?;
        Ok((res.h.into(), res.u.into(), res.det_u))
    }

    /// Returns `(S, invariants, L, R)` with `L @ self @ R == S`.
    fn snf(&self, py: Python<'_>) -> PyResult<(PyMatrix, Vec<BigInt>, PyMatrix, PyMatrix)> {
        let res = py.detach(|| unimod::snf(&self.inner)).map_err(to_py)?;
        Ok((res.s.into(), res.invariants, res.l.into(), res.r.into()))
    }

    /// Square matrix of determinant ±1 whose last rows are `self`.
    fn complete(&self, py: Python<'_>) -> PyResult<PyMatrix> {
        py.detach(|| unimod::complete_to_gl(&self.inner)).map(Into::into).map_err(to_py)
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.inner.mul(&other.inner).map(Into::into).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        let rows: Vec<String> = self
            .inner
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("Matrix([{}])", rows.join(", "))
    }
}

/// Fixed-point density with a rigorous absolute error bound.
#[pyclass(name = "Density", module = "pyunimod", frozen)]
struct PyDensity {
    report: DensityReport,
}

#[pymethods]
impl PyDensity {
    /// Decimal digits of the value.
    #[getter]
    fn value(&self) -> String {
        self.report.value.to_string()
    }

    #[getter]
    fn abs_error_bound(&self) -> f64 {
        self.report.abs_error_bound
    }

    #[getter]
    fn codimension(&self) -> u32 {
        self.report.codimension
    }

    #[getter]
    fn product_cutoff(&self) -> Option<u32> {
        self.report.terms.product_cutoff
    }

    fn __float__(&self) -> f64 {
        self.report.value_f64()
    }

    fn __repr__(&self) -> String {
        format!("Density({} ± {:e})", self.report.value, self.report.abs_error_bound)
    }
}

/// Density of unimodular `k × n` integer matrices.
#[pyfunction]
#[pyo3(signature = (k, n, tol = 1e-12))]
fn density_exact(k: u32, n: u32, tol: f64) -> PyResult<PyDensity> {
    unimod::density_exact(k, n, tol).map(|report| PyDensity { report }).map_err(to_py)
}

/// Limit of the density as `n → ∞` with `n - k = d` fixed.
#[pyfunction]
#[pyo3(signature = (d, tol = 1e-12))]
fn density_limit(d: u32, tol: f64) -> PyResult<PyDensity> {
    unimod::density_limit(d, tol).map(|report| PyDensity { report }).map_err(to_py)
}

/// `(value, abs_error_bound)` for ζ(j), value as a decimal string.
#[pyfunction]
#[pyo3(signature = (j, tol = 1e-12))]
fn zeta(j: u32, tol: f64) -> PyResult<(String, f64)> {
    unimod::zeta(j, tol).map(|z| (z.value.to_string(), z.abs_error_bound)).map_err(to_py)
}

#[pyfunction]
fn local_density<'py>(py: Python<'py>, primes: Vec<u64>, k: u32, n: u32) -> PyResult<Bound<'py, PyAny>> {
    let set = PrimeSet::new(primes).map_err(to_py)?;
    fraction(py, &unimod::local_density(&set, k, n).map_err(to_py)?)
}

#[pyfunction]
fn count_full_rank_mod_p(p: u64, k: u32, n: u32) -> PyResult<BigInt> {
    unimod::count_full_rank_mod_p(p, k, n).map_err(to_py)
}

#[pyfunction]
fn divisibility_defect<'py>(py: Python<'py>, p: u64, k: u32, n: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &unimod::divisibility_defect(p, k, n).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (k, n, bound, samples, seed, shards = 1))]
fn estimate_density<'py>(
    py: Python<'py>,
    k: u32,
    n: u32,
    bound: u64,
    samples: u64,
    seed: u64,
    shards: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = BoxSpec::new(k, n, bound).map_err(to_py)?;
    let rep = py
        .detach(|| unimod::estimate_density(spec, samples, seed, shards))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("k", k)?;
    d.set_item("n", n)?;
    d.set_item("bound", bound)?;
    d.set_item("samples", rep.samples)?;
    d.set_item("hits", rep.hits)?;
    d.set_item("estimate", rep.estimate)?;
    d.set_item("std_error", rep.std_error)?;
    d.set_item("seed", rep.seed)?;
    d.set_item("shards", rep.shards)?;
    d.set_item("theory_value", rep.theory_value)?;
    d.set_item("z_score", rep.z_score)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (k, n, bound, budget = DEFAULT_BUDGET))]
fn exhaustive_density<'py>(py: Python<'py>, k: u32, n: u32, bound: u64, budget: u64) -> PyResult<Bound<'py, PyDict>> {
    let spec = BoxSpec::new(k, n, bound).map_err(to_py)?;
    let rep = py.detach(|| unimod::exhaustive_density(spec, budget)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("k", k)?;
    d.set_item("n", n)?;
    d.set_item("bound", bound)?;
    d.set_item("total", rep.total)?;
    d.set_item("hits", rep.hits)?;
    d.set_item("density", fraction(py, &rep.density)?)?;
    Ok(d)
}

#[pymodule]
fn pyunimod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyDensity>()?;
    m.add("NotUnimodularError", m.py().get_type::<NotUnimodularError>())?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_function(wrap_pyfunction!(density_exact, m)?)?;
    m.add_function(wrap_pyfunction!(density_limit, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(local_density, m)?)?;
    m.add_function(wrap_pyfunction!(count_full_rank_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(divisibility_defect, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_density, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_density, m)?)?;
    Ok(())
}
