//! Python bindings: sequences, exponent pairs, the norm engine, witness
//! generators, parameter solving, and the continuous-bridge estimates.

use morrey::{
    self as core, continuous_norm_grid, discrete_norm, embed_step, integer_odd_norm,
    weak_continuous_norm_grid, MorreyError, SolveMode,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: MorreyError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Validated exponent pair (p, q), q = inf allowed via float("inf").
#[pyclass(name = "Exponents")]
#[derive(Clone)]
struct PyExponents {
    inner: core::Exponents,
}

#[pymethods]
impl PyExponents {
    #[new]
    fn new(p: f64, q: f64) -> PyResult<Self> {
        Ok(PyExponents {
            inner: core::Exponents::new(p, q).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    fn __repr__(&self) -> String {
        format!("Exponents{}", self.inner)
    }
}

/// Finitely supported sequence over Z with positive values.
#[pyclass(name = "SparseSequence")]
#[derive(Clone)]
struct PySequence {
    inner: core::SparseSequence,
}

#[pymethods]
impl PySequence {
    #[new]
    fn new(pairs: Vec<(i64, f64)>) -> PyResult<Self> {
        Ok(PySequence {
            inner: core::SparseSequence::from_pairs(pairs).map_err(err)?,
        })
    }

    #[staticmethod]
    fn indicator(indices: Vec<i64>) -> Self {
        PySequence {
            inner: core::SparseSequence::indicator(indices),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySequence {
            inner: core::SparseSequence::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PySequence {
            inner: core::SparseSequence::load(path).map_err(err)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(err)
    }

    fn entries(&self) -> Vec<(i64, f64)> {
        self.inner.entries().to_vec()
    }

    fn value_at(&self, j: i64) -> f64 {
        self.inner.value_at(j)
    }

    fn scale(&self, c: f64) -> PyResult<Self> {
        Ok(PySequence {
            inner: self.inner.scale(c).map_err(err)?,
        })
    }

    fn truncate_abs(&self, bound: i64) -> Self {
        PySequence {
            inner: self.inner.truncate_abs(bound),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("SparseSequence({} support points)", self.inner.len())
    }
}

fn norm_result_dict(py: Python<'_>, r: &core::NormResult) -> PyResult<Py<PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("value", r.value)?;
    match r.witness_window {
        Some(w) => d.set_item("witness_window", (w.m, w.n))?,
        None => d.set_item("witness_window", py.None())?,
    }
    d.set_item("witness_threshold", r.witness_threshold)?;
    Ok(d.into())
}

/// Discrete Morrey norm with witness window.
#[pyfunction(name = "discrete_norm")]
fn py_discrete_norm(py: Python<'_>, x: &PySequence, e: &PyExponents) -> PyResult<Py<PyDict>> {
    norm_result_dict(py, &discrete_norm(&x.inner, &e.inner))
}

/// Weak-type quasi-norm with witness threshold.
#[pyfunction(name = "weak_norm")]
fn py_weak_norm(py: Python<'_>, x: &PySequence, e: &PyExponents) -> PyResult<Py<PyDict>> {
    norm_result_dict(py, &core::weak_norm(&x.inner, &e.inner))
}

#[pyfunction(name = "sup_norm")]
fn py_sup_norm(x: &PySequence) -> f64 {
    core::sup_norm(&x.inner)
}

/// Brute-force reference value (guarded against huge spans).
#[pyfunction(name = "dense_oracle_norm")]
#[pyo3(signature = (x, e, margin = 2))]
fn py_dense_oracle_norm(x: &PySequence, e: &PyExponents, margin: u64) -> PyResult<f64> {
    Ok(core::dense_oracle_norm(&x.inner, &e.inner, margin)
        .map_err(err)?
        .value)
}

#[pyfunction(name = "gen_block")]
fn py_gen_block(k: u64) -> PySequence {
    PySequence {
        inner: core::gen_block(k),
    }
}

#[pyfunction(name = "gen_power_sequence")]
fn py_gen_power_sequence(q2: f64, k: u64) -> PyResult<PySequence> {
    Ok(PySequence {
        inner: core::gen_power_sequence(q2, k).map_err(err)?,
    })
}

#[pyfunction(name = "gen_lacunary")]
fn py_gen_lacunary(
    p1: f64,
    p2: f64,
    q: f64,
    v: u64,
    w: u64,
    k0: u64,
    n_max: u64,
) -> PyResult<PySequence> {
    let params = core::CounterexampleParams {
        p1,
        p2,
        q,
        v,
        w,
        k0,
        n_max,
    };
    Ok(PySequence {
        inner: core::gen_lacunary(&params).map_err(err)?,
    })
}

fn parse_mode(mode: &str) -> PyResult<SolveMode> {
    match mode {
        "thm1" => Ok(SolveMode::Thm1),
        "thm8" => Ok(SolveMode::Thm8),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'thm1' or 'thm8', got '{other}'"
        ))),
    }
}

/// Smallest (v, w) satisfying the lacunary parameter inequalities.
#[pyfunction(name = "solve_vw")]
fn py_solve_vw(p1: f64, p2: f64, q: f64, mode: &str) -> PyResult<(u64, u64)> {
    core::solve_vw(p1, p2, q, parse_mode(mode)?).map_err(err)
}

#[pyfunction(name = "compute_k0")]
fn py_compute_k0(v: u64, w: u64) -> PyResult<u64> {
    core::compute_k0(v, w).map_err(err)
}

/// The weak-to-strong embedding constant 2^{1/p1} (p1/(p2-p1))^{1/p2}.
#[pyfunction(name = "t8_bound_constant")]
fn py_t8_bound_constant(p1: f64, p2: f64, q: f64) -> PyResult<f64> {
    core::t8_bound_constant(p1, p2, q).map_err(err)
}

fn grid_dict(py: Python<'_>, g: &core::GridNormEstimate) -> PyResult<Py<PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("m", g.m)?;
    d.set_item("value", g.value)?;
    d.set_item("witness", g.witness)?;
    d.set_item("witness_threshold", g.witness_threshold)?;
    Ok(d.into())
}

/// Grid-restricted continuous Morrey norm of the step embedding of x.
#[pyfunction(name = "continuous_norm_grid")]
#[pyo3(signature = (x, e, m = 8, weak = false))]
fn py_continuous_norm_grid(
    py: Python<'_>,
    x: &PySequence,
    e: &PyExponents,
    m: u64,
    weak: bool,
) -> PyResult<Py<PyDict>> {
    let f = embed_step(&x.inner, e.inner.p()).map_err(err)?;
    let g = if weak {
        weak_continuous_norm_grid(&f, &e.inner, m).map_err(err)?
    } else {
        continuous_norm_grid(&f, &e.inner, m).map_err(err)?
    };
    grid_dict(py, &g)
}

/// Integer-aligned odd-length restriction; reproduces the discrete norm.
#[pyfunction(name = "integer_odd_norm")]
fn py_integer_odd_norm(py: Python<'_>, x: &PySequence, e: &PyExponents) -> PyResult<Py<PyDict>> {
    let f = embed_step(&x.inner, e.inner.p()).map_err(err)?;
    grid_dict(py, &integer_odd_norm(&f, &e.inner).map_err(err)?)
}

#[pymodule]
fn morrey_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExponents>()?;
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(py_discrete_norm, m)?)?;
    m.add_function(wrap_pyfunction!(py_weak_norm, m)?)?;
    m.add_function(wrap_pyfunction!(py_sup_norm, m)?)?;
    m.add_function(wrap_pyfunction!(py_dense_oracle_norm, m)?)?;
    m.add_function(wrap_pyfunction!(py_gen_block, m)?)?;
    m.add_function(wrap_pyfunction!(py_gen_power_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(py_gen_lacunary, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve_vw, m)?)?;
    m.add_function(wrap_pyfunction!(py_compute_k0, m)?)?;
    m.add_function(wrap_pyfunction!(py_t8_bound_constant, m)?)?;
    m.add_function(wrap_pyfunction!(py_continuous_norm_grid, m)?)?;
    m.add_function(wrap_pyfunction!(py_integer_odd_norm, m)?)?;
    Ok(())
}
