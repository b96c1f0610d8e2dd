use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use vn_entropy::{Error, StepSchedule, SystemDims};

fn to_py(err: Error) -> PyErr {
    if err.is_numerical() {
        PyRuntimeError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn dims(m: usize, n: usize) -> PyResult<SystemDims> {
    SystemDims::new(m, n).map_err(to_py)
}

/// Exact mean, variance and second moment of the entanglement entropy.
#[pyclass(name = "EntropyStats", frozen, get_all)]
struct PyEntropyStats {
    m: usize,
    n: usize,
    mean: f64,
    variance: f64,
    second_moment: f64,
}

#[pymethods]
impl PyEntropyStats {
    fn __repr__(&self) -> String {
        format!(
            "EntropyStats(m={}, n={}, mean={}, variance={}, second_moment={})",
            self.m, self.n, self.mean, self.variance, self.second_moment
        )
    }
}

/// Sampled statistics with standard errors.
#[pyclass(name = "EstimatedStats", frozen, get_all)]
struct PyEstimatedStats {
    m: usize,
    n: usize,
    samples: usize,
    mean: f64,
    mean_se: f64,
    variance: f64,
    variance_se: f64,
    second_moment: f64,
    second_moment_se: f64,
    purity: f64,
    purity_se: f64,
}

#[pymethods]
impl PyEstimatedStats {
    fn __repr__(&self) -> String {
        format!(
            "EstimatedStats(m={}, n={}, samples={}, mean={}±{}, variance={}±{})",
            self.m, self.n, self.samples, self.mean, self.mean_se, self.variance, self.variance_se
        )
    }
}

/// Polynomial and digamma coefficients of the variance formula.
#[pyclass(name = "Coefficients", frozen, get_all)]
struct PyCoefficients {
    c1: f64,
    c2: f64,
    c3: Option<f64>,
    c4: f64,
    c5: f64,
    c6: f64,
    c7: f64,
    c8: Option<f64>,
    c3_minus_c8: f64,
}

#[pyfunction]
fn mean(m: usize, n: usize) -> PyResult<f64> {
    Ok(vn_entropy::page_mean(dims(m, n)?))
}

#[pyfunction]
fn variance(m: usize, n: usize) -> PyResult<f64> {
    Ok(vn_entropy::vpo_variance(dims(m, n)?))
}

#[pyfunction]
fn exact_stats(m: usize, n: usize) -> PyResult<PyEntropyStats> {
    let s = vn_entropy::exact_entropy_stats(dims(m, n)?);
    Ok(PyEntropyStats {
        m,
        n,
        mean: s.mean,
        variance: s.variance,
        second_moment: s.second_moment,
    })
}

#[pyfunction]
fn coefficients(m: usize, n: usize) -> PyResult<PyCoefficients> {
    let c = vn_entropy::coefficients(dims(m, n)?);
    Ok(PyCoefficients {
        c1: c.c1,
        c2: c.c2,
        c3: c.c3().ok(),
        c4: c.c4,
        c5: c.c5,
        c6: c.c6,
        c7: c.c7,
        c8: c.c8().ok(),
        c3_minus_c8: c.c3_minus_c8,
    })
}

/// E[p_r1 p_r2] for the power sums of the reduced spectrum.
#[pyfunction]
fn two_point_moment(m: usize, n: usize, r1: f64, r2: f64) -> PyResult<f64> {
    vn_entropy::two_point_moment(dims(m, n)?, r1, r2)
        .map(|t| t.value)
        .map_err(to_py)
}

/// Second moment by extrapolated differentiation; returns (value, error).
#[pyfunction]
#[pyo3(signature = (m, n, step=1e-2, levels=3, tolerance=1e-7))]
fn second_moment_numeric(
    m: usize,
    n: usize,
    step: f64,
    levels: u32,
    tolerance: f64,
) -> PyResult<(f64, f64)> {
    let schedule = StepSchedule {
        base_step: step,
        levels,
        tolerance,
    };
    let est = vn_entropy::second_moment_numeric(dims(m, n)?, &schedule).map_err(to_py)?;
    Ok((est.value, est.error))
}

#[pyfunction]
#[pyo3(signature = (m, n, samples=100_000, seed=42, batches=32))]
fn estimate_stats(
    py: Python<'_>,
    m: usize,
    n: usize,
    samples: usize,
    seed: u64,
    batches: usize,
) -> PyResult<PyEstimatedStats> {
    let d = dims(m, n)?;
    let e = py
        .detach(|| vn_entropy::estimate_stats(d, samples, seed, batches))
        .map_err(to_py)?;
    Ok(PyEstimatedStats {
        m,
        n,
        samples: e.samples,
        mean: e.mean,
        mean_se: e.mean_se,
        variance: e.variance,
        variance_se: e.variance_se,
        second_moment: e.second_moment,
        second_moment_se: e.second_moment_se,
        purity: e.purity,
        purity_se: e.purity_se,
    })
}

#[pymodule]
fn vn_entropy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEntropyStats>()?;
    m.add_class::<PyEstimatedStats>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_function(wrap_pyfunction!(mean, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(exact_stats, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(two_point_moment, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_stats, m)?)?;
    Ok(())
}
