//! Python bindings: the classification entry points, the verification
//! suites, and the core algebra types, exposed in-process.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spinact::actions::{ActionSpec, Family};
use spinact::lifting::classify;
use spinact::octonion::Octonion as CoreOctonion;
use spinact::report::{Report, ReportMeta};

fn to_py_err(err: spinact::error::Error) -> PyErr {
    PyRuntimeError::new_err(err.to_string())
}

fn parse_family(token: &str) -> PyResult<Family> {
    Family::parse(token).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// An element of the eight-dimensional real division algebra.
#[pyclass(name = "Octonion", skip_from_py_object)]
#[derive(Clone)]
struct PyOctonion {
    inner: CoreOctonion,
}

#[pymethods]
impl PyOctonion {
    /// Build from eight coefficients `(1, i1, ..., i7)`.
    #[new]
    fn new(coeffs: [f64; 8]) -> Self {
        PyOctonion {
            inner: CoreOctonion::new(coeffs),
        }
    }

    /// The basis element `i_k` (`k = 0` is the unit).
    #[staticmethod]
    fn unit(k: usize) -> PyResult<Self> {
        if k >= 8 {
            return Err(PyValueError::new_err("basis index must be < 8"));
        }
        Ok(PyOctonion {
            inner: CoreOctonion::unit(k),
        })
    }

    fn coeffs(&self) -> [f64; 8] {
        self.inner.coeffs
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn conj(&self) -> Self {
        PyOctonion {
            inner: self.inner.conj(),
        }
    }

    fn __add__(&self, other: &PyOctonion) -> Self {
        PyOctonion {
            inner: self.inner + other.inner,
        }
    }

    fn __mul__(&self, other: &PyOctonion) -> Self {
        PyOctonion {
            inner: self.inner * other.inner,
        }
    }

    fn __neg__(&self) -> Self {
        PyOctonion { inner: -self.inner }
    }

    fn __repr__(&self) -> String {
        format!("Octonion({:?})", self.inner.coeffs)
    }
}

/// Classify one action; returns the record as a JSON string.
#[pyfunction]
#[pyo3(signature = (family, n = 0, steps = 256))]
fn classify_json(family: &str, n: usize, steps: usize) -> PyResult<String> {
    let family = parse_family(family)?;
    let spec = ActionSpec::new(family, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let record = classify(&spec, steps).map_err(to_py_err)?;
    serde_json::to_string(&record).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Whether the sphere's spin structure is invariant under the given action.
#[pyfunction]
#[pyo3(signature = (family, n = 0, steps = 256))]
fn is_invariant(family: &str, n: usize, steps: usize) -> PyResult<bool> {
    let family = parse_family(family)?;
    let spec = ActionSpec::new(family, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let record = classify(&spec, steps).map_err(to_py_err)?;
    Ok(matches!(record.verdict, spinact::lifting::Verdict::Yes))
}

/// Full classification table over the default ranges, as a JSON report.
#[pyfunction]
#[pyo3(signature = (steps = 256))]
fn table_json(steps: usize) -> PyResult<String> {
    let mut records = Vec::new();
    let mut wall_ms = Vec::new();
    for family in Family::ALL {
        let (min, max) = family.supported_range();
        for n in min..=max {
            let spec =
                ActionSpec::new(family, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
            let started = std::time::Instant::now();
            records.push(classify(&spec, steps).map_err(to_py_err)?);
            wall_ms.push(started.elapsed().as_secs_f64() * 1e3);
        }
    }
    let report = Report {
        records,
        meta: ReportMeta {
            steps,
            tolerance: 1e-9,
            seed: spinact::DEFAULT_SEED,
            wall_ms,
        },
    };
    Ok(report.to_json())
}

/// Run a verification suite; returns `(name, residual, tolerance, passed)`
/// tuples.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = spinact::DEFAULT_SEED, trials = 100))]
fn verify_suite(suite: &str, seed: u64, trials: usize) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let mut checks = Vec::new();
    match suite {
        "algebra" => checks.extend(spinact::suites::algebra_suite(seed).map_err(to_py_err)?),
        "characters" => {
            checks.extend(spinact::suites::character_suite(seed, trials).map_err(to_py_err)?)
        }
        "appendix" => checks.extend(spinact::suites::appendix_suite(seed).map_err(to_py_err)?),
        "all" => {
            checks.extend(spinact::suites::algebra_suite(seed).map_err(to_py_err)?);
            checks.extend(spinact::suites::character_suite(seed, trials).map_err(to_py_err)?);
            checks.extend(spinact::suites::appendix_suite(seed).map_err(to_py_err)?);
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown suite '{other}' (expected algebra, characters, appendix, all)"
            )))
        }
    }
    Ok(checks
        .into_iter()
        .map(|c| {
            let passed = c.passed();
            (c.name, c.residual, c.tolerance, passed)
        })
        .collect())
}

/// Parity of the generating stabilizer loop of one action, per method:
/// `(differential, adjoint, oracle)`.
#[pyfunction]
#[pyo3(signature = (family, n = 0, steps = 256))]
fn loop_parities(family: &str, n: usize, steps: usize) -> PyResult<(u8, u8, u8)> {
    let family = parse_family(family)?;
    let spec = ActionSpec::new(family, n).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let record = classify(&spec, steps).map_err(to_py_err)?;
    Ok((
        record.parity.differential,
        record.parity.adjoint,
        record.parity.oracle,
    ))
}

#[pymodule]
fn spinact_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyOctonion>()?;
    m.add_function(wrap_pyfunction!(classify_json, m)?)?;
    m.add_function(wrap_pyfunction!(is_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(table_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(loop_parities, m)?)?;
    Ok(())
}
