//! Python bindings: `import riskcheck`.
//!
//! Trajectories and scenarios are passed as the same JSON documents the CLI
//! reads. Reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use riskcheck_core::distance::{self, DiscretizedFailureProcess};
use riskcheck_core::grid;
use riskcheck_core::hazard::{self, HazardTrajectory};
use riskcheck_core::pra::{self, PraModel};
use riskcheck_core::sampling::{self, EmpiricalDistribution, SeededStream};
use riskcheck_core::scenario;
use riskcheck_core::schema::{self, Document};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated hazard trajectory.
#[pyclass(name = "Trajectory", module = "riskcheck", frozen)]
struct PyTrajectory {
    inner: HazardTrajectory,
}

#[pymethods]
impl PyTrajectory {
    /// Parse a trajectory or scenario document. Scenarios are compiled.
    /// With `strict=False` a trajectory only has to be evaluable.
    #[staticmethod]
    #[pyo3(signature = (text, strict = true))]
    fn from_json(text: &str, strict: bool) -> PyResult<Self> {
        let inner = match schema::parse_document(text).map_err(value_error)? {
            Document::Trajectory(spec) if strict => HazardTrajectory::new(spec),
            Document::Trajectory(spec) => HazardTrajectory::unvalidated(spec),
            Document::Scenario(s) => return from_scenario(&s),
        }
        .map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn constant(level: f64) -> PyResult<Self> {
        Ok(Self {
            inner: HazardTrajectory::constant(level).map_err(value_error)?,
        })
    }

    /// Built-in scenario by label.
    #[staticmethod]
    fn catalog(label: &str) -> PyResult<Self> {
        let s = scenario::catalog_scenario(label)
            .ok_or_else(|| value_error(format!("no catalog scenario {label:?}")))?;
        from_scenario(&s)
    }

    fn to_json(&self) -> String {
        schema::trajectory_json(self.inner.spec())
    }

    fn hash(&self) -> String {
        self.inner.hash()
    }

    #[getter]
    fn initial_hazard(&self) -> f64 {
        self.inner.initial_hazard()
    }

    #[getter]
    fn is_rational(&self) -> bool {
        self.inner.is_rational()
    }

    fn hazard(&self, t: f64) -> PyResult<f64> {
        self.inner.hazard_at(t).map_err(value_error)
    }

    fn cumulative_hazard(&self, t: f64) -> PyResult<f64> {
        self.inner.cumulative_hazard(t).map_err(value_error)
    }

    fn reliability(&self, t: f64) -> PyResult<f64> {
        self.inner.reliability(t).map_err(value_error)
    }

    fn failure_cdf(&self, t: f64) -> PyResult<f64> {
        self.inner.failure_cdf(t).map_err(value_error)
    }

    fn recovered_hazard(&self, t: f64, dt: f64) -> PyResult<f64> {
        self.inner.recovered_hazard(t, dt).map_err(value_error)
    }

    fn inverse_cumulative_hazard(&self, target: f64) -> f64 {
        self.inner.inverse_cumulative_hazard(target)
    }

    fn mean_time_to_failure(&self) -> f64 {
        self.inner.mean_time_to_failure()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(segments={}, epochs={}, h0={})",
            self.inner.segments().len(),
            self.inner.maintenance_epochs().len(),
            self.inner.initial_hazard()
        )
    }
}

fn from_scenario(s: &scenario::Scenario) -> PyResult<PyTrajectory> {
    Ok(PyTrajectory {
        inner: scenario::build_trajectory(s).map_err(value_error)?,
    })
}

/// Validation report of a trajectory document as a dict.
#[pyfunction]
fn validate<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let spec = match schema::parse_document(text).map_err(value_error)? {
        Document::Trajectory(spec) => spec,
        Document::Scenario(s) => scenario::build_trajectory(&s)
            .map_err(value_error)?
            .spec()
            .clone(),
    };
    to_py(
        py,
        &hazard::validate_trajectory(&spec).map_err(value_error)?,
    )
}

#[pyfunction]
fn catalog_labels() -> Vec<String> {
    scenario::scenario_catalog()
        .into_iter()
        .map(|s| s.label)
        .collect()
}

#[pyfunction]
#[pyo3(signature = (initial_hazard, points = grid::DEFAULT_GRID_POINTS))]
fn default_grid(initial_hazard: f64, points: usize) -> PyResult<Vec<f64>> {
    grid::default_grid(initial_hazard, points).map_err(value_error)
}

#[pyfunction]
fn uniform_grid(t_max: f64, points: usize) -> PyResult<Vec<f64>> {
    grid::uniform_grid(t_max, points).map_err(value_error)
}

/// `n` failure times in replicate order.
#[pyfunction]
#[pyo3(signature = (trajectory, n, seed, threads = None))]
fn sample(
    py: Python<'_>,
    trajectory: &PyTrajectory,
    n: usize,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<Vec<f64>> {
    let traj = &trajectory.inner;
    py.detach(|| match threads {
        Some(k) => sampling::sample_replicates_with_threads(traj, n, seed, k).map_err(value_error),
        None => Ok(sampling::sample_replicates(traj, n, seed)),
    })
}

#[pyfunction]
#[pyo3(signature = (trajectory, horizon, seed, stream_id))]
fn sample_thinning(
    trajectory: &PyTrajectory,
    horizon: f64,
    seed: u64,
    stream_id: u64,
) -> PyResult<Option<f64>> {
    sampling::sample_failure_time_thinning(
        &trajectory.inner,
        horizon,
        SeededStream::new(seed, stream_id),
    )
    .map_err(value_error)
}

#[pyfunction]
fn ks_two_sample(a: Vec<f64>, b: Vec<f64>) -> f64 {
    sampling::ks_two_sample(&a, &b)
}

#[pyfunction]
fn dkw_epsilon(n: usize, delta: f64) -> f64 {
    sampling::dkw_epsilon(n, delta)
}

#[pyfunction]
fn check_stochastic_order<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
    grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &pra::check_stochastic_order(&trajectory.inner, &grid).map_err(value_error)?,
    )
}

/// Comparison against a PRA model with `rate`, or `1/E[T]` when omitted.
#[pyfunction]
#[pyo3(signature = (trajectory, grid, rate = None))]
fn underestimation_report<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
    grid: Vec<f64>,
    rate: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let model = match rate {
        Some(r) => PraModel::given(r),
        None => PraModel::from_trajectory(&trajectory.inner),
    }
    .map_err(value_error)?;
    to_py(
        py,
        &pra::underestimation_report(&trajectory.inner, &model, &grid).map_err(value_error)?,
    )
}

#[pyfunction]
fn discretize(trajectory: &PyTrajectory, grid: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(distance::discretize(&trajectory.inner, &grid)
        .map_err(value_error)?
        .probabilities()
        .to_vec())
}

#[pyfunction]
fn stein_chen_tv_bound(probabilities: Vec<f64>) -> PyResult<f64> {
    let p = DiscretizedFailureProcess::new(probabilities).map_err(value_error)?;
    Ok(distance::stein_chen_tv_bound(&p))
}

#[pyfunction]
#[pyo3(signature = (probabilities, support_cap = None))]
fn exact_tv_small(probabilities: Vec<f64>, support_cap: Option<usize>) -> PyResult<f64> {
    let p = DiscretizedFailureProcess::new(probabilities).map_err(value_error)?;
    let cap = support_cap.unwrap_or_else(|| distance::default_support_cap(p.lambda()));
    distance::exact_tv_small(&p, cap).map_err(value_error)
}

#[pyfunction]
fn ks_distance(samples: Vec<f64>, rate: f64) -> PyResult<f64> {
    let dist = EmpiricalDistribution::new(samples, 0).map_err(value_error)?;
    Ok(distance::ks_distance(
        &dist,
        &PraModel::given(rate).map_err(value_error)?,
    ))
}

#[pymodule]
fn riskcheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_labels, m)?)?;
    m.add_function(wrap_pyfunction!(default_grid, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_grid, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(sample_thinning, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(dkw_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(check_stochastic_order, m)?)?;
    m.add_function(wrap_pyfunction!(underestimation_report, m)?)?;
    m.add_function(wrap_pyfunction!(discretize, m)?)?;
    m.add_function(wrap_pyfunction!(stein_chen_tv_bound, m)?)?;
    m.add_function(wrap_pyfunction!(exact_tv_small, m)?)?;
    m.add_function(wrap_pyfunction!(ks_distance, m)?)?;
    m.add("SCHEMA_VERSION", schema::SCHEMA_VERSION)?;
    Ok(())
}
