//! Python bindings.
//!
//! Profiles and placements cross the boundary as lists of floats;
//! mechanisms are `Mechanism` objects built from their CLI names.
//!
//!     import pyequifac as eq
//!     m = eq.Mechanism("endpoint")
//!     eq.approximation_ratio([0, .5, .5, .5, 1], m, "complemented-gini")["ratio"]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use equifac::analysis::{self, SearchConfig, SpTestConfig};
use equifac::{objectives, oracle, MechanismSpec, NumericPolicy, Objective, Outcome as CoreOutcome, Placement, Profile};

fn err(e: equifac::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile(xs: Vec<f64>) -> PyResult<Profile> {
    Profile::new(xs).map_err(err)
}

fn placement(ys: &[f64]) -> PyResult<Placement> {
    Placement::new(ys).map_err(err)
}

fn objective(name: &str) -> PyResult<Objective> {
    name.parse().map_err(err)
}

/// A facility-location mechanism.
#[pyclass(frozen)]
struct Mechanism {
    spec: MechanismSpec,
}

#[pymethods]
impl Mechanism {
    /// Names: leftmost, median, midornearest, phantom-median, endpoint,
    /// endpoint-gamma, lrm, gini-opt-oracle.
    #[new]
    #[pyo3(signature = (name, gamma=None, phantoms=None))]
    fn new(name: &str, gamma: Option<f64>, phantoms: Option<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            spec: MechanismSpec::from_name(name, gamma, phantoms).map_err(err)?,
        })
    }

    #[getter]
    fn facility_count(&self) -> usize {
        self.spec.facility_count()
    }

    #[getter]
    fn is_randomized(&self) -> bool {
        self.spec.is_randomized()
    }

    #[getter]
    fn is_strategy_proof(&self) -> bool {
        self.spec.is_strategy_proof()
    }

    fn apply(&self, locations: Vec<f64>) -> PyResult<Outcome> {
        let p = profile(locations)?;
        Ok(Outcome {
            inner: self.spec.apply(&p).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Mechanism('{}')", self.spec)
    }

    fn __str__(&self) -> String {
        self.spec.to_string()
    }
}

/// A placement, or a lottery over placements.
#[pyclass(frozen)]
struct Outcome {
    inner: CoreOutcome,
}

#[pymethods]
impl Outcome {
    /// `(probability, facilities)` pairs; one pair with probability 1 for
    /// deterministic outcomes.
    fn outcomes(&self) -> Vec<(f64, Vec<f64>)> {
        self.inner
            .clone()
            .into_lottery()
            .outcomes()
            .iter()
            .map(|(p, pl)| (*p, pl.facilities().to_vec()))
            .collect()
    }

    #[getter]
    fn is_randomized(&self) -> bool {
        matches!(self.inner, CoreOutcome::Randomized(_))
    }

    /// Objective value on `locations`, in expectation for lotteries.
    fn value(&self, locations: Vec<f64>, objective_name: &str) -> PyResult<f64> {
        Ok(self.inner.value(&profile(locations)?, objective(objective_name)?))
    }

    fn expected_distance(&self, x: f64) -> f64 {
        self.inner.expected_distance(x)
    }

    fn __repr__(&self) -> String {
        format!("Outcome({})", self.inner)
    }
}

/// Gini index of non-negative values.
#[pyfunction]
fn gini(values: Vec<f64>) -> PyResult<f64> {
    objectives::gini(&values).map_err(err)
}

/// Every objective for a placement, as a dict.
#[pyfunction]
fn objective_report<'py>(py: Python<'py>, locations: Vec<f64>, facilities: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let r = equifac::ObjectiveReport::new(&profile(locations)?, &placement(&facilities)?);
    let d = PyDict::new(py);
    d.set_item("utilities", r.utilities)?;
    d.set_item("distances", r.distances)?;
    d.set_item("gini_utilities", r.gini_utilities)?;
    d.set_item("gini_distances", r.gini_distances)?;
    d.set_item("complemented_gini", r.complemented_gini)?;
    d.set_item("nash_welfare", r.nash_welfare)?;
    d.set_item("max_distance", r.max_distance)?;
    d.set_item("min_utility", r.min_utility)?;
    Ok(d)
}

/// Optimal value, placement and method name.
#[pyfunction]
#[pyo3(signature = (locations, objective_name, facilities=1))]
fn optimum(locations: Vec<f64>, objective_name: &str, facilities: usize) -> PyResult<(f64, Vec<f64>, &'static str)> {
    let r = oracle::optimum(&profile(locations)?, objective(objective_name)?, facilities, &NumericPolicy::default())
        .map_err(err)?;
    Ok((r.best_value, r.best_placement.facilities().to_vec(), r.method.name()))
}

fn finding_dict<'py>(py: Python<'py>, f: &analysis::RatioFinding) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("profile", f.profile.locations().to_vec())?;
    d.set_item("mechanism", f.mechanism.to_string())?;
    d.set_item("objective", f.objective.name())?;
    d.set_item("mech_value", f.mech_value)?;
    d.set_item("opt_value", f.opt_value)?;
    d.set_item("ratio", f.ratio)?;
    d.set_item("provenance", f.provenance.name())?;
    Ok(d)
}

#[pyfunction]
fn approximation_ratio<'py>(
    py: Python<'py>,
    locations: Vec<f64>,
    mechanism: &Mechanism,
    objective_name: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let f = analysis::approximation_ratio(
        &profile(locations)?,
        &mechanism.spec,
        objective(objective_name)?,
        &NumericPolicy::default(),
    )
    .map_err(err)?;
    finding_dict(py, &f)
}

/// Best finding for each `n` in `n_min..=n_max`.
#[pyfunction]
#[pyo3(signature = (mechanism, objective_name, n_min, n_max, samples=10_000, restarts=8, seed=42))]
#[allow(clippy::too_many_arguments)]
fn worst_case_search<'py>(
    py: Python<'py>,
    mechanism: &Mechanism,
    objective_name: &str,
    n_min: usize,
    n_max: usize,
    samples: usize,
    restarts: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = SearchConfig {
        random_samples: samples,
        restarts,
        seed,
        ..SearchConfig::new(mechanism.spec.clone(), objective(objective_name)?, n_min, n_max)
    };
    let out = analysis::worst_case_search(&cfg, &NumericPolicy::default()).map_err(err)?;
    out.best_per_n.iter().map(|f| finding_dict(py, f)).collect()
}

/// A manipulation witness as a dict, or None. `agent` is 0-based.
#[pyfunction]
#[pyo3(signature = (mechanism, n_min=1, n_max=6, trials=10_000, seed=42))]
fn strategy_proofness_test<'py>(
    py: Python<'py>,
    mechanism: &Mechanism,
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let cfg = SpTestConfig {
        mechanism: mechanism.spec.clone(),
        n_min,
        n_max,
        trials,
        seed,
    };
    let Some(w) = analysis::strategy_proofness_test(&cfg, &NumericPolicy::default()).map_err(err)? else {
        return Ok(None);
    };
    let d = PyDict::new(py);
    d.set_item("profile", w.profile.locations().to_vec())?;
    d.set_item("agent", w.agent_index)?;
    d.set_item("misreport", w.misreport)?;
    d.set_item("honest_distance", w.honest_distance)?;
    d.set_item("manipulated_distance", w.manipulated_distance)?;
    Ok(Some(d))
}

/// `(group, claim, computed, expected)` rows of the golden checks.
#[pyfunction]
fn theorem_ledger() -> PyResult<Vec<(&'static str, String, f64, f64)>> {
    Ok(analysis::theorem_ledger(&NumericPolicy::default())
        .map_err(err)?
        .into_iter()
        .map(|r| (r.group, r.claim, r.computed, r.expected))
        .collect())
}

/// The regenerated summary table as markdown.
#[pyfunction]
#[pyo3(signature = (seed=42))]
fn reproduce_table1(seed: u64) -> PyResult<String> {
    let rows = analysis::reproduce_table1(&NumericPolicy::default(), seed).map_err(err)?;
    Ok(analysis::table1_markdown(&rows))
}

#[pymodule]
fn pyequifac(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Mechanism>()?;
    m.add_class::<Outcome>()?;
    m.add_function(wrap_pyfunction!(gini, m)?)?;
    m.add_function(wrap_pyfunction!(objective_report, m)?)?;
    m.add_function(wrap_pyfunction!(optimum, m)?)?;
    m.add_function(wrap_pyfunction!(approximation_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case_search, m)?)?;
    m.add_function(wrap_pyfunction!(strategy_proofness_test, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_ledger, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table1, m)?)?;
    Ok(())
}
