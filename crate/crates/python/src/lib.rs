//! Python bindings: the distribution type, state families, bound evaluation,
//! the quantum-dot scenario, and the verification suites.
//!
//! Unknown/inapplicable values map to `None`, infinite ratios to
//! `float('inf')`, and every library error raises `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sppcert::bounds::{self, AnalysisInput, BoundReport, Criterion, ThresholdKind};
use sppcert::families::{FamilySpec, DEFAULT_TAIL_CAP};
use sppcert::fock::ObservableSet;
use sppcert::oracle::{self, SuiteOutcome};
use sppcert::qd::{self, QdScenarioRecord};
use sppcert::Error as CoreError;

fn value_error(e: CoreError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, r: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("g2", r.g2)?;
    d.set_item("mean_n", r.mean_n)?;
    d.set_item("p0", r.p0)?;
    d.set_item("eff_g2_vacuum", r.eff_g2_vacuum)?;
    d.set_item("eff_g2_photon", r.eff_g2_photon)?;
    d.set_item("spp_lower", r.spp_lower)?;
    d.set_item("spp_upper", r.spp_upper)?;
    d.set_item("smppr_lower", r.smppr_lower)?;
    d.set_item("q_upper", r.q_upper)?;
    d.set_item("p0_plus_p1_lower", r.p0_plus_p1_lower)?;
    d.set_item("set_m1", r.set_m1)?;
    d.set_item("set_m2", r.set_m2)?;
    d.set_item("set_m3", r.set_m3)?;
    let criterion = match r.criterion_used {
        Criterion::VacuumBased => "VacuumBased",
        Criterion::PhotonBased => "PhotonBased",
        Criterion::FallbackG2Only => "FallbackG2Only",
        Criterion::NotApplicable => "NotApplicable",
    };
    d.set_item("criterion_used", criterion)?;
    Ok(d)
}

fn observables_dict<'py>(py: Python<'py>, obs: &ObservableSet) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mean_n", obs.mean_n)?;
    d.set_item("g2", obs.g2)?;
    d.set_item("variance", obs.variance)?;
    d.set_item("mandel_q", obs.mandel_q)?;
    d.set_item("p0", obs.p0)?;
    d.set_item("p1", obs.p1)?;
    d.set_item("q_multi", obs.q_multi)?;
    d.set_item("n2", obs.n2)?;
    d.set_item("g2_multi", obs.g2_multi)?;
    Ok(d)
}

fn record_dict<'py>(py: Python<'py>, r: &QdScenarioRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("p1_tilde", r.p1_tilde)?;
    d.set_item("n_alpha", r.n_alpha)?;
    d.set_item("g2", r.g2)?;
    d.set_item("mean_n", r.mean_n)?;
    d.set_item("exact_p1", r.exact_p1)?;
    d.set_item("lower_photon", r.lower_photon)?;
    d.set_item("lower_vacuum", r.lower_vacuum)?;
    Ok(d)
}

fn suite_dict<'py>(py: Python<'py>, outcome: &SuiteOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("suite", &outcome.report.suite)?;
    d.set_item("trials", outcome.report.trials)?;
    d.set_item("violations", outcome.report.violations)?;
    d.set_item("worst_margin", outcome.report.worst_margin)?;
    d.set_item("seed", outcome.report.seed)?;
    Ok(d)
}

/// A truncated photon-number distribution with a bound on the tail mass.
#[pyclass(name = "PhotonDistribution", frozen)]
struct PyPhotonDistribution {
    inner: sppcert::PhotonDistribution,
}

#[pymethods]
impl PyPhotonDistribution {
    #[new]
    #[pyo3(signature = (probs, tail_bound = 0.0))]
    fn new(probs: Vec<f64>, tail_bound: f64) -> PyResult<Self> {
        let inner =
            sppcert::PhotonDistribution::validate(&probs, tail_bound).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn tail_bound(&self) -> f64 {
        self.inner.tail_bound()
    }

    fn mean_photon_number(&self) -> f64 {
        self.inner.mean_photon_number()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    /// Zero-delay second-order correlation; None for vacuum.
    fn g2(&self) -> Option<f64> {
        self.inner.g2_zero_delay()
    }

    fn mandel_q(&self) -> Option<f64> {
        self.inner.mandel_q()
    }

    /// (p0, p1, q) split of unity.
    fn projections(&self) -> (f64, f64, f64) {
        self.inner.projections()
    }

    /// (n2, g2_multi) of the multi-photon part; None when there is none.
    fn multi_photon_observables(&self) -> Option<(f64, f64)> {
        self.inner.multi_photon_observables()
    }

    fn vacuum_mix(&self, extra_vacuum: f64) -> PyResult<Self> {
        if !(0.0..1.0).contains(&extra_vacuum) {
            return Err(PyValueError::new_err(format!(
                "extra_vacuum must be in [0, 1), got {extra_vacuum}"
            )));
        }
        Ok(Self {
            inner: self.inner.vacuum_mix(extra_vacuum),
        })
    }

    /// Every exact observable as a dict.
    fn observables<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        observables_dict(py, &oracle::exact_quantities(&self.inner))
    }

    /// Full bound report for this state (raises ValueError for vacuum).
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let obs = oracle::exact_quantities(&self.inner);
        let report = bounds::analyze(&AnalysisInput::from(&obs)).map_err(value_error)?;
        report_dict(py, &report)
    }

    fn __repr__(&self) -> String {
        format!(
            "PhotonDistribution(cutoff={}, mean_n={:.6}, tail_bound={:.3e})",
            self.inner.cutoff(),
            self.inner.mean_photon_number(),
            self.inner.tail_bound()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (mean_photons, tail_cap = DEFAULT_TAIL_CAP))]
fn coherent(mean_photons: f64, tail_cap: f64) -> PyResult<PyPhotonDistribution> {
    let inner = FamilySpec::Coherent { mean_photons }
        .build(tail_cap)
        .map_err(value_error)?;
    Ok(PyPhotonDistribution { inner })
}

#[pyfunction]
#[pyo3(signature = (mean_photons, tail_cap = DEFAULT_TAIL_CAP))]
fn thermal(mean_photons: f64, tail_cap: f64) -> PyResult<PyPhotonDistribution> {
    let inner = FamilySpec::Thermal { mean_photons }
        .build(tail_cap)
        .map_err(value_error)?;
    Ok(PyPhotonDistribution { inner })
}

#[pyfunction]
fn fock(n: u32) -> PyPhotonDistribution {
    PyPhotonDistribution {
        inner: sppcert::families::fock(n),
    }
}

#[pyfunction]
#[pyo3(signature = (p1_tilde, n_alpha, tail_cap = DEFAULT_TAIL_CAP))]
fn qd_background(p1_tilde: f64, n_alpha: f64, tail_cap: f64) -> PyResult<PyPhotonDistribution> {
    let inner = FamilySpec::QdBackground { p1_tilde, n_alpha }
        .build(tail_cap)
        .map_err(value_error)?;
    Ok(PyPhotonDistribution { inner })
}

#[pyfunction]
fn random_truncated(max_n: u32, seed: u64) -> PyResult<PyPhotonDistribution> {
    let inner = FamilySpec::RandomTruncated { max_n, seed }
        .build(DEFAULT_TAIL_CAP)
        .map_err(value_error)?;
    Ok(PyPhotonDistribution { inner })
}

/// Bound report straight from measured observables.
#[pyfunction]
#[pyo3(signature = (g2, mean_n = None, p0 = None))]
fn analyze_observables<'py>(
    py: Python<'py>,
    g2: f64,
    mean_n: Option<f64>,
    p0: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = bounds::analyze(&AnalysisInput {
        g2: Some(g2),
        mean_n,
        p0,
    })
    .map_err(value_error)?;
    report_dict(py, &report)
}

#[pyfunction]
fn zubizarreta_lower_g2(mean_n: f64) -> PyResult<f64> {
    bounds::zubizarreta_lower_g2(mean_n).map_err(value_error)
}

#[pyfunction]
fn effective_g2_vacuum(g2: f64, p0: f64) -> PyResult<f64> {
    bounds::effective_g2_vacuum(g2, p0).map_err(value_error)
}

#[pyfunction]
fn effective_g2_photon(g2: f64, mean_n: f64) -> PyResult<f64> {
    bounds::effective_g2_photon(g2, mean_n).map_err(value_error)
}

#[pyfunction]
fn smppr_lower_vacuum(eff_g2: f64) -> PyResult<f64> {
    bounds::smppr_lower_vacuum(eff_g2).map_err(value_error)
}

#[pyfunction]
fn smppr_lower_photon(eff_g2: f64) -> PyResult<f64> {
    bounds::smppr_lower_photon(eff_g2).map_err(value_error)
}

#[pyfunction]
fn g2_threshold_for_smppr(theta: f64, criterion: &str) -> PyResult<f64> {
    let kind = match criterion {
        "vacuum" => ThresholdKind::Vacuum,
        "photon" => ThresholdKind::Photon,
        other => {
            return Err(PyValueError::new_err(format!(
                "criterion must be 'vacuum' or 'photon', got '{other}'"
            )))
        }
    };
    bounds::g2_threshold_for_smppr(theta, kind).map_err(value_error)
}

#[pyfunction]
fn spp_bounds_vacuum(g2: f64, p0: f64) -> PyResult<(f64, f64)> {
    bounds::effective_g2_vacuum(g2, p0).map_err(value_error)?;
    Ok(bounds::spp_bounds_vacuum(g2, p0))
}

#[pyfunction]
fn spp_bounds_photon(g2: f64, mean_n: f64) -> PyResult<(f64, f64)> {
    bounds::effective_g2_photon(g2, mean_n).map_err(value_error)?;
    Ok(bounds::spp_bounds_photon(g2, mean_n))
}

#[pyfunction]
fn multiphoton_upper_and_p0p1_lower(eff_g2: f64) -> PyResult<(f64, f64)> {
    bounds::multiphoton_upper_and_p0p1_lower(eff_g2).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (g2, mean_n = None))]
fn fallback_bounds_g2_only<'py>(
    py: Python<'py>,
    g2: f64,
    mean_n: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let fb = bounds::fallback_bounds_g2_only(g2, mean_n).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("smppr_lower", fb.smppr_lower)?;
    d.set_item("p0_plus_p1_lower", fb.p0_plus_p1_lower)?;
    d.set_item("spp_lower_factor", fb.spp_lower_factor)?;
    d.set_item("spp_lower", fb.spp_lower)?;
    Ok(d)
}

#[pyfunction]
fn classify_sets(g2: f64, mean_n: f64) -> (bool, bool, bool) {
    bounds::classify_sets(g2, mean_n)
}

#[pyfunction]
fn exact_p1_from_decomposition(mean_n: f64, g2: f64, n2: f64, g2_multi: f64) -> PyResult<f64> {
    bounds::exact_p1_from_decomposition(mean_n, g2, n2, g2_multi).map_err(value_error)
}

#[pyfunction]
fn background_limit_g2_criterion(p1_tilde: f64) -> PyResult<f64> {
    qd::background_limit_g2_criterion(p1_tilde).map_err(value_error)
}

#[pyfunction]
fn background_limit_photon_criterion(p1_tilde: f64) -> PyResult<f64> {
    qd::background_limit_photon_criterion(p1_tilde).map_err(value_error)
}

#[pyfunction]
fn solve_background_for_g2_target(p1_tilde: f64, target_g2: f64) -> PyResult<f64> {
    qd::solve_background_for_g2_target(p1_tilde, target_g2).map_err(value_error)
}

/// The designed g2 = 1/2 sweep; defaults to the 0.00..0.99 grid.
#[pyfunction]
#[pyo3(signature = (grid = None))]
fn figure5_sweep<'py>(py: Python<'py>, grid: Option<Vec<f64>>) -> PyResult<Bound<'py, PyList>> {
    let grid = grid.unwrap_or_else(qd::figure5_default_grid);
    let records = qd::figure5_sweep(&grid).map_err(value_error)?;
    let list = PyList::empty(py);
    for r in &records {
        list.append(record_dict(py, r)?)?;
    }
    Ok(list)
}

#[pyfunction]
#[pyo3(signature = (trials = 100_000, max_n = 6, seed = 42))]
fn run_soundness_suite<'py>(
    py: Python<'py>,
    trials: u64,
    max_n: u32,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    if trials < 1 || max_n < 1 {
        return Err(PyValueError::new_err("trials and max_n must be >= 1"));
    }
    suite_dict(py, &oracle::run_soundness_suite(trials, max_n, seed))
}

#[pyfunction]
#[pyo3(signature = (trials = 100_000, max_n = 8, seed = 1))]
fn run_set_inclusion_suite<'py>(
    py: Python<'py>,
    trials: u64,
    max_n: u32,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    if trials < 1 || max_n < 1 {
        return Err(PyValueError::new_err("trials and max_n must be >= 1"));
    }
    suite_dict(py, &oracle::run_set_inclusion_suite(trials, max_n, seed))
}

#[pyfunction]
#[pyo3(signature = (n_grid = None))]
fn run_saturation_suite<'py>(
    py: Python<'py>,
    n_grid: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let grid =
        n_grid.unwrap_or_else(|| (1..=800).map(|k| k as f64 * 0.01).collect::<Vec<f64>>());
    if grid.iter().any(|&n| !(n > 0.0 && n.is_finite())) {
        return Err(PyValueError::new_err("saturation grid values must be > 0"));
    }
    suite_dict(py, &oracle::run_saturation_suite(&grid))
}

#[pyfunction]
fn run_comparison_suite<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    suite_dict(
        py,
        &oracle::run_comparison_suite(&oracle::default_comparison_grids()),
    )
}

#[pymodule]
fn sppcert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhotonDistribution>()?;
    m.add_function(wrap_pyfunction!(coherent, m)?)?;
    m.add_function(wrap_pyfunction!(thermal, m)?)?;
    m.add_function(wrap_pyfunction!(fock, m)?)?;
    m.add_function(wrap_pyfunction!(qd_background, m)?)?;
    m.add_function(wrap_pyfunction!(random_truncated, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_observables, m)?)?;
    m.add_function(wrap_pyfunction!(zubizarreta_lower_g2, m)?)?;
    m.add_function(wrap_pyfunction!(effective_g2_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(effective_g2_photon, m)?)?;
    m.add_function(wrap_pyfunction!(smppr_lower_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(smppr_lower_photon, m)?)?;
    m.add_function(wrap_pyfunction!(g2_threshold_for_smppr, m)?)?;
    m.add_function(wrap_pyfunction!(spp_bounds_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(spp_bounds_photon, m)?)?;
    m.add_function(wrap_pyfunction!(multiphoton_upper_and_p0p1_lower, m)?)?;
    m.add_function(wrap_pyfunction!(fallback_bounds_g2_only, m)?)?;
    m.add_function(wrap_pyfunction!(classify_sets, m)?)?;
    m.add_function(wrap_pyfunction!(exact_p1_from_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(background_limit_g2_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(background_limit_photon_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(solve_background_for_g2_target, m)?)?;
    m.add_function(wrap_pyfunction!(figure5_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_soundness_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_set_inclusion_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_comparison_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_saturation_suite, m)?)?;
    Ok(())
}
