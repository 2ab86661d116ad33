//! Python bindings for the spreadfront toolkit.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use spreadfront::dichotomy;
use spreadfront::model;
use spreadfront::solver;
use spreadfront::spectral;
use spreadfront::waves;

fn to_py(e: spreadfront::Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Nondimensional model parameters (delta, alpha, kappa, D, mu, rho).
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Parameters {
    inner: model::Parameters,
}

#[pymethods]
impl Parameters {
    #[new]
    fn new(delta: f64, alpha: f64, kappa: f64, d_ratio: f64, mu: f64, rho: f64) -> PyResult<Self> {
        model::Parameters::new(delta, alpha, kappa, d_ratio, mu, rho)
            .map(|inner| Parameters { inner })
            .map_err(to_py)
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa
    }
    #[getter]
    fn d_ratio(&self) -> f64 {
        self.inner.d_ratio
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }

    /// Whether the interior-equilibrium hypothesis delta(alpha + 1) < 1
    /// holds.
    fn h1_satisfied(&self) -> bool {
        self.inner.h1_satisfied()
    }

    /// The positive interior equilibrium (u*, v*), when it exists.
    fn equilibrium(&self) -> Option<(f64, f64)> {
        model::equilibria(&self.inner).e_star
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Parameters(delta={}, alpha={}, kappa={}, d_ratio={}, mu={}, rho={})",
            p.delta, p.alpha, p.kappa, p.d_ratio, p.mu, p.rho
        )
    }
}

/// Trajectory time series plus the dichotomy verdict of one run.
#[pyclass(frozen)]
struct SimulationResult {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    final_h: f64,
    #[pyo3(get)]
    t: Vec<f64>,
    #[pyo3(get)]
    h: Vec<f64>,
    #[pyo3(get)]
    h_prime: Vec<f64>,
    #[pyo3(get)]
    u_center: Vec<f64>,
    #[pyo3(get)]
    v_center: Vec<f64>,
    #[pyo3(get)]
    u_sup: Vec<f64>,
    #[pyo3(get)]
    v_sup: Vec<f64>,
    /// Trailing-window front speed, for spreading runs.
    #[pyo3(get)]
    speed: Option<f64>,
    #[pyo3(get)]
    speed_bracket: Option<(f64, f64)>,
    #[pyo3(get)]
    within_bracket: Option<bool>,
}

/// Integrate the free-boundary problem from a cosine profile and classify
/// the outcome.
#[pyfunction]
#[pyo3(signature = (params, h0, amp_u=0.5, amp_v=0.5, n=200, t_max=100.0))]
fn simulate(
    params: &Parameters,
    h0: f64,
    amp_u: f64,
    amp_v: f64,
    n: usize,
    t_max: f64,
) -> PyResult<SimulationResult> {
    let p = &params.inner;
    let ip = model::make_initial_profile(
        model::ProfileFamily::Cosine { amp_u, amp_v },
        h0,
        2001,
    )
    .map_err(to_py)?;
    let cfg = solver::SolverConfig { n, t_max, ..Default::default() };
    let traj = solver::run(p, &ip, &cfg).map_err(to_py)?;
    let th = dichotomy::thresholds(p, &ip, None).map_err(to_py)?;
    let report =
        dichotomy::classify(&traj, &th, p, &dichotomy::ClassifyConfig::default()).map_err(to_py)?;
    let speed = if report.verdict == dichotomy::Verdict::Spreading {
        Some(dichotomy::speed_estimate(&traj, &report, p, 0.5).map_err(to_py)?)
    } else {
        None
    };
    Ok(SimulationResult {
        verdict: format!("{:?}", report.verdict),
        final_h: report.final_h,
        t: traj.samples.iter().map(|s| s.t).collect(),
        h: traj.samples.iter().map(|s| s.h).collect(),
        h_prime: traj.samples.iter().map(|s| s.h_prime).collect(),
        u_center: traj.samples.iter().map(|s| s.u_center).collect(),
        v_center: traj.samples.iter().map(|s| s.v_center).collect(),
        u_sup: traj.samples.iter().map(|s| s.u_sup).collect(),
        v_sup: traj.samples.iter().map(|s| s.v_sup).collect(),
        speed: speed.as_ref().map(|s| s.slope),
        speed_bracket: speed.as_ref().map(|s| s.bracket),
        within_bracket: speed.as_ref().map(|s| s.within_bracket),
    })
}

/// Sharp spreading/vanishing constants for a cosine initial profile.
#[pyfunction]
#[pyo3(signature = (params, h0, amp_u=0.5, amp_v=0.5))]
fn thresholds<'py>(
    py: Python<'py>,
    params: &Parameters,
    h0: f64,
    amp_u: f64,
    amp_v: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ip = model::make_initial_profile(
        model::ProfileFamily::Cosine { amp_u, amp_v },
        h0,
        2001,
    )
    .map_err(to_py)?;
    let th = dichotomy::thresholds(&params.inner, &ip, None).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("h_star", th.h_star)?;
    d.set_item("d_star", th.d_star)?;
    d.set_item("mu1", th.mu1)?;
    d.set_item("mu2", th.mu2)?;
    d.set_item("mu_bar", th.mu_bar)?;
    match th.vanishing {
        Some(c) => {
            d.set_item("eps", c.eps)?;
            d.set_item("beta", c.beta)?;
            d.set_item("m_tilde", c.m_tilde)?;
            d.set_item("mu_lower", c.mu_lower)?;
        }
        None => {
            d.set_item("mu_lower", py.None())?;
        }
    }
    Ok(d)
}

/// Principal eigenvalue `a - d pi^2 / (4 L^2)` of the mixed
/// Neumann-Dirichlet problem on `(0, L)`.
#[pyfunction]
fn principal_eigenvalue(d: f64, a: f64, length: f64) -> PyResult<f64> {
    spectral::EigenProblemSpec::new(d, a, length)
        .map(|spec| spectral::principal_eigenvalue(&spec))
        .map_err(to_py)
}

#[pyfunction]
fn critical_length(d: f64, a: f64) -> f64 {
    spectral::critical_length(d, a)
}

#[pyfunction]
fn critical_diffusivity(a: f64, length: f64) -> f64 {
    spectral::critical_diffusivity(a, length)
}

/// Minimal speed `2 max{1, sqrt(D kappa)}` of monotone wavefronts.
#[pyfunction]
fn minimal_wave_speed(params: &Parameters) -> f64 {
    waves::minimal_wave_speed(&params.inner)
}

/// Asymptotic spreading speed `s*`, the root of `mu rho V'_s(0) = s`.
#[pyfunction]
fn asymptotic_speed(params: &Parameters) -> PyResult<f64> {
    waves::asymptotic_speed(&params.inner).map_err(to_py)
}

/// Origin slope `V'_s(0)` of the semi-wave at speed `s`.
#[pyfunction]
fn semi_wave_slope(d: f64, kappa: f64, alpha: f64, s: f64) -> PyResult<f64> {
    waves::semi_wave_slope(d, kappa, alpha, s).map_err(to_py)
}

/// Limit of the monotone squeeze iteration: the interior equilibrium
/// (u*, v*).
#[pyfunction]
#[pyo3(signature = (params, iterations=50))]
fn squeeze_limits(params: &Parameters, iterations: usize) -> PyResult<(f64, f64)> {
    model::squeeze_limits(&params.inner, iterations)
        .map(|s| s.limits)
        .map_err(to_py)
}

#[pymodule]
fn spreadfront_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Parameters>()?;
    m.add_class::<SimulationResult>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(principal_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(critical_length, m)?)?;
    m.add_function(wrap_pyfunction!(critical_diffusivity, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_wave_speed, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_speed, m)?)?;
    m.add_function(wrap_pyfunction!(semi_wave_slope, m)?)?;
    m.add_function(wrap_pyfunction!(squeeze_limits, m)?)?;
    Ok(())
}
