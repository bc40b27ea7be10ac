//! Python bindings: the main types and operations of the simulator.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fnlw_core::experiments::{self, Overrides, Regime};
use fnlw_core::initdata::{self, DataKind};
use fnlw_core::integrator::{self, ModelParams};
use fnlw_core::observables::{self, Posedness};
use fnlw_core::spectrum;

fn to_py_err(err: fnlw_core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn parse_kind(kind: &str) -> PyResult<DataKind> {
    match kind {
        "truncated" => Ok(DataKind::Truncated),
        "pathological" => Ok(DataKind::Pathological),
        other => Err(PyValueError::new_err(format!(
            "unknown data kind `{other}` (expected `truncated` or `pathological`)"
        ))),
    }
}

fn coeff_vector(values: Vec<Complex64>) -> PyResult<spectrum::CoeffVector> {
    let grid = spectrum::Grid::new(values.len()).map_err(to_py_err)?;
    spectrum::CoeffVector::from_values(grid, values).map_err(to_py_err)
}

/// All scalar knobs of one simulation run.
#[pyclass(name = "Params")]
#[derive(Clone)]
struct PyParams {
    inner: ModelParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (n, *, alpha=0.6, beta=1.0/3.0, s=None, m=None, t_s=1e-2,
                        tau=None, a=16.0, seed=experiments::DEFAULT_SEED,
                        kind="truncated", snapshots=100, linear_only=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: u64,
        alpha: f64,
        beta: f64,
        s: Option<f64>,
        m: Option<usize>,
        t_s: f64,
        tau: Option<f64>,
        a: f64,
        seed: u64,
        kind: &str,
        snapshots: usize,
        linear_only: bool,
    ) -> PyResult<Self> {
        let s = match s {
            Some(s) => s,
            None => observables::sobolev_index(alpha, beta, Posedness::Probabilistic)
                .map_err(to_py_err)?,
        };
        let m = m.unwrap_or_else(|| {
            let k = (n.max(1) as f64).log2().ceil() as u32;
            1usize << (k + experiments::DEFAULT_M_OFFSET).min(experiments::DEFAULT_M_CAP)
        });
        let mut params = ModelParams {
            alpha,
            beta,
            s,
            n_trunc: n,
            m,
            t_final: t_s,
            tau: f64::MIN_POSITIVE,
            bump_width: a,
            seed,
            kind: parse_kind(kind)?,
            snapshots,
            linear_only,
        };
        if params.t_final > 0.0 {
            params.tau = match tau {
                Some(tau) => {
                    integrator::round_to_snapshots(tau, params.t_final, params.snapshots)
                }
                None => integrator::select_timestep(&params).map_err(to_py_err)?,
            };
        }
        params.validate().map_err(to_py_err)?;
        Ok(PyParams { inner: params })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n_trunc
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn t_s(&self) -> f64 {
        self.inner.t_final
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.label()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(n={}, m={}, alpha={}, beta={}, s={}, tau={}, kind={})",
            self.inner.n_trunc,
            self.inner.m,
            self.inner.alpha,
            self.inner.beta,
            self.inner.s,
            self.inner.tau,
            self.inner.kind.label()
        )
    }
}

/// Snapshot diagnostics of one executed run.
#[pyclass(name = "RunResult")]
struct PyRunResult {
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    pair_norms: Vec<f64>,
    #[pyo3(get)]
    hamiltonians: Vec<f64>,
    #[pyo3(get)]
    e_inf: Option<f64>,
    #[pyo3(get)]
    s_sup: f64,
}

/// Integrates one run and returns its snapshot diagnostics.
#[pyfunction]
fn run_simulation(params: &PyParams) -> PyResult<PyRunResult> {
    let data = initdata::build(&params.inner).map_err(to_py_err)?;
    let record = integrator::run(&params.inner, &data, false).map_err(to_py_err)?;
    Ok(PyRunResult {
        times: record.times,
        pair_norms: record.pair_norms,
        hamiltonians: record.hamiltonians,
        e_inf: record.e_inf,
        s_sup: record.s_sup,
    })
}

/// Pair norm of the initial data selected by `params`, at t = 0.
#[pyfunction]
fn initial_pair_norm(params: &PyParams) -> PyResult<f64> {
    let data = initdata::build(&params.inner).map_err(to_py_err)?;
    let state = integrator::SpectralState::new(data.u0, data.v0, 0.0);
    Ok(observables::pair_norm(
        &state,
        params.inner.s,
        params.inner.beta,
    ))
}

/// Gaussian draws (g, h) for mode `n >= 0` under the given seed.
#[pyfunction]
fn mode_pair(seed: u64, n: u64) -> (Complex64, Complex64) {
    let pair = initdata::mode_pair(seed, n);
    (pair.g, pair.h)
}

/// Riemann zeta for x > 1.
#[pyfunction]
fn riemann_zeta(x: f64) -> PyResult<f64> {
    initdata::riemann_zeta(x).map_err(to_py_err)
}

/// Sobolev index rule: regime is "probabilistic" or "deterministic".
#[pyfunction]
fn sobolev_index(alpha: f64, beta: f64, regime: &str) -> PyResult<f64> {
    let posedness = match regime {
        "probabilistic" => Posedness::Probabilistic,
        "deterministic" => Posedness::Deterministic,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown regime `{other}` (expected `probabilistic` or `deterministic`)"
            )))
        }
    };
    observables::sobolev_index(alpha, beta, posedness).map_err(to_py_err)
}

/// Forward transform of real samples (length a power of two >= 8) to
/// Fourier coefficients in mode order 0, 1, …, M/2, -M/2+1, …, -1.
#[pyfunction]
fn forward_transform(samples: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let c = spectrum::forward_transform(&samples).map_err(to_py_err)?;
    Ok(c.values().to_vec())
}

/// Inverse transform of hermitian-symmetric coefficients to real samples.
#[pyfunction]
fn inverse_transform(coefficients: Vec<Complex64>) -> PyResult<Vec<f64>> {
    let c = coeff_vector(coefficients)?;
    spectrum::inverse_transform(&c).map_err(to_py_err)
}

/// Alias-free Fourier coefficients of u³ over the retained band.
#[pyfunction]
fn dealiased_cube(coefficients: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let c = coeff_vector(coefficients)?;
    Ok(spectrum::dealiased_cube(&c).map_err(to_py_err)?.values().to_vec())
}

/// Sobolev norm sqrt(Σ ⟨n⟩^{2s} |c(n)|²).
#[pyfunction]
fn sobolev_norm(coefficients: Vec<Complex64>, s: f64) -> PyResult<f64> {
    let c = coeff_vector(coefficients)?;
    Ok(spectrum::sobolev_norm(&c, s))
}

/// Empirical N-dependent time step, after snapshot rounding.
#[pyfunction]
fn select_timestep(params: &PyParams) -> f64 {
    params.inner.tau
}

/// Monte-Carlo initial-data convergence table: (N, RMS distance) pairs.
#[pyfunction]
#[pyo3(signature = (alpha, beta, s, n_values, r_count, kind="truncated",
                    seed=experiments::DEFAULT_SEED, a=16.0))]
#[allow(clippy::too_many_arguments)]
fn mc_initial_convergence(
    alpha: f64,
    beta: f64,
    s: f64,
    n_values: Vec<u64>,
    r_count: usize,
    kind: &str,
    seed: u64,
    a: f64,
) -> PyResult<Vec<(u64, f64)>> {
    experiments::mc_initial_convergence(
        alpha,
        beta,
        s,
        &n_values,
        r_count,
        parse_kind(kind)?,
        seed,
        a,
    )
    .map_err(to_py_err)
}

/// Least-squares power-law fit of y against N; returns (exponent, residual).
#[pyfunction]
fn fit_rate(n_values: Vec<f64>, y_values: Vec<f64>) -> PyResult<(f64, f64)> {
    experiments::fit_rate(&n_values, &y_values).map_err(to_py_err)
}

/// Sup norms per truncation for a named preset sweep, as
/// (N, kind, S_sup, delta_S, e_inf) rows.
#[pyfunction]
#[pyo3(signature = (regime, k_min=4, k_max=8, seed=experiments::DEFAULT_SEED))]
fn run_sweep(
    regime: &str,
    k_min: u32,
    k_max: u32,
    seed: u64,
) -> PyResult<Vec<(u64, String, f64, Option<f64>, Option<f64>)>> {
    let config = experiments::preset(
        Regime::parse(regime).map_err(to_py_err)?,
        &Overrides {
            k_min: Some(k_min),
            k_max: Some(k_max),
            seed: Some(seed),
            ..Default::default()
        },
    )
    .map_err(to_py_err)?;
    let result = experiments::run_sweep(&config, false).map_err(to_py_err)?;
    Ok(result
        .runs
        .iter()
        .map(|r| {
            (
                r.n_trunc,
                r.kind.label().to_string(),
                r.record.s_sup,
                result.delta(r.k, r.kind),
                r.record.e_inf,
            )
        })
        .collect())
}

#[pyfunction]
fn version() -> &'static str {
    fnlw_core::VERSION
}

#[pymodule]
fn fnlw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(run_simulation, m)?)?;
    m.add_function(wrap_pyfunction!(initial_pair_norm, m)?)?;
    m.add_function(wrap_pyfunction!(mode_pair, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_index, m)?)?;
    m.add_function(wrap_pyfunction!(forward_transform, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transform, m)?)?;
    m.add_function(wrap_pyfunction!(dealiased_cube, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_norm, m)?)?;
    m.add_function(wrap_pyfunction!(select_timestep, m)?)?;
    m.add_function(wrap_pyfunction!(mc_initial_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(fit_rate, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}
