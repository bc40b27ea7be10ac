//! Time integration of the fractional wave equation
//! `∂²_t u + |D|^{2β} u + u³ = 0` by a filtered trigonometric scheme, with an
//! independent Störmer-Verlet integrator for cross-checks.
//!
//! Per mode, with `Ω = |2πn|^β`, one step of the trigonometric scheme reads
//!
//! ```text
//! u⁺ = cos(τΩ) u + τ sinc(τΩ) v + ½ τ² sinc(τΩ) f̃(u)
//! v⁺ = -Ω sin(τΩ) u + cos(τΩ) v + ½ τ ( cos(τΩ) f̃(u) + f̃(u⁺) )
//! ```
//!
//! where `f̃(u) = sinc²(τ|D|^β) f( sinc(τ|D|^β) u )` is the filtered
//! nonlinearity with `f(u) = -u³`, the cube fully dealiased. The linear flow
//! is solved exactly, so the scheme has no stability restriction from the
//! dispersion relation.


use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initdata::{riemann_zeta, DataKind, InitialData};
use crate::observables::{
    discrete_hamiltonian, pair_norm, quadratic_energy, relative_energy_error, RunRecord,
};
use crate::spectrum::{dealiased_cube, sinc, CoeffVector, Grid};

/// All scalar knobs of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Spectral decay exponent of the Gaussian data (α > 1/2).
    pub alpha: f64,
    /// Dispersion exponent (β > 0).
    pub beta: f64,
    /// Sobolev index probed by the diagnostics (s > 0).
    pub s: f64,
    /// Fourier truncation level N.
    pub n_trunc: u64,
    /// Collocation points M (power of two, N <= M/2 - 1).
    pub m: usize,
    /// Final time t_s.
    pub t_final: f64,
    /// Time step; must divide the snapshot interval in integer steps.
    pub tau: f64,
    /// Width parameter `a` of the concentrating bump.
    pub bump_width: f64,
    /// Seed of the counter-based mode generator.
    pub seed: u64,
    /// Which approximation of the initial data to integrate.
    pub kind: DataKind,
    /// Number J of uniform snapshot intervals.
    pub snapshots: usize,
    /// Disable the nonlinearity (exact linear flow), for validation runs.
    #[serde(default)]
    pub linear_only: bool,
}

impl ModelParams {
    /// Steps per snapshot interval, or an error if `tau` does not divide it.
    pub fn steps_per_snapshot(&self) -> Result<u64> {
        if self.t_final == 0.0 {
            return Ok(0);
        }
        let interval = self.t_final / self.snapshots as f64;
        let q = (interval / self.tau).round();
        if q < 1.0 || ((q * self.tau - interval).abs() > 1e-9 * interval) {
            return Err(Error::invalid(
                "tau",
                format!(
                    "time step {} does not divide the snapshot interval {} in integer steps",
                    self.tau, interval
                ),
            ));
        }
        Ok(q as u64)
    }

    pub fn total_steps(&self) -> Result<u64> {
        Ok(self.steps_per_snapshot()? * self.snapshots as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5) {
            return Err(Error::invalid(
                "alpha",
                format!("must be > 1/2, got {}", self.alpha),
            ));
        }
        if !(self.beta > 0.0) {
            return Err(Error::invalid(
                "beta",
                format!("must be > 0, got {}", self.beta),
            ));
        }
        if !(self.s > 0.0) {
            return Err(Error::invalid("s", format!("must be > 0, got {}", self.s)));
        }
        if self.m < 8 || !self.m.is_power_of_two() {
            return Err(Error::invalid(
                "m",
                format!("must be a power of two >= 8, got {}", self.m),
            ));
        }
        if self.n_trunc > (self.m / 2 - 1) as u64 {
            return Err(Error::invalid(
                "n",
                format!(
                    "truncation N={} exceeds M/2 - 1 = {}",
                    self.n_trunc,
                    self.m / 2 - 1
                ),
            ));
        }
        if self.t_final < 0.0 {
            return Err(Error::invalid(
                "t_s",
                format!("must be >= 0, got {}", self.t_final),
            ));
        }
        if self.t_final > 0.0 {
            if !(self.tau > 0.0 && self.tau <= self.t_final) {
                return Err(Error::invalid(
                    "tau",
                    format!(
                        "must satisfy 0 < tau <= t_s, got tau={} t_s={}",
                        self.tau, self.t_final
                    ),
                ));
            }
            if self.snapshots == 0 {
                return Err(Error::invalid("snapshots", "must be >= 1"));
            }
            self.steps_per_snapshot()?;
        }
        if !(self.bump_width > 0.0) {
            return Err(Error::invalid(
                "a",
                format!("must be > 0, got {}", self.bump_width),
            ));
        }
        if self.kind == DataKind::Pathological {
            if self.n_trunc < 2 {
                return Err(Error::invalid(
                    "n",
                    "pathological data needs N >= 2 (log N must be positive)",
                ));
            }
            if self.bump_width * self.n_trunc as f64 > self.m as f64 {
                return Err(Error::invalid(
                    "m",
                    format!(
                        "grid does not resolve the bump: a*N = {} > M = {}",
                        self.bump_width * self.n_trunc as f64,
                        self.m
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Fourier-side state of the pair `(u, ∂t u)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub u: CoeffVector,
    pub v: CoeffVector,
    pub t: f64,
}

impl SpectralState {
    pub fn new(u: CoeffVector, v: CoeffVector, t: f64) -> Self {
        SpectralState { u, v, t }
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    fn is_finite(&self) -> bool {
        self.u.values().iter().chain(self.v.values()).all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Dispersive time scale of the largest resolved mode, `τ_d = M^{-β}`.
pub fn dispersive_timescale(m: usize, beta: f64) -> f64 {
    (m as f64).powf(-beta)
}

/// Nonlinear time scale at initial time:
/// `(τ⁰_NL)^{-1} = sqrt(ζ(2α)) + N^{1/2-s}/ln N`.
pub fn nonlinear_timescale(alpha: f64, s: f64, n_trunc: u64) -> Result<f64> {
    if n_trunc < 2 {
        return Err(Error::invalid(
            "n",
            format!("nonlinear time scale needs N >= 2, got {n_trunc}"),
        ));
    }
    let n = n_trunc as f64;
    let gaussian_amplitude = riemann_zeta(2.0 * alpha)?.sqrt();
    let bump_amplitude = n.powf(0.5 - s) / n.ln();
    Ok(1.0 / (gaussian_amplitude + bump_amplitude))
}

/// Empirical step-size rule `τ_N = min(τ_d/5, (τ⁰_NL)³/2)`, reduced so that an
/// integer number of steps lands exactly on every snapshot time.
pub fn select_timestep(params: &ModelParams) -> Result<f64> {
    let tau_d = dispersive_timescale(params.m, params.beta);
    let tau_nl = nonlinear_timescale(params.alpha, params.s, params.n_trunc)?;
    let tau_n = (tau_d / 5.0).min(tau_nl.powi(3) / 2.0);
    Ok(round_to_snapshots(tau_n, params.t_final, params.snapshots))
}

/// Reduces a candidate step to `(t_s/J)/ceil((t_s/J)/τ)`; never increases it.
pub fn round_to_snapshots(tau_candidate: f64, t_final: f64, snapshots: usize) -> f64 {
    let interval = t_final / snapshots as f64;
    interval / (interval / tau_candidate).ceil()
}

/// Per-run tables of the mode-wise propagator entries; all multipliers are
/// functions of |n| so conjugate pairs see identical factors.
struct TrigStepper {
    tau: f64,
    cos_t: Vec<f64>,
    sin_t: Vec<f64>,
    sinc_t: Vec<f64>,
    omega: Vec<f64>,
    linear_only: bool,
}

impl TrigStepper {
    fn new(grid: Grid, tau: f64, beta: f64, linear_only: bool) -> Self {
        let m = grid.len();
        let mut cos_t = vec![0.0; m];
        let mut sin_t = vec![0.0; m];
        let mut sinc_t = vec![0.0; m];
        let mut omega = vec![0.0; m];
        for i in 0..m {
            let n = grid.mode_at(i).unsigned_abs();
            let w = if n == 0 {
                0.0
            } else {
                (2.0 * std::f64::consts::PI * n as f64).powf(beta)
            };
            let x = tau * w;
            omega[i] = w;
            cos_t[i] = x.cos();
            sin_t[i] = x.sin();
            sinc_t[i] = sinc(x);
        }
        TrigStepper {
            tau,
            cos_t,
            sin_t,
            sinc_t,
            omega,
            linear_only,
        }
    }

    /// `f̃(u) = sinc²(τΩ) f( sinc(τΩ) u )` with `f(u) = -u³`.
    fn filtered_nonlinearity(&self, u: &CoeffVector) -> Result<CoeffVector> {
        let mut inner = u.clone();
        for (c, &s) in inner.values_mut().iter_mut().zip(&self.sinc_t) {
            *c *= s;
        }
        let mut cubed = dealiased_cube(&inner)?;
        for (c, &s) in cubed.values_mut().iter_mut().zip(&self.sinc_t) {
            *c *= -s * s;
        }
        Ok(cubed)
    }

    /// One step; takes `f̃(u_p)` if already known and returns `f̃(u_{p+1})`
    /// for reuse, which halves the number of cube evaluations along a run.
    fn step(
        &self,
        state: &SpectralState,
        ftilde: Option<CoeffVector>,
    ) -> Result<(SpectralState, Option<CoeffVector>)> {
        let grid = state.grid();
        let tau = self.tau;
        if self.linear_only {
            let mut u_next = CoeffVector::zeros(grid);
            let mut v_next = CoeffVector::zeros(grid);
            for i in 0..grid.len() {
                let u = state.u.values()[i];
                let v = state.v.values()[i];
                u_next.values_mut()[i] = u * self.cos_t[i] + v * (tau * self.sinc_t[i]);
                v_next.values_mut()[i] =
                    u * (-self.omega[i] * self.sin_t[i]) + v * self.cos_t[i];
            }
            return Ok((
                SpectralState::new(u_next, v_next, state.t + tau),
                None,
            ));
        }
        let fu = match ftilde {
            Some(f) => f,
            None => self.filtered_nonlinearity(&state.u)?,
        };
        let mut u_next = CoeffVector::zeros(grid);
        for i in 0..grid.len() {
            let u = state.u.values()[i];
            let v = state.v.values()[i];
            u_next.values_mut()[i] = u * self.cos_t[i]
                + v * (tau * self.sinc_t[i])
                + fu.values()[i] * (0.5 * tau * tau * self.sinc_t[i]);
        }
        let fu_next = self.filtered_nonlinearity(&u_next)?;
        let mut v_next = CoeffVector::zeros(grid);
        for i in 0..grid.len() {
            let u = state.u.values()[i];
            let v = state.v.values()[i];
            v_next.values_mut()[i] = u * (-self.omega[i] * self.sin_t[i])
                + v * self.cos_t[i]
                + (fu.values()[i] * self.cos_t[i] + fu_next.values()[i]) * (0.5 * tau);
        }
        Ok((
            SpectralState::new(u_next, v_next, state.t + tau),
            Some(fu_next),
        ))
    }
}

/// The filtered nonlinearity as a standalone operation.
pub fn filtered_nonlinearity(u: &CoeffVector, tau: f64, beta: f64) -> Result<CoeffVector> {
    TrigStepper::new(u.grid(), tau, beta, false).filtered_nonlinearity(u)
}

/// One step of the filtered trigonometric scheme.
pub fn trig_step(state: &SpectralState, tau: f64, beta: f64) -> Result<SpectralState> {
    let stepper = TrigStepper::new(state.grid(), tau, beta, false);
    Ok(stepper.step(state, None)?.0)
}

/// One step of the linear flow only (`f̃ = 0`).
pub fn trig_step_linear(state: &SpectralState, tau: f64, beta: f64) -> Result<SpectralState> {
    let stepper = TrigStepper::new(state.grid(), tau, beta, true);
    Ok(stepper.step(state, None)?.0)
}

/// Kick-drift-kick Störmer-Verlet step for `v̇ = -Ω²u - u³` (cube dealiased,
/// unfiltered). Used only to cross-validate the trigonometric scheme.
pub fn verlet_step(state: &SpectralState, tau: f64, beta: f64) -> Result<SpectralState> {
    let grid = state.grid();
    let m = grid.len();
    let mut omega_sq = vec![0.0; m];
    for (i, w) in omega_sq.iter_mut().enumerate() {
        let n = grid.mode_at(i).unsigned_abs();
        *w = if n == 0 {
            0.0
        } else {
            (2.0 * std::f64::consts::PI * n as f64).powf(2.0 * beta)
        };
    }
    let accel = |u: &CoeffVector| -> Result<CoeffVector> {
        let cube = dealiased_cube(u)?;
        let mut a = CoeffVector::zeros(grid);
        for i in 0..m {
            a.values_mut()[i] = -(u.values()[i] * omega_sq[i]) - cube.values()[i];
        }
        Ok(a)
    };
    let a0 = accel(&state.u)?;
    let mut v_half = state.v.clone();
    for (v, a) in v_half.values_mut().iter_mut().zip(a0.values()) {
        *v += a * (0.5 * tau);
    }
    let mut u_next = state.u.clone();
    for (u, v) in u_next.values_mut().iter_mut().zip(v_half.values()) {
        *u += v * tau;
    }
    let a1 = accel(&u_next)?;
    let mut v_next = v_half;
    for (v, a) in v_next.values_mut().iter_mut().zip(a1.values()) {
        *v += a * (0.5 * tau);
    }
    Ok(SpectralState::new(u_next, v_next, state.t + tau))
}

/// Integrates the initial data over `[0, t_s]`, recording the Sobolev pair
/// norm and the discrete Hamiltonian at the J+1 uniform snapshot times
/// (including both endpoints). Stores the full state per snapshot when
/// `store_states` is set.
pub fn run(params: &ModelParams, init: &InitialData, store_states: bool) -> Result<RunRecord> {
    params.validate()?;
    if init.u0.grid().len() != params.m {
        return Err(Error::invalid(
            "m",
            format!(
                "initial data lives on a grid of {} points, params say {}",
                init.u0.grid().len(),
                params.m
            ),
        ));
    }
    let mut state = SpectralState::new(init.u0.clone(), init.v0.clone(), 0.0);
    let mut times = Vec::new();
    let mut pair_norms = Vec::new();
    let mut hamiltonians = Vec::new();
    let mut states = if store_states { Some(Vec::new()) } else { None };

    let record_snapshot = |state: &SpectralState,
                               t: f64,
                               times: &mut Vec<f64>,
                               norms: &mut Vec<f64>,
                               energies: &mut Vec<f64>,
                               states: &mut Option<Vec<SpectralState>>|
     -> Result<()> {
        times.push(t);
        norms.push(pair_norm(state, params.s, params.beta));
        // linear-only runs conserve the quadratic invariant; the quartic
        // term is not a constant of the linear flow.
        energies.push(if params.linear_only {
            quadratic_energy(state, params.beta)
        } else {
            discrete_hamiltonian(state, params.beta)?
        });
        if let Some(list) = states {
            list.push(state.clone());
        }
        Ok(())
    };

    record_snapshot(
        &state,
        0.0,
        &mut times,
        &mut pair_norms,
        &mut hamiltonians,
        &mut states,
    )?;

    if params.t_final > 0.0 {
        let q = params.steps_per_snapshot()?;
        let stepper = TrigStepper::new(state.grid(), params.tau, params.beta, params.linear_only);
        let mut ftilde = None;
        let mut step_index: u64 = 0;
        for j in 1..=params.snapshots {
            for _ in 0..q {
                let (next, f_next) = stepper.step(&state, ftilde.take())?;
                step_index += 1;
                if !next.is_finite() {
                    return Err(Error::NonFinite { step: step_index });
                }
                state = next;
                ftilde = f_next;
            }
            let t = params.t_final * (j as f64 / params.snapshots as f64);
            record_snapshot(
                &state,
                t,
                &mut times,
                &mut pair_norms,
                &mut hamiltonians,
                &mut states,
            )?;
        }
    }

    let s_sup = pair_norms.iter().cloned().fold(f64::MIN, f64::max);
    let mut record = RunRecord {
        params: params.clone(),
        times,
        pair_norms,
        hamiltonians,
        states,
        e_inf: None,
        s_sup,
    };
    record.e_inf = relative_energy_error(&record);
    Ok(record)
}
