//! Experiment presets and sweep machinery: N-sweeps with pairwise trajectory
//! differences, Monte-Carlo initial-data convergence, Hamiltonian
//! conservation studies, and power-law rate fitting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initdata::{self, bump_coefficients, mode_pair, DataKind};
use crate::integrator::{run, select_timestep, ModelParams};
use crate::observables::{sobolev_index, sup_norm, trajectory_difference, Posedness, RunRecord};
use crate::spectrum::{bracket, Grid};

/// Default seed of the counter-based generator used by all presets.
pub const DEFAULT_SEED: u64 = 9;
/// Desk-scale truncation exponents N = 2^k.
pub const DEFAULT_K_RANGE: (u32, u32) = (4, 12);
/// Grid rule M = 2^{min(k + offset, cap)}.
pub const DEFAULT_M_OFFSET: u32 = 4;
pub const DEFAULT_M_CAP: u32 = 16;
pub const DEFAULT_T_FINAL: f64 = 1e-2;
pub const DEFAULT_SNAPSHOTS: usize = 100;
pub const DEFAULT_BUMP_WIDTH: f64 = 16.0;

/// The four experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Truncated Gaussian data in the low-regularity regime (α = 0.6).
    Pwp,
    /// Pathological (bump-perturbed) data in the same regime.
    NormInflation,
    /// Both approximations at high regularity (α = 0.98).
    DeterministicWp,
    /// Hamiltonian conservation study across both kinds.
    EnergyCheck,
}

impl Regime {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "pwp" => Ok(Regime::Pwp),
            "norm_inflation" => Ok(Regime::NormInflation),
            "deterministic_wp" => Ok(Regime::DeterministicWp),
            "energy_check" => Ok(Regime::EnergyCheck),
            other => Err(Error::invalid(
                "regime",
                format!(
                    "unknown regime `{other}` (expected pwp, norm_inflation, \
                     deterministic_wp or energy_check)"
                ),
            )),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::Pwp => "pwp",
            Regime::NormInflation => "norm_inflation",
            Regime::DeterministicWp => "deterministic_wp",
            Regime::EnergyCheck => "energy_check",
        }
    }

    pub fn default_alpha(&self) -> f64 {
        match self {
            Regime::DeterministicWp => 0.98,
            _ => 0.6,
        }
    }

    pub fn posedness(&self) -> Posedness {
        match self {
            Regime::DeterministicWp => Posedness::Deterministic,
            _ => Posedness::Probabilistic,
        }
    }

    pub fn kinds(&self) -> Vec<DataKind> {
        match self {
            Regime::Pwp => vec![DataKind::Truncated],
            Regime::NormInflation => vec![DataKind::Pathological],
            Regime::DeterministicWp | Regime::EnergyCheck => {
                vec![DataKind::Truncated, DataKind::Pathological]
            }
        }
    }
}

/// Baseline discretization, or the refined (τ/2, 2M) rerun.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    Baseline,
    Refined,
}

impl Refinement {
    pub fn label(&self) -> &'static str {
        match self {
            Refinement::Baseline => "baseline",
            Refinement::Refined => "refined",
        }
    }
}

/// A fully resolved sweep configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub regime: Regime,
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub m_exp_offset: u32,
    pub m_exp_cap: u32,
    pub t_final: f64,
    pub snapshots: usize,
    pub seed: u64,
    pub bump_width: f64,
    pub refinement: Refinement,
    #[serde(default)]
    pub linear_only: bool,
}

/// Optional overrides applied on top of a preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub s: Option<f64>,
    pub k_min: Option<u32>,
    pub k_max: Option<u32>,
    pub m_exp_offset: Option<u32>,
    pub m_exp_cap: Option<u32>,
    pub t_final: Option<f64>,
    pub snapshots: Option<usize>,
    pub seed: Option<u64>,
    pub bump_width: Option<f64>,
    pub refined: Option<bool>,
    pub linear_only: Option<bool>,
}

/// Resolves a regime plus overrides into a full configuration, deriving the
/// Sobolev index from the regime rule unless overridden.
pub fn preset(regime: Regime, overrides: &Overrides) -> Result<SweepConfig> {
    let alpha = overrides.alpha.unwrap_or_else(|| regime.default_alpha());
    let beta = overrides.beta.unwrap_or(1.0 / 3.0);
    let s = match overrides.s {
        Some(s) => s,
        None => sobolev_index(alpha, beta, regime.posedness())?,
    };
    let config = SweepConfig {
        regime,
        alpha,
        beta,
        s,
        k_min: overrides.k_min.unwrap_or(DEFAULT_K_RANGE.0),
        k_max: overrides.k_max.unwrap_or(DEFAULT_K_RANGE.1),
        m_exp_offset: overrides.m_exp_offset.unwrap_or(DEFAULT_M_OFFSET),
        m_exp_cap: overrides.m_exp_cap.unwrap_or(DEFAULT_M_CAP),
        t_final: overrides.t_final.unwrap_or(DEFAULT_T_FINAL),
        snapshots: overrides.snapshots.unwrap_or(DEFAULT_SNAPSHOTS),
        seed: overrides.seed.unwrap_or(DEFAULT_SEED),
        bump_width: overrides.bump_width.unwrap_or(DEFAULT_BUMP_WIDTH),
        refinement: if overrides.refined.unwrap_or(false) {
            Refinement::Refined
        } else {
            Refinement::Baseline
        },
        linear_only: overrides.linear_only.unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min < 1 || self.k_min > self.k_max {
            return Err(Error::invalid(
                "k_min",
                format!("need 1 <= k_min <= k_max, got [{}, {}]", self.k_min, self.k_max),
            ));
        }
        if self.k_max > 40 {
            return Err(Error::invalid("k_max", "truncation exponent out of range"));
        }
        if self.regime.posedness() == Posedness::Deterministic {
            // revalidate even when s was overridden
            sobolev_index(self.alpha, self.beta, Posedness::Deterministic)?;
        }
        // every run in the sweep must have valid parameters
        for kind in self.regime.kinds() {
            for k in self.k_min..=self.k_max {
                self.params_for(k, kind)?;
            }
        }
        Ok(())
    }

    /// Grid size for truncation exponent `k`.
    pub fn grid_size(&self, k: u32) -> usize {
        let exp = (k + self.m_exp_offset).min(self.m_exp_cap).max(3);
        1usize << exp
    }

    /// Fully resolved run parameters for one sweep member, timestep included.
    pub fn params_for(&self, k: u32, kind: DataKind) -> Result<ModelParams> {
        let mut params = ModelParams {
            alpha: self.alpha,
            beta: self.beta,
            s: self.s,
            n_trunc: 1u64 << k,
            m: self.grid_size(k),
            t_final: self.t_final,
            tau: self.t_final.max(f64::MIN_POSITIVE),
            bump_width: self.bump_width,
            seed: self.seed,
            kind,
            snapshots: self.snapshots,
            linear_only: self.linear_only,
        };
        if self.t_final > 0.0 {
            params.tau = select_timestep(&params)?;
        }
        if self.refinement == Refinement::Refined {
            params.m *= 2;
            params.tau /= 2.0;
        }
        params.validate()?;
        Ok(params)
    }
}

/// One executed member of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub k: u32,
    pub n_trunc: u64,
    pub kind: DataKind,
    pub record: RunRecord,
}

/// Trajectory-difference entry between truncations `N = 2^k` and `N/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub k: u32,
    pub n_trunc: u64,
    pub kind: DataKind,
    pub value: f64,
}

/// A fitted power law `y ≈ C·N^exponent` with the RMS log-space misfit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub kind: DataKind,
    pub exponent: f64,
    pub residual: f64,
}

/// Everything produced by one sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub runs: Vec<SweepRun>,
    pub deltas: Vec<DeltaEntry>,
    pub rates: Vec<RateFit>,
}

impl SweepResult {
    pub fn find(&self, k: u32, kind: DataKind) -> Option<&SweepRun> {
        self.runs.iter().find(|r| r.k == k && r.kind == kind)
    }

    pub fn delta(&self, k: u32, kind: DataKind) -> Option<f64> {
        self.deltas
            .iter()
            .find(|d| d.k == k && d.kind == kind)
            .map(|d| d.value)
    }
}

/// Thread pool for sweep execution, capped by the `FNLW_THREADS` environment
/// variable (default: all logical cores). Results do not depend on the
/// schedule: every run is independent and aggregation is by index.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var("FNLW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder
        .build()
        .map_err(|e| Error::invalid("FNLW_THREADS", e.to_string()))
}

/// Runs every (N, kind) member of the sweep from one seed, computes sup
/// norms and pairwise trajectory differences, and fits the decay rates.
/// Stored states are dropped afterwards unless `keep_states` is set.
pub fn run_sweep(config: &SweepConfig, keep_states: bool) -> Result<SweepResult> {
    config.validate()?;
    let pool = thread_pool()?;
    let ks: Vec<u32> = (config.k_min..=config.k_max).collect();
    let mut runs = Vec::new();
    let mut deltas = Vec::new();
    let mut rates = Vec::new();
    for kind in config.regime.kinds() {
        let mut batch: Vec<SweepRun> = pool.install(|| {
            ks.par_iter()
                .map(|&k| {
                    let wrap = |e: Error| Error::RunFailed {
                        k,
                        kind,
                        source: Box::new(e),
                    };
                    let params = config.params_for(k, kind).map_err(wrap)?;
                    let data = initdata::build(&params).map_err(wrap)?;
                    let record = run(&params, &data, true).map_err(wrap)?;
                    Ok(SweepRun {
                        k,
                        n_trunc: 1u64 << k,
                        kind,
                        record,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for w in batch.windows(2) {
            let value =
                trajectory_difference(&w[1].record, &w[0].record, config.s, config.beta)?;
            deltas.push(DeltaEntry {
                k: w[1].k,
                n_trunc: w[1].n_trunc,
                kind,
                value,
            });
        }
        let kind_deltas: Vec<&DeltaEntry> = deltas.iter().filter(|d| d.kind == kind).collect();
        if kind_deltas.len() >= 3 {
            let n: Vec<f64> = kind_deltas.iter().map(|d| d.n_trunc as f64).collect();
            let y: Vec<f64> = kind_deltas.iter().map(|d| d.value).collect();
            if let Ok((exponent, residual)) = fit_rate(&n, &y) {
                rates.push(RateFit {
                    kind,
                    exponent,
                    residual,
                });
            }
        }
        if !keep_states {
            for run in &mut batch {
                run.record.drop_states();
            }
        }
        runs.extend(batch);
    }
    Ok(SweepResult {
        config: config.clone(),
        runs,
        deltas,
        rates,
    })
}

/// Least-squares fit of `log y` against `log N`. Returns the slope and the
/// RMS misfit in log space.
pub fn fit_rate(n_values: &[f64], y_values: &[f64]) -> Result<(f64, f64)> {
    if n_values.len() != y_values.len() || n_values.len() < 3 {
        return Err(Error::invalid(
            "n_values",
            format!("need at least 3 matched points, got {}", n_values.len()),
        ));
    }
    if n_values.iter().chain(y_values).any(|&v| !(v > 0.0)) {
        return Err(Error::invalid(
            "y_values",
            "power-law fit requires strictly positive values",
        ));
    }
    let xs: Vec<f64> = n_values.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = y_values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok((slope, (rss / n).sqrt()))
}

/// Pair-norm distance at t = 0 between the chosen approximation at `N` and
/// the plain truncation at `n_ref`, for one realization. Evaluated directly
/// in mode space; for the pathological kind the bump is synthesized on a
/// grid wide enough to hold both the bump and the reference band.
pub fn initial_distance(
    alpha: f64,
    beta: f64,
    s: f64,
    n_trunc: u64,
    n_ref: u64,
    kind: DataKind,
    seed: u64,
    bump_width: f64,
) -> Result<f64> {
    if n_ref < n_trunc {
        return Err(Error::invalid("n_ref", "reference band below truncation"));
    }
    let gauss_u = |n: u64| mode_pair(seed, n).g * bracket(n as i64).powf(-alpha);
    let gauss_v = |n: u64| mode_pair(seed, n).h * bracket(n as i64).powf(-(alpha - beta));
    // velocity channel: identical for both kinds
    let mut sv = 0.0;
    for n in (n_trunc + 1)..=n_ref {
        sv += 2.0 * bracket(n as i64).powf(2.0 * s - 2.0 * beta) * gauss_v(n).norm_sqr();
    }
    let su = match kind {
        DataKind::Truncated => {
            let mut su = 0.0;
            for n in (n_trunc + 1)..=n_ref {
                su += 2.0 * bracket(n as i64).powf(2.0 * s) * gauss_u(n).norm_sqr();
            }
            su
        }
        DataKind::Pathological => {
            let min_m = (8 * n_ref).max((bump_width * n_trunc as f64).ceil() as u64);
            let grid = Grid::new((min_m as usize).next_power_of_two())?;
            let bump = bump_coefficients(n_trunc, s, bump_width, grid)?;
            let mut su = bump.get(0).norm_sqr();
            for n in 1..=grid.nyquist() as u64 {
                let gap = if n > n_trunc && n <= n_ref {
                    gauss_u(n)
                } else {
                    num_complex::Complex64::ZERO
                };
                let d = bump.get(n as i64) - gap;
                let dm = bump.get(-(n as i64)) - gap.conj();
                su += bracket(n as i64).powf(2.0 * s) * (d.norm_sqr() + dm.norm_sqr());
            }
            su
        }
    };
    Ok(sv.sqrt() + su.sqrt())
}

/// Monte-Carlo measurement of the initial-data convergence rate: for each
/// `N`, the RMS over `r_count` realizations of the pair-norm distance to the
/// reference truncation at `4N`. The per-point reference keeps the measured
/// decay a clean power law of exponent `s - (α - 1/2)` for the truncated
/// kind; the pathological kind is floored by the bump at `~1/log N`.
pub fn mc_initial_convergence(
    alpha: f64,
    beta: f64,
    s: f64,
    n_values: &[u64],
    r_count: usize,
    kind: DataKind,
    seed_base: u64,
    bump_width: f64,
) -> Result<Vec<(u64, f64)>> {
    if r_count < 8 {
        return Err(Error::invalid(
            "r_count",
            format!("need at least 8 realizations, got {r_count}"),
        ));
    }
    let pool = thread_pool()?;
    pool.install(|| {
        n_values
            .par_iter()
            .map(|&n| {
                let mut acc = 0.0;
                for r in 0..r_count {
                    let d = initial_distance(
                        alpha,
                        beta,
                        s,
                        n,
                        4 * n,
                        kind,
                        seed_base + r as u64,
                        bump_width,
                    )?;
                    acc += d * d;
                }
                Ok((n, (acc / r_count as f64).sqrt()))
            })
            .collect()
    })
}

/// One row of the conservation study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub k: u32,
    pub n_trunc: u64,
    pub kind: DataKind,
    pub refinement: Refinement,
    pub e_inf: Option<f64>,
}

/// Hamiltonian conservation across the sweep, for the baseline
/// discretization (τ_N, M) and the refined one (τ_N/2, 2M).
pub fn energy_study(config: &SweepConfig) -> Result<Vec<EnergyRow>> {
    config.validate()?;
    let pool = thread_pool()?;
    let mut jobs = Vec::new();
    for kind in config.regime.kinds() {
        for k in config.k_min..=config.k_max {
            for refinement in [Refinement::Baseline, Refinement::Refined] {
                jobs.push((k, kind, refinement));
            }
        }
    }
    pool.install(|| {
        jobs.par_iter()
            .map(|&(k, kind, refinement)| {
                let wrap = |e: Error| Error::RunFailed {
                    k,
                    kind,
                    source: Box::new(e),
                };
                let mut cfg = config.clone();
                cfg.refinement = refinement;
                let params = cfg.params_for(k, kind).map_err(wrap)?;
                let data = initdata::build(&params).map_err(wrap)?;
                let record = run(&params, &data, false).map_err(wrap)?;
                Ok(EnergyRow {
                    k,
                    n_trunc: 1u64 << k,
                    kind,
                    refinement,
                    e_inf: record.e_inf,
                })
            })
            .collect()
    })
}

/// Convenience accessor mirroring the sup-norm notation of the diagnostics.
pub fn sup_norms(result: &SweepResult, kind: DataKind) -> Vec<(u32, f64)> {
    result
        .runs
        .iter()
        .filter(|r| r.kind == kind)
        .map(|r| (r.k, sup_norm(&r.record)))
        .collect()
}
