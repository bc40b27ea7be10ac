//! Diagnostics: Sobolev pair norms, sup-in-time norms, trajectory-difference
//! norms, the discrete Hamiltonian, and the relative conservation error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{ModelParams, SpectralState};
use crate::spectrum::{bracket, inverse_transform, weighted_l2, CoeffVector};

/// Everything recorded along one run: snapshot times, per-snapshot Sobolev
/// pair norm `S` and discrete Hamiltonian `H`, optionally the full states,
/// and the derived scalars.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub pair_norms: Vec<f64>,
    pub hamiltonians: Vec<f64>,
    pub states: Option<Vec<SpectralState>>,
    /// `max_p |H[p]/H[0] - 1|`; undefined when `H[0] = 0`.
    pub e_inf: Option<f64>,
    /// `max_p S[p]`.
    pub s_sup: f64,
}

impl RunRecord {
    pub fn drop_states(&mut self) {
        self.states = None;
    }
}

/// The Sobolev pair norm, exactly as printed in the diagnostics:
/// `sqrt(Σ ⟨n⟩^{2s-2β} |v̂|²) + sqrt(Σ ⟨n⟩^{2s} |û|²)`.
pub fn pair_norm(state: &SpectralState, s: f64, beta: f64) -> f64 {
    weighted_l2(&state.v, 2.0 * s - 2.0 * beta) + weighted_l2(&state.u, 2.0 * s)
}

/// Discrete Hamiltonian:
/// `Σ |v̂(n)|² + Σ |2πn|^{2β} |û(n)|² + (1/2M) Σ_q u(x_q)⁴`,
/// the quartic term evaluated as a Riemann sum on the collocation grid.
pub fn discrete_hamiltonian(state: &SpectralState, beta: f64) -> Result<f64> {
    let grid = state.grid();
    let mut quadratic = 0.0;
    for i in 0..grid.len() {
        let n = grid.mode_at(i).unsigned_abs();
        let weight = if n == 0 {
            0.0
        } else {
            (2.0 * std::f64::consts::PI * n as f64).powf(2.0 * beta)
        };
        quadratic += state.v.values()[i].norm_sqr() + weight * state.u.values()[i].norm_sqr();
    }
    let samples = inverse_transform(&state.u)?;
    let quartic: f64 = samples.iter().map(|&x| x * x * x * x).sum();
    Ok(quadratic + quartic / (2.0 * grid.len() as f64))
}

/// Quadratic part of the discrete Hamiltonian, the invariant of the linear
/// flow. Used in place of the full Hamiltonian by nonlinearity-disabled
/// validation runs, whose propagator conserves exactly this quantity.
pub fn quadratic_energy(state: &SpectralState, beta: f64) -> f64 {
    let grid = state.grid();
    let mut sum = 0.0;
    for i in 0..grid.len() {
        let n = grid.mode_at(i).unsigned_abs();
        let weight = if n == 0 {
            0.0
        } else {
            (2.0 * std::f64::consts::PI * n as f64).powf(2.0 * beta)
        };
        sum += state.v.values()[i].norm_sqr() + weight * state.u.values()[i].norm_sqr();
    }
    sum
}

/// Relative error on Hamiltonian conservation over the recorded snapshots.
/// Returns `None` when the initial Hamiltonian vanishes (the error is then
/// undefined, not zero).
pub fn relative_energy_error(record: &RunRecord) -> Option<f64> {
    let h0 = *record.hamiltonians.first()?;
    if h0 == 0.0 {
        return None;
    }
    record
        .hamiltonians
        .iter()
        .map(|h| (h / h0 - 1.0).abs())
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        })
}

/// Maximum of the recorded pair norms, the discrete stand-in for the
/// `L^∞([0, t_s])` norm.
pub fn sup_norm(record: &RunRecord) -> f64 {
    record
        .pair_norms
        .iter()
        .cloned()
        .fold(f64::MIN, f64::max)
}

/// Accumulates one channel of the pair norm of the difference of two
/// coefficient vectors, aligned by mode index over the union of bands.
/// Modes absent from one band count as zero.
fn difference_channel(a: &CoeffVector, b: &CoeffVector, exponent: f64) -> f64 {
    let half_a = a.grid().nyquist();
    let half_b = b.grid().nyquist();
    let half = half_a.max(half_b);
    let mut sum = (a.get(0) - b.get(0)).norm_sqr() * bracket(0).powf(exponent);
    for n in 1..=half {
        let w = bracket(n).powf(exponent);
        let dp = (a.get(n) - b.get(n)).norm_sqr();
        let dm = (a.get(-n) - b.get(-n)).norm_sqr();
        sum += w * (dp + dm);
    }
    sum.sqrt()
}

/// Sup over common snapshots of the pair norm of the state difference.
/// Both records must store states and share identical snapshot times; the
/// grids may differ, in which case coefficients are aligned by mode number.
pub fn trajectory_difference(a: &RunRecord, b: &RunRecord, s: f64, beta: f64) -> Result<f64> {
    let (states_a, states_b) = match (&a.states, &b.states) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::SnapshotMismatch),
    };
    if a.times.len() != b.times.len() || a.times.iter().zip(&b.times).any(|(x, y)| x != y) {
        return Err(Error::SnapshotMismatch);
    }
    let mut worst: f64 = 0.0;
    for (sa, sb) in states_a.iter().zip(states_b) {
        let d = difference_channel(&sa.v, &sb.v, 2.0 * s - 2.0 * beta)
            + difference_channel(&sa.u, &sb.u, 2.0 * s);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Which well-posedness regime fixes the probed Sobolev index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Posedness {
    Probabilistic,
    Deterministic,
}

/// Sobolev index rule: `s = γ(α - 1/2)` with `γ = 1/3` in the probabilistic
/// regime and `γ = ½(1 + (1/2-β)/(α-1/2))` in the deterministic one (the
/// midpoint between the well-posedness threshold and 1).
pub fn sobolev_index(alpha: f64, beta: f64, regime: Posedness) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::invalid(
            "alpha",
            format!("must be > 1/2, got {alpha}"),
        ));
    }
    match regime {
        Posedness::Probabilistic => Ok((alpha - 0.5) / 3.0),
        Posedness::Deterministic => {
            if !(alpha - 0.5 > 0.5 - beta) {
                return Err(Error::invalid(
                    "alpha",
                    format!(
                        "deterministic regime needs α - 1/2 > 1/2 - β, got α={alpha}, β={beta}"
                    ),
                ));
            }
            let gamma = 0.5 * (1.0 + (0.5 - beta) / (alpha - 0.5));
            Ok(gamma * (alpha - 0.5))
        }
    }
}
