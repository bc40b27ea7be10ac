//! Pseudo-spectral simulator for the one-dimensional fractional cubic
//! defocusing wave equation `∂²_t u + |D|^{2β} u + u³ = 0` on the torus,
//! with deterministic random initial data and an experiment harness for
//! well-posedness and norm-inflation studies.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod initdata;
pub mod integrator;
pub mod observables;
pub mod spectrum;

pub use error::{Error, Result};
pub use initdata::{build_pathological, build_truncated, mode_pair, riemann_zeta, DataKind};
pub use integrator::{run, select_timestep, ModelParams, SpectralState};
pub use observables::{
    discrete_hamiltonian, pair_norm, relative_energy_error, sobolev_index, sup_norm,
    trajectory_difference, Posedness, RunRecord,
};
pub use spectrum::{
    dealiased_cube, forward_transform, fractional_multiplier, inverse_transform, sinc_filter,
    sobolev_norm, CoeffVector, Grid,
};

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
