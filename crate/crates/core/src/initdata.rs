//! Deterministic synthesis of the random initial data: a fractional Gaussian
//! field approximated either by plain Fourier truncation or by truncation
//! plus a concentrating Gaussian bump in the position channel.
//!
//! Mode draws are counter-based: each `(seed, channel, |n|)` triple keys its
//! own generator, so truncations at different `N` are nested and every run of
//! a sweep sees the same realization.

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::ModelParams;
use crate::spectrum::{bracket, forward_transform, CoeffVector, Grid};

/// Which approximation of the random field a run starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// Plain Fourier truncation of the Gaussian field.
    Truncated,
    /// Truncation plus the concentrating bump added to the position channel.
    Pathological,
}

impl DataKind {
    pub fn label(&self) -> &'static str {
        match self {
            DataKind::Truncated => "truncated",
            DataKind::Pathological => "pathological",
        }
    }
}

/// Per-mode Gaussian draws for the position (`g`) and velocity (`h`) channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair {
    pub g: Complex64,
    pub h: Complex64,
    pub n: u64,
}

const CHANNEL_POSITION: u8 = 0;
const CHANNEL_VELOCITY: u8 = 1;

fn standard_normal_pair(seed: u64, channel: u8, n: u64) -> (f64, f64) {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = channel;
    key[9..17].copy_from_slice(&n.to_le_bytes());
    key[24..32].copy_from_slice(b"fnlwmode");
    let mut rng = ChaCha12Rng::from_seed(key);
    // Box-Muller on u1 in (0,1], u2 in [0,1)
    let u1 = ((rng.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
    let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Deterministic Gaussian draws for mode `n >= 0`. For `n > 0` both entries
/// are complex standard normals with `E|g|² = 1`; for `n = 0` they are real
/// standard normals. The pair at `-n` is the conjugate of the pair at `n`
/// and is never drawn independently.
pub fn mode_pair(seed: u64, n: u64) -> ModePair {
    let (gx, gy) = standard_normal_pair(seed, CHANNEL_POSITION, n);
    let (hx, hy) = standard_normal_pair(seed, CHANNEL_VELOCITY, n);
    if n == 0 {
        ModePair {
            g: Complex64::new(gx, 0.0),
            h: Complex64::new(hx, 0.0),
            n,
        }
    } else {
        let half = std::f64::consts::FRAC_1_SQRT_2;
        ModePair {
            g: Complex64::new(gx * half, gy * half),
            h: Complex64::new(hx * half, hy * half),
            n,
        }
    }
}

/// A synthesized initial condition: position and velocity coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub u0: CoeffVector,
    pub v0: CoeffVector,
    pub kind: DataKind,
}

fn check_truncation(params: &ModelParams, grid: Grid) -> Result<()> {
    let max_n = (grid.len() / 2 - 1) as u64;
    if params.n_trunc > max_n {
        return Err(Error::invalid(
            "n",
            format!(
                "truncation N={} exceeds the grid band (need N <= M/2 - 1 = {max_n})",
                params.n_trunc
            ),
        ));
    }
    Ok(())
}

/// Fourier truncation of the Gaussian field at `|n| <= N`:
/// `u0(n) = g(n)/⟨n⟩^α`, `v0(n) = h(n)/⟨n⟩^{α-β}`.
pub fn build_truncated(params: &ModelParams) -> Result<InitialData> {
    let grid = Grid::new(params.m)?;
    check_truncation(params, grid)?;
    let mut u0 = CoeffVector::zeros(grid);
    let mut v0 = CoeffVector::zeros(grid);
    for n in 0..=params.n_trunc {
        let pair = mode_pair(params.seed, n);
        let b = bracket(n as i64);
        u0.set_conjugate_pair(n as i64, pair.g * b.powf(-params.alpha));
        v0.set_conjugate_pair(n as i64, pair.h * b.powf(-(params.alpha - params.beta)));
    }
    Ok(InitialData {
        u0,
        v0,
        kind: DataKind::Truncated,
    })
}

/// Fourier coefficients of the concentrating bump
/// `p(x) = (N^{1/2-s}/ln N) · exp(-(aN(x-1/2))²)`, sampled on the grid and
/// transformed. The tails are below machine epsilon at the domain boundary by
/// the choice of `a`, so treating the sample as periodic is exact in double
/// precision.
pub fn bump_coefficients(n_trunc: u64, s: f64, a: f64, grid: Grid) -> Result<CoeffVector> {
    if n_trunc < 2 {
        return Err(Error::invalid(
            "n",
            format!("bump requires N >= 2, got {n_trunc}"),
        ));
    }
    if !(a > 0.0) {
        return Err(Error::invalid("a", format!("must be > 0, got {a}")));
    }
    if a * n_trunc as f64 > grid.len() as f64 {
        return Err(Error::invalid(
            "m",
            format!(
                "grid does not resolve the bump: need a*N <= M, got a*N = {} > M = {}",
                a * n_trunc as f64,
                grid.len()
            ),
        ));
    }
    let n = n_trunc as f64;
    let amplitude = n.powf(0.5 - s) / n.ln();
    let m = grid.len();
    let samples: Vec<f64> = (0..m)
        .map(|q| {
            let x = q as f64 / m as f64;
            let arg = a * n * (x - 0.5);
            amplitude * (-arg * arg).exp()
        })
        .collect();
    forward_transform(&samples)
}

/// Truncated data with the bump added to the position channel only.
pub fn build_pathological(params: &ModelParams) -> Result<InitialData> {
    let grid = Grid::new(params.m)?;
    let base = build_truncated(params)?;
    let bump = bump_coefficients(params.n_trunc, params.s, params.bump_width, grid)?;
    let mut u0 = base.u0;
    for (dst, src) in u0.values_mut().iter_mut().zip(bump.values()) {
        *dst += src;
    }
    Ok(InitialData {
        u0,
        v0: base.v0,
        kind: DataKind::Pathological,
    })
}

/// Builds the initial data selected by `params.kind`.
pub fn build(params: &ModelParams) -> Result<InitialData> {
    match params.kind {
        DataKind::Truncated => build_truncated(params),
        DataKind::Pathological => build_pathological(params),
    }
}

/// Riemann zeta for real `x > 1`, by partial sum plus Euler-Maclaurin tail.
/// Absolute error stays below 1e-10 for x >= 1.05.
pub fn riemann_zeta(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::invalid("x", format!("zeta requires x > 1, got {x}")));
    }
    const K: u64 = 128;
    let k = K as f64;
    let mut sum = 0.0;
    for j in 1..K {
        sum += (j as f64).powf(-x);
    }
    // integral tail + half term + two Bernoulli corrections at k = K
    sum += k.powf(1.0 - x) / (x - 1.0);
    sum += 0.5 * k.powf(-x);
    sum += x * k.powf(-x - 1.0) / 12.0;
    sum -= x * (x + 1.0) * (x + 2.0) * k.powf(-x - 3.0) / 720.0;
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::ModelParams;
    use crate::spectrum::{inverse_transform, sobolev_norm};

    fn params(alpha: f64, beta: f64, s: f64, n: u64, m: usize, seed: u64) -> ModelParams {
        ModelParams {
            alpha,
            beta,
            s,
            n_trunc: n,
            m,
            t_final: 1e-2,
            tau: 1e-4,
            bump_width: 16.0,
            seed,
            kind: DataKind::Truncated,
            snapshots: 100,
            linear_only: false,
        }
    }

    #[test]
    fn mode_pair_is_deterministic() {
        let a = mode_pair(42, 17);
        let b = mode_pair(42, 17);
        assert_eq!(a, b);
        let c = mode_pair(43, 17);
        assert_ne!(a.g, c.g);
    }

    #[test]
    fn zero_mode_is_real() {
        for seed in 0..20 {
            let p = mode_pair(seed, 0);
            assert_eq!(p.g.im, 0.0);
            assert_eq!(p.h.im, 0.0);
        }
    }

    #[test]
    fn second_moment_close_to_one() {
        let draws = 100_000;
        let mean: f64 = (1..=draws)
            .map(|n| mode_pair(5, n).g.norm_sqr())
            .sum::<f64>()
            / draws as f64;
        assert!(
            (mean - 1.0).abs() < 0.01,
            "E|g|² = {mean} deviates from 1 by more than 1%"
        );
    }

    #[test]
    fn truncated_at_zero_keeps_only_the_mean() {
        let p = params(0.6, 1.0 / 3.0, 1.0 / 30.0, 0, 32, 9);
        let data = build_truncated(&p).unwrap();
        let pair = mode_pair(9, 0);
        assert_eq!(data.u0.get(0), pair.g);
        assert_eq!(data.v0.get(0), pair.h);
        for n in 1..=16 {
            assert_eq!(data.u0.get(n), Complex64::ZERO);
            assert_eq!(data.v0.get(n), Complex64::ZERO);
        }
    }

    #[test]
    fn truncated_norm_matches_direct_sum() {
        let alpha = 0.6;
        let p = params(alpha, 1.0 / 3.0, 1.0 / 30.0, 8, 64, 3);
        let data = build_truncated(&p).unwrap();
        // direct sum oracle over the drawn modes
        let mut sum = mode_pair(3, 0).g.norm_sqr();
        for n in 1..=8u64 {
            let g = mode_pair(3, n).g;
            sum += 2.0 * g.norm_sqr() * bracket(n as i64).powf(-2.0 * alpha);
        }
        let expect = sum.sqrt();
        let got = sobolev_norm(&data.u0, 0.0);
        assert!((got - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn truncations_are_nested() {
        let p8 = params(0.6, 1.0 / 3.0, 1.0 / 30.0, 8, 64, 11);
        let mut p16 = p8.clone();
        p16.n_trunc = 16;
        let d8 = build_truncated(&p8).unwrap();
        let d16 = build_truncated(&p16).unwrap();
        for n in -8i64..=8 {
            assert_eq!(d8.u0.get(n), d16.u0.get(n));
            assert_eq!(d8.v0.get(n), d16.v0.get(n));
        }
        for n in 9i64..=16 {
            assert_ne!(d16.u0.get(n), Complex64::ZERO);
        }
    }

    #[test]
    fn fields_are_real() {
        for seed in [1u64, 2, 3] {
            let p = params(0.55, 1.0 / 8.0, 0.02, 31, 128, seed);
            let data = build_truncated(&p).unwrap();
            assert!(inverse_transform(&data.u0).is_ok());
            assert!(inverse_transform(&data.v0).is_ok());
            assert_eq!(data.u0.hermitian_residual(), 0.0);
        }
    }

    #[test]
    fn truncation_too_large_for_grid() {
        let p = params(0.6, 1.0 / 3.0, 1.0 / 30.0, 16, 32, 1);
        assert!(build_truncated(&p).is_err());
    }

    #[test]
    fn bump_peak_value() {
        let n = 16u64;
        let s = 1.0 / 30.0;
        let grid = Grid::new(1024).unwrap();
        let c = bump_coefficients(n, s, 16.0, grid).unwrap();
        let samples = inverse_transform(&c).unwrap();
        let expect = (n as f64).powf(0.5 - s) / (n as f64).ln();
        // x = 1/2 is grid point q = M/2
        assert!((samples[512] - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn bump_boundary_attenuation() {
        // the sampled profile at the domain boundary: p(0)/p(1/2) = exp(-(aN/2)²)
        let a = 16.0;
        for n in [2u64, 16, 4096] {
            let ratio = (-(a * n as f64 / 2.0) * (a * n as f64 / 2.0)).exp();
            assert!(ratio < 1e-27, "N={n}: boundary ratio {ratio}");
        }
        // and exp(-64) is already below the bound at the N=1 scaling
        assert!((-64.0f64).exp() < 1e-27);
    }

    #[test]
    fn bump_preconditions() {
        let grid = Grid::new(64).unwrap();
        assert!(bump_coefficients(1, 0.1, 16.0, grid).is_err());
        assert!(bump_coefficients(8, 0.1, 0.0, grid).is_err());
        // a*N = 16*8 = 128 > 64: under-resolved
        assert!(bump_coefficients(8, 0.1, 16.0, grid).is_err());
        assert!(bump_coefficients(4, 0.1, 16.0, grid).is_ok());
    }

    #[test]
    fn bump_norm_log_law() {
        // ||p_N^s||_{H^s} · ln N stays in a narrow band across truncations
        let s = 1.0 / 30.0;
        let mut vals = Vec::new();
        for k in 4..=10u32 {
            let n = 1u64 << k;
            let m = (16 * n as usize).next_power_of_two().max(1024);
            let grid = Grid::new(m).unwrap();
            let c = bump_coefficients(n, s, 16.0, grid).unwrap();
            vals.push(sobolev_norm(&c, s) * (n as f64).ln());
        }
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 1.5, "band ratio {} too wide", max / min);
    }

    #[test]
    fn pathological_minus_truncated_is_the_bump() {
        let mut p = params(0.6, 1.0 / 3.0, 1.0 / 30.0, 8, 256, 21);
        p.kind = DataKind::Pathological;
        let patho = build_pathological(&p).unwrap();
        let trunc = build_truncated(&p).unwrap();
        let bump = bump_coefficients(8, p.s, 16.0, Grid::new(256).unwrap()).unwrap();
        for i in 0..256 {
            let diff = patho.u0.values()[i] - trunc.u0.values()[i];
            assert!((diff - bump.values()[i]).norm() < 1e-15);
        }
        assert_eq!(patho.v0, trunc.v0);
    }

    #[test]
    fn zeta_at_two() {
        let z = riemann_zeta(2.0).unwrap();
        let expect = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((z - expect).abs() < 1e-10);
    }

    /// Brute-force oracle: two million terms plus the integral bound, enough
    /// for 1e-9 absolute accuracy on its own.
    fn zeta_oracle(x: f64) -> f64 {
        let k = 2_000_000u64;
        let mut sum = 0.0;
        for j in 1..k {
            sum += (j as f64).powf(-x);
        }
        sum + (k as f64).powf(1.0 - x) / (x - 1.0) + 0.5 * (k as f64).powf(-x)
    }

    #[test]
    fn zeta_matches_high_k_oracle() {
        for &x in &[1.2, 1.96, 3.0] {
            let got = riemann_zeta(x).unwrap();
            let expect = zeta_oracle(x);
            assert!(
                (got - expect).abs() < 1e-9,
                "zeta({x}) = {got}, oracle {expect}"
            );
        }
        // frozen reference values
        assert!((riemann_zeta(1.2).unwrap() - 5.591582441177751).abs() < 1e-10);
        assert!((riemann_zeta(1.96).unwrap() - 1.684094089589449).abs() < 1e-10);
    }

    #[test]
    fn zeta_rejects_pole() {
        assert!(riemann_zeta(1.0).is_err());
        assert!(riemann_zeta(0.5).is_err());
    }
}
