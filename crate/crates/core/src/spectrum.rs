//! Fourier conventions, spectral multipliers, and the dealiased cubic
//! nonlinearity on the unit torus.
//!
//! Coefficients follow the integral convention: the forward transform carries
//! a `1/M` factor so that discrete coefficients approximate
//! `c(n) = ∫ v(x) e^{-2πinx} dx`. Vectors are stored in FFT order
//! `n = 0, 1, …, M/2, -M/2+1, …, -1`, covering the retained band
//! `(-M/2, M/2]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance for the hermitian-symmetry invariant.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative bound on the imaginary residue discarded by `inverse_transform`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Collocation grid on the torus `[0, 1)` with `M` points, `M` a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    m: usize,
}

impl Grid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 8 || !m.is_power_of_two() {
            return Err(Error::invalid(
                "m",
                format!("grid size must be a power of two >= 8, got {m}"),
            ));
        }
        Ok(Grid { m })
    }

    /// Number of collocation points.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `h = 1/M`; `h * M == 1` exactly since `M` is a power of two.
    pub fn spacing(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Mode number stored at a given array index (FFT order).
    pub fn mode_at(&self, idx: usize) -> i64 {
        debug_assert!(idx < self.m);
        if idx <= self.m / 2 {
            idx as i64
        } else {
            idx as i64 - self.m as i64
        }
    }

    /// Array index of mode `n`, for `n` in the retained band `(-M/2, M/2]`.
    pub fn index_of(&self, n: i64) -> Option<usize> {
        let half = (self.m / 2) as i64;
        if n > -half && n <= half {
            Some(n.rem_euclid(self.m as i64) as usize)
        } else {
            None
        }
    }

    /// Largest retained mode `M/2` (the Nyquist mode).
    pub fn nyquist(&self) -> i64 {
        (self.m / 2) as i64
    }
}

/// The Japanese bracket `⟨n⟩ = sqrt((2πn)² + 1)`.
pub fn bracket(n: i64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * n as f64;
    (w * w + 1.0).sqrt()
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Fourier coefficients of a real field on a [`Grid`], hermitian-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    grid: Grid,
    values: Vec<Complex64>,
}

impl CoeffVector {
    pub fn zeros(grid: Grid) -> Self {
        CoeffVector {
            grid,
            values: vec![Complex64::ZERO; grid.len()],
        }
    }

    /// Wraps raw values in FFT order, verifying length and hermitian symmetry.
    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} coefficients, got {}", grid.len(), values.len()),
            ));
        }
        let c = CoeffVector { grid, values };
        c.check_hermitian()?;
        Ok(c)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Coefficient of mode `n`; zero outside the retained band.
    pub fn get(&self, n: i64) -> Complex64 {
        match self.grid.index_of(n) {
            Some(i) => self.values[i],
            None => Complex64::ZERO,
        }
    }

    /// Sets mode `n` and its conjugate partner `-n`, keeping the vector
    /// exactly hermitian. Modes 0 and M/2 have their imaginary part dropped.
    pub fn set_conjugate_pair(&mut self, n: i64, value: Complex64) {
        let n = n.abs();
        if n == 0 || n == self.grid.nyquist() {
            let i = self.grid.index_of(n).expect("mode in band");
            self.values[i] = Complex64::new(value.re, 0.0);
            return;
        }
        if let (Some(ip), Some(im)) = (self.grid.index_of(n), self.grid.index_of(-n)) {
            self.values[ip] = value;
            self.values[im] = value.conj();
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest hermitian-symmetry residual `|c(-n) - conj(c(n))|`, including
    /// the imaginary parts of the self-conjugate modes 0 and M/2.
    pub fn hermitian_residual(&self) -> f64 {
        let half = self.grid.len() / 2;
        let mut worst: f64 = self.values[0].im.abs().max(self.values[half].im.abs());
        for n in 1..half as i64 {
            let ip = self.grid.index_of(n).unwrap();
            let im = self.grid.index_of(-n).unwrap();
            let r = (self.values[im] - self.values[ip].conj()).norm();
            worst = worst.max(r);
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let tol = HERMITIAN_TOL * self.max_abs();
        let half = self.grid.len() / 2;
        let im0 = self.values[0].im.abs();
        if im0 > tol {
            return Err(Error::HermitianViolation {
                mode: 0,
                residual: im0,
                tolerance: tol,
            });
        }
        let imn = self.values[half].im.abs();
        if imn > tol {
            return Err(Error::HermitianViolation {
                mode: half as i64,
                residual: imn,
                tolerance: tol,
            });
        }
        for n in 1..half as i64 {
            let ip = self.grid.index_of(n).unwrap();
            let im = self.grid.index_of(-n).unwrap();
            let r = (self.values[im] - self.values[ip].conj()).norm();
            if r > tol {
                return Err(Error::HermitianViolation {
                    mode: n,
                    residual: r,
                    tolerance: tol,
                });
            }
        }
        Ok(())
    }

    /// Projects onto the hermitian subspace: averages conjugate pairs and
    /// zeroes the imaginary part of the self-conjugate modes. Applied after
    /// FFT-based constructions so the invariant holds exactly, not just up
    /// to roundoff.
    pub(crate) fn symmetrize(&mut self) {
        let half = self.grid.len() / 2;
        self.values[0].im = 0.0;
        self.values[half].im = 0.0;
        for n in 1..half as i64 {
            let ip = self.grid.index_of(n).unwrap();
            let im = self.grid.index_of(-n).unwrap();
            let avg = 0.5 * (self.values[ip] + self.values[im].conj());
            self.values[ip] = avg;
            self.values[im] = avg.conj();
        }
    }
}

fn fft_instance(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (len, direction == FftDirection::Forward);
    let mut cache = cache.lock().expect("fft plan cache poisoned");
    cache
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(len, direction))
        .clone()
}

/// Forward transform of `M` real samples:
/// `c(n) = (1/M) Σ_q samples[q] e^{-2πinq/M}`.
pub fn forward_transform(samples: &[f64]) -> Result<CoeffVector> {
    let grid = Grid::new(samples.len())?;
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("samples", "non-finite input"));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_instance(grid.len(), FftDirection::Forward).process(&mut buf);
    let scale = 1.0 / grid.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    let mut out = CoeffVector { grid, values: buf };
    out.symmetrize();
    Ok(out)
}

/// Inverse transform `samples[q] = Σ_n c(n) e^{2πinq/M}`. The imaginary
/// residue is discarded after verifying it stays below
/// `IMAG_RESIDUE_TOL * max|c|`.
pub fn inverse_transform(c: &CoeffVector) -> Result<Vec<f64>> {
    c.check_hermitian()?;
    let mut buf = c.values.clone();
    fft_instance(c.grid.len(), FftDirection::Inverse).process(&mut buf);
    let tol = IMAG_RESIDUE_TOL * c.max_abs();
    let mut worst = 0.0f64;
    for v in &buf {
        worst = worst.max(v.im.abs());
    }
    if worst > tol {
        return Err(Error::HermitianViolation {
            mode: -1,
            residual: worst,
            tolerance: tol,
        });
    }
    Ok(buf.into_iter().map(|v| v.re).collect())
}

/// Applies the Fourier multiplier `|2πn|^{beta·power}`. The zero mode maps to
/// zero for positive exponents and is left untouched when `power == 0`.
pub fn fractional_multiplier(c: &CoeffVector, beta: f64, power: f64) -> Result<CoeffVector> {
    if !(beta > 0.0) {
        return Err(Error::invalid("beta", format!("must be > 0, got {beta}")));
    }
    if power == 0.0 {
        return Ok(c.clone());
    }
    let exponent = beta * power;
    if exponent < 0.0 && c.get(0) != Complex64::ZERO {
        return Err(Error::invalid(
            "power",
            "negative power with a nonzero zero mode divides by zero",
        ));
    }
    let grid = c.grid;
    let mut out = CoeffVector::zeros(grid);
    for i in 0..grid.len() {
        let n = grid.mode_at(i).unsigned_abs();
        let factor = if n == 0 {
            0.0
        } else {
            (2.0 * std::f64::consts::PI * n as f64).powf(exponent)
        };
        out.values[i] = c.values[i] * factor;
    }
    Ok(out)
}

/// Applies the smoothing filter `sinc(τ|2πn|^β)` mode by mode.
pub fn sinc_filter(c: &CoeffVector, tau: f64, beta: f64) -> Result<CoeffVector> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tau", format!("must be > 0, got {tau}")));
    }
    if !(beta > 0.0) {
        return Err(Error::invalid("beta", format!("must be > 0, got {beta}")));
    }
    let grid = c.grid;
    let mut out = CoeffVector::zeros(grid);
    for i in 0..grid.len() {
        let n = grid.mode_at(i).unsigned_abs();
        let omega = (2.0 * std::f64::consts::PI * n as f64).powf(beta);
        out.values[i] = c.values[i] * sinc(tau * omega);
    }
    Ok(out)
}

/// Fourier coefficients of `u³` restricted to the retained band, computed by
/// zero padding onto a `2M` grid so the cubic product is alias-free. The
/// Nyquist mode is zeroed on both sides of the computation to keep the padded
/// spectrum (and the result) hermitian.
pub fn dealiased_cube(c: &CoeffVector) -> Result<CoeffVector> {
    c.check_hermitian()?;
    let m = c.grid.len();
    let wide = Grid::new(2 * m)?;
    let mut buf = vec![Complex64::ZERO; 2 * m];
    let half = (m / 2) as i64;
    for n in -(half - 1)..half {
        let src = c.grid.index_of(n).unwrap();
        let dst = wide.index_of(n).unwrap();
        buf[dst] = c.values[src];
    }
    fft_instance(2 * m, FftDirection::Inverse).process(&mut buf);
    for v in buf.iter_mut() {
        let r = v.re;
        *v = Complex64::new(r * r * r, 0.0);
    }
    fft_instance(2 * m, FftDirection::Forward).process(&mut buf);
    let scale = 1.0 / (2 * m) as f64;
    let mut out = CoeffVector::zeros(c.grid);
    for n in -(half - 1)..half {
        let src = wide.index_of(n).unwrap();
        let dst = c.grid.index_of(n).unwrap();
        out.values[dst] = buf[src] * scale;
    }
    out.symmetrize();
    Ok(out)
}

/// Sobolev norm `sqrt( Σ_n ⟨n⟩^{2s} |c(n)|² )` over the retained band.
pub fn sobolev_norm(c: &CoeffVector, s: f64) -> f64 {
    weighted_l2(c, 2.0 * s)
}

/// `sqrt( Σ_n ⟨n⟩^{exponent} |c(n)|² )`; shared by the norm diagnostics.
pub(crate) fn weighted_l2(c: &CoeffVector, exponent: f64) -> f64 {
    let grid = c.grid;
    let half = grid.len() / 2;
    let mut sum = c.values[0].norm_sqr() * bracket(0).powf(exponent);
    sum += c.values[half].norm_sqr() * bracket(half as i64).powf(exponent);
    for n in 1..half as i64 {
        let w = bracket(n).powf(exponent);
        let ip = grid.index_of(n).unwrap();
        let im = grid.index_of(-n).unwrap();
        sum += w * (self_norm_sqr(c.values[ip]) + self_norm_sqr(c.values[im]));
    }
    sum.sqrt()
}

#[inline]
fn self_norm_sqr(v: Complex64) -> f64 {
    v.re * v.re + v.im * v.im
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_real(m: usize, seed: u64) -> Vec<f64> {
        // small deterministic LCG, good enough for test inputs
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        (0..m)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect()
    }

    fn random_hermitian(m: usize, seed: u64) -> CoeffVector {
        let samples = random_real(m, seed);
        forward_transform(&samples).unwrap()
    }

    #[test]
    fn dc_mode() {
        let samples = vec![3.0; 16];
        let c = forward_transform(&samples).unwrap();
        assert!((c.get(0) - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        for n in 1..=8 {
            assert!(c.get(n).norm() < 1e-14);
        }
    }

    #[test]
    fn single_harmonic() {
        let m = 32;
        let samples: Vec<f64> = (0..m)
            .map(|q| (2.0 * std::f64::consts::PI * q as f64 / m as f64).cos())
            .collect();
        let c = forward_transform(&samples).unwrap();
        assert!((c.get(1) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((c.get(-1) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(c.get(2).norm() < 1e-14);
        assert!(c.get(0).norm() < 1e-14);
    }

    #[test]
    fn forward_matches_direct_dft() {
        let m = 16;
        let samples = random_real(m, 7);
        let c = forward_transform(&samples).unwrap();
        let scale = c.max_abs();
        for i in 0..m {
            let n = c.grid().mode_at(i);
            let mut acc = Complex64::ZERO;
            for (q, &v) in samples.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * n as f64 * q as f64 / m as f64;
                acc += Complex64::new(phase.cos(), phase.sin()) * v;
            }
            acc /= m as f64;
            assert!(
                (acc - c.values()[i]).norm() <= 1e-12 * scale,
                "mode {n} disagrees with direct DFT"
            );
        }
    }

    #[test]
    fn inverse_of_dc_is_constant() {
        let grid = Grid::new(8).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(1.0, 0.0));
        let samples = inverse_transform(&c).unwrap();
        for v in samples {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_half_pair_is_cosine() {
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(1, Complex64::new(0.5, 0.0));
        let samples = inverse_transform(&c).unwrap();
        for (q, v) in samples.iter().enumerate() {
            let expect = (2.0 * std::f64::consts::PI * q as f64 / 16.0).cos();
            assert!((v - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn round_trip_identity_across_sizes() {
        for &m in &[8usize, 16, 64, 256, 4096, 65536] {
            let samples = random_real(m, m as u64);
            let c = forward_transform(&samples).unwrap();
            let back = inverse_transform(&c).unwrap();
            let scale = samples.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            for (a, b) in samples.iter().zip(&back) {
                assert!((a - b).abs() <= 1e-12 * scale, "round trip failed at M={m}");
            }
        }
    }

    #[test]
    fn inverse_rejects_non_hermitian() {
        let grid = Grid::new(8).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.values_mut()[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            inverse_transform(&c),
            Err(Error::HermitianViolation { .. })
        ));
    }

    #[test]
    fn multiplier_power_zero_is_identity() {
        let c = random_hermitian(16, 3);
        let out = fractional_multiplier(&c, 0.5, 0.0).unwrap();
        assert_eq!(c.values(), out.values());
    }

    #[test]
    fn multiplier_single_mode() {
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(1, Complex64::new(1.0, 0.0));
        let out = fractional_multiplier(&c, 0.5, 2.0).unwrap();
        let expect = 2.0 * std::f64::consts::PI;
        assert!((out.get(1).re - expect).abs() < 1e-12);
    }

    #[test]
    fn multiplier_annihilates_zero_mode() {
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(5.0, 0.0));
        let out = fractional_multiplier(&c, 1.0 / 3.0, 2.0).unwrap();
        assert_eq!(out.get(0), Complex64::ZERO);
    }

    #[test]
    fn multiplier_rejects_negative_power_on_nonzero_mean() {
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(1.0, 0.0));
        assert!(fractional_multiplier(&c, 0.5, -1.0).is_err());
    }

    #[test]
    fn sinc_filter_values() {
        let grid = Grid::new(32).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(2.0, 0.0));
        c.set_conjugate_pair(8, Complex64::new(1.0, 0.0));
        let tau = 0.1;
        let beta = 1.0 / 3.0;
        let out = sinc_filter(&c, tau, beta).unwrap();
        // n = 0: sinc(0) = 1
        assert!((out.get(0).re - 2.0).abs() < 1e-15);
        // n = 8: sin(x)/x with x = 0.1 (16π)^{1/3}
        let x = tau * (2.0 * std::f64::consts::PI * 8.0).powf(beta);
        assert!((out.get(8).re - x.sin() / x).abs() < 1e-15);
    }

    #[test]
    fn sinc_filter_zero_crossing() {
        // choose tau so that τ|2πn|^β = π exactly at n = 1
        let beta = 0.5;
        let tau = std::f64::consts::PI / (2.0 * std::f64::consts::PI).powf(beta);
        let grid = Grid::new(8).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(1, Complex64::new(1.0, 0.0));
        let out = sinc_filter(&c, tau, beta).unwrap();
        assert!(out.get(1).norm() < 1e-15);
    }

    #[test]
    fn cube_of_constant() {
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(2.0, 0.0));
        let out = dealiased_cube(&c).unwrap();
        assert!((out.get(0).re - 8.0).abs() < 1e-12);
        for n in 1..=8 {
            assert!(out.get(n).norm() < 1e-12);
        }
    }

    #[test]
    fn cube_of_cosine_matches_trig_identity() {
        // cos³θ = (3 cos θ + cos 3θ)/4
        let grid = Grid::new(16).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(1, Complex64::new(0.5, 0.0));
        let out = dealiased_cube(&c).unwrap();
        assert!((out.get(1).re - 0.375).abs() < 1e-13);
        assert!((out.get(3).re - 0.125).abs() < 1e-13);
        assert!((out.get(-1).re - 0.375).abs() < 1e-13);
        assert!(out.get(2).norm() < 1e-13);
        assert!(out.get(0).norm() < 1e-13);
    }

    /// Direct O(M³) triple convolution over the retained band, Nyquist zeroed
    /// on input and output to mirror the padding convention.
    pub(super) fn convolution_oracle(c: &CoeffVector) -> CoeffVector {
        let grid = c.grid();
        let half = grid.nyquist();
        let coeff = |n: i64| -> Complex64 {
            if n.abs() >= half {
                Complex64::ZERO
            } else {
                c.get(n)
            }
        };
        let mut out = CoeffVector::zeros(grid);
        for n in (-(half - 1))..half {
            let mut acc = Complex64::ZERO;
            for a in (-(half - 1))..half {
                for b in (-(half - 1))..half {
                    let d = n - a - b;
                    if d.abs() < half {
                        acc += coeff(a) * coeff(b) * coeff(d);
                    }
                }
            }
            let idx = grid.index_of(n).unwrap();
            out.values_mut()[idx] = acc;
        }
        out.symmetrize();
        out
    }

    #[test]
    fn cube_matches_convolution_oracle() {
        for seed in 0..4 {
            let c = random_hermitian(16, 100 + seed);
            let fast = dealiased_cube(&c).unwrap();
            let slow = convolution_oracle(&c);
            let scale = slow.max_abs().max(1e-300);
            for i in 0..16 {
                assert!(
                    (fast.values()[i] - slow.values()[i]).norm() <= 1e-12 * scale,
                    "cube mismatch at index {i} (seed {seed})"
                );
            }
        }
    }

    #[test]
    fn multipliers_preserve_hermitian_exactly() {
        let c = random_hermitian(64, 11);
        let a = fractional_multiplier(&c, 0.5, 2.0).unwrap();
        assert_eq!(a.hermitian_residual(), 0.0);
        let b = sinc_filter(&c, 0.01, 0.25).unwrap();
        assert_eq!(b.hermitian_residual(), 0.0);
        let d = dealiased_cube(&c).unwrap();
        assert_eq!(d.hermitian_residual(), 0.0);
    }

    #[test]
    fn sobolev_norm_of_zero_mode() {
        let grid = Grid::new(8).unwrap();
        let mut c = CoeffVector::zeros(grid);
        c.set_conjugate_pair(0, Complex64::new(1.0, 0.0));
        for &s in &[0.0, 0.5, 1.0, -2.0] {
            assert!((sobolev_norm(&c, s) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sobolev_norm_single_mode_weight() {
        let grid = Grid::new(8).unwrap();
        let mut c = CoeffVector::zeros(grid);
        // place only +1 through raw access: the norm counts each retained mode
        c.values_mut()[1] = Complex64::new(1.0, 0.0);
        let expect = (4.0 * std::f64::consts::PI * std::f64::consts::PI + 1.0).sqrt();
        assert!((sobolev_norm(&c, 1.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn sobolev_norm_at_zero_is_parseval() {
        let m = 256;
        let samples = random_real(m, 23);
        let c = forward_transform(&samples).unwrap();
        let spectral = sobolev_norm(&c, 0.0);
        let physical =
            (samples.iter().map(|v| v * v).sum::<f64>() / m as f64).sqrt();
        assert!((spectral - physical).abs() <= 1e-12 * physical.max(1.0));
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(Grid::new(0).is_err());
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(12).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn forward_rejects_non_finite() {
        let mut samples = vec![0.0; 16];
        samples[3] = f64::NAN;
        assert!(forward_transform(&samples).is_err());
    }
}
