//! Coloured thermal field with the bath's spectral shape.
//!
//! The series is synthesised in the frequency domain: one Hermitian spectrum
//! of complex Gaussians per Cartesian component, scaled by `√S(ω_k)`, then
//! inverse transformed. Its two-sided angular PSD,
//! `S(ω) = ∫ ⟨h(t)h(0)⟩ e^{-iωt} dt`, equals the target exactly on the DFT grid in
//! expectation. Each component draws from its own ChaCha stream.

use memspin_core::{NoiseSeries, SpectralDensity, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Shape of the noise PSD relative to the bath spectral density `I_ω`.
///
/// Only the classical form satisfies the fluctuation–dissipation relation for
/// the kernel (the transform of `∫_τ^∞ K` is `2I_ω/ω`), so only it thermalises
/// the spin to a Boltzmann distribution at `θ = T·temperature_scale/γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdForm {
    /// `S(ω) = 2 T I_ω(ω)`.
    Spectral,
    /// `S(ω) = 2 T I_ω(ω)/ω`, the classical fluctuation–dissipation partner of the kernel.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub density: SpectralDensity,
    pub form: PsdForm,
    /// Multiplies the temperature before it enters the PSD.
    pub temperature_scale: f64,
}

/// Thermal field in tesla per unit of simulation temperature.
pub const TESLA_PER_UNIT_TEMPERATURE: f64 = 1e-4;

impl NoiseModel {
    /// Classical form with one unit of temperature worth 1e-4 T of thermal field.
    pub fn new(density: SpectralDensity) -> Self {
        NoiseModel {
            density,
            form: PsdForm::Classical,
            temperature_scale: memspin_core::GAMMA_E * TESLA_PER_UNIT_TEMPERATURE,
        }
    }

    /// `S(ω) = 2 T̃ I_ω(ω)` with `T̃` entering unscaled.
    pub fn spectral(density: SpectralDensity) -> Self {
        NoiseModel { density, form: PsdForm::Spectral, temperature_scale: 1.0 }
    }

    /// Thermal field in tesla for the given temperature, `θ = k_B T/μ`.
    pub fn thermal_field(&self, temperature: f64, gyromagnetic: f64) -> f64 {
        temperature * self.temperature_scale / gyromagnetic
    }

    /// Target two-sided PSD at angular frequency `omega` (rad/ps).
    pub fn psd(&self, omega: f64, temperature: f64) -> f64 {
        let t = temperature * self.temperature_scale;
        let omega = omega.abs();
        match self.form {
            PsdForm::Spectral => 2.0 * t * self.density.angular_density(omega),
            PsdForm::Classical => {
                let p = self.density.angular();
                let d = p.omega0 * p.omega0 - omega * omega;
                2.0 * t * p.amp * p.gamma / (d * d + p.gamma * p.gamma * omega * omega)
            }
        }
    }

    /// `len` samples spaced `dt` apart, cut from a period of the next power of two.
    pub fn generate(&self, temperature: f64, dt: f64, len: usize, seed: u64) -> NoiseSeries {
        let n = len.next_power_of_two();
        let mut cols: [Vec<f64>; 3] = Default::default();
        if temperature > 0.0 && len > 0 {
            let mut planner = FftPlanner::new();
            let fft = planner.plan_fft_inverse(n);
            for (c, col) in cols.iter_mut().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let mut buf = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..=n / 2 {
                    let omega = std::f64::consts::TAU * k as f64 / (n as f64 * dt);
                    let var = self.psd(omega, temperature) * n as f64 / dt;
                    let g1: f64 = StandardNormal.sample(&mut rng);
                    let g2: f64 = StandardNormal.sample(&mut rng);
                    if k == 0 || 2 * k == n {
                        buf[k] = Complex64::new(var.sqrt() * g1, 0.0);
                    } else {
                        let s = (0.5 * var).sqrt();
                        buf[k] = Complex64::new(s * g1, s * g2);
                        buf[n - k] = buf[k].conj();
                    }
                }
                fft.process(&mut buf);
                *col = buf[..len].iter().map(|z| z.re / n as f64).collect();
            }
        } else {
            cols = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
        }
        let h = (0..len).map(|i| Vec3::new(cols[0][i], cols[1][i], cols[2][i])).collect();
        NoiseSeries { dt, h, temperature, seed }
    }
}

/// Noise with PSD `2 T̃ I_ω(ω)`, the spectral form at unit temperature scale.
pub fn generate_thermal_noise(temperature: f64, d: &SpectralDensity, dt: f64, n: usize, seed: u64) -> NoiseSeries {
    NoiseModel::spectral(*d).generate(temperature, dt, n, seed)
}
