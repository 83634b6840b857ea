//! Equilibrium magnetisation and the temperature-scaled demagnetising factor.

use memspin_core::dynamics::MemoryInit;
use memspin_core::{integrate_nmllg_with, KernelSpec, SimulationConfig, Vec3};
use rayon::prelude::*;

use crate::error::{Result, RunError};
use crate::noise::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumProtocol {
    pub burn_in: f64,
    pub average: f64,
    pub seeds: usize,
    /// Smallest half-window drift flagged as non-stationary.
    pub stationarity_tol: f64,
    /// Keep the demagnetising field during the equilibrium runs.
    pub include_demag: bool,
}

impl Default for EquilibriumProtocol {
    /// `m_x` decorrelates over ~100 ps at T̃ = 300 and relaxes from alignment
    /// over a few hundred, hence nanosecond runs.
    fn default() -> Self {
        EquilibriumProtocol { burn_in: 1000.0, average: 4000.0, seeds: 32, stationarity_tol: 0.02, include_demag: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub mx: f64,
    /// Standard error over seeds.
    pub stderr: f64,
    pub first_half: f64,
    pub second_half: f64,
    pub per_seed: Vec<f64>,
}

/// Seed of realisation `i` derived from a base seed (SplitMix64 step).
pub fn derive_seed(base: u64, i: u64) -> u64 {
    let mut z = base.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Time-averaged `m_x` of the memory-kernel model at `temperature`.
///
/// Each realisation starts aligned with the bias field with the bath relaxed
/// to it, discards `burn_in` ps and averages `m_x` over the next `average` ps.
/// The demagnetising field is dropped unless the protocol asks for it, since
/// it is itself what the result rescales.
pub fn equilibrium_mx(
    temperature: f64,
    cfg: &SimulationConfig,
    noise: &NoiseModel,
    protocol: &EquilibriumProtocol,
) -> Result<Equilibrium> {
    if !(protocol.burn_in >= 0.0 && protocol.average > 0.0 && protocol.seeds > 0) {
        return Err(RunError::Validation(vec![
            "equilibrium: burn-in must be non-negative, averaging time positive and seeds at least 1".into(),
        ]));
    }
    if !matches!(cfg.kernel, KernelSpec::Lorentzian(_)) {
        return Err(RunError::Validation(vec!["equilibrium: needs the Lorentzian kernel".into()]));
    }
    let dir = cfg.fields.h_bias.normalized();
    let mut fields = cfg.fields;
    if !protocol.include_demag {
        fields.n_z0 = 0.0;
    }
    let run = SimulationConfig {
        fields,
        m0: if dir == Vec3::ZERO { Vec3::X } else { dir },
        memory_init: MemoryInit::Relaxed,
        temperature,
        t_end: protocol.burn_in + protocol.average,
        ..cfg.clone()
    };
    let halves: Vec<(f64, f64)> = (0..protocol.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(cfg.seed, i);
            let cfg = SimulationConfig { seed, ..run.clone() };
            let noise = (temperature > 0.0).then(|| noise.generate(temperature, cfg.dt, cfg.steps() + 1, seed));
            let start = (protocol.burn_in / cfg.dt).round() as usize;
            let mid = start + (cfg.steps() - start) / 2;
            let mut sums = [0.0; 2];
            let mut counts = [0usize; 2];
            let mut k = 0usize;
            integrate_nmllg_with(&cfg, noise.as_ref(), |_, s| {
                if k >= start {
                    let h = usize::from(k >= mid);
                    sums[h] += s.m.dot(run.m0);
                    counts[h] += 1;
                }
                k += 1;
            })?;
            Ok((sums[0] / counts[0] as f64, sums[1] / counts[1] as f64))
        })
        .collect::<Result<_>>()?;
    let per_seed: Vec<f64> = halves.iter().map(|(a, b)| 0.5 * (a + b)).collect();
    let first = mean(&halves.iter().map(|h| h.0).collect::<Vec<_>>());
    let second = mean(&halves.iter().map(|h| h.1).collect::<Vec<_>>());
    let drift: Vec<f64> = halves.iter().map(|(a, b)| b - a).collect();
    let tolerance = protocol.stationarity_tol.max(4.0 * stderr(&drift));
    if (second - first).abs() > tolerance {
        return Err(RunError::NonStationary { first, second, tolerance });
    }
    Ok(Equilibrium { mx: mean(&per_seed), stderr: stderr(&per_seed), first_half: first, second_half: second, per_seed })
}

/// `N_T = N_0 · ⟨m_x⟩(T)/⟨m_x⟩(0)`.
pub fn demag_factor(
    temperature: f64,
    cfg: &SimulationConfig,
    noise: &NoiseModel,
    protocol: &EquilibriumProtocol,
) -> Result<f64> {
    let hot = equilibrium_mx(temperature, cfg, noise, protocol)?;
    let cold = equilibrium_mx(0.0, cfg, noise, &EquilibriumProtocol { seeds: 1, ..*protocol })?;
    Ok(cfg.fields.n_z0 * hot.mx / cold.mx)
}

fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

fn stderr(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(x);
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Classical Langevin magnetisation `coth(x) − 1/x` of a unit moment in field
/// `h` (tesla) at thermal field `theta` (tesla).
pub fn langevin_mx(h: f64, theta: f64) -> f64 {
    if theta <= 0.0 {
        return 1.0;
    }
    let x = h / theta;
    if x < 1e-4 {
        return x / 3.0;
    }
    1.0 / x.tanh() - 1.0 / x
}
