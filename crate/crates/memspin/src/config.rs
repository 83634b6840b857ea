//! Run configuration: a sectioned key–value (TOML) file.
//!
//! ```toml
//! [model]
//! model = "nmllg"          # llg | illg | nmllg
//! temperature = 0.0
//! seed = 1
//!
//! [kernel]
//! nu0_thz = 4.2
//! gamma_thz = 0.2
//! amp_thz3 = 242.0
//!
//! [grid]
//! dt_ps = 0.001
//! t_end_ps = 10.0
//! ```
//!
//! Every key is optional and defaults to the reference system. Unknown keys
//! are rejected. Validation collects all problems before failing.

use std::path::Path;

use memspin_core::dynamics::MemoryInit;
use memspin_core::{
    derive_alpha_tauin, Component, DampingParams, Detrend, FieldConfig, KernelSpec, PeakCriteria,
    SimulationConfig, SpectralDensity, ThzPulse, Vec3, WindowSpec,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Result, RunError};
use crate::noise::{NoiseModel, PsdForm};
use crate::spectrum::SpectrumOptions;
use crate::thermal::EquilibriumProtocol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Llg,
    Illg,
    Nmllg,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Llg => "llg",
            ModelKind::Illg => "illg",
            ModelKind::Nmllg => "nmllg",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub component: Component,
    pub spectrum: SpectrumOptions,
    pub peaks: PeakCriteria,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub temperatures: Vec<f64>,
    pub seeds_per_temp: usize,
    pub tau_fractions: Vec<f64>,
    pub m_max: usize,
    pub noise_realizations: usize,
    pub noise_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: ModelKind,
    /// Kernel of `sim` matches `model`.
    pub sim: SimulationConfig,
    pub density: SpectralDensity,
    /// α and τ_in used by the local models, derived from the bath unless given.
    pub damping: DampingParams,
    pub analysis: AnalysisConfig,
    pub sweep: SweepConfig,
    pub noise: NoiseModel,
    pub equilibrium: EquilibriumProtocol,
    /// First 16 hex digits of the SHA-256 of the configuration text.
    pub hash: String,
    pub text: String,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(RunError::io(path))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let raw: Raw = toml::from_str(text).map_err(|e| RunError::Validation(vec![e.message().to_string()]))?;
        raw.build(text)
    }

    /// Kernel for a model kind, built from this configuration's parameters.
    pub fn kernel_for(&self, model: ModelKind) -> Result<KernelSpec> {
        Ok(match model {
            ModelKind::Llg => KernelSpec::markovian(self.damping.alpha)?,
            ModelKind::Illg => KernelSpec::inertial(self.damping.alpha, self.damping.tau_in)?,
            ModelKind::Nmllg => KernelSpec::Lorentzian(self.density),
        })
    }

    /// Larmor frequency of the bias field in GHz.
    pub fn larmor_ghz(&self) -> f64 {
        self.sim.gyromagnetic * self.sim.fields.h_bias.norm() / std::f64::consts::TAU * 1e3
    }

    /// Re-hash after command-line overrides so outputs stay traceable.
    pub fn rehash(&mut self, overrides: &str) {
        self.hash = hash_text(&format!("{}\n# overrides: {overrides}", self.text));
    }
}

pub fn hash_text(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    kernel: RawKernel,
    #[serde(default)]
    fields: RawFields,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    analysis: RawAnalysis,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    noise: RawNoise,
    #[serde(default)]
    equilibrium: RawEquilibrium,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    model: Option<String>,
    temperature: Option<f64>,
    seed: Option<u64>,
    memory_init: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    nu0_thz: Option<f64>,
    gamma_thz: Option<f64>,
    amp_thz3: Option<f64>,
    alpha: Option<f64>,
    tau_in_ps: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    h_bias_t: Option<f64>,
    h_bias_dir: Option<[f64; 3]>,
    h_aniso_t: Option<[f64; 3]>,
    n_z0_t: Option<f64>,
    m0: Option<[f64; 3]>,
    gyromagnetic: Option<f64>,
    pulse_amplitude_t: Option<f64>,
    pulse_center_ps: Option<f64>,
    pulse_width_ps: Option<f64>,
    pulse_freq_thz: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dt_ps: Option<f64>,
    t_end_ps: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    component: Option<String>,
    window_start_ps: Option<f64>,
    window_end_ps: Option<f64>,
    window_center_ps: Option<f64>,
    window_width_ps: Option<f64>,
    pad_factor: Option<usize>,
    detrend: Option<String>,
    min_peak_freq_thz: Option<f64>,
    max_peak_freq_thz: Option<f64>,
    prominence_frac: Option<f64>,
    min_peak_amplitude: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    temperatures: Option<Vec<f64>>,
    seeds_per_temp: Option<usize>,
    tau_fractions: Option<Vec<f64>>,
    m_max: Option<usize>,
    noise_realizations: Option<usize>,
    noise_samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    psd: Option<String>,
    temperature_scale: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquilibrium {
    burn_in_ps: Option<f64>,
    average_ps: Option<f64>,
    seeds: Option<usize>,
    stationarity_tol: Option<f64>,
    include_demag: Option<bool>,
}

struct Problems(Vec<String>);

impl Problems {
    fn check(&mut self, ok: bool, key: &str, msg: &str) {
        if !ok {
            self.0.push(format!("{key}: {msg}"));
        }
    }
}

fn finite_pos(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl Raw {
    fn build(self, text: &str) -> Result<Config> {
        let mut p = Problems(Vec::new());
        let reference = SimulationConfig::reference();

        let model = match self.model.model.as_deref().unwrap_or("nmllg") {
            "llg" => ModelKind::Llg,
            "illg" => ModelKind::Illg,
            "nmllg" => ModelKind::Nmllg,
            other => {
                p.0.push(format!("model.model: unknown model `{other}` (expected llg, illg or nmllg)"));
                ModelKind::Nmllg
            }
        };
        let temperature = self.model.temperature.unwrap_or(0.0);
        p.check(temperature.is_finite() && temperature >= 0.0, "model.temperature", "must be finite and ≥ 0");
        let memory_init = match self.model.memory_init.as_deref().unwrap_or("quiescent") {
            "quiescent" => MemoryInit::Quiescent,
            "relaxed" => MemoryInit::Relaxed,
            other => {
                p.0.push(format!("model.memory_init: unknown value `{other}` (expected quiescent or relaxed)"));
                MemoryInit::Quiescent
            }
        };

        let k = &self.kernel;
        let nu0 = k.nu0_thz.unwrap_or(4.2);
        let gamma = k.gamma_thz.unwrap_or(0.2);
        let amp = k.amp_thz3.unwrap_or(242.0);
        p.check(finite_pos(nu0), "kernel.nu0_thz", "must be finite and > 0");
        p.check(finite_pos(gamma), "kernel.gamma_thz", "must be finite and > 0");
        p.check(amp.is_finite() && amp >= 0.0, "kernel.amp_thz3", "must be finite and ≥ 0");
        p.check(gamma.is_nan() || gamma < 2.0 * nu0, "kernel.gamma_thz", "must be below 2·nu0_thz (underdamped bath)");
        let density = SpectralDensity::new(amp, gamma, nu0).unwrap_or_else(|_| SpectralDensity::reference());
        let derived = derive_alpha_tauin(&density);
        let damping = DampingParams {
            alpha: k.alpha.unwrap_or(derived.alpha),
            tau_in: k.tau_in_ps.unwrap_or(derived.tau_in),
        };
        p.check(damping.alpha.is_finite() && damping.alpha >= 0.0, "kernel.alpha", "must be finite and ≥ 0");
        p.check(finite_pos(damping.tau_in), "kernel.tau_in_ps", "must be finite and > 0");
        if model == ModelKind::Illg {
            p.check(damping.alpha > 0.0, "kernel.alpha", "inertial LLG needs alpha > 0");
        }

        let f = &self.fields;
        let h_bias = f.h_bias_t.unwrap_or(0.1);
        let dir = Vec3::from(f.h_bias_dir.unwrap_or([1.0, 0.0, 0.0]));
        p.check(h_bias.is_finite(), "fields.h_bias_t", "must be finite");
        p.check(dir.is_finite() && dir.norm() > 0.0, "fields.h_bias_dir", "must be a non-zero vector");
        let n_z0 = f.n_z0_t.unwrap_or(1.37);
        p.check(n_z0.is_finite() && n_z0 >= 0.0, "fields.n_z0_t", "must be finite and ≥ 0");
        let h_aniso = Vec3::from(f.h_aniso_t.unwrap_or([0.0; 3]));
        p.check(h_aniso.is_finite(), "fields.h_aniso_t", "must be finite");
        let m0 = f.m0.map(Vec3::from).unwrap_or(reference.m0);
        p.check(m0.is_finite() && (m0.norm() - 1.0).abs() <= 1e-6, "fields.m0", "must be a unit vector (|m0| = 1 within 1e-6)");
        let gyromagnetic = f.gyromagnetic.unwrap_or(memspin_core::GAMMA_E);
        p.check(finite_pos(gyromagnetic), "fields.gyromagnetic", "must be finite and > 0");
        let thz_pulse = f.pulse_amplitude_t.map(|amplitude_t| ThzPulse {
            amplitude_t,
            center_ps: f.pulse_center_ps.unwrap_or(0.5),
            width_ps: f.pulse_width_ps.unwrap_or(0.2),
            freq_thz: f.pulse_freq_thz.unwrap_or(2.0),
            direction: Vec3::Y,
        });
        if let Some(pulse) = thz_pulse {
            p.check(pulse.amplitude_t.is_finite(), "fields.pulse_amplitude_t", "must be finite");
            p.check(finite_pos(pulse.width_ps), "fields.pulse_width_ps", "must be finite and > 0");
        }
        let fields = FieldConfig { h_bias: dir.normalized() * h_bias, h_aniso, n_z0, thz_pulse };

        let dt = self.grid.dt_ps.unwrap_or(1e-3);
        let t_end = self.grid.t_end_ps.unwrap_or(10.0);
        p.check(finite_pos(dt), "grid.dt_ps", "must be finite and > 0");
        p.check(t_end.is_finite() && t_end > dt, "grid.t_end_ps", "must be finite and exceed dt_ps");

        let a = &self.analysis;
        let component = match a.component.as_deref().unwrap_or("z") {
            "x" => Component::X,
            "y" => Component::Y,
            "z" => Component::Z,
            other => {
                p.0.push(format!("analysis.component: unknown component `{other}` (expected x, y or z)"));
                Component::Z
            }
        };
        let ws = a.window_start_ps.unwrap_or(2.3);
        let we = a.window_end_ps.unwrap_or(6.7);
        let window = WindowSpec {
            t_start: ws,
            t_end: we,
            center: a.window_center_ps.unwrap_or(0.5 * (ws + we)),
            width: a.window_width_ps.unwrap_or(we - ws),
        };
        if let Err(e) = window.validate() {
            p.0.push(format!("analysis window: {e}"));
        }
        if t_end.is_finite() && we.is_finite() && we > t_end + 1e-9 {
            p.0.push(format!(
                "analysis.window_end_ps: window [{ws}, {we}] ps extends past grid.t_end_ps = {t_end} ps"
            ));
        }
        let pad_factor = a.pad_factor.unwrap_or(8);
        p.check(pad_factor >= 1, "analysis.pad_factor", "must be ≥ 1");
        let detrend = match a.detrend.as_deref().unwrap_or("quadratic") {
            "none" => Detrend::None,
            "constant" => Detrend::Constant,
            "linear" => Detrend::Linear,
            "quadratic" => Detrend::Quadratic,
            "cubic" => Detrend::Cubic,
            other => {
                p.0.push(format!("analysis.detrend: unknown value `{other}`"));
                Detrend::Quadratic
            }
        };
        let defaults = PeakCriteria::default();
        let peaks = PeakCriteria {
            min_freq: a.min_peak_freq_thz.unwrap_or(defaults.min_freq),
            max_freq: match a.max_peak_freq_thz {
                Some(x) if x <= 0.0 => None,
                Some(x) => Some(x),
                None => defaults.max_freq,
            },
            prominence_frac: a.prominence_frac.unwrap_or(defaults.prominence_frac),
            min_amplitude: a.min_peak_amplitude.unwrap_or(defaults.min_amplitude),
        };
        p.check(peaks.min_freq.is_finite() && peaks.min_freq >= 0.0, "analysis.min_peak_freq_thz", "must be ≥ 0");
        p.check(
            (0.0..1.0).contains(&peaks.prominence_frac),
            "analysis.prominence_frac",
            "must lie in [0, 1)",
        );
        p.check(peaks.min_amplitude >= 0.0, "analysis.min_peak_amplitude", "must be ≥ 0");

        let s = &self.sweep;
        let sweep = SweepConfig {
            temperatures: s.temperatures.clone().unwrap_or_else(|| vec![20.0, 220.0, 300.0]),
            seeds_per_temp: s.seeds_per_temp.unwrap_or(8),
            tau_fractions: s.tau_fractions.clone().unwrap_or_else(|| vec![-0.05, 0.0, 0.05]),
            m_max: s.m_max.unwrap_or(6),
            noise_realizations: s.noise_realizations.unwrap_or(100),
            noise_samples: s.noise_samples.unwrap_or(1 << 16),
        };
        p.check(
            sweep.temperatures.iter().all(|t| t.is_finite() && *t >= 0.0),
            "sweep.temperatures",
            "must be finite and ≥ 0",
        );
        p.check(sweep.seeds_per_temp >= 1, "sweep.seeds_per_temp", "must be ≥ 1");
        p.check(
            sweep.tau_fractions.iter().all(|f| f.is_finite() && *f > -1.0),
            "sweep.tau_fractions",
            "must be finite and > -1",
        );
        p.check((1..=8).contains(&sweep.m_max), "sweep.m_max", "must lie in 1..=8");
        p.check(sweep.noise_realizations >= 1, "sweep.noise_realizations", "must be ≥ 1");
        p.check(sweep.noise_samples >= 2, "sweep.noise_samples", "must be ≥ 2");

        let mut noise = NoiseModel::new(density);
        match self.noise.psd.as_deref() {
            None | Some("classical") => {}
            Some("spectral") => {
                noise.form = PsdForm::Spectral;
                noise.temperature_scale = 1.0;
            }
            Some(other) => p.0.push(format!("noise.psd: unknown form `{other}` (expected classical or spectral)")),
        }
        if let Some(sc) = self.noise.temperature_scale {
            p.check(finite_pos(sc), "noise.temperature_scale", "must be finite and > 0");
            noise.temperature_scale = sc;
        }

        let e = &self.equilibrium;
        let d = EquilibriumProtocol::default();
        let equilibrium = EquilibriumProtocol {
            burn_in: e.burn_in_ps.unwrap_or(d.burn_in),
            average: e.average_ps.unwrap_or(d.average),
            seeds: e.seeds.unwrap_or(d.seeds),
            stationarity_tol: e.stationarity_tol.unwrap_or(d.stationarity_tol),
            include_demag: e.include_demag.unwrap_or(d.include_demag),
        };
        p.check(equilibrium.burn_in.is_finite() && equilibrium.burn_in >= 0.0, "equilibrium.burn_in_ps", "must be ≥ 0");
        p.check(finite_pos(equilibrium.average), "equilibrium.average_ps", "must be > 0");
        p.check(equilibrium.seeds >= 1, "equilibrium.seeds", "must be ≥ 1");
        p.check(equilibrium.stationarity_tol >= 0.0, "equilibrium.stationarity_tol", "must be ≥ 0");

        if !p.0.is_empty() {
            return Err(RunError::Validation(p.0));
        }
        let mut cfg = Config {
            model,
            sim: SimulationConfig {
                kernel: KernelSpec::Lorentzian(density),
                fields,
                m0: m0.normalized(),
                dt,
                t_end,
                temperature,
                seed: self.model.seed.unwrap_or(1),
                gyromagnetic,
                memory_init,
            },
            density,
            damping,
            analysis: AnalysisConfig { component, spectrum: SpectrumOptions { window, pad_factor, detrend }, peaks },
            sweep,
            noise,
            equilibrium,
            hash: hash_text(text),
            text: text.to_string(),
        };
        cfg.sim.kernel = cfg.kernel_for(model)?;
        if model != ModelKind::Nmllg && temperature > 0.0 {
            return Err(RunError::Validation(vec![format!(
                "model.temperature: thermal noise is only available for model = \"nmllg\" (got {})",
                model.name()
            )]));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_system() {
        let c = Config::parse("").unwrap();
        assert_eq!(c.model, ModelKind::Nmllg);
        assert_eq!(c.sim.kernel, KernelSpec::Lorentzian(SpectralDensity::reference()));
        assert_eq!(c.sim.fields.h_bias, Vec3::new(0.1, 0.0, 0.0));
        assert!((c.larmor_ghz() - 2.8).abs() < 0.01);
        assert!((c.damping.alpha - 0.155542).abs() < 1e-6);
    }

    #[test]
    fn all_problems_are_reported() {
        let err = Config::parse(
            "[kernel]\nnu0_thz = -1.0\n[grid]\ndt_ps = 0.0\n[analysis]\ncomponent = \"w\"\n",
        )
        .unwrap_err();
        let RunError::Validation(list) = err else { panic!() };
        assert!(list.iter().any(|m| m.contains("nu0_thz")));
        assert!(list.iter().any(|m| m.contains("dt_ps")));
        assert!(list.iter().any(|m| m.contains("component")));
    }

    #[test]
    fn window_past_the_run_is_rejected() {
        let err = Config::parse("[grid]\nt_end_ps = 5.0\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("window"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Config::parse("[kernel]\nnu_0 = 4.2\n").is_err());
    }

    #[test]
    fn hash_follows_the_text() {
        let a = Config::parse("[model]\nseed = 1\n").unwrap();
        let b = Config::parse("[model]\nseed = 2\n").unwrap();
        assert_ne!(a.hash, b.hash);
        assert_eq!(a.hash.len(), 16);
    }

    #[test]
    fn local_models_take_derived_damping() {
        let c = Config::parse("[model]\nmodel = \"illg\"\n").unwrap();
        match c.sim.kernel {
            KernelSpec::Inertial { alpha, tau_in } => {
                assert!((alpha - 0.155542).abs() < 1e-6 && (tau_in - 0.79397).abs() < 1e-5)
            }
            _ => panic!(),
        }
    }
}
