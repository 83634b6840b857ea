//! Subcommands: each computes in memory, then persists into a run directory.

use std::path::{Path, PathBuf};

use memspin_core::{
    fit_lorentzian, find_peaks_with, integrate_illg, integrate_llg, integrate_nmllg, susceptibility_polynomial,
    susceptibility_roots, to_dimensionless, Branch, KernelSpec, Peak, Root, SimulationConfig, Spectrum,
    Trajectory, Vec3,
};
use rayon::prelude::*;

use crate::config::{Config, ModelKind};
use crate::error::{Result, RunError};
use crate::noise::NoiseModel;
use crate::output::{Cell, RunDir, Table};
use crate::spectrum::spectrum_of;
use crate::thermal::{derive_seed, equilibrium_mx, Equilibrium};

/// Spectrum rows above this frequency are not written.
pub const SPECTRUM_CSV_MAX_THZ: f64 = 20.0;

/// Integrate the configured model for `sim`, drawing noise from the config's model.
pub fn run_trajectory(cfg: &Config, sim: &SimulationConfig) -> Result<Trajectory> {
    Ok(match cfg.model {
        ModelKind::Llg => integrate_llg(sim)?,
        ModelKind::Illg => integrate_illg(sim)?,
        ModelKind::Nmllg => {
            let noise = (sim.temperature > 0.0)
                .then(|| cfg.noise.generate(sim.temperature, sim.dt, sim.steps() + 1, sim.seed));
            integrate_nmllg(sim, noise.as_ref())?
        }
    })
}

fn source_id(cfg: &Config) -> u64 {
    u64::from_str_radix(&cfg.hash, 16).unwrap_or(0)
}

/// Spectrum and peaks of the analysed component of `m`.
pub fn analyse(cfg: &Config, times: &[f64], m: &[Vec3]) -> Result<(Spectrum, Vec<Peak>)> {
    let i = cfg.analysis.component.index();
    let values: Vec<f64> = m.iter().map(|v| v[i]).collect();
    let s = spectrum_of(times, &values, &cfg.analysis.spectrum, source_id(cfg))?;
    let peaks = find_peaks_with(&s, &cfg.analysis.peaks);
    Ok((s, peaks))
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub spectrum: Spectrum,
    pub peaks: Vec<Peak>,
}

pub fn simulate(cfg: &Config) -> Result<Simulation> {
    let trajectory = run_trajectory(cfg, &cfg.sim)?;
    let (spectrum, peaks) = analyse(cfg, &trajectory.times, &trajectory.m)?;
    Ok(Simulation { trajectory, spectrum, peaks })
}

/// Mean trajectory over `seeds` noise realisations (one run when noiseless).
///
/// Averaging the trajectories before the transform keeps the response that is
/// phase-locked to the initial condition and suppresses the incoherent part.
pub fn ensemble_mean(cfg: &Config, sim: &SimulationConfig, seeds: usize) -> Result<(Vec<f64>, Vec<Vec3>)> {
    if sim.temperature == 0.0 || seeds <= 1 {
        let tr = run_trajectory(cfg, sim)?;
        return Ok((tr.times, tr.m));
    }
    let runs: Vec<Trajectory> = (0..seeds as u64)
        .into_par_iter()
        .map(|i| run_trajectory(cfg, &SimulationConfig { seed: derive_seed(sim.seed, i), ..sim.clone() }))
        .collect::<Result<_>>()?;
    let mut sum = vec![Vec3::ZERO; runs[0].m.len()];
    for r in &runs {
        for (s, m) in sum.iter_mut().zip(&r.m) {
            *s += *m;
        }
    }
    let k = 1.0 / seeds as f64;
    Ok((runs[0].times.clone(), sum.into_iter().map(|s| s * k).collect()))
}

#[derive(Debug, Clone)]
pub struct TemperaturePoint {
    pub temperature: f64,
    pub demag_factor: f64,
    pub equilibrium: Option<Equilibrium>,
    pub times: Vec<f64>,
    pub mean_m: Vec<Vec3>,
    pub spectrum: Spectrum,
    pub peaks: Vec<Peak>,
}

/// Temperature-scaled demagnetising factor for each temperature.
///
/// `T̃ = 0` keeps `N_z0` unchanged; the rest are `N_z0·⟨m_x⟩(T)/⟨m_x⟩(0)`.
pub fn demag_factors(cfg: &Config, temps: &[f64]) -> Result<Vec<(f64, Option<Equilibrium>)>> {
    let n0 = cfg.sim.fields.n_z0;
    if temps.iter().all(|t| *t == 0.0) {
        return Ok(temps.iter().map(|_| (n0, None)).collect());
    }
    let base = cfg.sim.with_kernel(KernelSpec::Lorentzian(cfg.density));
    let cold_protocol = crate::thermal::EquilibriumProtocol { seeds: 1, ..cfg.equilibrium };
    let cold = equilibrium_mx(0.0, &base, &cfg.noise, &cold_protocol)?;
    temps
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok((n0, None));
            }
            let e = equilibrium_mx(t, &base, &cfg.noise, &cfg.equilibrium)?;
            Ok((n0 * e.mx / cold.mx, Some(e)))
        })
        .collect()
}

/// Base seed of sweep entry `index`, so repeated temperatures draw distinct ensembles.
pub fn sweep_seed(cfg: &Config, index: usize) -> u64 {
    derive_seed(cfg.sim.seed ^ 0x5EED_0000_0000_0000, index as u64)
}

/// Ensemble spectrum at one temperature with demagnetising factor `n_t`.
pub fn temperature_point(
    cfg: &Config,
    temperature: f64,
    n_t: f64,
    seeds: usize,
    seed: u64,
) -> Result<TemperaturePoint> {
    let mut sim = cfg.sim.clone();
    sim.seed = seed;
    sim.temperature = temperature;
    sim.fields.n_z0 = n_t;
    let (times, mean_m) = ensemble_mean(cfg, &sim, seeds)?;
    let (spectrum, peaks) = analyse(cfg, &times, &mean_m)?;
    Ok(TemperaturePoint { temperature, demag_factor: n_t, equilibrium: None, times, mean_m, spectrum, peaks })
}

pub fn temperature_sweep(cfg: &Config, temps: &[f64], seeds: usize) -> Result<Vec<TemperaturePoint>> {
    if temps.is_empty() {
        return Err(RunError::Validation(vec!["sweep.temperatures: must not be empty".into()]));
    }
    if cfg.model != ModelKind::Nmllg && temps.iter().any(|t| *t > 0.0) {
        return Err(RunError::Validation(vec![
            "sweep.temperatures: finite temperatures need model = \"nmllg\"".into(),
        ]));
    }
    let factors = demag_factors(cfg, temps)?;
    temps
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (&t, (n_t, eq)))| {
            let mut p = temperature_point(cfg, t, n_t, seeds, sweep_seed(cfg, i))?;
            p.equilibrium = eq;
            Ok(p)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TauVariant {
    pub fraction: f64,
    pub tau_in: f64,
    pub kernel: KernelSpec,
    pub spectrum: Spectrum,
    pub peaks: Vec<Peak>,
}

/// Kernel with `τ_in` scaled by `1 + fraction`, holding α (and ν₀ for the bath).
pub fn tau_variant_kernel(cfg: &Config, fraction: f64) -> Result<(f64, KernelSpec)> {
    let tau = cfg.damping.tau_in * (1.0 + fraction);
    let alpha = cfg.damping.alpha;
    let kernel = match cfg.model {
        ModelKind::Nmllg => {
            if fraction == 0.0 {
                KernelSpec::Lorentzian(cfg.density)
            } else {
                KernelSpec::Lorentzian(fit_lorentzian(alpha, tau, cfg.density.nu0())?)
            }
        }
        ModelKind::Illg => KernelSpec::inertial(alpha, tau)?,
        ModelKind::Llg => {
            return Err(RunError::Validation(vec![
                "model.model: the Markovian model has no inertial time to vary".into(),
            ]))
        }
    };
    Ok((tau, kernel))
}

pub fn tau_sweep(cfg: &Config, fractions: &[f64]) -> Result<Vec<TauVariant>> {
    if fractions.is_empty() {
        return Err(RunError::Validation(vec!["sweep.tau_fractions: must not be empty".into()]));
    }
    fractions
        .par_iter()
        .map(|&fraction| {
            let (tau_in, kernel) = tau_variant_kernel(cfg, fraction)?;
            let sim = cfg.sim.with_kernel(kernel);
            let (times, m) = ensemble_mean(cfg, &sim, 1)?;
            let (spectrum, peaks) = analyse(cfg, &times, &m)?;
            Ok(TauVariant { fraction, tau_in, kernel, spectrum, peaks })
        })
        .collect()
}

/// Order actually used for a kernel: the local kernels have only one or two moments.
pub fn effective_order(cfg: &Config) -> usize {
    match cfg.model {
        ModelKind::Llg => 1,
        ModelKind::Illg => 2,
        ModelKind::Nmllg => cfg.sweep.m_max,
    }
}

pub fn predict(cfg: &Config) -> Result<Vec<Root>> {
    let m_max = effective_order(cfg);
    let mut out = Vec::new();
    for b in [Branch::Plus, Branch::Minus] {
        let p = susceptibility_polynomial(&cfg.sim.kernel, cfg.larmor_ghz(), m_max, b)?;
        out.extend(susceptibility_roots(&p)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct NoiseCheck {
    pub freqs: Vec<f64>,
    pub measured: Vec<f64>,
    pub target: Vec<f64>,
    pub band: (f64, f64),
    pub max_rel_deviation: f64,
    /// Expected relative standard error of each smoothed estimate.
    pub rel_stderr: f64,
    pub realizations: usize,
}

impl NoiseCheck {
    /// More than 5% scatter per smoothed bin.
    pub fn high_variance(&self) -> bool {
        self.rel_stderr > 0.05
    }
}

/// Half-width in bins of the Daniell smoother applied to both periodogram and target.
pub const DANIELL_HALF_WIDTH: usize = 4;

/// Averaged periodogram of `realizations` noise series against the target PSD.
///
/// The estimate `dt/N |X_k|²` is averaged over realisations and the three
/// components, then smoothed with a running mean of `2·DANIELL_HALF_WIDTH + 1`
/// bins. The target is smoothed the same way, so the comparison is unbiased.
pub fn noise_check(
    model: &NoiseModel,
    temperature: f64,
    dt: f64,
    samples: usize,
    realizations: usize,
    seed: u64,
    band: (f64, f64),
) -> Result<NoiseCheck> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(RunError::Validation(vec![format!(
            "model.temperature: noise-check needs a positive temperature (got {temperature}); the target PSD vanishes at zero"
        )]));
    }
    if realizations == 0 || samples < 2 {
        return Err(RunError::Validation(vec!["noise-check: needs at least one realisation of two samples".into()]));
    }
    let n = samples;
    let half = n / 2 + 1;
    let mut planner = rustfft::FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let sums: Vec<Vec<f64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let series = model.generate(temperature, dt, n, derive_seed(seed, r));
            let mut acc = vec![0.0; half];
            let mut buf = vec![rustfft::num_complex::Complex64::new(0.0, 0.0); n];
            for c in 0..3 {
                for (b, h) in buf.iter_mut().zip(&series.h) {
                    *b = rustfft::num_complex::Complex64::new(h[c], 0.0);
                }
                fft.process(&mut buf);
                for (a, x) in acc.iter_mut().zip(&buf) {
                    *a += x.norm_sqr();
                }
            }
            acc
        })
        .collect();
    let norm = dt / n as f64 / (3 * realizations) as f64;
    let raw: Vec<f64> = (0..half).map(|k| sums.iter().map(|s| s[k]).sum::<f64>() * norm).collect();
    let df = 1.0 / (n as f64 * dt);
    let freqs: Vec<f64> = (0..half).map(|k| k as f64 * df).collect();
    let target_raw: Vec<f64> =
        freqs.iter().map(|f| model.psd(std::f64::consts::TAU * f, temperature)).collect();
    let measured = daniell(&raw, DANIELL_HALF_WIDTH);
    let target = daniell(&target_raw, DANIELL_HALF_WIDTH);
    let max_rel_deviation = freqs
        .iter()
        .zip(measured.iter().zip(&target))
        .filter(|(f, _)| **f >= band.0 && **f <= band.1)
        .map(|(_, (m, t))| (m - t).abs() / t)
        .fold(0.0, f64::max);
    let dof = (3 * realizations * (2 * DANIELL_HALF_WIDTH + 1)) as f64;
    Ok(NoiseCheck { freqs, measured, target, band, max_rel_deviation, rel_stderr: dof.sqrt().recip(), realizations })
}

fn daniell(x: &[f64], k: usize) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(k);
            let hi = (i + k + 1).min(x.len());
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Parameter conversions printed by `convert-params`.
pub fn convert_params(cfg: &Config) -> Result<String> {
    use std::fmt::Write;
    let d = cfg.density;
    let derived = memspin_core::derive_alpha_tauin(&d);
    let omega_ref = cfg.sim.gyromagnetic;
    let dl = to_dimensionless(&d, omega_ref)?;
    let mut s = String::new();
    let _ = writeln!(s, "bath: nu0 = {} THz, gamma = {} THz, amp = {} THz^3", d.nu0(), d.gamma(), d.amp());
    let _ = writeln!(s, "  -> alpha = {:.6}, tau_in = {:.6} ps", derived.alpha, derived.tau_in);
    let _ = writeln!(
        s,
        "  dimensionless (omega_ref = {omega_ref} rad/ps): amp = {:.6e}, omega0 = {:.6}, gamma = {:.6}",
        dl.amp, dl.omega0, dl.gamma
    );
    let back = fit_lorentzian(cfg.damping.alpha, cfg.damping.tau_in, d.nu0())?;
    let _ = writeln!(
        s,
        "local: alpha = {}, tau_in = {} ps (nu0 = {} THz held)\n  -> gamma = {:.6} THz, amp = {:.6} THz^3",
        cfg.damping.alpha, cfg.damping.tau_in, d.nu0(), back.gamma(), back.amp()
    );
    Ok(s)
}

fn spectrum_rows(t: &mut Table, lead: &[Cell], s: &Spectrum) {
    for (f, a) in s.freqs.iter().zip(&s.amps).take_while(|(f, _)| **f <= SPECTRUM_CSV_MAX_THZ) {
        let mut row = lead.to_vec();
        row.extend([Cell::F(*f), Cell::F(*a)]);
        t.push(row);
    }
}

fn peak_rows(t: &mut Table, lead: &[Cell], peaks: &[Peak]) {
    for p in peaks {
        let mut row = lead.to_vec();
        row.extend([Cell::F(p.freq), Cell::F(p.amp), Cell::F(p.prominence)]);
        t.push(row);
    }
}

fn trajectory_table(times: &[f64], m: &[Vec3], what: &str) -> Table {
    let mut t = Table::new(what, &["time_ps", "mx", "my", "mz"]);
    for (time, v) in times.iter().zip(m) {
        t.push(vec![(*time).into(), v.x.into(), v.y.into(), v.z.into()]);
    }
    t
}

fn component_note(cfg: &Config) -> String {
    format!("component m{}", cfg.analysis.component.name())
}

pub fn cmd_simulate(cfg: &Config, out: Option<&Path>) -> Result<PathBuf> {
    let r = simulate(cfg)?;
    let mut dir = RunDir::create(out, "simulate", &cfg.hash, &cfg.text)?;
    let model = cfg.model.name();
    dir.write(
        "trajectory.csv",
        "trajectory",
        &trajectory_table(&r.trajectory.times, &r.trajectory.m, &format!("{model} trajectory")),
    )?;
    let mut s = Table::new(format!("{model} amplitude spectrum, {}", component_note(cfg)), &["freq_thz", "amplitude"]);
    spectrum_rows(&mut s, &[], &r.spectrum);
    dir.write("spectrum.csv", "spectrum", &s)?;
    let mut p = Table::new(format!("{model} peaks, {}", component_note(cfg)), &["freq_thz", "amplitude", "prominence"]);
    peak_rows(&mut p, &[], &r.peaks);
    dir.write("peaks.csv", "peaks", &p)?;
    dir.finish()
}

/// Up to this many peaks get their own summary columns.
pub const SUMMARY_PEAKS: usize = 4;

fn peak_columns(prefix: &[&'static str]) -> Vec<&'static str> {
    const NAMES: [[&str; 2]; SUMMARY_PEAKS] = [
        ["peak1_freq_thz", "peak1_amp"],
        ["peak2_freq_thz", "peak2_amp"],
        ["peak3_freq_thz", "peak3_amp"],
        ["peak4_freq_thz", "peak4_amp"],
    ];
    let mut c = prefix.to_vec();
    c.push("n_peaks");
    c.extend(NAMES.iter().flatten());
    c
}

fn peak_cells(peaks: &[Peak]) -> Vec<Cell> {
    let mut v = vec![Cell::from(peaks.len())];
    for i in 0..SUMMARY_PEAKS {
        match peaks.get(i) {
            Some(p) => v.extend([Cell::F(p.freq), Cell::F(p.amp)]),
            None => v.extend([Cell::F(f64::NAN), Cell::F(f64::NAN)]),
        }
    }
    v
}

pub fn cmd_sweep_temperature(cfg: &Config, temps: &[f64], seeds: usize, out: Option<&Path>) -> Result<PathBuf> {
    let points = temperature_sweep(cfg, temps, seeds)?;
    let mut dir = RunDir::create(out, "sweep-temp", &cfg.hash, &cfg.text)?;
    let note = format!("ensemble of {seeds} seeds per temperature, {}", component_note(cfg));
    let mut s = Table::new(format!("mean-trajectory amplitude spectrum; {note}"), &["temperature", "freq_thz", "amplitude"]);
    let mut p = Table::new(format!("peaks; {note}"), &["temperature", "freq_thz", "amplitude", "prominence"]);
    let mut e = Table::new(
        "equilibrium m along the bias (no pulse), demagnetising factor in tesla",
        &["temperature", "mx", "mx_stderr", "first_half", "second_half", "demag_factor_t"],
    );
    let mut sum = Table::new(format!("peak summary; {note}"), &peak_columns(&["temperature", "demag_factor_t"]));
    for pt in &points {
        let lead = [Cell::F(pt.temperature)];
        spectrum_rows(&mut s, &lead, &pt.spectrum);
        peak_rows(&mut p, &lead, &pt.peaks);
        let (mx, se, a, b) = match &pt.equilibrium {
            Some(q) => (q.mx, q.stderr, q.first_half, q.second_half),
            None => (1.0, 0.0, 1.0, 1.0),
        };
        e.push(vec![pt.temperature.into(), mx.into(), se.into(), a.into(), b.into(), pt.demag_factor.into()]);
        let mut row = vec![Cell::F(pt.temperature), Cell::F(pt.demag_factor)];
        row.extend(peak_cells(&pt.peaks));
        sum.push(row);
    }
    if let [single] = points.as_slice() {
        dir.write("trajectory.csv", "trajectory", &trajectory_table(&single.times, &single.mean_m, "ensemble-mean trajectory"))?;
    }
    dir.write("spectrum.csv", "spectrum", &s)?;
    dir.write("peaks.csv", "peaks", &p)?;
    dir.write("equilibrium.csv", "equilibrium", &e)?;
    dir.write("summary.csv", "summary", &sum)?;
    dir.finish()
}

/// Prominence threshold used when following a peak across variants, relative to detection.
pub const TRACK_PROMINENCE_RATIO: f64 = 0.1;

/// Peak of `s` nearest `reference`, found with a tenth of the detection prominence.
///
/// A variant can weaken a line below the detection threshold while it is
/// still the same resonance; tracking keeps following it.
pub fn tracked_peak(cfg: &Config, s: &Spectrum, reference: f64) -> Option<Peak> {
    let c = memspin_core::PeakCriteria {
        prominence_frac: cfg.analysis.peaks.prominence_frac * TRACK_PROMINENCE_RATIO,
        ..cfg.analysis.peaks
    };
    find_peaks_with(s, &c).into_iter().min_by(|a, b| (a.freq - reference).abs().total_cmp(&(b.freq - reference).abs()))
}

pub fn cmd_sweep_tau(cfg: &Config, fractions: &[f64], out: Option<&Path>) -> Result<PathBuf> {
    let variants = tau_sweep(cfg, fractions)?;
    let baseline = match variants.iter().find(|v| v.fraction == 0.0) {
        Some(v) => v.clone(),
        None => tau_sweep(cfg, &[0.0])?.remove(0),
    };
    let nu0 = cfg.density.nu0();
    let track = |s: &Spectrum, f: f64| tracked_peak(cfg, s, f).map_or(f64::NAN, |p| p.freq);
    let base_low = baseline.peaks.first().map_or(f64::NAN, |p| p.freq);
    let base_nu0 = track(&baseline.spectrum, nu0);
    let mut dir = RunDir::create(out, "sweep-tau", &cfg.hash, &cfg.text)?;
    let note = format!("alpha = {} and nu0 = {nu0} THz held, {}", cfg.damping.alpha, component_note(cfg));
    let mut s = Table::new(format!("amplitude spectrum per tau_in variant; {note}"), &["tau_fraction", "freq_thz", "amplitude"]);
    let mut p = Table::new(format!("peaks per variant; {note}"), &["tau_fraction", "freq_thz", "amplitude", "prominence"]);
    let mut sum = Table::new(
        format!("shifts of the unvaried kernel's lowest and nu0-adjacent peaks, tracked into each variant; {note}"),
        &peak_columns(&[
            "tau_fraction",
            "tau_in_ps",
            "gamma_thz",
            "amp_thz3",
            "lowest_peak_thz",
            "lowest_shift_thz",
            "nu0_peak_thz",
            "nu0_shift_thz",
        ]),
    );
    for v in &variants {
        let lead = [Cell::F(v.fraction)];
        spectrum_rows(&mut s, &lead, &v.spectrum);
        peak_rows(&mut p, &lead, &v.peaks);
        let (g, a) = match v.kernel {
            KernelSpec::Lorentzian(d) => (d.gamma(), d.amp()),
            _ => (f64::NAN, f64::NAN),
        };
        let low = track(&v.spectrum, base_low);
        let near = track(&v.spectrum, base_nu0);
        let mut row: Vec<Cell> = [v.fraction, v.tau_in, g, a, low, low - base_low, near, near - base_nu0]
            .into_iter()
            .map(Cell::F)
            .collect();
        row.extend(peak_cells(&v.peaks));
        sum.push(row);
    }
    dir.write("spectrum.csv", "spectrum", &s)?;
    dir.write("peaks.csv", "peaks", &p)?;
    dir.write("summary.csv", "summary", &sum)?;
    dir.finish()
}

pub fn cmd_predict(cfg: &Config, out: Option<&Path>) -> Result<PathBuf> {
    let roots = predict(cfg)?;
    let mut dir = RunDir::create(out, "predict", &cfg.hash, &cfg.text)?;
    let mut t = Table::new(
        format!(
            "susceptibility zeros |Re w|/2pi, {} kernel, order {}, Larmor {:.6} GHz",
            cfg.sim.kernel.name(),
            effective_order(cfg),
            cfg.larmor_ghz()
        ),
        &["freq_thz", "branch", "multiplicity"],
    );
    for r in &roots {
        t.push(vec![r.freq_thz.into(), r.branch.symbol().into(), r.multiplicity.into()]);
    }
    dir.write("roots.csv", "roots", &t)?;
    dir.finish()
}

pub fn cmd_noise_check(cfg: &Config, realizations: usize, out: Option<&Path>) -> Result<PathBuf> {
    let band = (1.0, 10.0);
    let c = noise_check(
        &cfg.noise,
        cfg.sim.temperature,
        cfg.sim.dt,
        cfg.sweep.noise_samples,
        realizations,
        cfg.sim.seed,
        band,
    )?;
    let mut dir = RunDir::create(out, "noise-check", &cfg.hash, &cfg.text)?;
    let mut t = Table::new(
        format!(
            "averaged periodogram vs target, two-sided angular PSD, {realizations} realisations x 3 components, Daniell half-width {DANIELL_HALF_WIDTH}"
        ),
        &["freq_thz", "measured_psd", "target_psd", "ratio"],
    );
    for ((f, m), g) in c.freqs.iter().zip(&c.measured).zip(&c.target) {
        if *f > SPECTRUM_CSV_MAX_THZ {
            break;
        }
        t.push(vec![(*f).into(), (*m).into(), (*g).into(), (m / g).into()]);
    }
    dir.write("noise_check.csv", "noise-check", &t)?;
    let mut s = Table::new(
        "max relative deviation of the smoothed periodogram inside the band",
        &["realizations", "samples", "band_lo_thz", "band_hi_thz", "max_rel_deviation", "rel_stderr", "high_variance"],
    );
    s.push(vec![
        realizations.into(),
        cfg.sweep.noise_samples.into(),
        band.0.into(),
        band.1.into(),
        c.max_rel_deviation.into(),
        c.rel_stderr.into(),
        usize::from(c.high_variance()).into(),
    ]);
    dir.write("summary.csv", "summary", &s)?;
    dir.finish()
}
