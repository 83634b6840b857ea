//! LLG, inertial LLG and memory-kernel LLG integrators.
//!
//! The memory-kernel equation `ṁ = m × (γH + h_th + ∫₀ᵗ K(t−t′) m(t′) dt′)` is
//! integrated exactly through the auxiliary oscillator
//!
//! ```text
//! ṁ = m × (γH_eff + h_th + v),   v̇ = w,   ẇ = −ω₀² v − Γ_ω w + A_ω m
//! ```
//!
//! with `v(0) = w(0) = 0` reproducing the convolution, since `K` is the
//! oscillator's Green's function. `v` and `h_th` are in rad/ps.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{effective_field, FieldConfig};
use crate::kernel::{KernelSpec, SpectralDensity};
use crate::vec3::Vec3;

/// `|m|` may drift at most this much within one step before the run is aborted.
pub const MAX_STEP_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    X,
    Y,
    Z,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::X => 0,
            Component::Y => 1,
            Component::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::X => "x",
            Component::Y => "y",
            Component::Z => "z",
        }
    }
}

/// Starting state of the bath oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoryInit {
    /// `v = w = 0`: no history before `t = 0`.
    #[default]
    Quiescent,
    /// `v = (A_ω/ω₀²) m₀`, `w = 0`: the bath has relaxed to a static `m₀`.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub kernel: KernelSpec,
    pub fields: FieldConfig,
    pub m0: Vec3,
    pub dt: f64,
    pub t_end: f64,
    /// Bath temperature in simulation units; zero means deterministic.
    pub temperature: f64,
    pub seed: u64,
    /// rad/(ps T).
    pub gyromagnetic: f64,
    pub memory_init: MemoryInit,
}

impl SimulationConfig {
    /// Reference Lorentzian system with `m₀ = (√0.98, √0.02, 0)`, 1 fs steps to 10 ps.
    pub fn reference() -> Self {
        SimulationConfig {
            kernel: KernelSpec::Lorentzian(SpectralDensity::reference()),
            fields: FieldConfig::reference(),
            m0: Vec3::new(libm::sqrt(0.98), libm::sqrt(0.02), 0.0),
            dt: 1e-3,
            t_end: 10.0,
            temperature: 0.0,
            seed: 0,
            gyromagnetic: crate::GAMMA_E,
            memory_init: MemoryInit::Quiescent,
        }
    }

    pub fn with_kernel(&self, kernel: KernelSpec) -> Self {
        SimulationConfig { kernel, ..self.clone() }
    }

    /// Number of steps; `t_end` is rounded to the nearest multiple of `dt`.
    pub fn steps(&self) -> usize {
        libm::round(self.t_end / self.dt) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt_ps", "must be finite and positive"));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::param("t_end_ps", "must be finite and at least one step"));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::param("temperature", "must be finite and non-negative"));
        }
        if !(self.gyromagnetic.is_finite() && self.gyromagnetic > 0.0) {
            return Err(Error::param("gyromagnetic", "must be finite and positive"));
        }
        if !self.m0.is_finite() || (self.m0.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::param("m0", "must be a unit vector"));
        }
        self.fields.validate()
    }
}

/// State of the memory-kernel system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmbeddedState {
    pub m: Vec3,
    pub v: Vec3,
    pub w: Vec3,
}

/// Thermal field sampled on the integration grid, in rad/ps.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSeries {
    pub dt: f64,
    pub h: Vec<Vec3>,
    pub temperature: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuxSeries {
    None,
    /// `dm/dt` of the inertial model.
    Velocity(Vec<Vec3>),
    /// `(v, w)` of the bath oscillator.
    Memory(Vec<(Vec3, Vec3)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub m: Vec<Vec3>,
    pub aux: AuxSeries,
    /// Largest `||m| − 1|` seen before the per-step renormalisation.
    pub max_step_drift: f64,
    pub config: SimulationConfig,
}

impl Trajectory {
    pub fn component(&self, c: Component) -> Vec<f64> {
        let i = c.index();
        self.m.iter().map(|m| m[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<EmbeddedState> {
        let m = *self.m.last()?;
        let (v, w) = match &self.aux {
            AuxSeries::Memory(s) => *s.last()?,
            _ => (Vec3::ZERO, Vec3::ZERO),
        };
        Some(EmbeddedState { m, v, w })
    }
}

fn axpy<const N: usize>(y: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

fn rk4<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]>(f: &mut F, t: f64, y: &[f64; N], dt: f64) -> [f64; N] {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * dt, &axpy(y, &k1, 0.5 * dt));
    let k3 = f(t + 0.5 * dt, &axpy(y, &k2, 0.5 * dt));
    let k4 = f(t + dt, &axpy(y, &k3, dt));
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn get(y: &[f64], i: usize) -> Vec3 {
    Vec3::new(y[3 * i], y[3 * i + 1], y[3 * i + 2])
}

fn put(y: &mut [f64], i: usize, v: Vec3) {
    y[3 * i] = v.x;
    y[3 * i + 1] = v.y;
    y[3 * i + 2] = v.z;
}

/// Renormalise `m` (block 0) and return the drift it corrected.
fn renormalize(y: &mut [f64], t: f64) -> Result<f64> {
    let m = get(y, 0);
    let n = m.norm();
    let drift = (n - 1.0).abs();
    if !(drift <= MAX_STEP_DRIFT) {
        return Err(Error::Unstable { time: t, drift });
    }
    put(y, 0, m / n);
    Ok(drift)
}

fn check_noise(cfg: &SimulationConfig, noise: Option<&NoiseSeries>) -> Result<()> {
    match noise {
        None if cfg.temperature > 0.0 => {
            Err(Error::param("noise", "a finite temperature needs a thermal noise series"))
        }
        Some(n) => {
            if (n.dt - cfg.dt).abs() > 1e-12 * cfg.dt {
                return Err(Error::param("noise", "noise series is sampled with a different dt"));
            }
            if n.h.len() < cfg.steps() + 1 {
                return Err(Error::param("noise", "noise series is shorter than the run"));
            }
            Ok(())
        }
        None => Ok(()),
    }
}

/// Memory-kernel LLG through the embedded oscillator.
///
/// Deterministic runs use RK4. With a noise series the step is Heun's
/// predictor–corrector (Stratonovich), the noise taken at the step endpoints.
pub fn integrate_nmllg(cfg: &SimulationConfig, noise: Option<&NoiseSeries>) -> Result<Trajectory> {
    let n = cfg.steps();
    let mut times = Vec::with_capacity(n + 1);
    let mut ms = Vec::with_capacity(n + 1);
    let mut mem = Vec::with_capacity(n + 1);
    let max_drift = integrate_nmllg_with(cfg, noise, |t, s| {
        times.push(t);
        ms.push(s.m);
        mem.push((s.v, s.w));
    })?;
    Ok(Trajectory { times, m: ms, aux: AuxSeries::Memory(mem), max_step_drift: max_drift, config: cfg.clone() })
}

/// [`integrate_nmllg`] without storing the trajectory: `observe` sees every
/// sample, starting with `t = 0`. Returns the largest per-step norm drift.
pub fn integrate_nmllg_with<F: FnMut(f64, &EmbeddedState)>(
    cfg: &SimulationConfig,
    noise: Option<&NoiseSeries>,
    mut observe: F,
) -> Result<f64> {
    cfg.validate()?;
    let d = match cfg.kernel {
        KernelSpec::Lorentzian(d) => d,
        _ => return Err(Error::param("model", "the memory-kernel integrator needs a Lorentzian kernel")),
    };
    check_noise(cfg, noise)?;
    let p = d.angular();
    let (w02, g, a) = (p.omega0 * p.omega0, p.gamma, p.amp);
    let gyro = cfg.gyromagnetic;
    let fields = cfg.fields;
    let n_t = fields.n_z0;
    let rhs = |t: f64, y: &[f64; 9], h_th: Vec3| -> [f64; 9] {
        let m = get(y, 0);
        let v = get(y, 1);
        let w = get(y, 2);
        let b = effective_field(m, &fields, n_t, t) * gyro + h_th + v;
        let mut out = [0.0; 9];
        put(&mut out, 0, m.cross(b));
        put(&mut out, 1, w);
        put(&mut out, 2, -(v * w02) - w * g + m * a);
        out
    };
    let state = |y: &[f64; 9]| EmbeddedState { m: get(y, 0), v: get(y, 1), w: get(y, 2) };

    let n = cfg.steps();
    let m0 = cfg.m0.normalized();
    let mut y = [0.0; 9];
    put(&mut y, 0, m0);
    if cfg.memory_init == MemoryInit::Relaxed {
        put(&mut y, 1, m0 * p.coupling());
    }
    let mut max_drift: f64 = 0.0;
    observe(0.0, &state(&y));
    for k in 0..n {
        let t = k as f64 * cfg.dt;
        y = match noise {
            None => {
                let mut f = |t: f64, y: &[f64; 9]| rhs(t, y, Vec3::ZERO);
                rk4(&mut f, t, &y, cfg.dt)
            }
            Some(ns) => {
                let k1 = rhs(t, &y, ns.h[k]);
                let pred = axpy(&y, &k1, cfg.dt);
                let k2 = rhs(t + cfg.dt, &pred, ns.h[k + 1]);
                let mut out = y;
                for i in 0..9 {
                    out[i] += 0.5 * cfg.dt * (k1[i] + k2[i]);
                }
                out
            }
        };
        let t1 = (k + 1) as f64 * cfg.dt;
        if y.iter().any(|x| !x.is_finite()) {
            return Err(Error::Unstable { time: t1, drift: f64::INFINITY });
        }
        max_drift = max_drift.max(renormalize(&mut y, t1)?);
        observe(t1, &state(&y));
    }
    Ok(max_drift)
}

/// Landau–Lifshitz–Gilbert, `ṁ = m × (γH − α ṁ)`, solved for `ṁ` explicitly.
pub fn integrate_llg(cfg: &SimulationConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let alpha = match cfg.kernel {
        KernelSpec::Markovian { alpha } => alpha,
        _ => return Err(Error::param("model", "LLG needs a Markovian kernel")),
    };
    deterministic_only(cfg)?;
    let gyro = cfg.gyromagnetic;
    let fields = cfg.fields;
    let n_t = fields.n_z0;
    let c = 1.0 / (1.0 + alpha * alpha);
    let mut f = |t: f64, y: &[f64; 3]| -> [f64; 3] {
        let m = Vec3::from_slice(y);
        let b = effective_field(m, &fields, n_t, t) * gyro;
        let mxb = m.cross(b);
        ((mxb - m.cross(mxb) * alpha) * c).to_array()
    };
    let n = cfg.steps();
    let mut y = cfg.m0.normalized().to_array();
    let mut times = Vec::with_capacity(n + 1);
    let mut ms = Vec::with_capacity(n + 1);
    let mut max_drift: f64 = 0.0;
    times.push(0.0);
    ms.push(Vec3::from(y));
    for k in 0..n {
        let t = k as f64 * cfg.dt;
        y = rk4(&mut f, t, &y, cfg.dt);
        let t1 = (k + 1) as f64 * cfg.dt;
        max_drift = max_drift.max(renormalize(&mut y, t1)?);
        times.push(t1);
        ms.push(Vec3::from(y));
    }
    Ok(Trajectory { times, m: ms, aux: AuxSeries::None, max_step_drift: max_drift, config: cfg.clone() })
}

/// Inertial LLG, `ṁ = m × (γH − α ṁ − α τ_in m̈)`, as a first-order system in `(m, ṁ)`.
///
/// Starts from rest, `ṁ(0) = 0`. The fast nutation mode has rate `~1/(α τ_in)`,
/// so `dt` must resolve it.
pub fn integrate_illg(cfg: &SimulationConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let (alpha, tau) = match cfg.kernel {
        KernelSpec::Inertial { alpha, tau_in } => (alpha, tau_in),
        _ => return Err(Error::param("model", "inertial LLG needs an inertial kernel")),
    };
    if alpha == 0.0 {
        return Err(Error::param("alpha", "inertial LLG needs α > 0"));
    }
    deterministic_only(cfg)?;
    let gyro = cfg.gyromagnetic;
    let fields = cfg.fields;
    let n_t = fields.n_z0;
    let inv = 1.0 / (alpha * tau);
    let mut f = |t: f64, y: &[f64; 6]| -> [f64; 6] {
        let m = get(y, 0);
        let u = get(y, 1);
        let b = effective_field(m, &fields, n_t, t) * gyro;
        // Transverse part from m × (ṁ) = −(b − αṁ − ατ m̈)⊥, longitudinal from d(m·ṁ)/dt = 0.
        let perp = (m.cross(u) + b - m * m.dot(b) - u * alpha) * inv;
        let du = perp - m * m.dot(perp) - m * u.norm_sq();
        let mut out = [0.0; 6];
        put(&mut out, 0, u);
        put(&mut out, 1, du);
        out
    };
    let n = cfg.steps();
    let mut y = [0.0; 6];
    put(&mut y, 0, cfg.m0.normalized());
    let mut times = Vec::with_capacity(n + 1);
    let mut ms = Vec::with_capacity(n + 1);
    let mut us = Vec::with_capacity(n + 1);
    let mut max_drift: f64 = 0.0;
    times.push(0.0);
    ms.push(get(&y, 0));
    us.push(get(&y, 1));
    for k in 0..n {
        let t = k as f64 * cfg.dt;
        y = rk4(&mut f, t, &y, cfg.dt);
        let t1 = (k + 1) as f64 * cfg.dt;
        if y.iter().any(|x| !x.is_finite()) {
            return Err(Error::Unstable { time: t1, drift: f64::INFINITY });
        }
        max_drift = max_drift.max(renormalize(&mut y, t1)?);
        let m = get(&y, 0);
        let u = get(&y, 1);
        put(&mut y, 1, u - m * m.dot(u));
        times.push(t1);
        ms.push(m);
        us.push(get(&y, 1));
    }
    Ok(Trajectory { times, m: ms, aux: AuxSeries::Velocity(us), max_step_drift: max_drift, config: cfg.clone() })
}

fn deterministic_only(cfg: &SimulationConfig) -> Result<()> {
    if cfg.temperature > 0.0 {
        Err(Error::param("temperature", "thermal noise is only supported by the memory-kernel model"))
    } else {
        Ok(())
    }
}
