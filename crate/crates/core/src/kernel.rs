//! Lorentzian bath spectral density, its memory kernel and the kernel moments.
//!
//! Linear parameters (`A` in THz³, `Γ`, `ν₀` in THz) are what users write down.
//! The dynamics and the kernel use the angular forms `ω₀ = 2πν₀`, `Γ_ω = 2πΓ`
//! and `A_ω = (2π)³A`, in which
//!
//! ```text
//! K(τ) = A_ω e^{-Γ_ω τ/2} sin(ω₁τ)/ω₁,   ω₁² = ω₀² - Γ_ω²/4
//! K(τ) = (2/π) ∫₀^∞ I_ω(ω) sin(ωτ) dω,    I_ω(ω) = A_ω Γ_ω ω / ((ω₀²-ω²)² + Γ_ω²ω²)
//! ```

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate, Neumaier};
use crate::TAU;

/// Lorentzian spectral density `I(ν) = AΓν / ((ν₀²-ν²)² + Γ²ν²)`.
///
/// `A = 0` is accepted and describes a bath decoupled from the spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    amp: f64,
    gamma: f64,
    nu0: f64,
}

impl SpectralDensity {
    pub fn new(amp_thz3: f64, gamma_thz: f64, nu0_thz: f64) -> Result<Self> {
        if !(amp_thz3.is_finite() && amp_thz3 >= 0.0) {
            return Err(Error::param("amp_thz3", "must be finite and non-negative"));
        }
        if !(nu0_thz.is_finite() && nu0_thz > 0.0) {
            return Err(Error::param("nu0_thz", "must be finite and positive"));
        }
        if !(gamma_thz.is_finite() && gamma_thz > 0.0) {
            return Err(Error::param("gamma_thz", "must be finite and positive"));
        }
        if gamma_thz >= 2.0 * nu0_thz {
            return Err(Error::param(
                "gamma_thz",
                alloc::format!("oscillator must be underdamped: Γ = {gamma_thz} ≥ 2ν₀ = {}", 2.0 * nu0_thz),
            ));
        }
        Ok(SpectralDensity { amp: amp_thz3, gamma: gamma_thz, nu0: nu0_thz })
    }

    /// ν₀ = 4.2 THz, Γ = 0.2 THz, A = 242 THz³.
    pub fn reference() -> Self {
        SpectralDensity { amp: 242.0, gamma: 0.2, nu0: 4.2 }
    }

    pub fn amp(&self) -> f64 {
        self.amp
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn angular(&self) -> AngularParams {
        let omega0 = TAU * self.nu0;
        let gamma = TAU * self.gamma;
        AngularParams {
            omega0,
            gamma,
            amp: TAU * TAU * TAU * self.amp,
            omega1: libm::sqrt(omega0 * omega0 - 0.25 * gamma * gamma),
        }
    }

    /// `I_ω(ω)` in 1/ps for angular frequency `ω` in rad/ps.
    pub fn angular_density(&self, omega: f64) -> f64 {
        let p = self.angular();
        let d = p.omega0 * p.omega0 - omega * omega;
        p.amp * p.gamma * omega / (d * d + p.gamma * p.gamma * omega * omega)
    }

    /// Memory times `2/Γ` (linear) and `2/Γ_ω` (angular) in ps.
    pub fn memory_times(&self) -> (f64, f64) {
        (2.0 / self.gamma, 2.0 / (TAU * self.gamma))
    }
}

/// Angular-frequency form of a [`SpectralDensity`], all in ps⁻¹ powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularParams {
    pub omega0: f64,
    pub gamma: f64,
    pub amp: f64,
    pub omega1: f64,
}

impl AngularParams {
    /// Static response `v* = coupling·m` of the oscillator to a frozen moment.
    pub fn coupling(&self) -> f64 {
        self.amp / (self.omega0 * self.omega0)
    }
}

/// Damping kernel used by the dynamics and by the susceptibility expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `K(τ) = 2α δ(τ)`.
    Markovian { alpha: f64 },
    /// Markovian damping plus an inertial (second-derivative) term.
    Inertial { alpha: f64, tau_in: f64 },
    Lorentzian(SpectralDensity),
}

impl KernelSpec {
    pub fn markovian(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(KernelSpec::Markovian { alpha })
    }

    pub fn inertial(alpha: f64, tau_in: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(tau_in.is_finite() && tau_in > 0.0) {
            return Err(Error::param("tau_in_ps", "must be finite and positive"));
        }
        Ok(KernelSpec::Inertial { alpha, tau_in })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Markovian { .. } => "Markovian",
            KernelSpec::Inertial { .. } => "inertial",
            KernelSpec::Lorentzian(_) => "Lorentzian",
        }
    }

    /// Moments κ₁..κ_{m_max}; the local kernels only have the first one or two.
    pub fn moments(&self, m_max: usize) -> Result<KernelMoments> {
        let kappas = match *self {
            KernelSpec::Lorentzian(d) => (1..=m_max).map(|m| kernel_moment(m, &d)).collect(),
            KernelSpec::Markovian { alpha } => {
                (1..=m_max).map(|m| if m == 1 { -alpha } else { 0.0 }).collect()
            }
            KernelSpec::Inertial { alpha, tau_in } => (1..=m_max)
                .map(|m| match m {
                    1 => -alpha,
                    2 => -alpha * tau_in,
                    _ => 0.0,
                })
                .collect(),
        };
        Ok(KernelMoments { kappas })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", "must be finite and non-negative"))
    }
}

/// κ₁, κ₂, ... of the time-derivative expansion, in ps^{m-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMoments {
    kappas: Vec<f64>,
}

impl KernelMoments {
    /// κ_m for `m ≥ 1`.
    pub fn get(&self, m: usize) -> Option<f64> {
        m.checked_sub(1).and_then(|i| self.kappas.get(i).copied())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.kappas
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }
}

/// Gilbert damping and inertial time derived from a Lorentzian bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    pub alpha: f64,
    pub tau_in: f64,
}

/// Dimensionless parameters in units of a reference angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub amp: f64,
    pub omega0: f64,
    pub gamma: f64,
}

pub fn lorentzian_density(nu: f64, d: &SpectralDensity) -> Result<f64> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::Domain { op: "lorentzian_density", value: nu });
    }
    let diff = d.nu0 * d.nu0 - nu * nu;
    Ok(d.amp * d.gamma * nu / (diff * diff + d.gamma * d.gamma * nu * nu))
}

/// Closed-form kernel in rad²/ps² (the field it produces is in rad/ps per unit `m`).
pub fn kernel_eval(tau: f64, d: &SpectralDensity) -> Result<f64> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain { op: "kernel_eval", value: tau });
    }
    let p = d.angular();
    Ok(p.amp * libm::exp(-0.5 * p.gamma * tau) * libm::sin(p.omega1 * tau) / p.omega1)
}

/// Kernel from the sine transform of the spectral density, by quadrature.
///
/// `tol` is an absolute tolerance on `K(τ)`. The range up to the first zero of
/// `sin(ωτ)` past `50ω₀` is integrated adaptively; the oscillatory tail is
/// summed half-period by half-period and extrapolated with Wynn's epsilon.
pub fn kernel_from_density(tau: f64, d: &SpectralDensity, tol: f64) -> Result<Estimate> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain { op: "kernel_from_density", value: tau });
    }
    if !(tol > 0.0) {
        return Err(Error::param("quadrature_tol", "must be positive"));
    }
    if tau == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let p = d.angular();
    let scale = 2.0 / core::f64::consts::PI;
    let f = |w: f64| scale * d.angular_density(w) * libm::sin(w * tau);

    let half = core::f64::consts::PI / tau;
    let cut = 50.0 * p.omega0;
    let n_body = libm::ceil(cut / half) as usize;
    let mut breaks: Vec<f64> = (0..=n_body).map(|k| k as f64 * half).collect();
    for extra in [p.omega0 - 5.0 * p.gamma, p.omega0, p.omega0 + 5.0 * p.gamma] {
        if extra > 0.0 && extra < breaks[n_body] {
            breaks.push(extra);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let body = quadrature::integrate_pieces(f, &breaks, 0.5 * tol, 0.0)?;

    let mut partial = Vec::new();
    let mut acc = Neumaier::default();
    let mut tail_err = 0.0;
    let start = breaks[breaks.len() - 1];
    let mut tail = (0.0, f64::INFINITY);
    for k in 0..40 {
        let a = start + k as f64 * half;
        let e = quadrature::integrate(f, a, a + half, 0.01 * tol, 0.0, 64)?;
        acc.add(e.value);
        tail_err += e.error;
        partial.push(acc.value());
        if partial.len() >= 4 {
            tail = quadrature::wynn_epsilon(&partial);
            if tail.1 < 0.1 * tol {
                break;
            }
        }
    }
    let error = body.error + tail_err + tail.1;
    if !(error <= tol) {
        return Err(Error::Quadrature { estimate: error, tolerance: tol });
    }
    Ok(Estimate { value: body.value + tail.0, error })
}

/// κ_m = (−1)^m/m! ∫₀^∞ ζ^m K(ζ) dζ in closed form.
pub fn kernel_moment(m: usize, d: &SpectralDensity) -> f64 {
    let p = d.angular();
    let z = Complex64::new(0.5 * p.gamma, p.omega1) / (p.omega0 * p.omega0);
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * p.amp / p.omega1 * z.powu(m as u32 + 1).im
}

/// κ_m by quadrature of the closed-form kernel.
///
/// Integrates half-periods of `sin(ω₁ζ)` with compensated summation, out to
/// the point where the remaining envelope is below 1e-17 of the largest
/// half-period contribution.
pub fn kernel_moment_quadrature(m: usize, d: &SpectralDensity) -> Result<f64> {
    let p = d.angular();
    let s = 0.5 * p.gamma;
    let mut fact = 1.0;
    for k in 2..=m {
        fact *= k as f64;
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let f = |z: f64| {
        let zm = if m == 0 { 1.0 } else { libm::pow(z, m as f64) };
        zm * p.amp * libm::exp(-s * z) * libm::sin(p.omega1 * z) / p.omega1
    };
    let half = core::f64::consts::PI / p.omega1;
    let mut acc = Neumaier::default();
    let mut largest: f64 = 0.0;
    let mut k = 0usize;
    loop {
        let a = k as f64 * half;
        let e = quadrature::integrate(f, a, a + half, 0.0, 1e-15, 64)?;
        acc.add(e.value);
        largest = largest.max(e.value.abs());
        k += 1;
        let t = k as f64 * half;
        // ∫_t^∞ ζ^m e^{-sζ} dζ ≤ t^m e^{-st} / (s - m/t) once t > m/s.
        if t > 2.0 * m as f64 / s {
            let bound = p.amp / p.omega1 * libm::pow(t, m as f64) * libm::exp(-s * t) / (s - m as f64 / t);
            if bound < 1e-17 * largest {
                break;
            }
        }
        if k > 5_000_000 {
            return Err(Error::Quadrature { estimate: largest, tolerance: 0.0 });
        }
    }
    Ok(sign * acc.value() / fact)
}

/// `α = AΓ/ν₀⁴` and `τ_in = (ν₀² − Γ²)/(2πν₀²Γ)`.
pub fn derive_alpha_tauin(d: &SpectralDensity) -> DampingParams {
    let nu2 = d.nu0 * d.nu0;
    DampingParams {
        alpha: d.amp * d.gamma / (nu2 * nu2),
        tau_in: (nu2 - d.gamma * d.gamma) / (TAU * nu2 * d.gamma),
    }
}

/// Lorentzian with resonance `nu0` reproducing the given `α` and `τ_in`.
///
/// Γ is the positive root of `Γ² + 2πν₀²τ_in Γ − ν₀² = 0`, then `A = αν₀⁴/Γ`.
pub fn fit_lorentzian(alpha: f64, tau_in: f64, nu0: f64) -> Result<SpectralDensity> {
    check_alpha(alpha)?;
    if !(tau_in.is_finite() && tau_in > 0.0) {
        return Err(Error::param("tau_in_ps", "must be finite and positive"));
    }
    if !(nu0.is_finite() && nu0 > 0.0) {
        return Err(Error::param("nu0_thz", "must be finite and positive"));
    }
    let b = TAU * nu0 * nu0 * tau_in;
    let gamma = 2.0 * nu0 * nu0 / (b + libm::sqrt(b * b + 4.0 * nu0 * nu0));
    let nu2 = nu0 * nu0;
    SpectralDensity::new(alpha * nu2 * nu2 / gamma, gamma, nu0)
}

/// `Ã = 8π³A/ω_ref³`, `ω̃₀ = 2πν₀/ω_ref`, `Γ̃ = 2πΓ/ω_ref` for `ω_ref` in rad/ps.
pub fn to_dimensionless(d: &SpectralDensity, omega_ref: f64) -> Result<DimensionlessParams> {
    if !(omega_ref.is_finite() && omega_ref > 0.0) {
        return Err(Error::param("omega_ref", "must be finite and positive"));
    }
    let p = d.angular();
    Ok(DimensionlessParams {
        amp: p.amp / (omega_ref * omega_ref * omega_ref),
        omega0: p.omega0 / omega_ref,
        gamma: p.gamma / omega_ref,
    })
}
