//! Macrospin dynamics with a damped-oscillator (Lorentzian) memory kernel.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is deterministic:
//! kernel algebra, the three integrators (LLG, inertial LLG and the
//! memory-kernel LLG embedded as an auxiliary oscillator), the analysis window,
//! peak picking and the truncated susceptibility polynomial. FFT-based spectra,
//! noise synthesis and file formats live in the `memspin` crate.
//!
//! Units: time in ps, linear frequencies in THz, fields in tesla. Internally the
//! integrators work with angular rates (rad/ps).
#![no_std]
// Negated comparisons are how NaN inputs fail the parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod field;
pub mod kernel;
pub mod peaks;
pub mod quadrature;
pub mod susceptibility;
pub mod vec3;
pub mod window;

pub use dynamics::{
    integrate_illg, integrate_llg, integrate_nmllg, integrate_nmllg_with, AuxSeries, Component, EmbeddedState, MemoryInit,
    NoiseSeries, SimulationConfig, Trajectory,
};
pub use error::{Error, Result};
pub use field::{effective_field, FieldConfig, ThzPulse};
pub use kernel::{
    derive_alpha_tauin, fit_lorentzian, kernel_eval, kernel_from_density, kernel_moment,
    kernel_moment_quadrature, lorentzian_density, to_dimensionless, AngularParams,
    DampingParams, DimensionlessParams, KernelMoments, KernelSpec, SpectralDensity,
};
pub use peaks::{find_peaks, find_peaks_with, Peak, PeakCriteria, Spectrum};
pub use susceptibility::{
    susceptibility_polynomial, susceptibility_roots, Branch, Root, SusceptibilityPolynomial,
};
pub use vec3::Vec3;
pub use window::{apply_window, blackman, detrend, Detrend, WindowSpec};

/// Gyromagnetic ratio in rad/(ps T).
pub const GAMMA_E: f64 = 0.176;

/// `2π`.
pub const TAU: f64 = core::f64::consts::TAU;
