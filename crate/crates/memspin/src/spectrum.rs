//! Amplitude spectra of trajectory components.

use memspin_core::window::{blackman, restrict};
use memspin_core::{detrend, Component, Detrend, Error, Result, Spectrum, Trajectory, WindowSpec};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub window: WindowSpec,
    /// Zero-padded length is `pad_factor` times the next power of two.
    pub pad_factor: usize,
    pub detrend: Detrend,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { window: WindowSpec::reference(), pad_factor: 8, detrend: Detrend::Quadratic }
    }
}

/// Spectrum of one magnetisation component inside the analysis window.
pub fn spectrum(tr: &Trajectory, c: Component, opts: &SpectrumOptions, source: u64) -> Result<Spectrum> {
    spectrum_of(&tr.times, &tr.component(c), opts, source)
}

/// Restrict, detrend, taper, zero-pad and FFT a uniformly sampled series.
pub fn spectrum_of(times: &[f64], values: &[f64], opts: &SpectrumOptions, source: u64) -> Result<Spectrum> {
    if opts.pad_factor == 0 {
        return Err(Error::InvalidParameter { name: "pad_factor", reason: "must be at least 1".into() });
    }
    let (ts, vs) = restrict(times, values, &opts.window)?;
    if ts.len() < 2 {
        return Err(Error::InvalidParameter { name: "window", reason: "fewer than two samples inside".into() });
    }
    let dt = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    let vs = detrend(&ts, &vs, opts.detrend);
    let n = opts.pad_factor * ts.len().next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut window_sum = 0.0;
    for (i, (t, v)) in ts.iter().zip(&vs).enumerate() {
        let w = blackman(*t, opts.window.center, opts.window.width);
        window_sum += w;
        buf[i] = Complex64::new(v * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2 + 1;
    let resolution = 1.0 / (n as f64 * dt);
    Ok(Spectrum {
        freqs: (0..half).map(|k| k as f64 * resolution).collect(),
        amps: buf[..half].iter().map(|z| z.norm()).collect(),
        resolution,
        window_sum,
        source,
    })
}
