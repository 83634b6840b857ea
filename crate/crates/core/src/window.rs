//! Time window, Blackman taper and polynomial detrending applied before an FFT.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub center: f64,
    pub width: f64,
}

impl WindowSpec {
    /// Blackman window spanning `[t_start, t_end]` exactly.
    pub fn spanning(t_start: f64, t_end: f64) -> Result<Self> {
        let w = WindowSpec { t_start, t_end, center: 0.5 * (t_start + t_end), width: t_end - t_start };
        w.validate()?;
        Ok(w)
    }

    /// 2.3–6.7 ps, centred on 4.5 ps.
    pub fn reference() -> Self {
        WindowSpec { t_start: 2.3, t_end: 6.7, center: 4.5, width: 4.4 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_start >= 0.0) {
            return Err(Error::param("window_start_ps", "window bounds must be finite and non-negative"));
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::param("window_end_ps", "window must end after it starts"));
        }
        if !(self.width.is_finite() && self.width > 0.0 && self.center.is_finite()) {
            return Err(Error::param("window_width_ps", "width must be finite and positive"));
        }
        Ok(())
    }
}

/// Blackman taper of width `width` centred on `center`; zero outside.
pub fn blackman(t: f64, center: f64, width: f64) -> f64 {
    let x = (t - center) / width;
    if x.abs() > 0.5 {
        return 0.0;
    }
    0.42 + 0.5 * libm::cos(TAU * x) + 0.08 * libm::cos(2.0 * TAU * x)
}

/// Restrict `(times, values)` to the window and apply the taper.
pub fn apply_window(times: &[f64], values: &[f64], w: &WindowSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ts, vs) = restrict(times, values, w)?;
    let tapered = ts.iter().zip(&vs).map(|(t, v)| v * blackman(*t, w.center, w.width)).collect();
    Ok((ts, tapered))
}

/// Samples of `(times, values)` inside `[t_start, t_end]`.
pub fn restrict(times: &[f64], values: &[f64], w: &WindowSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    w.validate()?;
    if times.len() != values.len() {
        return Err(Error::param("values", "times and values differ in length"));
    }
    let (first, last) = match (times.first(), times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::WindowNotCovered { start: w.t_start, end: w.t_end, first: f64::NAN, last: f64::NAN }),
    };
    let slack = 1e-9 * (1.0 + w.t_end.abs());
    if first > w.t_start + slack || last < w.t_end - slack {
        return Err(Error::WindowNotCovered { start: w.t_start, end: w.t_end, first, last });
    }
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (t, v) in times.iter().zip(values) {
        if *t >= w.t_start - slack && *t <= w.t_end + slack {
            ts.push(*t);
            vs.push(*v);
        }
    }
    Ok((ts, vs))
}

/// Least-squares polynomial removed from a series before tapering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Detrend {
    None,
    Constant,
    Linear,
    #[default]
    Quadratic,
    Cubic,
}

impl Detrend {
    pub fn degree(self) -> Option<usize> {
        match self {
            Detrend::None => None,
            Detrend::Constant => Some(0),
            Detrend::Linear => Some(1),
            Detrend::Quadratic => Some(2),
            Detrend::Cubic => Some(3),
        }
    }
}

/// Subtract the least-squares polynomial fit of the given degree.
///
/// The basis is orthogonalised against the samples (Gram–Schmidt on a rescaled
/// time axis), so the fit is well conditioned for any sampling.
pub fn detrend(times: &[f64], values: &[f64], kind: Detrend) -> Vec<f64> {
    let mut out = values.to_vec();
    let deg = match kind.degree() {
        Some(d) if !times.is_empty() => d,
        _ => return out,
    };
    let (lo, hi) = (times[0], times[times.len() - 1]);
    let mid = 0.5 * (lo + hi);
    let half = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };
    let x: Vec<f64> = times.iter().map(|t| (t - mid) / half).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..=deg {
        let mut b: Vec<f64> = x.iter().map(|xi| libm::pow(*xi, k as f64)).collect();
        for q in &basis {
            let c = dot(&b, q);
            for (bi, qi) in b.iter_mut().zip(q) {
                *bi -= c * qi;
            }
        }
        let n = libm::sqrt(dot(&b, &b));
        if n == 0.0 {
            continue;
        }
        b.iter_mut().for_each(|bi| *bi /= n);
        let c = dot(&out, &b);
        for (o, bi) in out.iter_mut().zip(&b) {
            *o -= c * bi;
        }
        basis.push(b);
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
