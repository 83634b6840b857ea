use alloc::vec::Vec;

/// One-sided amplitude spectrum `|X(ν)|` of a windowed, zero-padded series.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// THz, starting at 0 with spacing `resolution`.
    pub freqs: Vec<f64>,
    pub amps: Vec<f64>,
    pub resolution: f64,
    /// Sum of the taper samples; `2|X|/window_sum` is the amplitude of a pure sinusoid.
    pub window_sum: f64,
    /// Hash of the configuration that produced the series.
    pub source: u64,
}

impl Spectrum {
    /// Amplitude of the sinusoid that would produce `amp` at a bin centre.
    pub fn sinusoid_amplitude(&self, amp: f64) -> f64 {
        if self.window_sum > 0.0 {
            2.0 * amp / self.window_sum
        } else {
            amp
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub freq: f64,
    pub amp: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakCriteria {
    pub min_freq: f64,
    pub max_freq: Option<f64>,
    /// Prominence threshold relative to the largest amplitude in the band.
    pub prominence_frac: f64,
    /// Absolute floor on the sinusoid-equivalent amplitude.
    pub min_amplitude: f64,
}

impl Default for PeakCriteria {
    fn default() -> Self {
        PeakCriteria { min_freq: 0.8, max_freq: Some(6.0), prominence_frac: 0.1, min_amplitude: 1e-7 }
    }
}

/// Local maxima above `min_freq` with relative prominence above `prominence_frac`.
pub fn find_peaks(s: &Spectrum, min_freq: f64, prominence_frac: f64) -> Vec<Peak> {
    find_peaks_with(s, &PeakCriteria { min_freq, max_freq: None, prominence_frac, min_amplitude: 0.0 })
}

/// Peak picking with an optional upper band edge and an amplitude floor.
///
/// Prominence is measured the usual way: the peak height above the higher of
/// the two minima separating it from taller samples on either side. Peak
/// positions are refined by a parabola through the three highest bins.
pub fn find_peaks_with(s: &Spectrum, c: &PeakCriteria) -> Vec<Peak> {
    let n = s.amps.len().min(s.freqs.len());
    let hi = c.max_freq.unwrap_or(f64::INFINITY);
    let band: Vec<usize> = (0..n).filter(|&i| s.freqs[i] >= c.min_freq && s.freqs[i] <= hi).collect();
    let (lo_i, hi_i) = match (band.first(), band.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Vec::new(),
    };
    let max = band.iter().map(|&i| s.amps[i]).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let a = &s.amps;
    let mut peaks = Vec::new();
    for i in lo_i.max(1)..=hi_i.min(n.saturating_sub(2)) {
        if !(a[i] > a[i - 1] && a[i] >= a[i + 1]) {
            continue;
        }
        // Plateaus count once, at their left edge.
        let mut left_min = a[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            if a[j] > a[i] {
                break;
            }
            left_min = left_min.min(a[j]);
        }
        let mut right_min = a[i];
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if a[j] > a[i] {
                break;
            }
            right_min = right_min.min(a[j]);
        }
        let prominence = a[i] - left_min.max(right_min);
        if prominence <= c.prominence_frac * max || s.sinusoid_amplitude(a[i]) < c.min_amplitude {
            continue;
        }
        let (y0, y1, y2) = (a[i - 1], a[i], a[i + 1]);
        let den = y0 - 2.0 * y1 + y2;
        let shift = if den < 0.0 { (0.5 * (y0 - y2) / den).clamp(-0.5, 0.5) } else { 0.0 };
        peaks.push(Peak {
            freq: s.freqs[i] + shift * s.resolution,
            amp: y1 - 0.25 * (y0 - y2) * shift,
            prominence,
        });
    }
    peaks
}
