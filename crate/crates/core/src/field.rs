use crate::error::{Error, Result};
use crate::vec3::Vec3;
use crate::TAU;

/// Gaussian-enveloped THz pulse `B₀ e^{-(t-t₀)²/2σ²} cos(2πν(t-t₀)) ê`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzPulse {
    pub amplitude_t: f64,
    pub center_ps: f64,
    pub width_ps: f64,
    pub freq_thz: f64,
    pub direction: Vec3,
}

impl ThzPulse {
    pub fn field(&self, t: f64) -> Vec3 {
        let x = t - self.center_ps;
        let env = libm::exp(-0.5 * x * x / (self.width_ps * self.width_ps));
        self.direction * (self.amplitude_t * env * libm::cos(TAU * self.freq_thz * x))
    }
}

/// Static fields in tesla. The demagnetising field is `-n_z0·m_z ẑ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub h_bias: Vec3,
    pub h_aniso: Vec3,
    pub n_z0: f64,
    pub thz_pulse: Option<ThzPulse>,
}

impl FieldConfig {
    /// 0.1 T along x̂ and a 1.37 T thin-film demagnetising factor.
    pub fn reference() -> Self {
        FieldConfig { h_bias: Vec3::new(0.1, 0.0, 0.0), h_aniso: Vec3::ZERO, n_z0: 1.37, thz_pulse: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.h_bias.is_finite() {
            return Err(Error::param("h_bias_t", "must be finite"));
        }
        if !self.h_aniso.is_finite() {
            return Err(Error::param("h_aniso_t", "must be finite"));
        }
        if !(self.n_z0.is_finite() && self.n_z0 >= 0.0) {
            return Err(Error::param("n_z0_t", "must be finite and non-negative"));
        }
        if let Some(p) = self.thz_pulse {
            if !(p.width_ps > 0.0 && p.amplitude_t.is_finite() && p.direction.is_finite()) {
                return Err(Error::param("thz_pulse", "needs a positive width and finite amplitude"));
            }
        }
        Ok(())
    }
}

/// Effective field in tesla for unit magnetisation `m` and demagnetising factor `n_t`.
pub fn effective_field(m: Vec3, cfg: &FieldConfig, n_t: f64, t: f64) -> Vec3 {
    let mut h = cfg.h_bias + cfg.h_aniso - Vec3::new(0.0, 0.0, n_t * m.z);
    if let Some(p) = &cfg.thz_pulse {
        h += p.field(t);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demag_opposes_out_of_plane_moment() {
        let cfg = FieldConfig::reference();
        assert_eq!(effective_field(Vec3::X, &cfg, 1.37, 0.0), Vec3::new(0.1, 0.0, 0.0));
        let h = effective_field(Vec3::Z, &cfg, 1.37, 0.0);
        assert!((h.z + 1.37).abs() < 1e-15 && (h.x - 0.1).abs() < 1e-15);
    }

    #[test]
    fn pulse_peaks_at_center() {
        let p = ThzPulse { amplitude_t: 0.5, center_ps: 1.0, width_ps: 0.1, freq_thz: 1.0, direction: Vec3::Y };
        assert_eq!(p.field(1.0), Vec3::new(0.0, 0.5, 0.0));
        assert!(p.field(3.0).norm() < 1e-50);
    }
}
