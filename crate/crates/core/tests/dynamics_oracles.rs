use memspin_core::dynamics::MemoryInit;
use memspin_core::*;
use proptest::prelude::*;

fn no_demag() -> FieldConfig {
    FieldConfig { n_z0: 0.0, ..FieldConfig::reference() }
}

#[test]
fn llg_relaxes_at_the_gilbert_rate() {
    let alpha = 0.15;
    let cfg = SimulationConfig {
        kernel: KernelSpec::markovian(alpha).unwrap(),
        fields: no_demag(),
        m0: Vec3::Y,
        dt: 0.01,
        t_end: 2000.0,
        ..SimulationConfig::reference()
    };
    let tr = integrate_llg(&cfg).unwrap();
    let rate = alpha * 0.176 * 0.1 / (1.0 + alpha * alpha);
    // Polar angle from x̂ obeys tan(θ/2) = tan(θ₀/2) e^{-rate·t}, so m_x = tanh(rate·t).
    for (t, m) in tr.times.iter().zip(&tr.m).step_by(1000) {
        assert!((m.x - (rate * t).tanh()).abs() < 1e-8, "t={t}: {}", m.x);
    }
    // Fitted rate from the transverse envelope.
    let i1 = 20_000;
    let i2 = 100_000;
    let perp = |m: &Vec3| (m.y * m.y + m.z * m.z).sqrt();
    let g1 = (1.0 - tr.m[i1].x) / perp(&tr.m[i1]);
    let g2 = (1.0 - tr.m[i2].x) / perp(&tr.m[i2]);
    let fitted = (g1 / g2).ln() / (tr.times[i2] - tr.times[i1]);
    assert!((fitted / rate - 1.0).abs() < 0.01);
}

fn energy(m: Vec3, f: &FieldConfig) -> f64 {
    -m.dot(f.h_bias) + 0.5 * f.n_z0 * m.z * m.z
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn damped_llg_never_gains_energy(
        alpha in 0.01f64..0.5,
        hx in -1.0f64..1.0, hy in -1.0f64..1.0, hz in -1.0f64..1.0,
        nz in 0.0f64..2.0,
        theta in 0.1f64..3.0, phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let fields = FieldConfig { h_bias: Vec3::new(hx, hy, hz), h_aniso: Vec3::ZERO, n_z0: nz, thz_pulse: None };
        let cfg = SimulationConfig {
            kernel: KernelSpec::markovian(alpha).unwrap(),
            fields,
            m0: Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()),
            dt: 0.005,
            t_end: 20.0,
            ..SimulationConfig::reference()
        };
        let tr = integrate_llg(&cfg).unwrap();
        let e: Vec<f64> = tr.m.iter().map(|m| energy(*m, &fields)).collect();
        for w in e.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-13);
        }
        for m in &tr.m {
            prop_assert!((m.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nmllg_keeps_unit_norm(theta in 0.1f64..3.0, phi in 0.0f64..std::f64::consts::TAU, amp in 0.0f64..500.0) {
        let d = SpectralDensity::new(amp, 0.2, 4.2).unwrap();
        let cfg = SimulationConfig {
            kernel: KernelSpec::Lorentzian(d),
            m0: Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()),
            t_end: 2.0,
            ..SimulationConfig::reference()
        };
        let tr = integrate_nmllg(&cfg, None).unwrap();
        prop_assert!(tr.max_step_drift < 1e-6);
        for m in &tr.m {
            prop_assert!((m.norm() - 1.0).abs() < 1e-12);
        }
    }
}

/// Composite Simpson of `K(t - t') m(t')` on the stored samples.
fn convolve(tr: &Trajectory, d: &SpectralDensity, k: usize) -> Vec3 {
    assert!(k.is_multiple_of(2));
    let dt = tr.config.dt;
    let mut acc = Vec3::ZERO;
    for j in 0..=k {
        let w = if j == 0 || j == k { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += tr.m[j] * (w * kernel_eval((k - j) as f64 * dt, d).unwrap());
    }
    acc * (dt / 3.0)
}

#[test]
fn embedded_oscillator_equals_the_memory_integral() {
    let d = SpectralDensity::reference();
    let cfg = SimulationConfig { t_end: 3.0, ..SimulationConfig::reference() };
    let tr = integrate_nmllg(&cfg, None).unwrap();
    let mem = match &tr.aux {
        AuxSeries::Memory(s) => s,
        _ => panic!("memory series missing"),
    };
    for k in [200, 1000, 2000, 3000] {
        let conv = convolve(&tr, &d, k);
        let v = mem[k].0;
        assert!((conv - v).norm() < 1e-6 * v.norm().max(1.0), "k={k}: {conv:?} vs {v:?}");
    }
}

#[test]
fn relaxed_bath_sits_at_its_fixed_point() {
    let cfg = SimulationConfig {
        m0: Vec3::X,
        memory_init: MemoryInit::Relaxed,
        fields: FieldConfig { n_z0: 1.37, ..FieldConfig::reference() },
        t_end: 5.0,
        ..SimulationConfig::reference()
    };
    let tr = integrate_nmllg(&cfg, None).unwrap();
    for m in &tr.m {
        assert!((*m - Vec3::X).norm() < 1e-14);
    }
}

#[test]
fn small_inertia_reduces_to_llg() {
    let d = derive_alpha_tauin(&SpectralDensity::reference());
    let base = SimulationConfig { dt: 1e-5, t_end: 5.0, ..SimulationConfig::reference() };
    let llg = integrate_llg(&base.with_kernel(KernelSpec::markovian(d.alpha).unwrap())).unwrap();
    let illg = integrate_illg(&base.with_kernel(KernelSpec::inertial(d.alpha, 1e-4).unwrap())).unwrap();
    let worst = llg.m.iter().zip(&illg.m).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn zero_coupling_reduces_to_undamped_llg() {
    let base = SimulationConfig::reference();
    let d = SpectralDensity::new(0.0, 0.2, 4.2).unwrap();
    let nm = integrate_nmllg(&base.with_kernel(KernelSpec::Lorentzian(d)), None).unwrap();
    let llg = integrate_llg(&base.with_kernel(KernelSpec::markovian(0.0).unwrap())).unwrap();
    let worst = nm.m.iter().zip(&llg.m).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn runs_are_reproducible() {
    let cfg = SimulationConfig::reference();
    let a = integrate_nmllg(&cfg, None).unwrap();
    let b = integrate_nmllg(&cfg, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn stochastic_step_uses_the_supplied_field() {
    let cfg = SimulationConfig { temperature: 1.0, t_end: 1.0, ..SimulationConfig::reference() };
    let n = cfg.steps() + 1;
    let zero = NoiseSeries { dt: cfg.dt, h: vec![Vec3::ZERO; n], temperature: 1.0, seed: 0 };
    let kick = NoiseSeries { h: vec![Vec3::new(0.0, 0.0, 0.5); n], ..zero.clone() };
    let a = integrate_nmllg(&cfg, Some(&zero)).unwrap();
    let b = integrate_nmllg(&cfg, Some(&kick)).unwrap();
    let det = integrate_nmllg(&SimulationConfig { temperature: 0.0, ..cfg.clone() }, None).unwrap();
    // Heun and RK4 agree to second order on the same deterministic problem.
    assert!((a.m[n - 1] - det.m[n - 1]).norm() < 1e-4);
    assert!((b.m[n - 1] - a.m[n - 1]).norm() > 1e-2);
    let short = NoiseSeries { h: vec![Vec3::ZERO; 10], ..zero };
    assert!(integrate_nmllg(&cfg, Some(&short)).is_err());
}
