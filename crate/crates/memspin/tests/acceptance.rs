//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always show. The process
//! exits 0 unless `MEMSPIN_ACCEPTANCE_STRICT` is set, in which case any FAIL
//! makes it exit 1.

use std::sync::OnceLock;
use std::time::Instant;

use memspin::config::Config;
use memspin::noise::NoiseModel;
use memspin::runner::{self, noise_check, tau_sweep, temperature_point};
use memspin::thermal::{equilibrium_mx, EquilibriumProtocol};
use memspin_core::*;
use std::result::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome, String> {
    Ok(Outcome { pass, detail })
}

fn cfg(text: &str) -> Result<Config, String> {
    Config::parse(text).map_err(|e| e.to_string())
}

fn freqs(peaks: &[Peak]) -> String {
    let v: Vec<String> = peaks.iter().map(|p| format!("{:.3}", p.freq)).collect();
    format!("[{}]", v.join(", "))
}

fn matches_set(peaks: &[Peak], targets: &[f64], tol: f64) -> bool {
    peaks.len() == targets.len() && peaks.iter().zip(targets).all(|(p, t)| (p.freq - t).abs() <= tol)
}

fn a1() -> Result<Outcome, String> {
    let t0 = Instant::now();
    let r = runner::simulate(&cfg("")?).map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    let pass = matches_set(&r.peaks, &[1.4, 2.4, 4.2], 0.15) && secs < 60.0;
    outcome(pass, format!("nM-LLG m_z peaks {} THz, want [1.4, 2.4, 4.2] ± 0.15; {secs:.2} s", freqs(&r.peaks)))
}

fn a2() -> Result<Outcome, String> {
    let illg = runner::simulate(&cfg("[model]\nmodel = \"illg\"\n[kernel]\nalpha = 0.1555\ntau_in_ps = 0.794\n")?)
        .map_err(|e| e.to_string())?;
    let llg = runner::simulate(&cfg("[model]\nmodel = \"llg\"\n[kernel]\nalpha = 0.1555\n")?).map_err(|e| e.to_string())?;
    let pass = matches_set(&illg.peaks, &[1.4], 0.15) && llg.peaks.is_empty();
    outcome(pass, format!("iLLG peaks {} (want one at 1.4 ± 0.15), LLG peaks {} (want none)", freqs(&illg.peaks), freqs(&llg.peaks)))
}

fn roots(k: &KernelSpec, m_max: usize) -> Result<Vec<f64>, String> {
    let p = susceptibility_polynomial(k, 2.8, m_max, Branch::Plus).map_err(|e| e.to_string())?;
    Ok(susceptibility_roots(&p).map_err(|e| e.to_string())?.iter().map(|r| r.freq_thz).collect())
}

fn a3() -> Result<Outcome, String> {
    let t0 = Instant::now();
    // Inertial parameters of the root-finding example (α = 0.15, τ_in = 0.8 ps).
    let inertial = roots(&KernelSpec::inertial(0.15, 0.8).map_err(|e| e.to_string())?, 2)?;
    let lorentz = roots(&KernelSpec::Lorentzian(SpectralDensity::reference()), 6)?;
    let a2_params = roots(&KernelSpec::inertial(0.1555, 0.794).map_err(|e| e.to_string())?, 2)?;
    let secs = t0.elapsed().as_secs_f64();
    let inertial_ok = inertial.len() == 2
        && (inertial[0] - 2.8e-3).abs() <= 0.05 * 2.8e-3
        && (inertial[1] - 1.4).abs() <= 0.1;
    let near = |t: f64| lorentz.iter().any(|r| (r - t).abs() <= 0.07);
    let lorentz_ok = near(1.23) && (near(1.82) || near(1.85)) && near(2.45);
    outcome(
        inertial_ok && lorentz_ok && secs < 1.0,
        format!(
            "inertial(0.15, 0.8) {inertial:.4?}; Lorentzian m6 {lorentz:.3?}; [inertial(0.1555, 0.794) {a2_params:.4?}]; {:.1} ms",
            secs * 1e3
        ),
    )
}

fn a4() -> Result<Outcome, String> {
    let d = SpectralDensity::new(242.0, 0.2, 4.2).map_err(|e| e.to_string())?;
    let p = derive_alpha_tauin(&d);
    let back = fit_lorentzian(p.alpha, p.tau_in, 4.2).map_err(|e| e.to_string())?;
    let rt = ((back.gamma() - 0.2) / 0.2).abs().max(((back.amp() - 242.0) / 242.0).abs());
    let dl = to_dimensionless(&d, GAMMA_E).map_err(|e| e.to_string())?;
    let pass = (p.alpha - 0.15554).abs() <= 1e-4
        && (p.tau_in - 0.7940).abs() <= 1e-3
        && rt <= 1e-10
        && (dl.amp / 1.10e7 - 1.0).abs() <= 0.01;
    outcome(pass, format!("α = {:.6}, τ_in = {:.6} ps, round trip {rt:.1e}, Ã = {:.4e}", p.alpha, p.tau_in, dl.amp))
}

fn a5() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut closed, mut quad) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let nu0 = rng.random_range(1.0..10.0);
        let g = rng.random_range(0.01..0.8) * nu0;
        let a = rng.random_range(10.0..1000.0);
        let d = SpectralDensity::new(a, g, nu0).map_err(|e| e.to_string())?;
        let p = derive_alpha_tauin(&d);
        let (k1, k2) = (kernel_moment(1, &d), kernel_moment(2, &d));
        closed = closed.max(((k1 + p.alpha) / p.alpha).abs()).max(((k2 + p.alpha * p.tau_in) / (p.alpha * p.tau_in)).abs());
        for (m, k) in [(1, k1), (2, k2)] {
            let q = kernel_moment_quadrature(m, &d).map_err(|e| e.to_string())?;
            quad = quad.max(((q - k) / k).abs());
        }
    }
    outcome(closed <= 1e-10 && quad <= 1e-6, format!("100 baths: closed form {closed:.1e}, quadrature {quad:.1e}"))
}

fn a6() -> Result<Outcome, String> {
    let d = SpectralDensity::reference();
    let p = d.angular();
    let mut worst = 0.0f64;
    for k in 0..=400 {
        let tau = 0.05 * k as f64;
        // Relative to the decay envelope, which the sine's zeros do not vanish.
        let env = p.amp * (-0.5 * p.gamma * tau).exp() / p.omega1;
        let num = kernel_from_density(tau, &d, 1e-8 * env).map_err(|e| e.to_string())?.value;
        let exact = kernel_eval(tau, &d).map_err(|e| e.to_string())?;
        worst = worst.max((num - exact).abs() / env);
    }
    outcome(worst <= 1e-6, format!("τ ∈ [0, 20] ps, 401 points: worst deviation {worst:.1e} of the local envelope"))
}

fn a7() -> Result<Outcome, String> {
    let base = SimulationConfig::reference();
    let d = derive_alpha_tauin(&SpectralDensity::reference());
    let runs = [
        ("llg", integrate_llg(&base.with_kernel(KernelSpec::markovian(d.alpha).map_err(|e| e.to_string())?))),
        ("illg", integrate_illg(&base.with_kernel(KernelSpec::inertial(d.alpha, d.tau_in).map_err(|e| e.to_string())?))),
        ("nmllg", integrate_nmllg(&base, None)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, tr) in runs {
        let tr = tr.map_err(|e| e.to_string())?;
        let stored = tr.m.iter().map(|m| (m.norm() - 1.0).abs()).fold(0.0, f64::max);
        pass &= stored <= 1e-6 && tr.max_step_drift <= 1e-6;
        parts.push(format!("{name} {stored:.1e} (per step before renormalising {:.1e})", tr.max_step_drift));
    }
    outcome(pass, format!("max ||m|-1| over 10 ps: {}", parts.join(", ")))
}

fn a8() -> Result<Outcome, String> {
    let t0 = Instant::now();
    let c = noise_check(&NoiseModel::spectral(SpectralDensity::reference()), 20.0, 1e-3, 1 << 16, 100, 8, (1.0, 10.0))
        .map_err(|e| e.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        c.max_rel_deviation < 0.1 && secs < 120.0,
        format!("100 × 2^16 samples, 2T̃I(ν) target: max deviation {:.3} on [1, 10] THz; {secs:.1} s", c.max_rel_deviation),
    )
}

const TEMPS: [f64; 3] = [20.0, 220.0, 300.0];

struct Equilibria {
    cold: f64,
    hot: Vec<(f64, f64)>,
    secs: f64,
}

fn equilibria() -> &'static Result<Equilibria, String> {
    static E: OnceLock<Result<Equilibria, String>> = OnceLock::new();
    E.get_or_init(|| {
        let t0 = Instant::now();
        let c = cfg("")?;
        let protocol = c.equilibrium;
        let cold = equilibrium_mx(0.0, &c.sim, &c.noise, &EquilibriumProtocol { seeds: 1, ..protocol })
            .map_err(|e| e.to_string())?
            .mx;
        let hot = TEMPS
            .iter()
            .map(|&t| equilibrium_mx(t, &c.sim, &c.noise, &protocol).map(|e| (e.mx, e.stderr)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Equilibria { cold, hot, secs: t0.elapsed().as_secs_f64() })
    })
}

fn a9() -> Result<Outcome, String> {
    let eq = equilibria().as_ref().map_err(|e| e.clone())?;
    let t0 = Instant::now();
    let c = cfg("")?;
    let mut pts = Vec::new();
    for (i, (&t, (mx, _))) in TEMPS.iter().zip(&eq.hot).enumerate() {
        let n_t = c.sim.fields.n_z0 * mx / eq.cold;
        pts.push(temperature_point(&c, t, n_t, 8, runner::sweep_seed(&c, i)).map_err(|e| e.to_string())?);
    }
    let secs = t0.elapsed().as_secs_f64() + eq.secs;
    let same_count = pts.iter().all(|p| !p.peaks.is_empty() && p.peaks.len() == pts[0].peaks.len());
    let drift = if same_count {
        (0..pts[0].peaks.len())
            .map(|i| {
                let f: Vec<f64> = pts.iter().map(|p| p.peaks[i].freq).collect();
                f.iter().cloned().fold(f64::MIN, f64::max) - f.iter().cloned().fold(f64::MAX, f64::min)
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let first: Vec<f64> = pts.iter().map(|p| p.peaks.first().map_or(f64::NAN, |q| q.amp)).collect();
    let decreasing = first.windows(2).all(|w| w[1] < w[0]);
    let desc: Vec<String> = pts.iter().map(|p| format!("T̃={} N={:.3} {}", p.temperature, p.demag_factor, freqs(&p.peaks))).collect();
    outcome(
        drift < 0.1 && decreasing && secs < 900.0,
        format!(
            "8 seeds, coherent mean: {}; drift {drift:.3} THz; first-peak amplitudes [{}]; {secs:.0} s",
            desc.join("; "),
            first.iter().map(|a| format!("{a:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn a10() -> Result<Outcome, String> {
    let eq = equilibria().as_ref().map_err(|e| e.clone())?;
    let want = [0.98, 0.80, 0.73];
    let ratios: Vec<f64> = eq.hot.iter().map(|(mx, _)| mx / eq.cold).collect();
    let pass = ratios.iter().zip(want).all(|(r, w)| (r - w).abs() <= 0.05);
    let se: Vec<f64> = eq.hot.iter().map(|(_, s)| s / eq.cold).collect();
    outcome(pass, format!("ratios {ratios:.3?} ± {se:.3?}, want [0.98, 0.80, 0.73] ± 0.05; {:.0} s", eq.secs))
}

fn a11() -> Result<Outcome, String> {
    let c = cfg("")?;
    let v = tau_sweep(&c, &[-0.05, 0.0, 0.05]).map_err(|e| e.to_string())?;
    let base = &v[1];
    let (Some(b_nu0), Some(b_low)) = (runner::tracked_peak(&c, &base.spectrum, 4.2), base.peaks.first()) else {
        return outcome(false, format!("baseline peaks {}", freqs(&base.peaks)));
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [&v[0], &v[2]] {
        let n = runner::tracked_peak(&c, &x.spectrum, b_nu0.freq);
        let l = runner::tracked_peak(&c, &x.spectrum, b_low.freq);
        let (Some(n), Some(l)) = (n, l) else {
            return outcome(false, format!("variant {:+}: baseline peaks not found", x.fraction));
        };
        let (dn, dl) = ((n.freq - b_nu0.freq).abs(), (l.freq - b_low.freq).abs());
        pass &= dn < 0.05 && dl > dn;
        parts.push(format!("{:+.2}: ν₀ peak {:.4} (shift {dn:.4}), lowest {:.4} (shift {dl:.4})", x.fraction, n.freq, l.freq));
    }
    outcome(pass, format!("baseline {}; {}", freqs(&base.peaks), parts.join("; ")))
}

fn a12() -> Result<Outcome, String> {
    let base = SimulationConfig { t_end: 5.0, ..SimulationConfig::reference() };
    let zero = SpectralDensity::new(0.0, 0.2, 4.2).map_err(|e| e.to_string())?;
    let nm = integrate_nmllg(&base.with_kernel(KernelSpec::Lorentzian(zero)), None).map_err(|e| e.to_string())?;
    let llg0 = integrate_llg(&base.with_kernel(KernelSpec::markovian(0.0).map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
    let d1 = nm.m.iter().zip(&llg0.m).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    let alpha = derive_alpha_tauin(&SpectralDensity::reference()).alpha;
    let fine = SimulationConfig { dt: 1e-5, ..base };
    let llg = integrate_llg(&fine.with_kernel(KernelSpec::markovian(alpha).map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
    let illg = integrate_illg(&fine.with_kernel(KernelSpec::inertial(alpha, 1e-4).map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
    let d2 = llg.m.iter().zip(&illg.m).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    outcome(d1 <= 1e-6 && d2 <= 1e-3, format!("A=0 vs α=0 LLG {d1:.1e} (≤ 1e-6); τ_in=1e-4 vs LLG {d2:.1e} (≤ 1e-3)"))
}

type Criterion = fn() -> Result<Outcome, String>;

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
        ("A11", a11),
        ("A12", a12),
    ];
    let mut passed = 0;
    for (id, f) in criteria {
        let o = f().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        passed += usize::from(o.pass);
        println!("{id:<4} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if passed < criteria.len() && std::env::var_os("MEMSPIN_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
