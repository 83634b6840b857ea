use memspin_core::*;
use num_complex::Complex64;

/// Aberth–Ehrlich simultaneous iteration, independent of the companion route.
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let c: Vec<Complex64> = coeffs.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        (p, dp)
    };
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn freqs(z: &[Complex64]) -> Vec<f64> {
    let mut f: Vec<f64> = z.iter().map(|w| w.re.abs() / std::f64::consts::TAU).collect();
    f.sort_by(f64::total_cmp);
    f
}

#[test]
fn companion_roots_agree_with_aberth() {
    let kernels = [
        KernelSpec::Lorentzian(SpectralDensity::reference()),
        KernelSpec::inertial(0.15, 0.8).unwrap(),
    ];
    for k in kernels {
        let top = if matches!(k, KernelSpec::Lorentzian(_)) { 8 } else { 2 };
        for m_max in 1..=top {
            for b in [Branch::Plus, Branch::Minus] {
                let p = susceptibility_polynomial(&k, 2.8, m_max, b).unwrap();
                let a = freqs(&aberth(&p.coeffs));
                let c = freqs(&p.complex_roots().unwrap());
                assert_eq!(a.len(), c.len());
                for (x, y) in a.iter().zip(&c) {
                    assert!((x - y).abs() < 1e-6, "m_max={m_max}: {a:?} vs {c:?}");
                }
            }
        }
    }
}

#[test]
fn precession_root_is_stable_across_truncation() {
    // Odd orders add a spurious near-zero root, so look at raw roots, not merged ones.
    let k = KernelSpec::Lorentzian(SpectralDensity::reference());
    for m_max in 1..=8 {
        let p = susceptibility_polynomial(&k, 2.8, m_max, Branch::Plus).unwrap();
        let f = freqs(&p.complex_roots().unwrap());
        let near = f.iter().copied().min_by(|a, b| (a - 2.74e-3).abs().total_cmp(&(b - 2.74e-3).abs())).unwrap();
        assert!((near - 2.74e-3).abs() < 0.02e-3, "m_max={m_max}: {f:?}");
    }
}

#[test]
fn first_thz_root_is_stable_between_orders_six_and_seven() {
    let k = KernelSpec::Lorentzian(SpectralDensity::reference());
    let first = |m| {
        let p = susceptibility_polynomial(&k, 2.8, m, Branch::Plus).unwrap();
        susceptibility_roots(&p).unwrap().into_iter().map(|r| r.freq_thz).find(|f| *f > 0.5).unwrap()
    };
    assert!((first(6) - first(7)).abs() < 0.1);
}

#[test]
fn branches_give_the_same_frequencies() {
    let k = KernelSpec::Lorentzian(SpectralDensity::reference());
    for m_max in 1..=8 {
        let f = |b| {
            let p = susceptibility_polynomial(&k, 2.8, m_max, b).unwrap();
            susceptibility_roots(&p).unwrap().iter().map(|r| r.freq_thz).collect::<Vec<_>>()
        };
        let (p, m) = (f(Branch::Plus), f(Branch::Minus));
        assert_eq!(p.len(), m.len());
        for (a, b) in p.iter().zip(&m) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
