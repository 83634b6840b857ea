//! Poles of the transverse susceptibility with the kernel expanded to order `m_max`.
//!
//! In angular frequency (rad/ps) the characteristic polynomial is
//! `P±(ω) = ω_L ± ω − Σ_{m=1}^{m_max} κ_m (iω)^m`.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::TAU;

/// Roots closer than this (THz) are merged and counted as one with multiplicity.
pub const MERGE_TOL_THZ: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityPolynomial {
    /// Ascending powers of ω.
    pub coeffs: Vec<Complex64>,
    pub branch: Branch,
    pub m_max: usize,
}

impl SusceptibilityPolynomial {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// All complex roots in rad/ps, from the eigenvalues of the companion matrix.
    pub fn complex_roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        let lead = self.coeffs[n];
        if n == 0 || lead == Complex64::new(0.0, 0.0) {
            return Err(Error::DegeneratePolynomial);
        }
        let mut c = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            c[(0, j)] = -self.coeffs[n - 1 - j] / lead;
        }
        for i in 1..n {
            c[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        let schur = nalgebra::linalg::Schur::try_new(c, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
        let ev = schur.eigenvalues().ok_or(Error::NoConvergence)?;
        Ok(ev.iter().copied().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// `|Re ω|/2π` in THz.
    pub freq_thz: f64,
    pub branch: Branch,
    pub multiplicity: usize,
}

/// Build `P±` for the given kernel, Larmor frequency `nu_l_ghz` and order.
pub fn susceptibility_polynomial(
    kernel: &KernelSpec,
    nu_l_ghz: f64,
    m_max: usize,
    branch: Branch,
) -> Result<SusceptibilityPolynomial> {
    let max = match kernel {
        KernelSpec::Markovian { .. } => 1,
        KernelSpec::Inertial { .. } => 2,
        KernelSpec::Lorentzian(_) => 8,
    };
    if m_max == 0 || m_max > max {
        return Err(Error::UnsupportedOrder { kernel: kernel.name(), m_max, max });
    }
    if !(nu_l_ghz.is_finite() && nu_l_ghz >= 0.0) {
        return Err(Error::param("nu_l_ghz", "must be finite and non-negative"));
    }
    let kappa = kernel.moments(m_max)?;
    let i = Complex64::new(0.0, 1.0);
    let mut coeffs = Vec::with_capacity(m_max + 1);
    coeffs.push(Complex64::new(TAU * nu_l_ghz * 1e-3, 0.0));
    for (k, &km) in kappa.as_slice().iter().enumerate() {
        let m = k + 1;
        let mut c = -km * i.powu(m as u32);
        if m == 1 {
            c += branch.sign();
        }
        coeffs.push(c);
    }
    while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == Complex64::new(0.0, 0.0) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::DegeneratePolynomial);
    }
    Ok(SusceptibilityPolynomial { coeffs, branch, m_max })
}

/// Resonance frequencies `|Re ω|/2π` of one branch, merged within [`MERGE_TOL_THZ`].
pub fn susceptibility_roots(p: &SusceptibilityPolynomial) -> Result<Vec<Root>> {
    let mut f: Vec<f64> = p.complex_roots()?.iter().map(|z| z.re.abs() / TAU).collect();
    f.sort_by(f64::total_cmp);
    let mut out: Vec<Root> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for x in f {
        if let Some(last) = group.last() {
            if x - last > MERGE_TOL_THZ {
                out.push(merged(&group, p.branch));
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push(merged(&group, p.branch));
    }
    Ok(out)
}

fn merged(g: &[f64], branch: Branch) -> Root {
    Root { freq_thz: g.iter().sum::<f64>() / g.len() as f64, branch, multiplicity: g.len() }
}
