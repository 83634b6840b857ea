//! Adaptive Gauss–Kronrod quadrature and Wynn's epsilon acceleration.

// The node tables are quoted from QUADPACK verbatim.
#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980806905,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One application of the 21-point rule: `(kronrod, |kronrod - gauss|, ∫|f|)`.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = 0.0;
    let mut abs = fc.abs() * WGK[10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive bisection until the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)`.
///
/// Convergence is also accepted once the error estimate reaches the round-off
/// floor `64·ε·∫|f|`, since further bisection cannot improve it.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let (v, e, abs) = gk21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut abs_total = abs;
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        let floor = 64.0 * f64::EPSILON * abs_total;
        if err <= tol || err <= floor {
            return Ok(Estimate { value: total, error: err });
        }
        if heap.len() >= max_segments {
            return Err(Error::Quadrature { estimate: err, tolerance: tol });
        }
        let s = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (s.a + s.b);
        let (v1, e1, a1) = gk21(&mut f, s.a, mid);
        let (v2, e2, a2) = gk21(&mut f, mid, s.b);
        total += v1 + v2 - s.value;
        err += e1 + e2 - s.error;
        abs_total += a1 + a2;
        heap.push(Segment { a: s.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: s.b, value: v2, error: e2 });
        // Recompute the running sums occasionally to stop drift from the updates.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrate over consecutive breakpoints, each piece adaptively.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    let n = breaks.len().saturating_sub(1).max(1) as f64;
    let mut sum = Neumaier::default();
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let e = integrate(&mut f, w[0], w[1], abs_tol / n, rel_tol, 512)?;
        sum.add(e.value);
        err += e.error;
    }
    Ok(Estimate { value: sum.value(), error: err })
}

/// Compensated summation for long alternating sums.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the last even-column estimate and the difference to the previous one.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    if n < 3 {
        let last = partial.last().copied().unwrap_or(0.0);
        return (last, f64::INFINITY);
    }
    let mut prev = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = partial[n - 1];
    let mut best_diff = (partial[n - 1] - partial[n - 2]).abs();
    let mut k = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let base = if k == 0 { 0.0 } else { prev[i + 1] };
            if d == 0.0 {
                next.push(f64::INFINITY);
            } else {
                next.push(base + 1.0 / d);
            }
        }
        k += 1;
        if k.is_multiple_of(2) && next.len() >= 2 {
            let l = next.len();
            let (a, b) = (next[l - 1], next[l - 2]);
            if a.is_finite() && b.is_finite() {
                let diff = (a - b).abs();
                if diff < best_diff {
                    best = a;
                    best_diff = diff;
                }
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let e = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14, 0.0, 8).unwrap();
        assert!((e.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn adapts_to_a_narrow_peak() {
        let e = integrate(|x| 1e-3 / (x * x + 1e-6), -1.0, 1.0, 1e-12, 0.0, 512).unwrap();
        let exact = 2.0 * libm::atan(1e3);
        assert!((e.value - exact).abs() < 1e-10, "{} vs {exact}", e.value);
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x| libm::sin(1.0 / x), 1e-9, 1.0, 1e-15, 0.0, 4);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn epsilon_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let partial: Vec<f64> = (1..=15)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (v, _) = wynn_epsilon(&partial);
        assert!((v - core::f64::consts::LN_2).abs() < 1e-9, "{v}");
    }
}
