//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and fixed
//! Gauss–Legendre panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

// Kronrod nodes/weights on [-1, 1] (QUADPACK qk15), positive half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub error: T,
    pub intervals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> (Complex<T>, T) {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).norm();
    (value, err)
}

/// Adaptive bisection with the 15-point Kronrod rule.
///
/// Stops when the summed error estimate is at most `abs_tol + rel_tol·|I|`;
/// fails with [`Error::Numerical`] after `max_intervals` panels.
pub fn adaptive_gk15<T, F>(f: F, a: T, b: T, abs_tol: T, rel_tol: T, max_intervals: usize) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    loop {
        let target = abs_tol + rel_tol * total.norm();
        if err <= target {
            break;
        }
        if heap.len() >= max_intervals {
            return Err(Error::Numerical {
                message: format!("adaptive quadrature exhausted {max_intervals} panels"),
                estimate: err.to_f64_lossy(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Numerical {
                message: "adaptive quadrature reached floating-point resolution".into(),
                estimate: err.to_f64_lossy(),
            });
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total = total - worst.value + lv + rv;
        err = err - worst.error + le + re;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
    }
    // re-sum to shed the drift of the running updates
    let mut value = Complex::new(T::zero(), T::zero());
    let mut error = T::zero();
    let intervals = heap.len();
    for p in heap {
        value = value + p.value;
        error = error + p.error;
    }
    Ok(Quadrature { value, error, intervals })
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn gl20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

/// Fixed 20-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_panel<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> Complex<T> {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let mut acc = Complex::new(T::zero(), T::zero());
    for &(x, w) in gl20() {
        acc = acc + f(c + h * T::lit(x)) * T::lit(w);
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(10);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m18: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_rule_is_exact_on_low_degree() {
        let (v, _) = gk15(&|x: f64| Complex::new(x.powi(6), 0.0), 0.0, 1.0);
        assert!((v.re - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_integrable_singularity() {
        let q = adaptive_gk15(|x: f64| Complex::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-12, 1e-12, 2000).unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_reports_budget_exhaustion() {
        let r = adaptive_gk15(|x: f64| Complex::new((1.0 / x).sin() / x, 0.0), 1e-6, 1.0, 1e-14, 1e-14, 5);
        match r {
            Err(Error::Numerical { estimate, .. }) => assert!(estimate > 0.0),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }
}
