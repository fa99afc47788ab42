use num_complex::Complex;

use super::{clock, factor_through_clock, Order, ScalarFunction};
use crate::error::{domain, Result};
use crate::quadrature::{adaptive_gk15, gauss_legendre_panel};
use crate::real::Real;

const MAX_PANELS: usize = 4000;

/// `∫_a^x f(τ) τ^{α−1} dτ`, evaluated as `∫_{ψ(a)}^{ψ(x)} g(s) ds` with
/// `g = f ∘ ψ^{-1}`.
///
/// `tol` is split evenly between absolute and relative accuracy.
pub fn conformable_integral<T: Real>(order: Order<T>, f: &ScalarFunction<T>, a: T, x: T, tol: T) -> Result<Complex<T>> {
    if !(a >= T::zero()) {
        return Err(domain(format!("lower limit must be >= 0, got {a}")));
    }
    if !(x > a) || !x.is_finite() {
        return Err(domain(format!("integration needs a < x < ∞, got a = {a}, x = {x}")));
    }
    if !(tol > T::zero()) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let g = factor_through_clock(order, f);
    let half = T::lit(0.5) * tol;
    let q = adaptive_gk15(|s| g.eval(s), clock(order, a)?, clock(order, x)?, half, half, MAX_PANELS)?;
    Ok(q.value)
}

/// Weighted Gauss–Legendre quadrature of `f(τ) τ^{α−1}` directly in `τ`.
///
/// With `a = 0` the cells `[x 2^{-(k+1)}, x 2^{-k}]` grade geometrically toward
/// the singular endpoint until the remaining mass `|f(δ)| δ^α/α` is negligible.
/// This is the slow reference the transformed quadrature is checked against.
pub fn direct_weighted_integral<T: Real>(order: Order<T>, f: &ScalarFunction<T>, a: T, x: T) -> Result<Complex<T>> {
    if !(a >= T::zero()) || !(x > a) || !x.is_finite() {
        return Err(domain(format!("integration needs 0 <= a < x < ∞, got a = {a}, x = {x}")));
    }
    let alpha = order.alpha();
    let am1 = alpha - T::one();
    let integrand = |tau: T| {
        let w = if order.is_classical() { T::one() } else { tau.powf(am1) };
        f.eval(tau) * w
    };
    let magnitude = |tau: T| Complex::new(integrand(tau).norm(), T::zero());
    let quarters = |g: &dyn Fn(T) -> Complex<T>, lo: T, hi: T| {
        let quarter = (hi - lo) * T::lit(0.25);
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..4 {
            let p0 = lo + quarter * T::from_usize_lossy(k);
            let p1 = if k == 3 { hi } else { p0 + quarter };
            acc = acc + gauss_legendre_panel(&g, p0, p1);
        }
        acc
    };
    let cell = |lo: T, hi: T| quarters(&integrand, lo, hi);
    if a > T::zero() {
        let mut acc = Complex::new(T::zero(), T::zero());
        // grade toward `a` as well so small `a` does not starve the first panel
        let mut hi = x;
        let mut lo = a + (hi - a) * T::lit(0.5);
        for _ in 0..60 {
            acc = acc + cell(lo, hi);
            hi = lo;
            if hi - a <= (x - a) * T::lit(1e-3) {
                break;
            }
            lo = a + (hi - a) * T::lit(0.5);
        }
        let rest = T::lit(1.0 / 64.0);
        let width = hi - a;
        for k in 0..64 {
            let p0 = a + width * rest * T::from_usize_lossy(k);
            let p1 = if k == 63 { hi } else { a + width * rest * T::from_usize_lossy(k + 1) };
            acc = acc + gauss_legendre_panel(&integrand, p0, p1);
        }
        return Ok(acc);
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut mass = T::zero();
    let mut hi = x;
    // bounded |f| near 0 makes the masses of successive cells decay like 2^{-α}
    let ratio = T::one() / (T::lit(2.0).powf(alpha) - T::one());
    for _ in 0..1060 {
        let lo = hi * T::lit(0.5);
        acc = acc + cell(lo, hi);
        let last = quarters(&magnitude, lo, hi).re;
        mass = mass + last;
        let tail = (f.eval(lo).norm() * lo.powf(alpha) / alpha).max(last * ratio);
        if tail <= T::lit(1e-17) * mass || lo == T::zero() {
            break;
        }
        hi = lo;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64) -> Order<f64> {
        Order::new(a).unwrap()
    }

    #[test]
    fn unit_weight_integrates_to_clock() {
        let one = ScalarFunction::constant(Complex::new(1.0, 0.0));
        let v = conformable_integral(ord(0.5), &one, 0.0, 2.0, 1e-12).unwrap();
        assert!((v.re - 2f64.sqrt() / 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_integrand_gives_zero() {
        let zero = ScalarFunction::constant(Complex::new(0.0, 0.0));
        assert_eq!(conformable_integral(ord(0.3), &zero, 0.5, 4.0, 1e-10).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn cancelling_weight_gives_length() {
        for &a in &[0.1, 0.25, 0.5, 0.75, 1.0] {
            let f = ScalarFunction::real("cancel", move |t: f64| t.powf(1.0 - a));
            let v = conformable_integral(ord(a), &f, 0.0, 3.0, 1e-12).unwrap();
            assert!((v.re - 3.0).abs() < 1e-10, "a={a}: {}", v.re);
        }
    }

    #[test]
    fn rejects_empty_interval() {
        let one = ScalarFunction::constant(Complex::new(1.0, 0.0));
        assert!(conformable_integral(ord(0.5), &one, 2.0, 2.0, 1e-10).is_err());
        assert!(conformable_integral(ord(0.5), &one, 3.0, 2.0, 1e-10).is_err());
    }

    #[test]
    fn direct_quadrature_matches_closed_form() {
        let one = ScalarFunction::constant(Complex::new(1.0, 0.0));
        for &a in &[0.1, 0.5, 1.0] {
            let v = direct_weighted_integral(ord(a), &one, 0.0, 2.0).unwrap();
            let exact = 2f64.powf(a) / a;
            assert!(((v.re - exact) / exact).abs() < 1e-12, "a={a}");
        }
        let v = direct_weighted_integral(ord(0.5), &one, 0.5, 10.0).unwrap();
        let exact = (10f64.sqrt() - 0.5f64.sqrt()) / 0.5;
        assert!((v.re - exact).abs() < 1e-12);
    }

    #[test]
    fn direct_quadrature_survives_a_zero_at_a_cell_edge() {
        // t³ − 2t + 1 vanishes at t = 1, the first graded cell boundary
        let cubic = ScalarFunction::real("cubic", |t: f64| t * t * t - 2.0 * t + 1.0);
        let a = 0.75;
        let v = direct_weighted_integral(ord(a), &cubic, 0.0, 2.0).unwrap();
        let mono = |k: f64| 2f64.powf(k + a) / (k + a);
        let exact = mono(3.0) - 2.0 * mono(1.0) + mono(0.0);
        assert!(((v.re - exact) / exact).abs() < 1e-12, "{} vs {exact}", v.re);
    }
}
