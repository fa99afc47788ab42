use num_complex::Complex;

use super::{clock, factor_through_clock, Order, ScalarFunction};
use crate::error::{contract, domain, Result};
use crate::fit::{loglog_slope, ridders_derivative};
use crate::real::Real;

/// Difference quotient used for the conformable derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferenceScheme {
    /// `[f(t + ε w) − f(t − ε w)] / 2ε`, falling back to `Forward` when `t − ε w ≤ 0`.
    #[default]
    Central,
    /// `[f(t + ε w) − f(t)] / ε`.
    Forward,
}

fn weight<T: Real>(order: Order<T>, t: T) -> T {
    if order.is_classical() {
        T::one()
    } else {
        t.powf(T::one() - order.alpha())
    }
}

/// Conformable difference quotient with the default (central) scheme.
pub fn conformable_derivative<T: Real>(order: Order<T>, f: &ScalarFunction<T>, t: T, epsilon: T) -> Result<Complex<T>> {
    conformable_derivative_with(order, f, t, epsilon, DifferenceScheme::Central)
}

/// Conformable difference quotient at `t` with step `ε`, where the native
/// step is `ε t^{1−α}`.
pub fn conformable_derivative_with<T: Real>(
    order: Order<T>,
    f: &ScalarFunction<T>,
    t: T,
    epsilon: T,
    scheme: DifferenceScheme,
) -> Result<Complex<T>> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(domain(format!("conformable derivative needs t > 0, got {t}")));
    }
    if epsilon == T::zero() || !epsilon.is_finite() {
        return Err(domain(format!("difference step must be finite and nonzero, got {epsilon}")));
    }
    let step = epsilon * weight(order, t);
    let central_ok = t - step.abs() > T::zero();
    match scheme {
        DifferenceScheme::Central if central_ok => {
            Ok((f.eval(t + step) - f.eval(t - step)) / (T::lit(2.0) * epsilon))
        }
        _ => {
            if !(t + step > T::zero()) {
                return Err(domain(format!("step {epsilon} leaves the half-line at t = {t}")));
            }
            Ok((f.eval(t + step) - f.eval(t)) / epsilon)
        }
    }
}

/// `ε_k = 10^{-2} t^α 2^{-k}`, `k = 0..8`.
pub fn default_epsilons<T: Real>(order: Order<T>, t: T) -> Vec<T> {
    let e0 = T::lit(1e-2) * t.powf(order.alpha());
    (0..8).map(|k| e0 * T::lit(0.5f64.powi(k))).collect()
}

/// Deviation of the conformable quotient from a reference value over an ε
/// schedule, with the fitted log-log order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub reference: Complex<T>,
    pub epsilons: Vec<T>,
    pub estimates: Vec<Complex<T>>,
    pub deviations: Vec<T>,
    /// Slope of `ln deviation` against `ln ε` over levels above the round-off
    /// floor; `+∞` when fewer than two such levels exist (the quotient is exact).
    pub fitted_order: T,
}

fn check_schedule<T: Real>(epsilons: &[T]) -> Result<()> {
    if epsilons.is_empty() {
        return Err(contract("empty ε schedule"));
    }
    if epsilons.iter().any(|e| !(*e > T::zero())) {
        return Err(domain("ε schedule must be positive"));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(contract("ε schedule must be strictly decreasing"));
    }
    Ok(())
}

/// Convergence of the quotient toward a known `reference`.
pub fn convergence_against<T: Real>(
    order: Order<T>,
    f: &ScalarFunction<T>,
    t: T,
    epsilons: &[T],
    scheme: DifferenceScheme,
    reference: Complex<T>,
) -> Result<ConvergenceReport<T>> {
    check_schedule(epsilons)?;
    let w = weight(order, t);
    let mut estimates = Vec::with_capacity(epsilons.len());
    let mut deviations = Vec::with_capacity(epsilons.len());
    let mut fit_points = Vec::new();
    for &eps in epsilons {
        let q = conformable_derivative_with(order, f, t, eps, scheme)?;
        let dev = (q - reference).norm();
        let step = eps * w;
        let scale = f.eval(t).norm().max(f.eval(t + step).norm()).max(f.eval((t - step).max(t * T::lit(0.5))).norm());
        let floor = T::lit(8.0) * T::epsilon() * scale / eps;
        if dev > floor {
            fit_points.push((eps, dev));
        }
        estimates.push(q);
        deviations.push(dev);
    }
    let fitted_order = loglog_slope(&fit_points).unwrap_or(T::infinity());
    Ok(ConvergenceReport {
        reference,
        epsilons: epsilons.to_vec(),
        estimates,
        deviations,
        fitted_order,
    })
}

/// Compares the conformable quotient of `f` at `t` with an extrapolated
/// classical derivative of `g = f ∘ ψ^{-1}` at `s = ψ(t)`.
pub fn derivative_equivalence_check<T: Real>(
    order: Order<T>,
    f: &ScalarFunction<T>,
    t: T,
    epsilons: &[T],
) -> Result<ConvergenceReport<T>> {
    if !(t > T::zero()) {
        return Err(domain(format!("derivative check needs t > 0, got {t}")));
    }
    let g = factor_through_clock(order, f);
    let s = clock(order, t)?;
    let (reference, _) = ridders_derivative(|u| g.eval(u), s, T::lit(0.25) * s);
    convergence_against(order, f, t, epsilons, DifferenceScheme::Central, reference)
}
