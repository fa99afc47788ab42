//! Conformable clock, conformable differentiation and conformable integration.
//!
//! Everything here rests on the clock `ψ(t) = t^α/α`: a function of native
//! time `t` is the composition `g ∘ ψ` for a unique `g`, the conformable
//! derivative of `f` is `g'` evaluated at `ψ(t)`, and the conformable
//! integral `∫ f(τ) τ^{α-1} dτ` is the plain integral of `g` in `s = ψ(τ)`.

mod derivative;
mod function;
mod integral;

pub use derivative::{
    conformable_derivative, conformable_derivative_with, convergence_against, default_epsilons,
    derivative_equivalence_check, ConvergenceReport, DifferenceScheme,
};
pub use function::{factor_through_clock, library, ScalarFunction};
pub use integral::{conformable_integral, direct_weighted_integral};

use crate::error::{domain, Result};
use crate::real::Real;

/// The order `α ∈ (0, 1]` of every conformable transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order<T> {
    alpha: T,
}

impl<T: Real> Order<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(domain(format!("order must lie in (0, 1], got {alpha}")));
        }
        Ok(Order { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    #[inline]
    pub fn is_classical(&self) -> bool {
        self.alpha == T::one()
    }
}

/// A matched pair of native time `t` and reparametrized time `s = ψ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockPoint<T> {
    pub t: T,
    pub s: T,
}

impl<T: Real> ClockPoint<T> {
    pub fn from_native(order: Order<T>, t: T) -> Result<Self> {
        Ok(ClockPoint {
            t,
            s: clock(order, t)?,
        })
    }

    pub fn from_reparametrized(order: Order<T>, s: T) -> Result<Self> {
        Ok(ClockPoint {
            t: clock_inverse(order, s)?,
            s,
        })
    }
}

/// `ψ(t) = t^α/α`.
pub fn clock<T: Real>(order: Order<T>, t: T) -> Result<T> {
    if t.is_nan() || t < T::zero() {
        return Err(domain(format!("clock needs t >= 0, got {t}")));
    }
    if t == T::zero() || order.is_classical() || t.is_infinite() {
        return Ok(t);
    }
    Ok(T::clock_power(t, order.alpha))
}

/// `ψ^{-1}(s) = (α s)^{1/α}`.
pub fn clock_inverse<T: Real>(order: Order<T>, s: T) -> Result<T> {
    if s.is_nan() || s < T::zero() {
        return Err(domain(format!("clock inverse needs s >= 0, got {s}")));
    }
    if s == T::zero() || order.is_classical() || s.is_infinite() {
        return Ok(s);
    }
    Ok(T::clock_power_inverse(s, order.alpha))
}
