//! Conformable translations `f ↦ f((x^α + t)^{1/α})`, their exponentially
//! weighted variants, conjugacy to classical translation, and the
//! hypercyclic-orbit harness.
//!
//! In `ξ = x^α` a conformable translation by `t` is the plain shift
//! `ξ ↦ ξ + t`; values pulled from beyond the window are zero.

mod hypercyclic;

use std::sync::OnceLock;

use num_complex::Complex;

pub use hypercyclic::{
    build_hypercyclic_candidate, default_time_grid, orbit_trace, step_targets, HypercyclicCandidate, OrbitEntry,
    OrbitTrace, TargetList,
};

use crate::error::{contract, domain, Result};
use crate::fit::loglog_slope;
use crate::kernel::{Order, ScalarFunction};
use crate::real::Real;
use crate::semigroup::{ClockKind, OperatorFamily};
use crate::spaces::{distance, norm, norm_p_alpha, u_p, Coordinates, GridFunction, SpaceDescriptor};
use crate::stencil::first_derivative_on_offsets;

/// `γ(t) = e^{κ t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCocycle<T> {
    kappa: T,
}

impl<T: Real> WeightCocycle<T> {
    pub fn new(kappa: T) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(domain(format!("growth rate must be finite, got {kappa}")));
        }
        Ok(WeightCocycle { kappa })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn factor(&self, t: T) -> T {
        (self.kappa * t).exp()
    }
}

// `t = k h` exactly when the shift is grid aligned.
fn aligned_steps<T: Real>(t: T, h: T) -> Option<usize> {
    let k = (t / h).round();
    (k * h == t).then(|| k.to_usize()).flatten()
}

/// Shift by `t` in `ξ` of the linear interpolant, zero beyond the window.
pub(crate) fn shift_xi<T: Real>(f: &GridFunction<T>, t: T) -> Result<GridFunction<T>> {
    if t.is_nan() || t < T::zero() {
        return Err(domain(format!("translation needs t >= 0, got {t}")));
    }
    if t == T::zero() {
        return Ok(f.clone());
    }
    let grid = f.grid();
    let n = grid.len();
    let h = grid.spacing();
    let values = f.values();
    let zero = Complex::new(T::zero(), T::zero());
    let out: Vec<Complex<T>> = if let Some(k) = aligned_steps(t, h) {
        (0..n).map(|i| if i + k < n { values[i + k] } else { zero }).collect()
    } else {
        let q = t / h;
        let k = q.floor().to_usize().unwrap_or(usize::MAX);
        let w = q - q.floor();
        (0..n)
            .map(|i| match i.checked_add(k) {
                Some(j) if j + 1 < n => values[j] * (T::one() - w) + values[j + 1] * w,
                _ => zero,
            })
            .collect()
    };
    f.with_values(out)
}

fn check_order<T: Real>(order: Order<T>, f: &GridFunction<T>) -> Result<()> {
    if f.grid().alpha() != order.alpha() {
        return Err(contract("function grid was built for a different order"));
    }
    Ok(())
}

/// `(T_α(t) f)(x) = f((x^α + t)^{1/α})` on a conformable-coordinate function.
pub fn conformable_translation<T: Real>(order: Order<T>, t: T, f: &GridFunction<T>) -> Result<GridFunction<T>> {
    check_order(order, f)?;
    if f.coords() != Coordinates::Conformable {
        return Err(contract("conformable translation acts on conformable coordinates"));
    }
    shift_xi(f, t)
}

/// `(τ(t) g)(ξ) = g(ξ + t)` on a transformed-coordinate function.
pub fn classical_translation<T: Real>(t: T, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    if g.coords() != Coordinates::Transformed {
        return Err(contract("classical translation acts on transformed coordinates"));
    }
    shift_xi(g, t)
}

/// `t ↦ e^{κ t} T_α(t)` as an operator family (classical semigroup law in `t`).
pub fn weighted_translation_family<T: Real>(order: Order<T>, cocycle: WeightCocycle<T>) -> OperatorFamily<T> {
    OperatorFamily::new(format!("weighted translation κ={}", cocycle.kappa), ClockKind::Classical, true, move |t, f| {
        let shifted = conformable_translation(order, t, f)?;
        Ok(shifted.scale(Complex::new(cocycle.factor(t), T::zero())))
    })
}

/// `[e^{κ t} T_α(t) f for t in times]`.
pub fn weighted_orbit<T: Real>(
    desc: &SpaceDescriptor<T>,
    cocycle: WeightCocycle<T>,
    f: &GridFunction<T>,
    times: &[T],
) -> Result<Vec<GridFunction<T>>> {
    let fam = weighted_translation_family(desc.order(), cocycle);
    times.iter().map(|&t| fam.apply(t, f)).collect()
}

/// Largest `|‖T_α(t) f‖ − ‖f · 1_{ξ > t}‖| / ‖f‖` over `times`.
///
/// On the truncated window the translation discards exactly the part of `f`
/// with `ξ ≤ t`; the comparison accounts for that lost mass.
pub fn translation_isometry_check<T: Real>(desc: &SpaceDescriptor<T>, f: &GridFunction<T>, times: &[T]) -> Result<T> {
    let whole = norm_p_alpha(desc, f)?;
    if whole == T::zero() {
        return Ok(T::zero());
    }
    let xi = f.grid().xi().to_vec();
    let mut worst = T::zero();
    for &t in times {
        let moved = norm_p_alpha(desc, &conformable_translation(desc.order(), t, f)?)?;
        let values = f.values();
        let zero = Complex::new(T::zero(), T::zero());
        let kept: Vec<_> = values.iter().zip(&xi).map(|(v, &u)| if u > t { *v } else { zero }).collect();
        let retained = norm_p_alpha(desc, &f.with_values(kept)?)?;
        worst = worst.max((moved - retained).abs() / whole);
    }
    Ok(worst)
}

/// `‖U_p T_α(t) f − τ(t) U_p f‖_{L^p} / (1 + ‖f‖_{p,α})`.
///
/// The left side runs through the grid; the right side samples the exact
/// classical translate `ξ ↦ α^{-1/p} f((ξ + t)^{1/α})`.
pub fn conjugacy_check<T: Real>(desc: &SpaceDescriptor<T>, f: &ScalarFunction<T>, t: T) -> Result<T> {
    let order = desc.order();
    let sampled = GridFunction::sample(desc, Coordinates::Conformable, |x| f.eval(x))?;
    let lhs = u_p(desc, &conformable_translation(order, t, &sampled)?)?;
    let alpha = order.alpha();
    let xi_max = desc.grid().xi_max();
    // ξ_i + t may round past the last node when t is aligned
    let edge = xi_max * (T::one() + T::lit(4.0) * T::epsilon());
    let inv = T::one() / alpha;
    let scale = if order.is_classical() { T::one() } else { alpha.powf(-T::one() / desc.p()) };
    let rhs = GridFunction::sample(desc, Coordinates::Transformed, |xi| {
        let u = xi + t;
        if u > edge {
            Complex::new(T::zero(), T::zero())
        } else {
            let x = if u >= xi_max {
                desc.x_max()
            } else if order.is_classical() {
                u
            } else {
                u.powf(inv)
            };
            f.eval(x) * scale
        }
    })?;
    Ok(distance(desc, &lhs, &rhs)? / (T::one() + norm_p_alpha(desc, &sampled)?))
}

/// Largest gap between the conformable orbit distance
/// `‖e^{κt} T_α(t) f − target‖_{p,α}` and its transported classical
/// counterpart `‖e^{κt} τ(t) U_p f − U_p target‖_{L^p}`, over `(1 + ‖f‖)`.
pub fn orbit_invariance_check<T: Real>(
    desc: &SpaceDescriptor<T>,
    cocycle: WeightCocycle<T>,
    f: &GridFunction<T>,
    target: &GridFunction<T>,
    times: &[T],
) -> Result<T> {
    let order = desc.order();
    let g = u_p(desc, f)?;
    let g_target = u_p(desc, target)?;
    let scale = T::one() + norm_p_alpha(desc, f)?;
    let mut worst = T::zero();
    for &t in times {
        let w = Complex::new(cocycle.factor(t), T::zero());
        let conformable = conformable_translation(order, t, f)?.scale(w);
        let classical = classical_translation(t, &g)?.scale(w);
        let d1 = distance(desc, &conformable, target)?;
        let d2 = distance(desc, &classical, &g_target)?;
        worst = worst.max((d1 - d2).abs() / scale);
    }
    Ok(worst)
}

fn stencils() -> &'static [Vec<f64>; 7] {
    static W: OnceLock<[Vec<f64>; 7]> = OnceLock::new();
    W.get_or_init(|| std::array::from_fn(|shift| first_derivative_on_offsets(&(0..7).map(|j| j - shift as i64).collect::<Vec<_>>())))
}

/// Sixth-order finite-difference `d/dξ` on the uniform `ξ`-grid, one-sided
/// within three nodes of either end.
pub fn xi_derivative<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    let n = f.len();
    if n < 7 {
        return Err(contract("ξ-derivative needs at least 7 nodes"));
    }
    let h = f.grid().spacing();
    let values = f.values();
    let w = stencils();
    let out = (0..n)
        .map(|i| {
            let shift = if i < 3 { i } else if i + 3 >= n { 6 - (n - 1 - i) } else { 3 };
            let start = i - shift;
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, &wj) in w[shift].iter().enumerate() {
                acc = acc + values[start + j] * T::lit(wj);
            }
            acc / h
        })
        .collect();
    f.with_values(out)
}

/// Discrete generator `A f = α^{-1} ∂_x^α f + κ f = d f/dξ + κ f` of the
/// weighted conformable translation semigroup.
pub fn translation_generator<T: Real>(cocycle: WeightCocycle<T>, f: &GridFunction<T>) -> Result<GridFunction<T>> {
    let d = xi_derivative(f)?;
    d.combine(Complex::new(T::one(), T::zero()), f, Complex::new(cocycle.kappa, T::zero()))
}

/// Convergence of the translation quotient toward `α^{-1} x^{1−α} f'(x)`.
#[derive(Debug, Clone)]
pub struct GeneratorCheck<T> {
    pub times: Vec<T>,
    /// `‖(T_α(t)f − f)/t − α^{-1} x^{1−α} f'‖_{p,α}` from exact translates.
    pub residuals: Vec<T>,
    /// Slope of the residuals against `t`; `+∞` when all lie at round-off.
    pub fitted_order: T,
    /// `‖D_ξ f − α^{-1} x^{1−α} f'‖_{p,α}` for the sixth-order grid derivative.
    pub discrete_residual: T,
    /// The closed-form generator value sampled on the grid.
    pub generator_value: GridFunction<T>,
}

impl<T: Real> GeneratorCheck<T> {
    /// Residual at the smallest time.
    pub fn residual(&self) -> T {
        *self.residuals.last().expect("non-empty schedule")
    }
}

/// Identifies the generator of `T_α` as `α^{-1} ∂_x^α` on a smooth `f`.
pub fn conformable_generator_check<T: Real>(desc: &SpaceDescriptor<T>, f: &ScalarFunction<T>) -> Result<GeneratorCheck<T>> {
    if !f.has_derivative() {
        return Err(contract(format!("{} has no closed-form derivative", f.name())));
    }
    let order = desc.order();
    let alpha = order.alpha();
    let inv = T::one() / alpha;
    let x = desc.grid().x().to_vec();
    let xi = desc.grid().xi().to_vec();
    let generator_value = GridFunction::sample(desc, Coordinates::Conformable, |x| {
        let w = if order.is_classical() { T::one() } else { x.powf(T::one() - alpha) };
        f.derivative(x).expect("derivative present") * (w / alpha)
    })?;
    let sampled = GridFunction::sample(desc, Coordinates::Conformable, |x| f.eval(x))?;
    let peak = sampled.values().iter().fold(T::zero(), |m, v| m.max(v.norm()));
    let times: Vec<T> = (0..8).map(|k| T::lit(1e-2 * 0.5f64.powi(k))).collect();
    let mut residuals = Vec::with_capacity(times.len());
    let mut fit = Vec::new();
    for &t in &times {
        let q: Vec<Complex<T>> = x
            .iter()
            .zip(&xi)
            .map(|(&xv, &u)| {
                let moved = if order.is_classical() { u + t } else { (u + t).powf(inv) };
                (f.eval(moved) - f.eval(xv)) / t
            })
            .collect();
        let quotient = sampled.with_values(q)?;
        let r = distance(desc, &quotient, &generator_value)?;
        let window = norm(desc, &sampled.with_values(vec![Complex::new(T::one(), T::zero()); x.len()])?)?;
        if r > T::lit(64.0) * T::epsilon() * peak * window / t {
            fit.push((t, r));
        }
        residuals.push(r);
    }
    let fitted_order = loglog_slope(&fit).unwrap_or(T::infinity());
    let discrete_residual = distance(desc, &xi_derivative(&sampled)?, &generator_value)?;
    Ok(GeneratorCheck {
        times,
        residuals,
        fitted_order,
        discrete_residual,
        generator_value,
    })
}
