//! One-parameter operator families on grid functions, the bridge between the
//! α-clock and the classical clock, generator estimation, and mild solutions.
//!
//! A classical family `T(s)` yields the α-family `S(t) = T(t^α/α)`; an
//! α-family yields the classical `U(s) = S((α s)^{1/α})`. The two bridges
//! cancel symbolically.

mod builtin;
mod checks;

use std::fmt;
use std::sync::Arc;

pub use builtin::{
    broken_clock, conformable_exponential, diagonal_multiplication, identity, matrix_exponential, scalar_exponential,
    Matrix2,
};
pub use checks::{
    check_alpha_semigroup_law, check_classical_semigroup_law, estimate_alpha_generator, generator_epsilons,
    identity_defect_ulps, linearity_defect_ulps, mild_solution, random_law_probes, strong_continuity,
    write_mild_solution_csv, ContinuityReport, GeneratorEstimate, LawProbe,
};

use crate::error::{contract, domain, Result};
use crate::kernel::{clock, clock_inverse, Order};
use crate::real::Real;
use crate::spaces::GridFunction;

/// Which time variable a family is parametrized by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClockKind<T> {
    Classical,
    Alpha(Order<T>),
}

type Action<T> = Arc<dyn Fn(T, &GridFunction<T>) -> Result<GridFunction<T>> + Send + Sync>;

enum Repr<T> {
    Native { clock: ClockKind<T>, action: Action<T> },
    AlphaOf { order: Order<T>, classical: OperatorFamily<T> },
    ClassicalOf { order: Order<T>, alpha: OperatorFamily<T> },
}

/// A family `t ↦ S(t)` acting on grid functions.
#[derive(Clone)]
pub struct OperatorFamily<T> {
    name: String,
    linear: bool,
    repr: Arc<Repr<T>>,
}

impl<T> fmt::Debug for OperatorFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFamily").field("name", &self.name).field("linear", &self.linear).finish()
    }
}

impl<T: Real> OperatorFamily<T> {
    /// A family given directly by its action.
    pub fn new(
        name: impl Into<String>,
        clock: ClockKind<T>,
        linear: bool,
        action: impl Fn(T, &GridFunction<T>) -> Result<GridFunction<T>> + Send + Sync + 'static,
    ) -> Self {
        OperatorFamily {
            name: name.into(),
            linear,
            repr: Arc::new(Repr::Native {
                clock,
                action: Arc::new(action),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the family is asserted to act linearly.
    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn clock_kind(&self) -> ClockKind<T> {
        match &*self.repr {
            Repr::Native { clock, .. } => *clock,
            Repr::AlphaOf { order, .. } => ClockKind::Alpha(*order),
            Repr::ClassicalOf { .. } => ClockKind::Classical,
        }
    }

    /// `S(t) f` for `t ≥ 0`.
    pub fn apply(&self, t: T, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        if t.is_nan() || t < T::zero() {
            return Err(domain(format!("operator family evaluated at negative time {t}")));
        }
        match &*self.repr {
            Repr::Native { action, .. } => action(t, f),
            Repr::AlphaOf { order, classical } => classical.apply(clock(*order, t)?, f),
            Repr::ClassicalOf { order, alpha } => alpha.apply(clock_inverse(*order, t)?, f),
        }
    }
}

/// `S(t) = T(t^α/α)`.
pub fn alpha_from_classical<T: Real>(family: &OperatorFamily<T>, order: Order<T>) -> Result<OperatorFamily<T>> {
    if family.clock_kind() != ClockKind::Classical {
        return Err(contract(format!("{} is not parametrized by the classical clock", family.name)));
    }
    if let Repr::ClassicalOf { order: inner, alpha } = &*family.repr {
        if *inner == order {
            return Ok(alpha.clone());
        }
    }
    Ok(OperatorFamily {
        name: format!("{}∘ψ", family.name),
        linear: family.linear,
        repr: Arc::new(Repr::AlphaOf {
            order,
            classical: family.clone(),
        }),
    })
}

/// `U(s) = S((α s)^{1/α})`.
pub fn classical_from_alpha<T: Real>(family: &OperatorFamily<T>, order: Order<T>) -> Result<OperatorFamily<T>> {
    if family.clock_kind() != ClockKind::Alpha(order) {
        return Err(contract(format!("{} is not parametrized by the α-clock of order {}", family.name, order.alpha())));
    }
    if let Repr::AlphaOf { order: inner, classical } = &*family.repr {
        if *inner == order {
            return Ok(classical.clone());
        }
    }
    Ok(OperatorFamily {
        name: format!("{}∘ψ⁻¹", family.name),
        linear: family.linear,
        repr: Arc::new(Repr::ClassicalOf {
            order,
            alpha: family.clone(),
        }),
    })
}

#[cfg(test)]
mod tests;
