use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::{clock_inverse, Order};
use crate::real::Real;

type Eval<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// A complex-valued function on `(0, ∞)`, optionally with its derivative.
#[derive(Clone)]
pub struct ScalarFunction<T> {
    name: String,
    eval: Eval<T>,
    derivative: Option<Eval<T>>,
}

impl<T> fmt::Debug for ScalarFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl<T: Real> ScalarFunction<T> {
    pub fn new(name: impl Into<String>, eval: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        ScalarFunction {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    /// Real-valued convenience constructor.
    pub fn real(name: impl Into<String>, eval: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::new(name, move |t| Complex::new(eval(t), T::zero()))
    }

    pub fn real_with_derivative(
        name: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        d: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self::real(name, eval).with_derivative(move |t| Complex::new(d(t), T::zero()))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new("constant", move |_| c).with_derivative(|_| Complex::new(T::zero(), T::zero()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, t: T) -> Complex<T> {
        (self.eval)(t)
    }

    pub fn derivative(&self, t: T) -> Option<Complex<T>> {
        self.derivative.as_ref().map(|d| d(t))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }
}

/// The unique `g` with `f = g ∘ ψ`, namely `g(s) = f((α s)^{1/α})`.
///
/// If `f` carries a derivative, `g` does too: `g'(s) = t^{1-α} f'(t)` at `t = ψ^{-1}(s)`.
pub fn factor_through_clock<T: Real>(order: Order<T>, f: &ScalarFunction<T>) -> ScalarFunction<T> {
    let alpha = order.alpha();
    let inner = f.clone();
    let to_native = move |s: T| clock_inverse(order, s.max(T::zero())).unwrap_or(T::nan());
    let mut g = ScalarFunction::new(format!("{}∘ψ⁻¹", f.name()), move |s| inner.eval(to_native(s)));
    if f.has_derivative() {
        let inner = f.clone();
        g = g.with_derivative(move |s| {
            let t = to_native(s);
            let weight = if alpha == T::one() { T::one() } else { t.powf(T::one() - alpha) };
            inner.derivative(t).expect("derivative present") * weight
        });
    }
    g
}

/// Smooth test functions with closed-form derivatives, used by the
/// convergence studies and the transform report.
pub fn library<T: Real>() -> Vec<ScalarFunction<T>> {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    vec![
        ScalarFunction::real_with_derivative(
            "cubic",
            move |t: T| t * t * t - two * t + T::one(),
            move |t: T| three * t * t - two,
        ),
        ScalarFunction::real_with_derivative("exp_decay", |t: T| (-t).exp(), |t: T| -(-t).exp()),
        ScalarFunction::real_with_derivative(
            "exp_growth",
            move |t: T| (half * t).exp(),
            move |t: T| half * (half * t).exp(),
        ),
        ScalarFunction::real_with_derivative("sin", |t: T| t.sin(), |t: T| t.cos()),
        ScalarFunction::real_with_derivative("cos", |t: T| t.cos(), |t: T| -t.sin()),
        ScalarFunction::real_with_derivative(
            "power_0.3",
            |t: T| t.powf(T::lit(0.3)),
            |t: T| T::lit(0.3) * t.powf(T::lit(-0.7)),
        ),
        ScalarFunction::real_with_derivative(
            "power_2.5",
            |t: T| t.powf(T::lit(2.5)),
            |t: T| T::lit(2.5) * t.powf(T::lit(1.5)),
        ),
        ScalarFunction::new("oscillator", |t: T| Complex::new(T::zero(), t).exp())
            .with_derivative(|t: T| Complex::new(T::zero(), T::one()) * Complex::new(T::zero(), t).exp()),
    ]
}
