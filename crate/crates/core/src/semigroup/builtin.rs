use num_complex::Complex;

use super::{ClockKind, OperatorFamily};
use crate::error::contract;
use crate::kernel::{clock, Order};
use crate::real::Real;
use crate::spaces::GridFunction;

/// `T(s) f = e^{s b} f`.
pub fn scalar_exponential<T: Real>(b: Complex<T>) -> OperatorFamily<T> {
    OperatorFamily::new(format!("exp(s·{b})"), ClockKind::Classical, true, move |s, f| {
        Ok(f.scale((b * s).exp()))
    })
}

/// `S(t) f = e^{(t^α/α) b} f`, defined directly on the α-clock.
pub fn conformable_exponential<T: Real>(order: Order<T>, b: Complex<T>) -> OperatorFamily<T> {
    OperatorFamily::new(format!("exp(ψ(t)·{b})"), ClockKind::Alpha(order), true, move |t, f| {
        Ok(f.scale((b * clock(order, t)?).exp()))
    })
}

/// The constant identity family on the given clock.
pub fn identity<T: Real>(clock: ClockKind<T>) -> OperatorFamily<T> {
    OperatorFamily::new("identity", clock, true, |_, f: &GridFunction<T>| Ok(f.clone()))
}

/// `T(s) f(y_i) = e^{s m(y_i)} f(y_i)` at the function's own nodes `y_i`.
pub fn diagonal_multiplication<T: Real>(
    name: impl Into<String>,
    symbol: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
) -> OperatorFamily<T> {
    OperatorFamily::new(name, ClockKind::Classical, true, move |s, f| {
        let values = f.values();
        let out = f.nodes().iter().zip(values.iter()).map(|(&y, v)| v * (symbol(y) * s).exp()).collect();
        f.with_values(out)
    })
}

/// A complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2<T> {
    pub entries: [[Complex<T>; 2]; 2],
}

impl<T: Real> Matrix2<T> {
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Self {
        Matrix2 { entries }
    }

    pub fn from_real(m: [[T; 2]; 2]) -> Self {
        let c = |x: T| Complex::new(x, T::zero());
        Matrix2::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.entries;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// `e^{sM}` in closed form: with `μ = tr M/2` and `N = M − μ I`,
    /// `N² = δ² I` and `e^{sM} = e^{sμ}(cosh(sδ) I + sinh(sδ)/δ · N)`.
    pub fn exp(&self, s: T) -> Matrix2<T> {
        let m = &self.entries;
        let two = T::lit(2.0);
        let mu = (m[0][0] + m[1][1]) / two;
        let half_gap = (m[0][0] - m[1][1]) / two;
        let delta_sq = half_gap * half_gap + m[0][1] * m[1][0];
        let z_sq = delta_sq * (s * s);
        // cosh z and sinh(z)/z depend on z² only
        let (ch, sh_over_z) = if z_sq.norm() < T::lit(1e-3) {
            let mut ch = Complex::new(T::one(), T::zero());
            let mut sh = Complex::new(T::one(), T::zero());
            let mut term_c = Complex::new(T::one(), T::zero());
            let mut term_s = Complex::new(T::one(), T::zero());
            for k in 1..8 {
                let kf = T::from_usize_lossy(k);
                term_c = term_c * z_sq / ((two * kf - T::one()) * (two * kf));
                term_s = term_s * z_sq / ((two * kf) * (two * kf + T::one()));
                ch = ch + term_c;
                sh = sh + term_s;
            }
            (ch, sh)
        } else {
            let z = z_sq.sqrt();
            (z.cosh(), z.sinh() / z)
        };
        let scale = (mu * s).exp();
        let sh = sh_over_z * s;
        let n00 = half_gap;
        let n11 = -half_gap;
        Matrix2::new([
            [scale * (ch + sh * n00), scale * sh * m[0][1]],
            [scale * sh * m[1][0], scale * (ch + sh * n11)],
        ])
    }
}

/// `T(s) = e^{sM}` acting on consecutive node pairs `(f_0, f_1), (f_2, f_3), …`.
pub fn matrix_exponential<T: Real>(m: Matrix2<T>) -> OperatorFamily<T> {
    OperatorFamily::new("matrix exponential", ClockKind::Classical, true, move |s, f| {
        if f.len() % 2 != 0 {
            return Err(contract("matrix family needs an even number of nodes"));
        }
        let e = m.exp(s);
        let values = f.values();
        let mut out = Vec::with_capacity(values.len());
        for pair in values.chunks_exact(2) {
            let r = e.apply([pair[0], pair[1]]);
            out.extend_from_slice(&r);
        }
        f.with_values(out)
    })
}

/// Negative control: a classical family relabelled as an α-family without
/// reparametrizing time. Violates the α-semigroup law whenever `α < 1`.
pub fn broken_clock<T: Real>(classical: &OperatorFamily<T>, order: Order<T>) -> OperatorFamily<T> {
    let inner = classical.clone();
    OperatorFamily::new(format!("{} (unclocked)", classical.name()), ClockKind::Alpha(order), classical.is_linear(), move |t, f| {
        inner.apply(t, f)
    })
}

