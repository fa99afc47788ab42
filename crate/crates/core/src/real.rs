//! Scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::dd;

/// Real scalar the toolkit is generic over (implemented for `f32` and `f64`).
///
/// Besides the usual float operations it provides the two powers behind the
/// conformable clock. They are computed with extra internal precision so the
/// results are (almost always) correctly rounded: `f32` goes through `f64`,
/// `f64` through double-double arithmetic.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Sum + Default + Send + Sync + 'static
{
    /// `t^α / α` for `t > 0`.
    fn clock_power(t: Self, alpha: Self) -> Self;

    /// `(α s)^{1/α}` for `s > 0`.
    fn clock_power_inverse(s: Self, alpha: Self) -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Distance to the next representable value above `|self|`.
    fn ulp(self) -> Self;
}

impl Real for f64 {
    fn clock_power(t: f64, alpha: f64) -> f64 {
        dd::exp(dd::ln(t).mul_f64(alpha)).div_f64(alpha).hi
    }

    fn clock_power_inverse(s: f64, alpha: f64) -> f64 {
        let scaled = dd::Dd::prod(alpha, s);
        dd::exp(dd::ln_dd(scaled).div_f64(alpha)).hi
    }

    fn ulp(self) -> f64 {
        let a = self.abs();
        if a.is_infinite() {
            return a;
        }
        f64::from_bits(a.to_bits() + 1) - a
    }
}

impl Real for f32 {
    fn clock_power(t: f32, alpha: f32) -> f32 {
        let a = f64::from(alpha);
        (f64::from(t).powf(a) / a) as f32
    }

    fn clock_power_inverse(s: f32, alpha: f32) -> f32 {
        let a = f64::from(alpha);
        (a * f64::from(s)).powf(1.0 / a) as f32
    }

    fn ulp(self) -> f32 {
        let a = self.abs();
        if a.is_infinite() {
            return a;
        }
        f32::from_bits(a.to_bits() + 1) - a
    }
}

/// Distance between two values measured in units of `ulp(reference)`.
pub fn ulps_between<T: Real>(value: T, reference: T) -> T {
    if value == reference {
        return T::zero();
    }
    let u = reference.ulp();
    if u == T::zero() {
        return T::infinity();
    }
    (value - reference).abs() / u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ulp_of_one() {
        assert_eq!(1.0f64.ulp(), f64::EPSILON);
        assert_eq!(1.0f32.ulp(), f32::EPSILON);
    }

    #[test]
    fn f32_clock_powers_agree_with_f64() {
        for &t in &[0.01f32, 0.5, 3.0, 4096.0] {
            let s32 = f32::clock_power(t, 0.5);
            let s64 = f64::clock_power(f64::from(t), 0.5);
            assert!((f64::from(s32) - s64).abs() <= f64::from(s32.ulp()));
        }
    }
}
