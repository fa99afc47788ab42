//! Small estimation helpers: log-log order fits, polynomial extrapolation to
//! zero, and Ridders' derivative.

use num_complex::Complex;

use crate::real::Real;

/// Least-squares slope of `ln y` against `ln x`.
///
/// Returns `None` with fewer than two usable (positive, finite) points.
pub fn loglog_slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    let logs: Vec<(T, T)> = points
        .iter()
        .filter(|(x, y)| *x > T::zero() && *y > T::zero() && x.is_finite() && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = T::from_usize_lossy(logs.len());
    let mx = logs.iter().map(|p| p.0).sum::<T>() / n;
    let my = logs.iter().map(|p| p.1).sum::<T>() / n;
    let sxx = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<T>();
    if sxx == T::zero() {
        return None;
    }
    let sxy = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<T>();
    Some(sxy / sxx)
}

/// Value at `x = 0` of the Lagrange polynomial through the given nodes.
pub fn extrapolate_to_zero<T: Real, V>(nodes: &[(T, V)]) -> V
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<T, Output = V>,
{
    assert!(!nodes.is_empty(), "extrapolation needs at least one node");
    let mut acc: Option<V> = None;
    for (i, &(xi, vi)) in nodes.iter().enumerate() {
        let mut w = T::one();
        for (j, &(xj, _)) in nodes.iter().enumerate() {
            if i != j {
                w = w * xj / (xj - xi);
            }
        }
        let term = vi * w;
        acc = Some(match acc {
            Some(a) => a + term,
            None => term,
        });
    }
    acc.expect("non-empty")
}

/// Ridders' extrapolated central difference of `f` at `x` with initial step `h`.
///
/// Returns the estimate and its error estimate.
pub fn ridders_derivative<T, F>(f: F, x: T, h: T) -> (Complex<T>, T)
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    const NTAB: usize = 12;
    let con = T::lit(1.4);
    let con2 = con * con;
    let two = T::lit(2.0);
    let zero = Complex::new(T::zero(), T::zero());
    let mut table = [[zero; NTAB]; NTAB];
    let mut hh = h;
    table[0][0] = (f(x + hh) - f(x - hh)) / (two * hh);
    let mut best = table[0][0];
    let mut err = T::infinity();
    for i in 1..NTAB {
        hh = hh / con;
        table[0][i] = (f(x + hh) - f(x - hh)) / (two * hh);
        let mut fac = con2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - T::one());
            fac = con2 * fac;
            let e = (table[j][i] - table[j - 1][i]).norm().max((table[j][i] - table[j - 1][i - 1]).norm());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).norm() >= two * err {
            break;
        }
    }
    (best, err)
}
