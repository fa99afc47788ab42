use std::io::Write;

use num_complex::Complex;
use rand::Rng;

use super::{classical_from_alpha, ClockKind, OperatorFamily};
use crate::error::{contract, domain, Result};
use crate::fit::{extrapolate_to_zero, loglog_slope};
use crate::kernel::{clock, clock_inverse, Order};
use crate::real::Real;
use crate::rng::stream;
use crate::spaces::{distance, norm, Coordinates, GridFunction, SpaceDescriptor};

/// One sample `(r, q, f)` for a semigroup-law check.
#[derive(Debug, Clone)]
pub struct LawProbe<T> {
    pub r: T,
    pub q: T,
    pub f: GridFunction<T>,
}

/// `count` probes with `r, q` log-uniform on `[10^{-3}, 10^2]` and smooth
/// random profiles `f`, all derived from `seed`.
pub fn random_law_probes<T: Real>(desc: &SpaceDescriptor<T>, seed: u64, count: usize) -> Result<Vec<LawProbe<T>>> {
    let mut rng = stream(seed, "semigroup-law-probes");
    let alpha = desc.order().alpha().to_f64_lossy();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let r = 10f64.powf(rng.gen_range(-3.0..2.0));
        let q = 10f64.powf(rng.gen_range(-3.0..2.0));
        let (c1, c2, c3): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b) = (rng.gen_range(0.2..2.0), rng.gen_range(0.5..4.0));
        let f = GridFunction::sample(desc, Coordinates::Conformable, |x: T| {
            let u = x.to_f64_lossy().powf(alpha);
            let re = c1 * (-a * u).exp() + c2 * (b * u).sin() / (1.0 + u);
            let im = c3 * (-(u - b).powi(2)).exp();
            Complex::new(T::lit(re), T::lit(im))
        })?;
        out.push(LawProbe { r: T::lit(r), q: T::lit(q), f });
    }
    Ok(out)
}

fn law_residual<T: Real>(desc: &SpaceDescriptor<T>, lhs: &GridFunction<T>, rhs: &GridFunction<T>, f: &GridFunction<T>) -> Result<T> {
    // growing families reach e^{400}; the residual is relative to the orbit size
    let scale = T::one().max(norm(desc, f)?).max(norm(desc, lhs)?);
    Ok(distance(desc, lhs, rhs)? / scale)
}

/// `max ‖S((r+q)^{1/α}) f − S(r^{1/α}) S(q^{1/α}) f‖ / max(1, ‖f‖, ‖S((r+q)^{1/α}) f‖)`.
pub fn check_alpha_semigroup_law<T: Real>(
    desc: &SpaceDescriptor<T>,
    family: &OperatorFamily<T>,
    order: Order<T>,
    probes: &[LawProbe<T>],
) -> Result<T> {
    if family.clock_kind() != ClockKind::Alpha(order) {
        return Err(contract(format!("{} is not an α-family of order {}", family.name(), order.alpha())));
    }
    let inv = T::one() / order.alpha();
    let root = |v: T| if order.is_classical() { v } else { v.powf(inv) };
    let mut worst = T::zero();
    for p in probes {
        if p.r < T::zero() || p.q < T::zero() {
            return Err(domain("law probes need r, q >= 0"));
        }
        let lhs = family.apply(root(p.r + p.q), &p.f)?;
        let rhs = family.apply(root(p.r), &family.apply(root(p.q), &p.f)?)?;
        worst = worst.max(law_residual(desc, &lhs, &rhs, &p.f)?);
    }
    Ok(worst)
}

/// Classical law `U(r+q) = U(r) U(q)` with the same normalization.
pub fn check_classical_semigroup_law<T: Real>(
    desc: &SpaceDescriptor<T>,
    family: &OperatorFamily<T>,
    probes: &[LawProbe<T>],
) -> Result<T> {
    if family.clock_kind() != ClockKind::Classical {
        return Err(contract(format!("{} is not a classical family", family.name())));
    }
    let mut worst = T::zero();
    for p in probes {
        let lhs = family.apply(p.r + p.q, &p.f)?;
        let rhs = family.apply(p.r, &family.apply(p.q, &p.f)?)?;
        worst = worst.max(law_residual(desc, &lhs, &rhs, &p.f)?);
    }
    Ok(worst)
}

/// `ε_k = 10^{-2} 2^{-k}`, `k = 0..8`.
pub fn generator_epsilons<T: Real>() -> Vec<T> {
    (0..8).map(|k| T::lit(1e-2 * 0.5f64.powi(k))).collect()
}

/// Extrapolated α-generator applied to a vector, with diagnostics.
#[derive(Debug, Clone)]
pub struct GeneratorEstimate<T> {
    /// Quadratic extrapolation to `ε = 0` of the last three conformable quotients.
    pub value: GridFunction<T>,
    /// Conformable quotients `(S(t_k)x − x)/ψ(t_k)`, `t_k = ψ^{-1}(ε_k)`.
    pub quotients: Vec<GridFunction<T>>,
    /// `(ε_k, ‖Q_k − Q_{k−1}‖)` for `k ≥ 1`.
    pub residual_curve: Vec<(T, T)>,
    /// `‖Q_k − (U(ε_k)x − x)/ε_k‖` at each level.
    pub classical_agreement: Vec<T>,
    pub fitted_order: T,
    /// Relative change between the last two extrapolants is at most `10^{-4}`.
    pub stabilized: bool,
}

impl<T: Real> GeneratorEstimate<T> {
    /// Outside the numerical domain of the generator when not stabilized.
    pub fn in_numerical_domain(&self) -> bool {
        self.stabilized
    }
}

/// Limit of `(S(t)x − x)/(t^α/α)` as `t → 0⁺`, alongside the classical quotient
/// of `U(s) = S(ψ^{-1}(s))`.
pub fn estimate_alpha_generator<T: Real>(
    desc: &SpaceDescriptor<T>,
    family: &OperatorFamily<T>,
    order: Order<T>,
    x: &GridFunction<T>,
    epsilons: &[T],
) -> Result<GeneratorEstimate<T>> {
    if epsilons.len() < 3 {
        return Err(contract("generator estimation needs at least three ε levels"));
    }
    if epsilons.iter().any(|e| !(*e > T::zero())) || epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(contract("ε levels must be positive and strictly decreasing"));
    }
    let classical = classical_from_alpha(family, order)?;
    let one = Complex::new(T::one(), T::zero());
    let mut quotients = Vec::with_capacity(epsilons.len());
    let mut agreement = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let t = clock_inverse(order, eps)?;
        let s = clock(order, t)?;
        let q = family.apply(t, x)?.combine(one, x, -one)?.scale(Complex::new(T::one() / s, T::zero()));
        let c = classical.apply(eps, x)?.combine(one, x, -one)?.scale(Complex::new(T::one() / eps, T::zero()));
        agreement.push(distance(desc, &q, &c)?);
        quotients.push(q);
    }
    let residual_curve: Vec<(T, T)> = quotients
        .windows(2)
        .zip(epsilons.iter().skip(1))
        .map(|(w, &e)| Ok((e, distance(desc, &w[1], &w[0])?)))
        .collect::<Result<_>>()?;
    let extrapolant = |k: usize| -> Result<GridFunction<T>> {
        let vals: Vec<_> = (k - 2..=k).map(|j| quotients[j].values().into_owned()).collect();
        let n = x.len();
        let out = (0..n)
            .map(|i| {
                let nodes = [(epsilons[k - 2], vals[0][i]), (epsilons[k - 1], vals[1][i]), (epsilons[k], vals[2][i])];
                extrapolate_to_zero(&nodes)
            })
            .collect();
        x.with_values(out)
    };
    let last = epsilons.len() - 1;
    let value = extrapolant(last)?;
    let stabilized = if last >= 3 {
        let prev = extrapolant(last - 1)?;
        let change = distance(desc, &value, &prev)?;
        let size = norm(desc, &value)?;
        let floor = T::lit(64.0) * T::epsilon() * (T::one() + norm(desc, x)?) / epsilons[last];
        change <= T::lit(1e-4) * size || change <= floor
    } else {
        false
    };
    let fitted_order = loglog_slope(&residual_curve).unwrap_or(T::nan());
    Ok(GeneratorEstimate {
        value,
        quotients,
        residual_curve,
        classical_agreement: agreement,
        fitted_order,
        stabilized,
    })
}

/// `[S(t) x₀ for t in times]`; times must be nonnegative and ascending.
pub fn mild_solution<T: Real>(family: &OperatorFamily<T>, x0: &GridFunction<T>, times: &[T]) -> Result<Vec<GridFunction<T>>> {
    if let Some(t) = times.iter().find(|t| t.is_nan() || **t < T::zero()) {
        return Err(domain(format!("mild solution requested at negative time {t}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(contract("mild-solution times must be sorted ascending"));
    }
    times.iter().map(|&t| family.apply(t, x0)).collect()
}

/// CSV `t,s,node_index,re,im` with `s = ψ(t)`.
pub fn write_mild_solution_csv<T: Real, W: Write>(
    order: Order<T>,
    times: &[T],
    states: &[GridFunction<T>],
    mut out: W,
) -> Result<()> {
    if times.len() != states.len() {
        return Err(contract("one state per time required"));
    }
    writeln!(out, "t,s,node_index,re,im")?;
    for (&t, state) in times.iter().zip(states) {
        let s = clock(order, t)?;
        for (i, v) in state.values().iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{},{:.16e},{:.16e}", t, s, i, v.re, v.im)?;
        }
    }
    Ok(())
}

fn ulps_off<T: Real>(value: Complex<T>, reference: Complex<T>, scale: T) -> T {
    let d = (value - reference).norm();
    if d == T::zero() {
        return T::zero();
    }
    let u = scale.max(T::min_positive_value()).ulp();
    d / u
}

/// Largest nodal deviation of `S(0) f` from `f`, in ulps of `|f_i|`.
pub fn identity_defect_ulps<T: Real>(family: &OperatorFamily<T>, f: &GridFunction<T>) -> Result<T> {
    let g = family.apply(T::zero(), f)?;
    let (a, b) = (g.values(), f.values());
    Ok(a.iter().zip(b.iter()).fold(T::zero(), |m, (x, y)| m.max(ulps_off(*x, *y, y.norm()))))
}

/// Largest nodal deviation of `S(t)(a f + b h)` from `a S(t) f + b S(t) h`, in
/// ulps of `|a S(t) f_i| + |b S(t) h_i|`.
pub fn linearity_defect_ulps<T: Real>(
    family: &OperatorFamily<T>,
    t: T,
    a: Complex<T>,
    f: &GridFunction<T>,
    b: Complex<T>,
    h: &GridFunction<T>,
) -> Result<T> {
    let lhs = family.apply(t, &f.combine(a, h, b)?)?;
    let sf = family.apply(t, f)?;
    let sh = family.apply(t, h)?;
    let rhs = sf.combine(a, &sh, b)?;
    let (l, r, u, v) = (lhs.values(), rhs.values(), sf.values(), sh.values());
    let mut worst = T::zero();
    for i in 0..l.len() {
        let scale = (u[i] * a).norm() + (v[i] * b).norm();
        worst = worst.max(ulps_off(l[i], r[i], scale));
    }
    Ok(worst)
}

/// `‖S(t_k) x − x‖` along a decreasing time sequence.
#[derive(Debug, Clone)]
pub struct ContinuityReport<T> {
    pub times: Vec<T>,
    pub distances: Vec<T>,
}

impl<T: Real> ContinuityReport<T> {
    /// The last three distances are non-increasing and the sequence has at
    /// least halved (or vanished).
    pub fn converges(&self) -> bool {
        let d = &self.distances;
        if d.len() < 3 {
            return false;
        }
        let tail_ok = d[d.len() - 3..].windows(2).all(|w| w[1] <= w[0]);
        let last = d[d.len() - 1];
        tail_ok && (last == T::zero() || last <= T::lit(0.5) * d[0])
    }
}

/// Strong continuity at `0` sampled at `t_k = 2^{-k}`, `k = 0..12`.
pub fn strong_continuity<T: Real>(desc: &SpaceDescriptor<T>, family: &OperatorFamily<T>, x: &GridFunction<T>) -> Result<ContinuityReport<T>> {
    let times: Vec<T> = (0..12).map(|k| T::lit(0.5f64.powi(k))).collect();
    let distances = times
        .iter()
        .map(|&t| distance(desc, &family.apply(t, x)?, x))
        .collect::<Result<_>>()?;
    Ok(ContinuityReport { times, distances })
}
