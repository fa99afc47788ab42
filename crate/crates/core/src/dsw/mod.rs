//! Numerical checks of the spectral chaos criterion for a concrete
//! generator: eigenvector residuals over an open set of the point spectrum,
//! its contact with the imaginary axis, and analyticity and nondegeneracy of
//! `λ ↦ ⟨φ, x_λ⟩` over a finite library of functionals.

mod report;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

pub use report::{DswConfig, DswReport, LambdaRow, Thresholds, Verdict, ViolationReason};

use crate::error::{contract, domain, Result};
use crate::real::Real;
use crate::rng::stream;
use crate::spaces::{inner_product, norm_p_alpha, norm_with_exponent, Coordinates, GridFunction, SpaceDescriptor};
use crate::translation::{translation_generator, WeightCocycle};

/// Open axis-aligned rectangle `(re_lo, re_hi) × (im_lo, im_hi)` in ℂ.
/// Infinite bounds are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    re: (T, T),
    im: (T, T),
}

impl<T: Real> Region<T> {
    /// Fails unless both sides have positive length.
    pub fn new(re_lo: T, re_hi: T, im_lo: T, im_hi: T) -> Result<Self> {
        if !(re_lo < re_hi) || !(im_lo < im_hi) {
            return Err(domain(format!(
                "region ({re_lo}, {re_hi}) × ({im_lo}, {im_hi}) is not open: both sides need positive length"
            )));
        }
        Ok(Region { re: (re_lo, re_hi), im: (im_lo, im_hi) })
    }

    pub fn re(&self) -> (T, T) {
        self.re
    }

    pub fn im(&self) -> (T, T) {
        self.im
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        self.contains_with_margin(z, T::zero())
    }

    /// `z` lies in the region at distance at least `margin` from its edge.
    pub fn contains_with_margin(&self, z: Complex<T>, margin: T) -> bool {
        z.re - margin > self.re.0 && z.re + margin < self.re.1 && z.im - margin > self.im.0 && z.im + margin < self.im.1
    }

    /// Intersection with the half-plane `Re λ < cap`, if nonempty.
    pub fn clip_re_above(&self, cap: T) -> Option<Self> {
        Region::new(self.re.0, self.re.1.min(cap), self.im.0, self.im.1).ok()
    }

    /// `n_re × n_im` points on a grid inset by one cell from every edge.
    pub fn lattice(&self, n_re: usize, n_im: usize) -> Vec<Complex<T>> {
        let pick = |(lo, hi): (T, T), k: usize, n: usize| lo + (hi - lo) * T::from_usize_lossy(k + 1) / T::from_usize_lossy(n + 1);
        let mut out = Vec::with_capacity(n_re * n_im);
        for i in 0..n_re {
            for j in 0..n_im {
                out.push(Complex::new(pick(self.re, i, n_re), pick(self.im, j, n_im)));
            }
        }
        out
    }
}

impl<T: Real> fmt::Display for Region<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Re ∈ ({}, {}), Im ∈ ({}, {})", self.re.0, self.re.1, self.im.0, self.im.1)
    }
}

/// `true` iff `0` is interior to the real-part interval.
pub fn imag_axis_intersection<T: Real>(region: &Region<T>) -> bool {
    region.re.0 < T::zero() && T::zero() < region.re.1
}

type Eigenvector<T> = Arc<dyn Fn(Complex<T>) -> Result<GridFunction<T>> + Send + Sync>;
type Action<T> = Arc<dyn Fn(&GridFunction<T>) -> Result<GridFunction<T>> + Send + Sync>;

/// A family `λ ↦ x_λ` of candidate eigenvectors with the generator they are
/// tested against.
///
/// `region` is the requested open set; `admissible` is the part of it where
/// the sampled eigenvectors represent genuine elements of the space at the
/// current truncation.
#[derive(Clone)]
pub struct EigenFamily<T> {
    name: String,
    desc: SpaceDescriptor<T>,
    region: Region<T>,
    admissible: Option<Region<T>>,
    eigenvector: Eigenvector<T>,
    generator: Action<T>,
}

impl<T> fmt::Debug for EigenFamily<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EigenFamily")
            .field("name", &self.name)
            .field("region", &self.region)
            .field("admissible", &self.admissible)
            .finish()
    }
}

impl<T: Real> EigenFamily<T> {
    pub fn new(
        name: impl Into<String>,
        desc: &SpaceDescriptor<T>,
        region: Region<T>,
        eigenvector: impl Fn(Complex<T>) -> Result<GridFunction<T>> + Send + Sync + 'static,
        generator: impl Fn(&GridFunction<T>) -> Result<GridFunction<T>> + Send + Sync + 'static,
    ) -> Self {
        EigenFamily {
            name: name.into(),
            desc: desc.clone(),
            region,
            admissible: Some(region),
            eigenvector: Arc::new(eigenvector),
            generator: Arc::new(generator),
        }
    }

    /// Restricts the admissible set to `region ∩ {Re λ < cap}`.
    pub fn with_re_cap(mut self, cap: T) -> Self {
        self.admissible = self.admissible.and_then(|r| r.clip_re_above(cap));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &SpaceDescriptor<T> {
        &self.desc
    }

    pub fn region(&self) -> Region<T> {
        self.region
    }

    pub fn admissible_region(&self) -> Option<Region<T>> {
        self.admissible
    }

    pub fn admits(&self, lambda: Complex<T>) -> bool {
        self.admissible.is_some_and(|r| r.contains(lambda))
    }

    pub fn eigenvector(&self, lambda: Complex<T>) -> Result<GridFunction<T>> {
        (self.eigenvector)(lambda)
    }

    pub fn apply_generator(&self, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        (self.generator)(f)
    }

    /// Same generator, eigenvectors multiplied by `c`.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        let inner = Arc::clone(&self.eigenvector);
        EigenFamily {
            name: format!("{}·{c}", self.name),
            eigenvector: Arc::new(move |l| Ok(inner(l)?.scale(c))),
            ..self.clone()
        }
    }

    /// Negative control: adds `amplitude · max|x_λ|` times seeded unit-variance
    /// noise to every eigenvector sample.
    pub fn with_noise(&self, amplitude: T, seed: u64) -> Self {
        let inner = Arc::clone(&self.eigenvector);
        let n = self.desc.n();
        let mut rng = stream(seed, "eigenvector-noise");
        let noise: Arc<Vec<Complex<T>>> = Arc::new(
            (0..n)
                .map(|_| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
                .collect(),
        );
        EigenFamily {
            name: format!("{} + noise", self.name),
            eigenvector: Arc::new(move |l| {
                let x = inner(l)?;
                let values = x.values();
                let peak = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
                let out = values.iter().zip(noise.iter()).map(|(v, e)| v + e * (amplitude * peak)).collect();
                x.with_values(out)
            }),
            ..self.clone()
        }
    }
}

/// Eigenvectors `x_λ(x) = e^{(λ−κ) x^α}` of the weighted conformable
/// translation generator `A = α^{-1}∂_x^α + κ`, discretized as in
/// [`translation_generator`].
///
/// `λ` is admissible when `Re(λ − κ) < −ln(10^{12}) / ξ_max`, which keeps the
/// mass beyond the window below `10^{-12}` of the norm.
pub fn weighted_translation_eigenfamily<T: Real>(
    desc: &SpaceDescriptor<T>,
    cocycle: WeightCocycle<T>,
    region: Region<T>,
) -> EigenFamily<T> {
    let kappa = cocycle.kappa();
    let cap = kappa - T::lit(1e12).ln() / desc.grid().xi_max();
    let d = desc.clone();
    EigenFamily::new(
        format!("weighted translation κ={kappa}"),
        desc,
        region,
        move |lambda| {
            let rate = lambda - kappa;
            let xi = d.grid().xi();
            let values = xi.iter().map(|&u| (rate * u).exp()).collect();
            GridFunction::from_values(&d, Coordinates::Conformable, values)
        },
        move |f| translation_generator(cocycle, f),
    )
    .with_re_cap(cap)
}

/// `‖A x_λ − λ x_λ‖ / ‖x_λ‖` for each `λ`.
pub fn eigen_residuals<T: Real>(family: &EigenFamily<T>, lambdas: &[Complex<T>]) -> Result<Vec<T>> {
    let desc = family.space();
    lambdas
        .iter()
        .map(|&lambda| {
            let x = family.eigenvector(lambda)?;
            let size = norm_p_alpha(desc, &x)?;
            if !(size >= T::lit(1e-12)) {
                return Err(contract(format!("eigenvector sample at λ = {lambda} is numerically zero (‖x_λ‖ = {size:e})")));
            }
            let defect = family.apply_generator(&x)?.sub(&x.scale(lambda))?;
            Ok(norm_p_alpha(desc, &defect)? / size)
        })
        .collect()
}

/// Worst normalized eigen-residual over `lambdas` (`0` when empty).
pub fn eigen_residual<T: Real>(family: &EigenFamily<T>, lambdas: &[Complex<T>]) -> Result<T> {
    Ok(eigen_residuals(family, lambdas)?.into_iter().fold(T::zero(), T::max))
}

/// Central-difference Cauchy–Riemann defect `|∂_x F + i ∂_y F|` at each `λ`,
/// normalized by the largest `|F|` seen at the stencil points.
pub fn cauchy_riemann_defects<T: Real>(f: impl Fn(Complex<T>) -> Result<Complex<T>>, lambdas: &[Complex<T>], h: T) -> Result<Vec<T>> {
    let i = Complex::new(T::zero(), T::one());
    let two_h = T::lit(2.0) * h;
    let mut raw = Vec::with_capacity(lambdas.len());
    let mut peak = T::zero();
    for &l in lambdas {
        let samples = [f(l + h)?, f(l - h)?, f(l + i * h)?, f(l - i * h)?, f(l)?];
        peak = samples.iter().fold(peak, |m, v| m.max(v.norm()));
        let dx = (samples[0] - samples[1]) / two_h;
        let dy = (samples[2] - samples[3]) / two_h;
        raw.push((dx + i * dy).norm());
    }
    Ok(raw.into_iter().map(|d| if peak > T::zero() { d / peak } else { d }).collect())
}

/// `F_φ(λ) = ⟨φ, x_λ⟩ = ∫ φ̄ x_λ x^{α−1} dx`.
pub fn pairing<T: Real>(family: &EigenFamily<T>, phi: &GridFunction<T>, lambda: Complex<T>) -> Result<Complex<T>> {
    inner_product(family.space(), &family.eigenvector(lambda)?, phi)
}

fn check_lattice<T: Real>(family: &EigenFamily<T>, lambdas: &[Complex<T>], h: T) -> Result<()> {
    if !(h > T::zero()) {
        return Err(domain(format!("difference step must be positive, got {h}")));
    }
    let region = family.admissible_region().ok_or_else(|| domain("admissible region is empty"))?;
    match lambdas.iter().find(|&&l| !region.contains_with_margin(l, T::lit(2.0) * h)) {
        Some(l) => Err(domain(format!("λ = {l} with step {h} escapes {region}"))),
        None => Ok(()),
    }
}

/// Per-`λ` Cauchy–Riemann defect, maximized over `phis`.
pub fn analyticity_defects<T: Real>(
    family: &EigenFamily<T>,
    phis: &[GridFunction<T>],
    lambdas: &[Complex<T>],
    h: T,
) -> Result<Vec<T>> {
    check_lattice(family, lambdas, h)?;
    let mut worst = vec![T::zero(); lambdas.len()];
    for phi in phis {
        let d = cauchy_riemann_defects(|l| pairing(family, phi, l), lambdas, h)?;
        for (w, v) in worst.iter_mut().zip(d) {
            *w = w.max(v);
        }
    }
    Ok(worst)
}

/// Largest Cauchy–Riemann defect of `λ ↦ ⟨φ, x_λ⟩` over `phis` and `lambdas`.
///
/// Every stencil point `λ ± h`, `λ ± ih` must stay inside the admissible
/// region with margin `h`.
pub fn analyticity_check<T: Real>(family: &EigenFamily<T>, phis: &[GridFunction<T>], lambdas: &[Complex<T>], h: T) -> Result<T> {
    Ok(analyticity_defects(family, phis, lambdas, h)?.into_iter().fold(T::zero(), T::max))
}

/// `min_φ max_λ |⟨φ, x_λ⟩|` over normalized `phis`.
pub fn nondegeneracy_check<T: Real>(family: &EigenFamily<T>, phis: &[GridFunction<T>], lambdas: &[Complex<T>]) -> Result<T> {
    if phis.is_empty() || lambdas.is_empty() {
        return Ok(T::zero());
    }
    let xs: Vec<GridFunction<T>> = lambdas.iter().map(|&l| family.eigenvector(l)).collect::<Result<_>>()?;
    let desc = family.space();
    let mut margin = T::infinity();
    for phi in phis {
        let mut best = T::zero();
        for x in &xs {
            best = best.max(inner_product(desc, x, phi)?.norm());
        }
        margin = margin.min(best);
    }
    Ok(margin)
}

/// Sixteen functionals with unit `L^{p′,α}` norm: four indicators, four
/// Gaussians in `ξ` and eight random band-limited profiles, all supported in
/// `ξ ∈ (0, min(8, ξ_max)]`.
pub fn functional_library<T: Real>(desc: &SpaceDescriptor<T>, seed: u64) -> Result<Vec<GridFunction<T>>> {
    let top = desc.grid().xi_max().to_f64_lossy().min(8.0);
    let xi: Vec<f64> = desc.grid().xi().iter().map(|v| v.to_f64_lossy()).collect();
    let build = |f: &dyn Fn(f64) -> (f64, f64)| -> Result<GridFunction<T>> {
        let values = xi.iter().map(|&u| {
            let (re, im) = if u <= top { f(u) } else { (0.0, 0.0) };
            Complex::new(T::lit(re), T::lit(im))
        });
        GridFunction::from_values(desc, Coordinates::Conformable, values.collect())
    };
    let mut raw: Vec<GridFunction<T>> = Vec::with_capacity(16);
    for (a, b) in [(0.0, 0.125), (0.0, 0.5), (0.25, 0.75), (0.5, 1.0)] {
        raw.push(build(&|u| (if u > a * top && u <= b * top { 1.0 } else { 0.0 }, 0.0))?);
    }
    for (centre, width) in [(0.1, 0.05), (0.3, 0.1), (0.55, 0.08), (0.8, 0.15)] {
        let (c, w) = (centre * top, width * top);
        raw.push(build(&|u| ((-((u - c) / w).powi(2)).exp(), 0.0))?);
    }
    let mut rng = stream(seed, "dsw-functionals");
    for _ in 0..8 {
        let modes: Vec<(f64, f64, f64)> = (1..=6)
            .map(|k| {
                let omega = k as f64 * std::f64::consts::PI / top;
                (omega, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
            .collect();
        raw.push(build(&|u| {
            let window = (std::f64::consts::PI * u / top).sin();
            modes.iter().fold((0.0, 0.0), |(re, im), &(omega, a, b)| {
                (re + window * a * (omega * u).cos(), im + window * b * (omega * u).sin())
            })
        })?);
    }
    let dual = desc.conjugate_exponent();
    raw.into_iter()
        .map(|phi| {
            let size = norm_with_exponent(&phi, dual);
            if !(size > T::zero()) {
                return Err(contract("functional library entry vanishes on this grid"));
            }
            Ok(phi.scale(Complex::new(T::one() / size, T::zero())))
        })
        .collect()
}

/// Aggregates the four sub-checks into a report.
///
/// `λ` samples outside the admissible region are rejected (and counted)
/// rather than tested.
pub fn dsw_verdict<T: Real>(family: &EigenFamily<T>, config: &DswConfig<T>) -> Result<DswReport<T>> {
    let th = config.thresholds;
    let admissible = family.admissible_region();
    let imag_axis_hit = admissible.as_ref().is_some_and(imag_axis_intersection);
    let margin = T::lit(2.0) * config.h;
    let (kept, rejected): (Vec<_>, Vec<_>) = config
        .lambdas
        .iter()
        .partition(|&&l| admissible.is_some_and(|r| r.contains_with_margin(l, margin)));
    let kept: Vec<Complex<T>> = kept.into_iter().copied().collect();
    let eigen = eigen_residuals(family, &kept)?;
    let cr = if kept.is_empty() { Vec::new() } else { analyticity_defects(family, &config.phis, &kept, config.h)? };
    let nondegeneracy_margin = nondegeneracy_check(family, &config.phis, &kept)?;
    let max_eigen_residual = eigen.iter().copied().fold(T::zero(), T::max);
    let max_cr_residual = cr.iter().copied().fold(T::zero(), T::max);

    let rows = kept
        .iter()
        .zip(eigen.iter().zip(cr.iter()))
        .map(|(&lambda, (&eigen_residual, &cr_residual))| LambdaRow { lambda, eigen_residual, cr_residual })
        .collect();
    let mut report = DswReport {
        family: family.name().to_string(),
        region: family.region(),
        admissible_region: admissible,
        max_eigen_residual,
        imag_axis_hit,
        max_cr_residual,
        nondegeneracy_margin,
        thresholds: th,
        rejected_lambdas: rejected.into_iter().copied().collect(),
        functionals: config.phis.len(),
        verdict: Verdict::HypothesesSupported,
        rows,
    };
    report.verdict = report.judge(&th);
    Ok(report)
}

#[cfg(test)]
mod tests;
