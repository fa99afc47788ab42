use num_complex::Complex;

use super::{Check, SuiteOptions};
use crate::dsw::{dsw_verdict, weighted_translation_eigenfamily, DswConfig, Region, ViolationReason};
use crate::error::Result;
use crate::kernel::{
    clock, clock_inverse, conformable_integral, convergence_against, default_epsilons, direct_weighted_integral, library,
    DifferenceScheme, Order, ScalarFunction,
};
use crate::real::ulps_between;
use crate::semigroup::{
    alpha_from_classical, broken_clock, check_alpha_semigroup_law, classical_from_alpha, conformable_exponential,
    diagonal_multiplication, estimate_alpha_generator, generator_epsilons, matrix_exponential, mild_solution,
    random_law_probes, scalar_exponential, Matrix2, OperatorFamily,
};
use crate::spaces::{distance, inner_product, norm, norm_lp, norm_p_alpha, u_p, Coordinates, GridFunction, SpaceDescriptor};
use crate::translation::{
    build_hypercyclic_candidate, conjugacy_check, default_time_grid, orbit_invariance_check, orbit_trace, step_targets,
    weighted_orbit, TargetList, WeightCocycle,
};

fn ord(a: f64) -> Result<Order<f64>> {
    Order::new(a)
}

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn in_xi(d: &SpaceDescriptor<f64>, f: impl Fn(f64) -> Complex<f64>) -> Result<GridFunction<f64>> {
    let a = d.order().alpha();
    GridFunction::sample(d, Coordinates::Conformable, |x: f64| f(x.powf(a)))
}

fn bump(u: f64, lo: f64, hi: f64) -> f64 {
    if u <= lo || u >= hi {
        0.0
    } else {
        let s = (u - lo) / (hi - lo);
        (s * (1.0 - s)).powi(3) * 64.0
    }
}

pub(super) fn clock_round_trip(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let count = opts.n.max(2);
    let times: Vec<f64> = (0..count).map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / (count - 1) as f64)).collect();
    let mut checks = Vec::new();
    for &a in &[0.1, 0.25, 0.5, 0.75, 1.0] {
        let o = ord(a)?;
        let mut worst = 0.0f64;
        for &t in &times {
            worst = worst.max(ulps_between(clock_inverse(o, clock(o, t)?)?, t));
        }
        checks.push(Check::at_most(format!("α={a} max round-trip ulps"), worst, 4.0));
    }
    Ok(checks)
}

pub(super) fn derivative_order(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let schemes: &[(DifferenceScheme, &str)] = if opts.inject_negative_controls {
        &[(DifferenceScheme::Central, "central"), (DifferenceScheme::Forward, "negative-control: forward")]
    } else {
        &[(DifferenceScheme::Central, "central")]
    };
    for &(scheme, label) in schemes {
        for &a in &[0.25, 0.5, 0.75, 1.0] {
            let o = ord(a)?;
            let mut worst = f64::INFINITY;
            for f in library::<f64>() {
                for &t in &[0.7f64, 1.3, 2.9] {
                    let w = if a == 1.0 { 1.0 } else { t.powf(1.0 - a) };
                    let reference = f.derivative(t).expect("library derivative") * w;
                    let rep = convergence_against(o, &f, t, &default_epsilons(o, t), scheme, reference)?;
                    worst = worst.min(rep.fitted_order);
                }
            }
            checks.push(Check::at_least(format!("{label} α={a} min fitted order"), worst, 1.9));
        }
    }
    Ok(checks)
}

pub(super) fn integral_cases() -> Vec<(&'static str, f64, f64, f64)> {
    vec![
        ("exp_decay", 0.5, 0.0, 2.0),
        ("sin", 0.25, 0.0, 3.0),
        ("cubic", 0.75, 0.0, 1.5),
        ("oscillator", 0.5, 0.0, 4.0),
        ("power_0.3", 0.25, 0.0, 1.0),
        ("cos", 1.0, 0.0, 2.0),
        ("exp_growth", 0.75, 0.5, 3.0),
        ("power_2.5", 0.5, 0.1, 2.0),
        ("sin", 0.5, 1.0, 5.0),
        ("exp_decay", 0.1, 0.0, 1.0),
        ("cubic", 0.25, 0.2, 1.7),
        ("oscillator", 1.0, 0.5, 6.0),
    ]
}

pub(super) fn integral_identity(_: &SuiteOptions) -> Result<Vec<Check>> {
    let lib = library::<f64>();
    let mut checks = Vec::new();
    for (name, a, lo, hi) in integral_cases() {
        let f = lib.iter().find(|f| f.name() == name).expect("library entry");
        let o = ord(a)?;
        let transformed = conformable_integral(o, f, lo, hi, 1e-12)?;
        let direct = direct_weighted_integral(o, f, lo, hi)?;
        let rel = (transformed - direct).norm() / direct.norm();
        checks.push(Check::at_most(format!("{name} α={a} on [{lo}, {hi}] rel err"), rel, 1e-7));
    }
    Ok(checks)
}

type Profile = (&'static str, fn(f64) -> Complex<f64>);

fn isometry_profiles() -> Vec<Profile> {
    vec![
        ("decay", |u| c((-u).exp())),
        ("bump", |u| c(u * (-u).exp())),
        ("gauss", |u| c((-(u - 3.0) * (u - 3.0)).exp())),
        ("chirp", |u| Complex::new(0.0, u).exp() * (-0.5 * u).exp()),
        ("step", |u| c(if u <= 2.0 { 1.0 } else { 0.0 })),
    ]
}

pub(super) fn isometry(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &p in &[1.0, 2.0, 4.0] {
        for &a in &[0.25, 0.5, 1.0] {
            let d = SpaceDescriptor::new(p, ord(a)?, 40f64.powf(1.0 / a), opts.n)?;
            let mut worst = 0.0f64;
            for (_, prof) in isometry_profiles() {
                let f = in_xi(&d, prof)?;
                let nf = norm_p_alpha(&d, &f)?;
                let ng = norm_lp(&d, &u_p(&d, &f)?)?;
                worst = worst.max((ng - nf).abs() / nf);
            }
            checks.push(Check::at_most(format!("p={p} α={a} relative norm gap"), worst, 1e-6));
            if p == 2.0 {
                let profiles = isometry_profiles();
                let mut gap = 0.0f64;
                for (i, (_, pf)) in profiles.iter().enumerate() {
                    for (_, pg) in &profiles[i..] {
                        let (f, g) = (in_xi(&d, *pf)?, in_xi(&d, *pg)?);
                        let lhs = inner_product(&d, &u_p(&d, &f)?, &u_p(&d, &g)?)?;
                        let rhs = inner_product(&d, &f, &g)?;
                        gap = gap.max((lhs - rhs).norm() / (norm_p_alpha(&d, &f)? * norm_p_alpha(&d, &g)?));
                    }
                }
                checks.push(Check::at_most(format!("p=2 α={a} inner-product gap"), gap, 1e-6));
            }
        }
    }
    Ok(checks)
}

fn nilpotent() -> Matrix2<f64> {
    Matrix2::from_real([[0.0, 1.0], [0.0, 0.0]])
}

fn exact_families(o: Order<f64>) -> Result<Vec<OperatorFamily<f64>>> {
    Ok(vec![
        conformable_exponential(o, c(1.0)),
        alpha_from_classical(&scalar_exponential(Complex::new(-0.3, 0.7)), o)?,
        alpha_from_classical(&matrix_exponential(nilpotent()), o)?,
        alpha_from_classical(&matrix_exponential(Matrix2::from_real([[-0.2, 0.5], [-0.5, -0.1]])), o)?,
        alpha_from_classical(&diagonal_multiplication("heat", |y: f64| Complex::new(-y * y / 50.0, y / 10.0)), o)?,
    ])
}

fn family_space(a: f64, n: usize) -> Result<SpaceDescriptor<f64>> {
    // even node count for the 2×2 matrix families
    SpaceDescriptor::new(2.0, ord(a)?, 16.0, n.max(2) & !1)
}

fn smooth(d: &SpaceDescriptor<f64>) -> Result<GridFunction<f64>> {
    GridFunction::sample(d, Coordinates::Conformable, |x| Complex::new((-x).exp(), (x / 3.0).sin()))
}

pub(super) fn semigroup_law(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let n = opts.n.min(2000);
    for &a in &[0.25, 0.5, 0.75] {
        let o = ord(a)?;
        let d = family_space(a, n)?;
        let probes = random_law_probes(&d, opts.seed, 100)?;
        for s in exact_families(o)? {
            let r = check_alpha_semigroup_law(&d, &s, o, &probes)?;
            checks.push(Check::at_most(format!("α={a} {} law residual", s.name()), r, 1e-10));
        }
        let broken = broken_clock(&scalar_exponential(Complex::new(0.0, 1.0)), o);
        let r = check_alpha_semigroup_law(&d, &broken, o, &probes)?;
        checks.push(Check::at_least(format!("α={a} unclocked family detected"), r, 0.1));
        if opts.inject_negative_controls {
            checks.push(Check::at_most(format!("negative-control: α={a} unclocked family obeys the law"), r, 1e-10));
        }
    }
    Ok(checks)
}

pub(super) fn generator_equality(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let a = 0.5;
    let o = ord(a)?;
    let d = family_space(a, opts.n.min(2000))?;
    let x = smooth(&d)?;
    let size = norm(&d, &x)?;
    let eps = generator_epsilons();
    let mut checks = Vec::new();
    for s in exact_families(o)? {
        let est = estimate_alpha_generator(&d, &s, o, &x, &eps)?;
        let worst = est.classical_agreement.iter().copied().fold(0.0, f64::max);
        checks.push(Check::at_most(format!("{} quotient gap / (1+‖x‖)", s.name()), worst / (1.0 + size), 1e-8));
    }
    let root = estimate_alpha_generator(&d, &conformable_exponential(o, c(1.0)), o, &x, &eps)?;
    checks.push(Check::at_most("exp(2√t) generator vs identity (relative)", distance(&d, &root.value, &x)? / size, 1e-6));
    let fam = alpha_from_classical(&matrix_exponential(nilpotent()), o)?;
    let est = estimate_alpha_generator(&d, &fam, o, &x, &eps)?;
    let vals = x.values();
    let mx = x.with_values(vals.chunks(2).flat_map(|p| nilpotent().apply([p[0], p[1]])).collect())?;
    checks.push(Check::at_most("nilpotent generator vs M (relative)", distance(&d, &est.value, &mx)? / norm(&d, &mx)?, 1e-6));
    Ok(checks)
}

pub(super) fn mild_correspondence(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &a in &[0.25, 0.5, 0.75] {
        let o = ord(a)?;
        let d = family_space(a, opts.n.min(2000))?;
        let x0 = smooth(&d)?;
        let scale = 1.0 + norm(&d, &x0)?;
        let times: Vec<f64> = (0..20).map(|k| 4.0 * k as f64 / 19.0).collect();
        let ss: Vec<f64> = times.iter().map(|&t| clock(o, t)).collect::<Result<_>>()?;
        for s in exact_families(o)? {
            let u = classical_from_alpha(&s, o)?;
            let xs = mild_solution(&s, &x0, &times)?;
            let ys = mild_solution(&u, &x0, &ss)?;
            let mut worst = 0.0f64;
            for (x, y) in xs.iter().zip(&ys) {
                worst = worst.max(distance(&d, x, y)? / scale);
            }
            checks.push(Check::at_most(format!("α={a} {} max distance / (1+‖x₀‖)", s.name()), worst, 1e-10));
        }
    }
    Ok(checks)
}

fn conjugacy_target() -> ScalarFunction<f64> {
    ScalarFunction::real("damped", |x: f64| (-0.3 * x.sqrt()).exp() * x.sqrt().cos())
}

pub(super) fn conjugacy(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let f = conjugacy_target();
    let mut checks = Vec::new();
    for &a in &[0.5, 0.75, 1.0] {
        let d = SpaceDescriptor::new(2.0, ord(a)?, 100.0, opts.n)?;
        let h = d.grid().spacing();
        let mut worst = conjugacy_check(&d, &f, 0.0)?;
        for k in [1usize, 7, 100] {
            worst = worst.max(conjugacy_check(&d, &f, k as f64 * h)?);
        }
        checks.push(Check::at_most(format!("α={a} aligned residual (units of eps)"), worst / f64::EPSILON, 4.0));
    }
    let base = (opts.n / 8).max(64);
    let x_max = 100.0;
    let d0 = SpaceDescriptor::new(2.0, ord(0.5)?, x_max, base)?;
    // phase 1/3 of a cell at every refinement
    let t = (20.0 + 1.0 / 3.0) * d0.grid().spacing();
    let mut prev: Option<f64> = None;
    for level in 0..4 {
        let d = SpaceDescriptor::new(2.0, ord(0.5)?, x_max, base << level)?;
        let r = conjugacy_check(&d, &f, t)?;
        if let Some(p) = prev {
            checks.push(Check::within(format!("generic shift ratio at n={}", base << level), r / p, 0.2, 0.35));
        }
        prev = Some(r);
    }
    Ok(checks)
}

pub(super) fn hypercyclic_space(n: usize) -> Result<SpaceDescriptor<f64>> {
    // ξ_max = 40 holds three blocks at κ = 1, ε = 0.1
    SpaceDescriptor::new(2.0, ord(0.5)?, 1600.0, n)
}

pub(super) fn hypercyclic(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let d = hypercyclic_space(opts.n)?;
    let eps = 0.1;
    let targets = TargetList::new(step_targets(&d, 1.0, 3, opts.seed)?, 1.0, eps)?;
    let cocycle = WeightCocycle::new(1.0)?;
    let cand = build_hypercyclic_candidate(&d, cocycle, &targets)?;
    let grid = default_time_grid(&d, &cand.hit_times, d.grid().xi_max(), 200);
    let trace = orbit_trace(&d, cocycle, &cand.f, &targets, &grid)?;
    let mut checks = Vec::new();
    for (j, &t) in cand.hit_times.iter().enumerate() {
        let dist = trace.at(t, j).unwrap_or(f64::INFINITY);
        checks.push(Check::at_most(format!("target {j} hit distance at t={t:.4}"), dist, eps));
        // the analytic tail bound holds in exact arithmetic; allow round-off of the target size
        let slack = 1e-12 * norm_p_alpha(&d, &targets.targets()[j])?;
        checks.push(Check::at_most(format!("target {j} distance minus tail bound"), dist - cand.tail_bounds[j], slack));
    }
    let f_norm = norm_p_alpha(&d, &cand.f)?;
    let big = targets.targets()[0].scale(c(2.0 * f_norm / norm_p_alpha(&d, &targets.targets()[0])?));
    let big_norm = norm_p_alpha(&d, &big)?;
    let control = TargetList::new(vec![big], 1.0, eps)?;
    let still = WeightCocycle::new(0.0)?;
    let trace0 = orbit_trace(&d, still, &cand.f, &control, &grid)?;
    let min0 = trace0.closest(0).map_or(f64::NAN, |(_, v)| v);
    let lower = big_norm - f_norm;
    checks.push(Check::at_least("κ=0 min distance minus (‖target‖ − ‖f‖)", min0 - lower, -1e-12 * big_norm));
    if opts.inject_negative_controls {
        checks.push(Check::at_most("negative-control: κ=0 orbit hits the control target", min0, eps));
    }
    Ok(checks)
}

pub(super) fn dsw_space(n: usize) -> Result<SpaceDescriptor<f64>> {
    // ξ_max = 60
    SpaceDescriptor::new(2.0, ord(0.5)?, 3600.0, n)
}

pub(super) fn dsw(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let d = dsw_space(opts.n)?;
    let region = Region::new(-0.5, 0.5, -1.0, 1.0)?;
    let fam = weighted_translation_eigenfamily(&d, WeightCocycle::new(1.0)?, region);
    let config = DswConfig::standard(&fam, opts.seed)?;
    let report = dsw_verdict(&fam, &config)?;
    let mut checks = vec![
        Check::holds("κ=1 verdict hypotheses-supported", report.verdict.is_supported()),
        Check::at_most("κ=1 max eigen residual", report.max_eigen_residual, 1e-6),
        Check::at_most("κ=1 max Cauchy–Riemann defect (h=1e-3)", report.max_cr_residual, 1e-4),
        Check::at_least("κ=1 nondegeneracy margin", report.nondegeneracy_margin, 1e-6),
    ];
    let neg = weighted_translation_eigenfamily(&d, WeightCocycle::new(-1.0)?, region);
    let config = DswConfig::standard(&neg, opts.seed)?;
    let report = dsw_verdict(&neg, &config)?;
    checks.push(Check::holds(
        "κ=−1 verdict hypotheses-violated(imag-axis)",
        report.verdict.reason() == Some(ViolationReason::ImagAxis),
    ));
    if opts.inject_negative_controls {
        let noisy = fam.with_noise(0.01, opts.seed);
        let config = DswConfig::standard(&noisy, opts.seed)?;
        let report = dsw_verdict(&noisy, &config)?;
        checks.push(Check::holds("negative-control: noisy eigenfamily supported", report.verdict.is_supported()));
    }
    Ok(checks)
}

pub(super) fn orbit_invariance(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // κt ≤ 8 keeps the amplified distances inside the absolute bound
    let times: Vec<f64> = (0..=40).map(|k| 0.2 * k as f64).collect();
    for &(p, a) in &[(2.0, 0.5), (1.0, 0.25), (3.0, 0.75)] {
        let d = SpaceDescriptor::new(p, ord(a)?, 1e4, opts.n)?;
        let span = d.grid().xi_max();
        let f = in_xi(&d, |u| c(bump(u, 0.1 * span, 0.6 * span)))?;
        let target = in_xi(&d, |u| c(bump(u, 0.0, 0.2 * span)))?;
        let r = orbit_invariance_check(&d, WeightCocycle::new(1.0)?, &f, &target, &times)?;
        checks.push(Check::at_most(format!("p={p} α={a} orbit distance gap / (1+‖f‖)"), r, 1e-8));
    }
    let d = hypercyclic_space(opts.n)?;
    let targets = step_targets(&d, 1.0, 3, opts.seed)?;
    let list = TargetList::new(targets.clone(), 1.0, 0.1)?;
    let cand = build_hypercyclic_candidate(&d, WeightCocycle::new(1.0)?, &list)?;
    let early: Vec<f64> = times.iter().copied().filter(|&t| t <= 8.0).collect();
    let mut worst = 0.0f64;
    for g in &targets {
        worst = worst.max(orbit_invariance_check(&d, WeightCocycle::new(1.0)?, &cand.f, g, &early)?);
    }
    checks.push(Check::at_most("hypercyclic candidate orbit distance gap / (1+‖f‖)", worst, 1e-8));
    let _ = weighted_orbit(&d, WeightCocycle::new(1.0)?, &cand.f, &early[..1])?;
    Ok(checks)
}
