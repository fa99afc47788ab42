use std::fmt::Write as _;

use num_complex::Complex;

use conformal_flow::dsw::{dsw_verdict, weighted_translation_eigenfamily, DswConfig};
use conformal_flow::kernel::{
    clock, clock_inverse, conformable_derivative, conformable_integral, default_epsilons, direct_weighted_integral,
    factor_through_clock, library, Order, ScalarFunction,
};
use conformal_flow::selftest::{run_all, Bound, SuiteOptions};
use conformal_flow::semigroup::{
    alpha_from_classical, classical_from_alpha, conformable_exponential, diagonal_multiplication, matrix_exponential,
    mild_solution, write_mild_solution_csv, Matrix2, OperatorFamily,
};
use conformal_flow::spaces::{distance, inner_product, norm, norm_lp, norm_p_alpha, u_p, write_csv, Coordinates, GridFunction};
use conformal_flow::translation::{
    build_hypercyclic_candidate, default_time_grid, orbit_trace, step_targets, weighted_translation_family, TargetList,
};
use conformal_flow::Result;

use crate::descriptor::{Command, EvolveFamily, Experiment};
use crate::output::{Artifact, CheckLine};

/// Everything a command produced, before anything touches the disk.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<CheckLine>,
    pub console: String,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(e: &Experiment) -> Result<RunOutput> {
    match e.command {
        Command::Transform => transform(e),
        Command::Evolve => evolve(e),
        Command::Orbit => orbit(e),
        Command::Dsw => dsw(e),
        Command::Isometry => isometry(e),
        Command::Selftest => Ok(selftest(e)),
    }
}

fn relative(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn richardson(order: Order<f64>, f: &ScalarFunction<f64>, t: f64) -> Result<Complex<f64>> {
    let eps = default_epsilons(order, t);
    let (coarse, fine) = (eps[eps.len() - 2], eps[eps.len() - 1]);
    let qc = conformable_derivative(order, f, t, coarse)?;
    let qf = conformable_derivative(order, f, t, fine)?;
    Ok((qf * 4.0 - qc) / 3.0)
}

fn classical_richardson(g: &ScalarFunction<f64>, s: f64, coarse: f64, fine: f64) -> Complex<f64> {
    let q = |d: f64| (g.eval(s + d) - g.eval(s - d)) / (2.0 * d);
    (q(fine) * 4.0 - q(coarse)) / 3.0
}

const SAMPLE_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn transform(e: &Experiment) -> Result<RunOutput> {
    let mut csv = String::from("function,alpha,identity,max_error\n");
    let mut out = RunOutput::default();
    let round_trip_times: Vec<f64> = (0..=60).map(|k| 10f64.powf(-3.0 + 0.1 * k as f64)).collect();
    let mut worst = 0.0f64;
    for &order in &e.orders {
        let a = order.alpha();
        for f in library::<f64>() {
            let g = factor_through_clock(order, &f);
            let mut rows = [
                ("clock_round_trip", 0.0f64),
                ("factorization", 0.0),
                ("derivative_time_change", 0.0),
                ("integral", 0.0),
            ];
            for &t in &round_trip_times {
                let back = clock_inverse(order, clock(order, t)?)?;
                rows[0].1 = rows[0].1.max((back - t).abs() / t);
            }
            for &t in &SAMPLE_TIMES {
                let s = clock(order, t)?;
                rows[1].1 = rows[1].1.max(relative(g.eval(s), f.eval(t)));
                let q = richardson(order, &f, t)?;
                let eps = default_epsilons(order, t);
                let classical = classical_richardson(&g, s, eps[eps.len() - 2], eps[eps.len() - 1]);
                rows[2].1 = rows[2].1.max(relative(q, classical));
            }
            let lhs = conformable_integral(order, &f, 0.0, 2.0, 1e-12)?;
            let rhs = direct_weighted_integral(order, &f, 0.0, 2.0)?;
            rows[3].1 = relative(lhs, rhs);
            for (identity, err) in rows {
                writeln!(csv, "{},{:.16e},{},{:.16e}", f.name(), a, identity, err).unwrap();
                worst = worst.max(err);
                if err > e.tolerance {
                    out.checks.push(CheckLine::new(
                        format!("{} α={a} {identity}", f.name()),
                        false,
                        format!("{err:.3e} > {:.0e}", e.tolerance),
                    ));
                }
            }
        }
    }
    out.checks.push(CheckLine::new(
        "transform identities",
        worst <= e.tolerance,
        format!("max error {worst:.3e} (≤ {:.0e})", e.tolerance),
    ));
    writeln!(out.console, "transform: max identity error {worst:.3e} over α ∈ {:?}", e.orders.iter().map(|o| o.alpha()).collect::<Vec<_>>()).unwrap();
    out.artifacts.push(Artifact::text("transform_report.csv", csv));
    Ok(out)
}

fn evolve_family(e: &Experiment) -> Result<OperatorFamily<f64>> {
    let order = e.orders[0];
    match e.family {
        EvolveFamily::Exponential => Ok(conformable_exponential(order, Complex::new(-0.5, 0.0))),
        EvolveFamily::Heat => alpha_from_classical(
            &diagonal_multiplication("heat", |y: f64| Complex::new(-y * y / 50.0, y / 10.0)),
            order,
        ),
        EvolveFamily::Rotation => alpha_from_classical(&matrix_exponential(Matrix2::from_real([[0.0, 1.0], [-1.0, 0.0]])), order),
        EvolveFamily::Translation => alpha_from_classical(&weighted_translation_family(order, e.kappa), order),
    }
}

fn evolve(e: &Experiment) -> Result<RunOutput> {
    let order = e.orders[0];
    let family = evolve_family(e)?;
    let classical = classical_from_alpha(&family, order)?;
    let x0 = GridFunction::sample(&e.space, Coordinates::Conformable, |x: f64| Complex::new((-x).exp(), 0.5 * (-2.0 * x).exp()))?;
    let times: Vec<f64> = (0..=20).map(|k| e.t_max * k as f64 / 20.0).collect();
    let clocks: Vec<f64> = times.iter().map(|&t| clock(order, t)).collect::<Result<_>>()?;
    let xs = mild_solution(&family, &x0, &times)?;
    let ys = mild_solution(&classical, &x0, &clocks)?;
    let scale = 1.0 + norm(&e.space, &x0)?;
    let mut report = String::from("t,s,norm,correspondence_distance\n");
    let mut worst = 0.0f64;
    for ((t, s), (x, y)) in times.iter().zip(&clocks).zip(xs.iter().zip(&ys)) {
        let d = distance(&e.space, x, y)?;
        worst = worst.max(d / scale);
        writeln!(report, "{t:.16e},{s:.16e},{:.16e},{d:.16e}", norm(&e.space, x)?).unwrap();
    }
    let mut states = Vec::new();
    write_mild_solution_csv(order, &times, &xs, &mut states)?;
    let mut out = RunOutput::default();
    out.checks.push(CheckLine::new(
        format!("{} mild-solution correspondence", family.name()),
        worst <= e.tolerance,
        format!("max distance/(1+‖x₀‖) {worst:.3e} (≤ {:.0e})", e.tolerance),
    ));
    writeln!(out.console, "evolve {}: {} times up to t = {}, max correspondence gap {worst:.3e}", family.name(), times.len(), e.t_max).unwrap();
    out.artifacts.push(Artifact::new("evolve.csv", states));
    out.artifacts.push(Artifact::text("evolve_report.csv", report));
    Ok(out)
}

fn orbit(e: &Experiment) -> Result<RunOutput> {
    let d = &e.space;
    let targets = TargetList::new(step_targets(d, 1.0, e.targets, e.seed)?, 1.0, e.epsilon)?;
    let cand = build_hypercyclic_candidate(d, e.kappa, &targets)?;
    let grid = default_time_grid(d, &cand.hit_times, d.grid().xi_max(), 200);
    let trace = orbit_trace(d, e.kappa, &cand.f, &targets, &grid)?;
    let mut out = RunOutput::default();
    let mut meta = cand.metadata();
    writeln!(out.console, "{:>6} {:>22} {:>22} {:>22}", "target", "hit_time", "distance", "tail_bound").unwrap();
    for (j, &t) in cand.hit_times.iter().enumerate() {
        let dist = trace.at(t, j).unwrap_or(f64::INFINITY);
        writeln!(out.console, "{j:>6} {t:>22.16e} {dist:>22.16e} {:>22.16e}", cand.tail_bounds[j]).unwrap();
        writeln!(meta, "measured_distance_{j}={dist:.16e}").unwrap();
        out.checks.push(CheckLine::new(format!("target {j} hit"), dist <= e.epsilon, format!("{dist:.3e} (≤ {})", e.epsilon)));
    }
    writeln!(out.console, "{} of {} targets hit within ε = {}", out.checks.iter().filter(|c| c.passed).count(), targets.len(), e.epsilon).unwrap();
    let mut csv = Vec::new();
    trace.write_csv(&mut csv)?;
    let mut f = Vec::new();
    write_csv(&cand.f, &mut f)?;
    out.artifacts.push(Artifact::new("orbit.csv", csv));
    out.artifacts.push(Artifact::text("orbit_metadata.txt", meta));
    out.artifacts.push(Artifact::new("candidate.csv", f));
    Ok(out)
}

fn dsw(e: &Experiment) -> Result<RunOutput> {
    let mut family = weighted_translation_eigenfamily(&e.space, e.kappa, e.region);
    if e.inject_negative_control {
        family = family.with_noise(0.01, e.seed);
    }
    let config = DswConfig::standard(&family, e.seed)?;
    let report = dsw_verdict(&family, &config)?;
    let mut out = RunOutput::default();
    out.checks.push(CheckLine::new("dsw verdict", report.verdict.is_supported(), report.verdict.to_string()));
    writeln!(out.console, "{}", report.key_values().trim_end()).unwrap();
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    out.artifacts.push(Artifact::text("dsw_report.txt", report.key_values()));
    out.artifacts.push(Artifact::new("dsw_lambdas.csv", csv));
    Ok(out)
}

type Profile = (&'static str, fn(f64) -> Complex<f64>);

/// Profiles in the transformed variable `ξ = x^α`.
const PROFILES: [Profile; 5] = [
    ("decay", |u| Complex::new((-u).exp(), 0.0)),
    ("bump", |u| Complex::new(u * (-u).exp(), 0.0)),
    ("gauss", |u| Complex::new((-(u - 3.0) * (u - 3.0)).exp(), 0.0)),
    ("chirp", |u| Complex::new(0.0, u).exp() * (-0.5 * u).exp()),
    ("step", |u| Complex::new(if u <= 2.0 { 1.0 } else { 0.0 }, 0.0)),
];

fn isometry(e: &Experiment) -> Result<RunOutput> {
    let d = &e.space;
    let a = d.order().alpha();
    let sample = |prof: fn(f64) -> Complex<f64>| GridFunction::sample(d, Coordinates::Conformable, move |x: f64| prof(x.powf(a)));
    let mut csv = String::from("profile,p,alpha,norm_p_alpha,norm_lp,relative_gap\n");
    let mut out = RunOutput::default();
    let mut fs = Vec::new();
    for (name, prof) in PROFILES {
        let f = sample(prof)?;
        let nf = norm_p_alpha(d, &f)?;
        let ng = norm_lp(d, &u_p(d, &f)?)?;
        let gap = (ng - nf).abs() / nf;
        writeln!(csv, "{name},{:.16e},{a:.16e},{nf:.16e},{ng:.16e},{gap:.16e}", d.p()).unwrap();
        out.checks.push(CheckLine::new(format!("{name} norm"), gap <= e.tolerance, format!("{gap:.3e} (≤ {:.0e})", e.tolerance)));
        fs.push((name, f));
    }
    let mut artifacts = vec![Artifact::text("isometry_report.csv", csv)];
    if d.p() == 2.0 {
        let mut ip = String::from("left,right,re_inner,im_inner,relative_gap\n");
        for (i, (nf, f)) in fs.iter().enumerate() {
            for (ng, g) in &fs[i..] {
                let rhs = inner_product(d, f, g)?;
                let lhs = inner_product(d, &u_p(d, f)?, &u_p(d, g)?)?;
                let gap = (lhs - rhs).norm() / (norm_p_alpha(d, f)? * norm_p_alpha(d, g)?);
                writeln!(ip, "{nf},{ng},{:.16e},{:.16e},{gap:.16e}", rhs.re, rhs.im).unwrap();
                out.checks.push(CheckLine::new(
                    format!("⟨{nf},{ng}⟩ inner product"),
                    gap <= e.tolerance,
                    format!("{gap:.3e} (≤ {:.0e})", e.tolerance),
                ));
            }
        }
        artifacts.push(Artifact::text("inner_products.csv", ip));
    }
    writeln!(
        out.console,
        "isometry p={} α={a}: {} of {} checks within {:.0e}",
        d.p(),
        out.checks.iter().filter(|c| c.passed).count(),
        out.checks.len(),
        e.tolerance
    )
    .unwrap();
    out.artifacts = artifacts;
    Ok(out)
}

fn bound_text(b: Bound) -> String {
    match b {
        Bound::AtMost(l) => format!("<= {l:e}"),
        Bound::AtLeast(l) => format!(">= {l:e}"),
        Bound::Within(lo, hi) => format!("in [{lo}; {hi}]"),
        Bound::Holds => "holds".to_string(),
    }
}

fn selftest(e: &Experiment) -> RunOutput {
    let opts = SuiteOptions {
        n: e.space.n(),
        seed: e.seed,
        inject_negative_controls: e.inject_negative_control,
    };
    let outcomes = run_all(&opts);
    let mut out = RunOutput::default();
    let mut csv = String::from("suite_id,suite,check,value,bound,passed\n");
    writeln!(out.console, "{:>3}  {:<32} {:>7} {:>9}  status", "id", "suite", "checks", "seconds").unwrap();
    for o in &outcomes {
        for c in &o.checks {
            writeln!(csv, "{},{},\"{}\",{:.16e},{},{}", o.id, o.name, c.name.replace('"', "'"), c.value, bound_text(c.bound), c.passed).unwrap();
        }
        writeln!(
            out.console,
            "{:>3}  {:<32} {:>7} {:>9.3}  {}",
            o.id,
            o.name,
            o.checks.len(),
            o.elapsed.as_secs_f64(),
            if o.passed() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        let failures = o.failures();
        for f in &failures {
            writeln!(out.console, "       failed: {f}").unwrap();
        }
        out.checks.push(CheckLine::new(format!("suite {} {}", o.id, o.name), o.passed(), failures.join("; ")));
    }
    out.artifacts.push(Artifact::text("selftest.csv", csv));
    out
}
