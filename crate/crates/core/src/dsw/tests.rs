use super::*;
use crate::kernel::Order;
use proptest::prelude::*;

fn space(p: f64, a: f64, n: usize) -> SpaceDescriptor<f64> {
    // ξ-window (0, 60]
    SpaceDescriptor::new(p, Order::new(a).unwrap(), 60f64.powf(1.0 / a), n).unwrap()
}

fn unit_region() -> Region<f64> {
    Region::new(-0.5, 0.5, -1.0, 1.0).unwrap()
}

fn family(kappa: f64) -> EigenFamily<f64> {
    weighted_translation_eigenfamily(&space(2.0, 0.5, 10_000), WeightCocycle::new(kappa).unwrap(), unit_region())
}

fn indicator(desc: &SpaceDescriptor<f64>, lo: f64, hi: f64) -> GridFunction<f64> {
    let values = desc.grid().xi().iter().map(|&u| Complex::new(if u > lo && u <= hi { 1.0 } else { 0.0 }, 0.0)).collect();
    GridFunction::from_values(desc, Coordinates::Conformable, values).unwrap()
}

#[test]
fn region_validation_and_axis() {
    assert!(Region::new(0.0, 0.0, -1.0, 1.0).is_err());
    assert!(Region::new(-1.0, 1.0, 2.0, 1.0).is_err());
    assert!(Region::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
    assert!(Region::new(f64::NEG_INFINITY, 1.0, -1.0, 1.0).is_ok());
    assert!(imag_axis_intersection(&Region::new(-0.5, 0.5, -1.0, 1.0).unwrap()));
    assert!(!imag_axis_intersection(&Region::new(0.1, 0.9, -1.0, 1.0).unwrap()));
    assert!(!imag_axis_intersection(&Region::new(-1.0, 0.0, -1.0, 1.0).unwrap()));
}

#[test]
fn admissible_region_respects_truncation() {
    let fam = family(1.0);
    let r = fam.admissible_region().unwrap();
    assert_eq!(r, unit_region());
    assert!(fam.admits(Complex::new(0.0, 0.0)));
    let fam = family(-1.0);
    assert!(fam.admissible_region().is_none());
    let fam = family(0.6);
    let cap = 0.6 - 1e12f64.ln() / 60.0;
    assert_eq!(fam.admissible_region().unwrap().re(), (-0.5, cap));
}

#[test]
fn exponential_eigenvector_at_zero() {
    let fam = family(1.0);
    let lambda = Complex::new(0.0, 0.0);
    let x = fam.eigenvector(lambda).unwrap();
    for (v, &u) in x.values().iter().zip(fam.space().grid().xi()) {
        assert!((v.re - (-u).exp()).abs() <= 1e-15);
    }
    let r = eigen_residual(&fam, &[lambda]).unwrap();
    assert!(r <= 1e-8, "{r:e}");
}

#[test]
fn constant_eigenvector_on_the_window() {
    // λ = κ lies outside σ_p globally; checked on the truncated window only
    let fam = family(1.0);
    let lambda = Complex::new(1.0, 0.0);
    assert!(!fam.admits(lambda));
    assert!(fam.eigenvector(lambda).unwrap().values().iter().all(|v| *v == Complex::new(1.0, 0.0)));
    let r = eigen_residual(&fam, &[lambda]).unwrap();
    assert!(r <= 1e-10, "{r:e}");
}

#[test]
fn noisy_family_is_detected() {
    let fam = family(1.0).with_noise(0.01, 5);
    let r = eigen_residual(&fam, &[Complex::new(0.0, 0.3)]).unwrap();
    assert!(r > 1e-3, "{r:e}");
}

#[test]
fn zero_eigenvector_is_a_contract_error() {
    let desc = space(2.0, 0.5, 64);
    let d = desc.clone();
    let fam = EigenFamily::new(
        "zero",
        &desc,
        unit_region(),
        move |_| Ok(GridFunction::zeros(&d, Coordinates::Conformable)),
        |f| Ok(f.clone()),
    );
    match eigen_residual(&fam, &[Complex::new(0.1, 0.2)]) {
        Err(crate::Error::Contract(msg)) => assert!(msg.contains("0.1")),
        other => panic!("expected contract error, got {other:?}"),
    }
}

#[test]
fn eigen_residual_is_scale_invariant() {
    let fam = family(1.0);
    let lambdas = [Complex::new(-0.3, 0.4), Complex::new(0.2, -0.7)];
    let base = eigen_residuals(&fam, &lambdas).unwrap();
    for c in [Complex::new(8.0, 0.0), Complex::new(-0.25, 0.0), Complex::new(0.0, 1.0), Complex::new(0.0, -2.0)] {
        let scaled = eigen_residuals(&fam.scaled(c), &lambdas).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!(crate::real::ulps_between(*b, *a) <= 4.0, "c = {c}: {a:e} vs {b:e}");
        }
    }
    // generic scalings round each sample; the stencil amplifies that by 1/h
    let floor = f64::EPSILON / fam.space().grid().spacing();
    let scaled = eigen_residuals(&fam.scaled(Complex::new(0.37, -1.9)), &lambdas).unwrap();
    for (a, b) in base.iter().zip(&scaled) {
        assert!((a - b).abs() <= floor, "{a:e} vs {b:e}");
    }
}

#[test]
fn pairing_with_indicator_matches_closed_form() {
    let desc = space(2.0, 0.5, 12_000);
    let fam = weighted_translation_eigenfamily(&desc, WeightCocycle::new(1.0).unwrap(), unit_region());
    let phi = indicator(&desc, 0.0, 1.0);
    let h = desc.grid().spacing();
    for lambda in [Complex::new(0.0, 0.0), Complex::new(0.3, 0.5), Complex::new(-0.4, -0.9)] {
        let mu: Complex<f64> = lambda - 1.0;
        let exact = (mu.exp() - 1.0) / (mu * 0.5);
        let got = pairing(&fam, &phi, lambda).unwrap();
        assert!((got - exact).norm() <= 2.0 * h * exact.norm(), "λ = {lambda}: {got} vs {exact}");
    }
}

#[test]
fn indicator_pairing_is_analytic() {
    let fam = family(1.0);
    let phi = indicator(fam.space(), 0.0, 1.0);
    let lambdas = Region::new(-0.4, 0.4, -0.8, 0.8).unwrap().lattice(5, 5);
    let d = analyticity_check(&fam, &[phi], &lambdas, 1e-3).unwrap();
    assert!(d <= 1e-6, "{d:e}");
}

#[test]
fn cauchy_riemann_controls() {
    let lambdas: Vec<Complex<f64>> = [(0.6, 0.8), (0.0, 0.5), (-0.3, 0.1)].iter().map(|&(a, b)| Complex::new(a, b)).collect();
    let anti = cauchy_riemann_defects(|l: Complex<f64>| Ok(l.conj()), &lambdas, 1e-3).unwrap();
    // max |F| over the stencils is 1 + O(h)
    for d in &anti {
        assert!((d - 2.0).abs() < 4e-3, "{d}");
    }
    let flat = cauchy_riemann_defects(|_| Ok(Complex::new(3.0, -1.0)), &lambdas, 1e-3).unwrap();
    assert!(flat.iter().all(|&d| d == 0.0));
    let entire = cauchy_riemann_defects(|l: Complex<f64>| Ok((l * 2.0).exp()), &lambdas, 1e-3).unwrap();
    assert!(entire.iter().all(|&d| d < 1e-5));
}

#[test]
fn cauchy_riemann_defect_is_second_order() {
    let fam = family(1.0);
    let phi = functional_library(fam.space(), 3).unwrap();
    let lambdas = Region::new(-0.3, 0.3, -0.5, 0.5).unwrap().lattice(3, 3);
    let coarse = analyticity_check(&fam, &phi[4..6], &lambdas, 0.04).unwrap();
    let fine = analyticity_check(&fam, &phi[4..6], &lambdas, 0.02).unwrap();
    let ratio = fine / coarse;
    assert!((0.2..=0.35).contains(&ratio), "{coarse:e} → {fine:e} ratio {ratio}");
}

#[test]
fn lattice_must_fit_the_region() {
    let fam = family(1.0);
    let phi = indicator(fam.space(), 0.0, 1.0);
    let outside = [Complex::new(0.4995, 0.0)];
    assert!(matches!(analyticity_check(&fam, std::slice::from_ref(&phi), &outside, 1e-3), Err(crate::Error::Domain(_))));
    assert!(analyticity_check(&family(-1.0), &[phi], &[Complex::new(0.0, 0.0)], 1e-3).is_err());
}

#[test]
fn functional_library_is_normalized() {
    for &p in &[1.0, 2.0, 4.0] {
        let desc = space(p, 0.5, 4000);
        let lib = functional_library(&desc, 11).unwrap();
        assert_eq!(lib.len(), 16);
        let dual = desc.conjugate_exponent();
        for phi in &lib {
            assert!((norm_with_exponent(phi, dual) - 1.0).abs() < 1e-12);
        }
    }
    let a = functional_library(&space(2.0, 0.5, 500), 7).unwrap();
    let b = functional_library(&space(2.0, 0.5, 500), 7).unwrap();
    assert_eq!(a, b);
}

#[test]
fn nondegeneracy_margin_for_random_functionals() {
    let fam = family(1.0);
    let lambdas = Region::new(-0.4, 0.4, -0.8, 0.8).unwrap().lattice(5, 5);
    let lib = functional_library(fam.space(), 99).unwrap();
    let margin = nondegeneracy_check(&fam, &lib[8..], &lambdas).unwrap();
    assert!(margin > 1e-3, "{margin:e}");
}

#[test]
fn nondegeneracy_detects_functionals_blind_to_the_family() {
    let desc = space(2.0, 0.5, 2000);
    let d = desc.clone();
    let fam = EigenFamily::new(
        "zeroed beyond ξ = 10",
        &desc,
        unit_region(),
        move |lambda| {
            let rate = lambda - 1.0;
            let values = d.grid().xi().iter().map(|&u| if u > 10.0 { Complex::new(0.0, 0.0) } else { (rate * u).exp() }).collect();
            GridFunction::from_values(&d, Coordinates::Conformable, values)
        },
        |f| Ok(f.clone()),
    );
    let phi = indicator(&desc, 20.0, 30.0);
    let phi = phi.scale(Complex::new(1.0 / norm_with_exponent(&phi, 2.0), 0.0));
    let lambdas = Region::new(-0.4, 0.4, -0.8, 0.8).unwrap().lattice(3, 3);
    assert_eq!(nondegeneracy_check(&fam, &[phi], &lambdas).unwrap(), 0.0);
}

#[test]
fn growing_family_is_supported() {
    let fam = family(1.0);
    let config = DswConfig::standard(&fam, 42).unwrap();
    assert_eq!(config.lambdas.len(), 63);
    let report = dsw_verdict(&fam, &config).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesesSupported, "{}", report.key_values());
    assert!(report.max_eigen_residual <= 1e-6);
    assert!(report.max_cr_residual <= 1e-4);
    assert!(report.nondegeneracy_margin >= 1e-6);
    assert!(report.imag_axis_hit);
    let text = report.key_values();
    assert!(text.contains("verdict=hypotheses-supported"));
    assert!(text.contains("does not prove chaos"));
}

#[test]
fn decaying_family_misses_the_imaginary_axis() {
    let fam = family(-1.0);
    let config = DswConfig::standard(&fam, 42).unwrap();
    let report = dsw_verdict(&fam, &config).unwrap();
    assert_eq!(report.verdict.reason(), Some(ViolationReason::ImagAxis));
    assert_eq!(report.verdict.to_string(), "hypotheses-violated(imag-axis)");
    assert!(!report.imag_axis_hit);
}

#[test]
fn empty_lambda_sample_is_insufficient() {
    let fam = family(1.0);
    let mut config = DswConfig::standard(&fam, 42).unwrap();
    config.lambdas.clear();
    let report = dsw_verdict(&fam, &config).unwrap();
    assert_eq!(report.verdict.to_string(), "hypotheses-violated(insufficient-samples)");
}

#[test]
fn samples_outside_the_spectrum_are_rejected() {
    let fam = family(0.6);
    let mut config = DswConfig::standard(&fam, 1).unwrap();
    config.lambdas.push(Complex::new(0.45, 0.0));
    let report = dsw_verdict(&fam, &config).unwrap();
    assert_eq!(report.rejected_lambdas, vec![Complex::new(0.45, 0.0)]);
    assert!(report.key_values().contains("outside σ_p at this truncation"));
}

#[test]
fn report_csv_shape() {
    let fam = family(1.0);
    let mut config = DswConfig::standard(&fam, 42).unwrap();
    config.lambdas.truncate(3);
    let report = dsw_verdict(&fam, &config).unwrap();
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re_lambda,im_lambda,eigen_residual,cr_residual");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tightening_never_rescues_a_violation(
        e in 1e-14f64..1.0, c in 1e-14f64..1.0, m in 1e-9f64..1.0,
        te in 0.0f64..1.0, tc in 0.0f64..1.0, tm in 1.0f64..10.0,
        axis in any::<bool>(),
    ) {
        let report = DswReport {
            family: "synthetic".into(),
            region: unit_region(),
            admissible_region: Some(unit_region()),
            max_eigen_residual: e,
            imag_axis_hit: axis,
            max_cr_residual: c,
            nondegeneracy_margin: m,
            thresholds: Thresholds::default(),
            rejected_lambdas: Vec::new(),
            functionals: 16,
            verdict: Verdict::HypothesesSupported,
            rows: vec![LambdaRow { lambda: Complex::new(0.0, 0.0), eigen_residual: e, cr_residual: c }],
        };
        let base = Thresholds::default();
        let loose = report.with_thresholds(base);
        let tight = report.with_thresholds(Thresholds {
            eigen_residual: base.eigen_residual * te,
            cr_residual: base.cr_residual * tc,
            nondegeneracy: base.nondegeneracy * tm,
        });
        prop_assert!(loose.verdict.is_supported() || !tight.verdict.is_supported());
    }
}
