use super::*;
use crate::spaces::{distance, norm, Coordinates, SpaceDescriptor};
use num_complex::Complex;

fn ord(a: f64) -> Order<f64> {
    Order::new(a).unwrap()
}

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn space(a: f64) -> SpaceDescriptor<f64> {
    SpaceDescriptor::new(2.0, ord(a), 16.0, 64).unwrap()
}

fn ones(d: &SpaceDescriptor<f64>) -> GridFunction<f64> {
    GridFunction::sample(d, Coordinates::Conformable, |_| c(1.0)).unwrap()
}

fn smooth(d: &SpaceDescriptor<f64>) -> GridFunction<f64> {
    GridFunction::sample(d, Coordinates::Conformable, |x| Complex::new((-x).exp(), (x / 3.0).sin())).unwrap()
}

fn nilpotent() -> Matrix2<f64> {
    Matrix2::from_real([[0.0, 1.0], [0.0, 0.0]])
}

fn exact_families(o: Order<f64>) -> Vec<OperatorFamily<f64>> {
    vec![
        conformable_exponential(o, c(1.0)),
        alpha_from_classical(&scalar_exponential(Complex::new(-0.3, 0.7)), o).unwrap(),
        alpha_from_classical(&matrix_exponential(nilpotent()), o).unwrap(),
        alpha_from_classical(&matrix_exponential(Matrix2::from_real([[-0.2, 0.5], [-0.5, -0.1]])), o).unwrap(),
        alpha_from_classical(&diagonal_multiplication("heat", |y: f64| Complex::new(-y * y / 50.0, y / 10.0)), o).unwrap(),
    ]
}

#[test]
fn reparametrized_exponential_is_the_half_semigroup() {
    let d = space(0.5);
    let s = alpha_from_classical(&scalar_exponential(c(1.0)), ord(0.5)).unwrap();
    assert_eq!(s.clock_kind(), ClockKind::Alpha(ord(0.5)));
    for &t in &[0.25, 1.0, 9.0] {
        let v = s.apply(t, &ones(&d)).unwrap().value(3);
        let expected = (2.0 * f64::sqrt(t)).exp();
        assert!((v.re - expected).abs() <= 4.0 * f64::EPSILON * expected);
    }
}

#[test]
fn order_one_bridge_is_transparent() {
    let d = space(1.0);
    let t_fam = scalar_exponential(Complex::new(0.2, -1.0));
    let s = alpha_from_classical(&t_fam, ord(1.0)).unwrap();
    let f = smooth(&d);
    for &t in &[0.0, 0.3, 4.0] {
        assert_eq!(s.apply(t, &f).unwrap().values(), t_fam.apply(t, &f).unwrap().values());
    }
}

#[test]
fn identity_survives_both_bridges() {
    let d = space(0.5);
    let f = smooth(&d);
    let s = alpha_from_classical(&identity(ClockKind::Classical), ord(0.5)).unwrap();
    let u = classical_from_alpha(&identity(ClockKind::Alpha(ord(0.5))), ord(0.5)).unwrap();
    for &t in &[0.0, 1.0, 17.0] {
        assert_eq!(s.apply(t, &f).unwrap(), f);
        assert_eq!(u.apply(t, &f).unwrap(), f);
    }
}

#[test]
fn classical_view_of_root_exponential_is_plain_exponential() {
    let d = space(0.5);
    let u = classical_from_alpha(&conformable_exponential(ord(0.5), c(1.0)), ord(0.5)).unwrap();
    assert_eq!(u.clock_kind(), ClockKind::Classical);
    for &s in &[0.5, 1.0, 3.0] {
        let v = u.apply(s, &ones(&d)).unwrap().value(0).re;
        assert!((v - s.exp()).abs() <= 8.0 * f64::EPSILON * s.exp(), "s={s}");
    }
    let prev = classical_from_alpha(&identity(ClockKind::Alpha(ord(1.0))), ord(1.0)).unwrap();
    assert_eq!(prev.apply(2.0, &ones(&d)).unwrap(), ones(&d));
}

#[test]
fn bridges_reject_wrong_clock() {
    let o = ord(0.5);
    assert!(alpha_from_classical(&conformable_exponential(o, c(1.0)), o).is_err());
    assert!(classical_from_alpha(&scalar_exponential(c(1.0)), o).is_err());
    assert!(classical_from_alpha(&conformable_exponential(o, c(1.0)), ord(0.25)).is_err());
}

#[test]
fn bridge_round_trip_reproduces_family() {
    let d = space(0.5);
    let o = ord(0.5);
    let f = smooth(&d);
    for s in exact_families(o) {
        let back = alpha_from_classical(&classical_from_alpha(&s, o).unwrap(), o).unwrap();
        for &t in &[0.0, 0.01, 0.7, 5.0] {
            let (a, b) = (s.apply(t, &f).unwrap(), back.apply(t, &f).unwrap());
            for (x, y) in a.values().iter().zip(b.values().iter()) {
                assert!((x - y).norm() <= 4.0 * f64::EPSILON * y.norm(), "{}", s.name());
            }
        }
    }
}

#[test]
fn composed_bridge_is_within_clock_conditioning() {
    // Without symbolic cancellation the time passes through ψ⁻¹∘ψ; the error
    // is the clock round trip times the orbit's sensitivity d ln S/d ln t.
    let d = space(0.5);
    let o = ord(0.5);
    let s = conformable_exponential(o, c(1.0));
    let inner = s.clone();
    let u = OperatorFamily::new("manual", ClockKind::Classical, true, move |v, f| {
        inner.apply(clock_inverse(o, v)?, f)
    });
    let back = alpha_from_classical(&u, o).unwrap();
    for &t in &[0.01, 0.7, 5.0] {
        let a = s.apply(t, &ones(&d)).unwrap().value(0).re;
        let b = back.apply(t, &ones(&d)).unwrap().value(0).re;
        let sensitivity = 1.0 + t.sqrt();
        assert!((a - b).abs() <= 8.0 * sensitivity * f64::EPSILON * a);
    }
}

#[test]
fn law_examples() {
    let d = space(0.5);
    let o = ord(0.5);
    let probes = random_law_probes(&d, 11, 25).unwrap();
    let root = conformable_exponential(o, c(1.0));
    assert!(check_alpha_semigroup_law(&d, &root, o, &probes).unwrap() <= 1e-12);
    assert_eq!(check_alpha_semigroup_law(&d, &identity(ClockKind::Alpha(o)), o, &probes).unwrap(), 0.0);
    let broken = broken_clock(&scalar_exponential(Complex::new(0.0, 1.0)), o);
    assert!(check_alpha_semigroup_law(&d, &broken, o, &probes).unwrap() > 0.1);
}

#[test]
fn exact_families_satisfy_the_law() {
    for &a in &[0.25, 0.5, 1.0] {
        let o = ord(a);
        let d = space(a);
        let probes = random_law_probes(&d, 2024, 100).unwrap();
        for s in exact_families(o) {
            let r = check_alpha_semigroup_law(&d, &s, o, &probes).unwrap();
            assert!(r <= 1e-10, "{} a={a}: {r}", s.name());
            let u = classical_from_alpha(&s, o).unwrap();
            assert!(check_classical_semigroup_law(&d, &u, &probes).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn probes_are_seeded_and_in_range() {
    let d = space(0.5);
    let a = random_law_probes(&d, 5, 50).unwrap();
    let b = random_law_probes(&d, 5, 50).unwrap();
    for (p, q) in a.iter().zip(&b) {
        assert_eq!((p.r, p.q), (q.r, q.q));
        assert_eq!(p.f, q.f);
        assert!((1e-3..=1e2).contains(&p.r) && (1e-3..=1e2).contains(&p.q));
    }
}

#[test]
fn generator_of_root_exponential_is_identity() {
    let d = space(0.5);
    let o = ord(0.5);
    let x = smooth(&d);
    let est = estimate_alpha_generator(&d, &conformable_exponential(o, c(1.0)), o, &x, &generator_epsilons()).unwrap();
    assert!(distance(&d, &est.value, &x).unwrap() <= 1e-6 * norm(&d, &x).unwrap());
    assert!(est.stabilized);
    let tail = &est.residual_curve[est.residual_curve.len() - 3..];
    assert!(tail.windows(2).all(|w| w[1].1 < w[0].1));
    assert!((est.fitted_order - 1.0).abs() < 0.1);
    let bound = 1e-8 * (1.0 + norm(&d, &x).unwrap());
    assert!(est.classical_agreement.iter().all(|&g| g <= bound));
}

#[test]
fn generator_of_identity_vanishes() {
    let d = space(0.5);
    let o = ord(0.5);
    let x = smooth(&d);
    let est = estimate_alpha_generator(&d, &identity(ClockKind::Alpha(o)), o, &x, &generator_epsilons()).unwrap();
    assert_eq!(norm(&d, &est.value).unwrap(), 0.0);
    assert!(est.stabilized);
}

#[test]
fn generator_of_nilpotent_matrix_is_the_matrix() {
    let d = space(0.5);
    let o = ord(0.5);
    let x = smooth(&d);
    let s = alpha_from_classical(&matrix_exponential(nilpotent()), o).unwrap();
    let est = estimate_alpha_generator(&d, &s, o, &x, &generator_epsilons()).unwrap();
    let vals = x.values();
    let expected: Vec<_> = vals.chunks(2).flat_map(|p| nilpotent().apply([p[0], p[1]])).collect();
    let mx = x.with_values(expected).unwrap();
    assert!(distance(&d, &est.value, &mx).unwrap() <= 1e-6 * norm(&d, &mx).unwrap());
}

#[test]
fn generator_flags_non_stabilizing_input() {
    // a family with a jump at t > 0 never settles on the given schedule
    let d = space(0.5);
    let o = ord(0.5);
    let jumpy = OperatorFamily::new("jumpy", ClockKind::Alpha(o), true, |t: f64, f: &GridFunction<f64>| {
        Ok(f.scale(Complex::new(1.0 + (1.0 / t.max(1e-300)).sin(), 0.0)))
    });
    let est = estimate_alpha_generator(&d, &jumpy, o, &smooth(&d), &generator_epsilons()).unwrap();
    assert!(!est.in_numerical_domain());
}

#[test]
fn mild_solution_examples() {
    let d = space(0.5);
    let o = ord(0.5);
    let s = conformable_exponential(o, c(1.0));
    let x0 = smooth(&d);
    assert_eq!(mild_solution(&s, &x0, &[0.0]).unwrap()[0], x0);
    let x = mild_solution(&s, &ones(&d), &[1.0]).unwrap();
    assert!((x[0].value(5).re - 7.38905609893065).abs() < 1e-13);
    assert!(mild_solution(&s, &x0, &[-1.0]).is_err());
    assert!(mild_solution(&s, &x0, &[1.0, 0.5]).is_err());
}

#[test]
fn mild_solution_at_order_one_matches_classical() {
    let d = space(1.0);
    let heat = diagonal_multiplication("heat", |y: f64| c(-y * y));
    let s = alpha_from_classical(&heat, ord(1.0)).unwrap();
    let x0 = smooth(&d);
    let times = [0.0, 0.1, 0.5, 2.0];
    let a = mild_solution(&s, &x0, &times).unwrap();
    let b = mild_solution(&heat, &x0, &times).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mild_solutions_correspond_through_the_clock() {
    for &a in &[0.25, 0.5, 0.75] {
        let o = ord(a);
        let d = space(a);
        let x0 = smooth(&d);
        let times: Vec<f64> = (0..20).map(|k| 4.0 * k as f64 / 19.0).collect();
        for s in exact_families(o) {
            let u = classical_from_alpha(&s, o).unwrap();
            let xs = mild_solution(&s, &x0, &times).unwrap();
            let ss: Vec<f64> = times.iter().map(|&t| clock(o, t).unwrap()).collect();
            let ys = mild_solution(&u, &x0, &ss).unwrap();
            for (x, y) in xs.iter().zip(&ys) {
                assert!(distance(&d, x, y).unwrap() <= 1e-10 * (1.0 + norm(&d, &x0).unwrap()));
            }
        }
    }
}

#[test]
fn mild_csv_has_expected_shape() {
    let d = SpaceDescriptor::new(2.0, ord(0.5), 4.0, 3).unwrap();
    let s = conformable_exponential(ord(0.5), c(-1.0));
    let times = [0.0, 1.0];
    let states = mild_solution(&s, &ones(&d), &times).unwrap();
    let mut buf = Vec::new();
    write_mild_solution_csv(ord(0.5), &times, &states, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "t,s,node_index,re,im");
    assert_eq!(lines.len(), 7);
    assert!(lines[4].starts_with("1.0000000000000000e0,2.0000000000000000e0,0,"));
}

#[test]
fn identity_at_zero_and_linearity() {
    let d = space(0.5);
    let o = ord(0.5);
    let f = smooth(&d);
    let h = GridFunction::sample(&d, Coordinates::Conformable, |x| Complex::new(x.cos(), -x.sqrt())).unwrap();
    for s in exact_families(o) {
        assert!(identity_defect_ulps(&s, &f).unwrap() <= 4.0, "{}", s.name());
        for &t in &[0.1, 2.0] {
            let defect = linearity_defect_ulps(&s, t, Complex::new(0.7, -1.2), &f, c(2.5), &h).unwrap();
            assert!(defect <= 8.0, "{} t={t}: {defect}", s.name());
        }
    }
}

#[test]
fn families_are_strongly_continuous() {
    let d = space(0.5);
    let o = ord(0.5);
    let x = smooth(&d);
    for s in exact_families(o).into_iter().chain([identity(ClockKind::Alpha(o))]) {
        let rep = strong_continuity(&d, &s, &x).unwrap();
        assert!(rep.converges(), "{}: {:?}", s.name(), rep.distances);
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn matrix_exponential_matches_series() {
    let m = Matrix2::new([[Complex::new(0.3, 0.1), c(-1.2)], [Complex::new(0.4, 0.5), c(-0.7)]]);
    for &s in &[1e-3, 0.05, 0.8, 3.0] {
        let e = m.exp(s);
        // truncated Taylor series with scaling and squaring
        let k = 10;
        let h = s / f64::from(1 << k);
        let mut term = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
        let mut sum = term;
        for j in 1..20 {
            let mut next = [[c(0.0); 2]; 2];
            for r in 0..2 {
                for col in 0..2 {
                    next[r][col] = (term[r][0] * m.entries[0][col] + term[r][1] * m.entries[1][col]) * (h / j as f64);
                }
            }
            term = next;
            for r in 0..2 {
                for col in 0..2 {
                    sum[r][col] += term[r][col];
                }
            }
        }
        for _ in 0..k {
            let mut sq = [[c(0.0); 2]; 2];
            for r in 0..2 {
                for col in 0..2 {
                    sq[r][col] = sum[r][0] * sum[0][col] + sum[r][1] * sum[1][col];
                }
            }
            sum = sq;
        }
        for r in 0..2 {
            for col in 0..2 {
                assert!((e.entries[r][col] - sum[r][col]).norm() < 1e-12, "s={s}");
            }
        }
    }
}
