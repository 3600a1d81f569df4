use std::f64::consts::PI;

use num_complex::Complex64;
use z2pell::pell::{analytic_pell_test_with_certificate, AnalyticOptions, Bound, Method, PellStatus, Solution};
use z2pell::polynomials::Scalar;
use z2pell::upoly::vanishing_order_at_root;
use z2pell::{
    analytic_pell_test, cf_pell_solve, pell_group_generate, reconstruct_pell_solution, solve_u, BranchConfiguration,
    ComplexPoly, ExactPoly, GaussRat,
};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

fn cube_roots_and_zero() -> Vec<Complex64> {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    vec![c(0.0, 0.0), c(1.0, 0.0), w, w * w]
}

fn exact_certificate(d: &ExactPoly) -> (ExactPoly, ExactPoly) {
    let v = cf_pell_solve(d, 200).unwrap();
    match v.certificate().map(|c| &c.solution) {
        Some(Solution::Exact { p, q, c }) => {
            assert_eq!(c, &GaussRat::one());
            (p.clone(), q.clone())
        }
        other => panic!("expected an exact certificate, got {other:?}"),
    }
}

fn lin(root: i64) -> ExactPoly {
    ExactPoly::from_ints(&[-root, 1])
}

/// Pellian quartics `(z−b)((z−a)²(z−b) + 2)`: `p = (z−a)²(z−b) + 1`, `q = z − a`.
fn cubic_family(a: i64, b: i64) -> (ExactPoly, ExactPoly, ExactPoly) {
    let p = &(&lin(a).pow(2) * &lin(b)) + &ExactPoly::one();
    let d = &lin(b) * &(&(&lin(a).pow(2) * &lin(b)) + &ExactPoly::from_ints(&[2]));
    (d, p, lin(a))
}

#[test]
fn cf_finds_the_classical_solutions() {
    let (p, q) = exact_certificate(&ExactPoly::from_ints(&[-1, 0, 1]));
    assert_eq!((p, q), (ExactPoly::from_ints(&[0, 1]), ExactPoly::one()));
    let (p, q) = exact_certificate(&ExactPoly::from_ints(&[-1, 0, 0, 0, 1]));
    assert_eq!((p, q), (ExactPoly::from_ints(&[0, 0, 1]), ExactPoly::one()));
    let (p, q) = exact_certificate(&ExactPoly::from_ints(&[0, -1, 0, 0, 1]));
    assert_eq!(
        (p, q),
        (ExactPoly::from_ints(&[-1, 0, 0, 2]), ExactPoly::from_ints(&[0, 2]))
    );
    let v = cf_pell_solve(&ExactPoly::from_ints(&[-1, 0, 1]), 200).unwrap();
    assert_eq!(v.certificate().unwrap().method, Method::ExactCf);
    assert_eq!(v.certificate().unwrap().lambda, 1.0);
}

#[test]
fn cf_solutions_satisfy_the_identity_for_the_cubic_family() {
    for (a, b) in [(0, 1), (2, -1), (-3, 4), (1, 5)] {
        let (d, p_known, q_known) = cubic_family(a, b);
        let (p, q) = exact_certificate(&d);
        let one = ExactPoly::one();
        assert_eq!(&(&p * &p) - &(&(&q * &q) * &d), one);
        assert_eq!(&(&p_known * &p_known) - &(&(&q_known * &q_known) * &d), one);
        assert_eq!(p.degree(), Some(3));
    }
}

#[test]
fn non_monic_or_odd_input_is_rejected() {
    assert!(cf_pell_solve(&ExactPoly::from_ints(&[1, 0, 2]), 10).is_err());
    assert!(cf_pell_solve(&ExactPoly::from_ints(&[1, 0, 0, 1]), 10).is_err());
}

#[test]
fn few_distinct_roots_are_never_pellian() {
    let base = ExactPoly::from_ints(&[-1, 0, 1]);
    for d in [base.pow(2), base.pow(3), &lin(2).pow(3) * &lin(5)] {
        let v = cf_pell_solve(&d, 200).unwrap();
        match v.status {
            PellStatus::NotPellianUpTo(b) => assert!(b.is_unconditional(), "{b}"),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn old_identity_holds_exactly_on_oracle_solutions() {
    // 2pU − 2q'D − qD' = 0 with U = p'/q
    let mut pool = vec![
        ExactPoly::from_ints(&[-1, 0, 1]),
        ExactPoly::from_ints(&[-1, 0, 0, 0, 1]),
        ExactPoly::from_ints(&[-1, 0, 0, 0, 0, 0, 1]),
        ExactPoly::from_ints(&[0, -1, 0, 0, 1]),
        ExactPoly::from_ints(&[0, 2, 0, 0, 1]),
        &ExactPoly::from_ints(&[1, -3, 1]).pow(2) - &ExactPoly::one(),
    ];
    pool.extend([(0, 1), (2, -1)].iter().map(|&(a, b)| cubic_family(a, b).0));
    for d in pool {
        let (p, q) = exact_certificate(&d);
        let u = p.derivative().div_exact(&q).expect("q divides p'");
        let two = ExactPoly::from_ints(&[2]);
        let lhs = &(&(&two * &p) * &u) - &(&(&two * &q.derivative()) * &d);
        let lhs = &lhs - &(&q * &d.derivative());
        assert!(lhs.is_zero(), "D = {:?}", d);
    }
}

#[test]
fn squared_root_factor_is_pellian_iff_u_vanishes_there() {
    // (D, rational simple roots to try)
    let cases: Vec<(ExactPoly, Vec<i64>)> = vec![
        (ExactPoly::from_ints(&[-1, 0, 0, 0, 1]), vec![1, -1]),
        (ExactPoly::from_ints(&[0, -1, 0, 0, 1]), vec![0, 1]),
        (ExactPoly::from_ints(&[0, 2, 0, 0, 1]), vec![0]),
        (
            &ExactPoly::from_ints(&[1, -3, 1]).pow(2) - &ExactPoly::one(),
            vec![0, 1, 2, 3],
        ),
    ];
    let mut saw_both = (false, false);
    for (d, roots) in cases {
        let cfg = BranchConfiguration::from_poly(&d.to_complex()).unwrap();
        let u = solve_u(&cfg, TOL).unwrap().u;
        for r in roots {
            let k = vanishing_order_at_root(&u, c(r as f64, 0.0), 1e-6).unwrap();
            let e = &lin(r).pow(2) * &d;
            let v = cf_pell_solve(&e, 200).unwrap();
            assert_eq!(
                v.is_pellian(),
                k >= 1,
                "D = {d:?}, root {r}: k = {k}, verdict {:?}",
                v.status
            );
            if k >= 1 {
                saw_both.0 = true;
            } else {
                saw_both.1 = true;
            }
        }
    }
    assert_eq!(saw_both, (true, true));
}

#[test]
fn group_law_up_to_fifth_power() {
    let d = ExactPoly::from_ints(&[-1, 0, 1]);
    let (p2, q2) = pell_group_generate(&ExactPoly::from_ints(&[0, 1]), &ExactPoly::one(), &d, 2);
    assert_eq!(p2, ExactPoly::from_ints(&[-1, 0, 2]));
    assert_eq!(q2, ExactPoly::from_ints(&[0, 2]));
    let d4 = ExactPoly::from_ints(&[-1, 0, 0, 0, 1]);
    let (p2, q2) = pell_group_generate(&ExactPoly::from_ints(&[0, 0, 1]), &ExactPoly::one(), &d4, 2);
    assert_eq!(p2, ExactPoly::from_ints(&[-1, 0, 0, 0, 2]));
    assert_eq!(q2, ExactPoly::from_ints(&[0, 0, 2]));

    for d in [d, d4, cubic_family(1, -2).0, ExactPoly::from_ints(&[0, -1, 0, 0, 1])] {
        let (p1, q1) = exact_certificate(&d);
        let (p, q) = pell_group_generate(&p1, &q1, &d, 1);
        assert_eq!((&p, &q), (&p1, &q1));
        for k in 1..=5 {
            let (p, q) = pell_group_generate(&p1, &q1, &d, k);
            assert_eq!(&(&p * &p) - &(&(&q * &q) * &d), ExactPoly::one(), "k = {k}");
            assert_eq!(p.degree(), Some(k * p1.degree().unwrap()));
        }
    }
}

fn check_analytic(roots: Vec<Complex64>, lambda: f64, p_want: &ComplexPoly, q_want: &ComplexPoly) {
    let cfg = BranchConfiguration::new(roots).unwrap();
    let u = solve_u(&cfg, TOL).unwrap().u;
    let v = analytic_pell_test_with_certificate(&cfg, &u, AnalyticOptions::default()).unwrap();
    assert!(v.is_pellian(), "{:?}", v.status);
    assert!((v.lambda.unwrap() - lambda).abs() < 1e-6);
    let ms = v.multipliers.clone().unwrap();
    let ys = cfg.periods(&u, TOL).unwrap();
    for (m, y) in ms.iter().zip(&ys) {
        assert!((lambda * y.value.im - PI * *m as f64).abs() < 1e-6);
    }
    let cert = v.certificate().unwrap();
    assert!(cert.residual < 1e-8);
    let (p, q) = (cert.solution.p_complex(), cert.solution.q_complex());
    // (p, q) is fixed up to a common sign
    let sign = if (p.leading().unwrap() - p_want.leading().unwrap()).norm() < 1e-6 {
        1.0
    } else {
        -1.0
    };
    assert!(p.scale(&c(sign, 0.0)).max_coeff_diff(p_want) < 1e-6, "{:?}", p.coeffs());
    assert!(
        q.scale(&c(sign, 0.0))
            .max_coeff_diff(q_want)
            .min(q.scale(&c(-sign, 0.0)).max_coeff_diff(q_want))
            < 1e-6
    );
}

#[test]
fn analytic_route_recognises_pellian_examples() {
    check_analytic(
        unit_roots(2),
        1.0,
        &ComplexPoly::from_real(&[0.0, 1.0]),
        &ComplexPoly::one(),
    );
    check_analytic(
        unit_roots(4),
        2.0,
        &ComplexPoly::from_real(&[0.0, 0.0, 1.0]),
        &ComplexPoly::one(),
    );
    check_analytic(
        unit_roots(6),
        3.0,
        &ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0]),
        &ComplexPoly::one(),
    );
    check_analytic(
        cube_roots_and_zero(),
        3.0,
        &ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 2.0]),
        &ComplexPoly::from_real(&[0.0, 2.0]),
    );
}

#[test]
fn analytic_multipliers_for_z2_minus_1() {
    let cfg = BranchConfiguration::new(unit_roots(2)).unwrap();
    let v = analytic_pell_test(&cfg, &ComplexPoly::one(), AnalyticOptions::default()).unwrap();
    assert_eq!(v.multipliers.as_ref().unwrap()[0].abs(), 1);
    assert!((v.lambda.unwrap() - 1.0).abs() < 1e-9);
    assert!(v.certificate().is_none());
}

#[test]
fn even_quartic_is_pellian_on_both_routes() {
    // D(z) = E(z²) with E quadratic, and every monic quadratic is Pellian
    let a = c(1.3, 0.4);
    let cfg = BranchConfiguration::new(vec![c(1.0, 0.0), c(-1.0, 0.0), a, -a]).unwrap();
    let u = solve_u(&cfg, TOL).unwrap().u;
    let v = analytic_pell_test_with_certificate(&cfg, &u, AnalyticOptions::default()).unwrap();
    assert!(v.is_pellian(), "{:?}", v.status);
    assert!((v.lambda.unwrap() - 2.0).abs() < 1e-6);

    let a2 = GaussRat::from_fractions(13, 10, 4, 10);
    let a2 = a2.times(&a2);
    let d = &ExactPoly::from_ints(&[-1, 0, 1]) * &ExactPoly::new(vec![a2.negated(), GaussRat::zero(), GaussRat::one()]);
    let exact = cf_pell_solve(&d, 200).unwrap();
    assert!(exact.is_pellian());
    assert_eq!(exact.certificate().unwrap().lambda, 2.0);
}

#[test]
fn asymmetric_quartic_is_rejected_by_both_routes() {
    let roots = vec![c(1.0, 0.0), c(-1.0, 0.0), c(1.3, 0.4), c(-0.7, 1.1)];
    let cfg = BranchConfiguration::new(roots).unwrap();
    let u = solve_u(&cfg, TOL).unwrap().u;
    let v = analytic_pell_test(&cfg, &u, AnalyticOptions::default()).unwrap();
    assert_eq!(v.status, PellStatus::NotPellianUpTo(Bound::Qmax(64)));

    let d = &(&ExactPoly::from_ints(&[-1, 0, 1])
        * &ExactPoly::new(vec![GaussRat::from_fractions(-13, 10, -4, 10), GaussRat::one()]))
        * &ExactPoly::new(vec![GaussRat::from_fractions(7, 10, -11, 10), GaussRat::one()]);
    let exact = cf_pell_solve(&d, 200).unwrap();
    assert_eq!(exact.status, PellStatus::NotPellianUpTo(Bound::Steps(200)));
}

#[test]
fn nearly_coincident_roots_get_no_verdict() {
    let cfg = BranchConfiguration::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.3, 0.2), c(0.3 + 1e-5, 0.2)]).unwrap();
    let v = analytic_pell_test(&cfg, &ComplexPoly::from_real(&[0.0, 1.0]), AnalyticOptions::default());
    // U is not known here; the separation check comes first
    assert!(v.unwrap().is_inconclusive());
}

#[test]
fn reconstruction_rejects_bad_parameters() {
    let cfg = BranchConfiguration::new(unit_roots(4)).unwrap();
    let u = ComplexPoly::from_real(&[0.0, 1.0]);
    assert!(reconstruct_pell_solution(&cfg, &u, 2.0, 4, TOL).is_err());
    assert!(reconstruct_pell_solution(&cfg, &u, 1.0, 64, TOL).is_err());
    assert!(reconstruct_pell_solution(&cfg, &u, 2.5, 64, TOL).is_err());
    // wrong λ: exp(Φ) is not single-valued, the fit fails
    assert!(reconstruct_pell_solution(&cfg, &u, 3.0, 64, TOL).is_err());
    assert!(reconstruct_pell_solution(&cfg, &u, 2.0, 64, TOL).is_ok());
}
