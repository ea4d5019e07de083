mod common;

use common::interior;
use qfrac::recurrence::{
    minimal_solution, reciprocal_symmetry_defect, residuals, solution_x1, solution_x2, Limits,
    Which,
};
use qfrac::QError;

#[test]
fn all_three_solutions_satisfy_the_recurrence() {
    let p = interior(0.3, 128);
    // The minimal solution loses about q^{-n} in relative accuracy.
    for (which, tol) in [(Which::X1, 1e-30), (Which::X2, 1e-30), (Which::Xmin, 1e-25)] {
        let r = residuals(&p, which, 1..=10).unwrap();
        assert!(r.iter().all(|&x| x < tol), "{which}: {r:?}");
    }
}

#[test]
fn explicit_solutions_approach_their_limits() {
    let p = interior(0.4, 128);
    let lim = Limits::new(&p).unwrap();
    let dist = |n, w: &qfrac::Scalar, x2: bool| {
        let x = if x2 {
            solution_x2(&p, n)
        } else {
            solution_x1(&p, n)
        };
        (&x.unwrap().value - w).abs()
    };
    let d1: Vec<f64> = (5..40)
        .step_by(5)
        .map(|n| dist(n, &lim.w1.value, false))
        .collect();
    let d2: Vec<f64> = (5..40)
        .step_by(5)
        .map(|n| dist(n, &lim.w2.value, true))
        .collect();
    for d in [&d1, &d2] {
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        assert!(d.last().unwrap() < &1e-8);
    }
}

#[test]
fn minimal_solution_decays_like_q_to_the_n() {
    let p = interior(0.3, 128);
    let x = |n| minimal_solution(&p, n).unwrap().value;
    let mut prev = f64::INFINITY;
    for n in [5, 10, 15, 20] {
        let ratio = (x(n + 1) / x(n)).re();
        let dev = (ratio - 0.3).abs();
        assert!(dev < prev, "n = {n}: ratio {ratio}");
        prev = dev;
    }
    assert!(prev < 1e-5);
}

#[test]
fn minimal_solution_is_the_stated_combination() {
    let p = interior(0.3, 96);
    let lim = Limits::new(&p).unwrap();
    for n in 0..5 {
        let direct = &lim.w2.value * &solution_x1(&p, n).unwrap().value
            - &lim.w1.value * &solution_x2(&p, n).unwrap().value;
        let v = minimal_solution(&p, n).unwrap().value;
        assert!((&v - &direct).abs() <= 1e-25 * direct.abs());
    }
}

#[test]
fn minimality_loss_is_reported_at_low_precision() {
    let p = interior(0.3, 53);
    match minimal_solution(&p, 40) {
        Err(QError::MinimalityLost { n, estimate }) => {
            assert_eq!(n, 40);
            assert!(estimate > p.ctx().identity_tol());
        }
        other => panic!("expected MinimalityLost, got {other:?}"),
    }
    // The same index is fine once the precision is raised.
    let hi = p.with_precision(256).unwrap();
    assert!(minimal_solution(&hi, 40).is_ok());
}

#[test]
fn reciprocal_map_preserves_normalisation_free_ratio() {
    let p = interior(0.35, 96);
    for n in 2..8 {
        let d = reciprocal_symmetry_defect(&p, n).unwrap();
        assert!(d < 1e-25, "n = {n}: {d:e}");
    }
}

#[test]
fn precision_escalation_is_stable() {
    let lo = interior(0.3, 64);
    let hi = lo.with_precision(128).unwrap();
    for n in [0, 3, 6] {
        let a = minimal_solution(&lo, n).unwrap().value;
        let b = minimal_solution(&hi, n).unwrap().value;
        assert!((&a.with_prec(128) - &b).abs() <= lo.ctx().identity_tol() * b.abs());
    }
}
