mod common;

use common::{c, rel, Point};
use qfrac::closed_form::{corollary3_coeffs, ReducedParams};
use qfrac::recurrence::{coeff_big_a, coeff_big_b, coeffs};
use qfrac::{MassonParams, QContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, ctx: &QContext) -> MassonParams {
    let mut z = |lo: f64, hi: f64| {
        let r = rng.gen_range(lo..hi);
        let t = rng.gen_range(-0.6..0.6f64);
        ctx.complex(r * t.cos(), r * t.sin())
    };
    let a = z(0.2, 0.6);
    let xs = [
        z(0.3, 0.8),
        z(0.3, 0.8),
        z(0.3, 0.8),
        z(0.3, 0.8),
        z(0.3, 0.8),
    ];
    MassonParams::new(a, xs, ctx).unwrap()
}

#[test]
fn coefficients_match_double_precision_transcription() {
    let ctx = QContext::new(qfrac::Scalar::new(0.25, 0.15, 64), 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let p = random_point(&mut rng, &ctx);
        let o = Point::from_params(&p);
        for n in 1..12 {
            let k = coeffs(&p, n).unwrap();
            assert!(rel(c(&coeff_big_a(&p, n).unwrap()), o.big_a(n)) < 1e-11);
            assert!(rel(c(&coeff_big_b(&p, n).unwrap()), o.big_b(n)) < 1e-11);
            assert!(rel(c(&k.a), o.a_n(n)) < 1e-11, "a_{n}");
            assert!(rel(c(&k.b), o.b_n(n)) < 1e-11, "b_{n}");
        }
    }
}

#[test]
fn b_is_product_of_neighbouring_parts() {
    let ctx = QContext::real(0.4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_point(&mut rng, &ctx);
    for n in 1..10 {
        let k = coeffs(&p, n).unwrap();
        let prev = coeff_big_a(&p, n - 1).unwrap();
        let d = (&k.b - &(prev * &k.big_b)).abs();
        assert!(d <= 1e-18 * k.b.abs());
    }
}

#[test]
fn transcribed_terminating_sum_satisfies_the_recurrence() {
    // Independent of the crate: the double-precision X1 obeys the
    // double-precision recurrence.
    let ctx = QContext::real(0.35).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let o = Point::from_params(&random_point(&mut rng, &ctx));
        for n in 1..8 {
            let (prev, cur, next) = (o.x1(n - 1), o.x1(n), o.x1(n + 1));
            let r = (next - o.a_n(n) * cur + o.b_n(n) * prev).norm();
            let scale = next.norm() + (o.a_n(n) * cur).norm() + (o.b_n(n) * prev).norm();
            assert!(r <= 1e-12 * scale, "n = {n}: {r:e}");
        }
    }
}

#[test]
fn crate_x1_matches_transcription() {
    let ctx = QContext::real(0.35).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = random_point(&mut rng, &ctx);
    let o = Point::from_params(&p);
    for n in 0..10 {
        let x = qfrac::recurrence::solution_x1(&p, n).unwrap().value;
        assert!(rel(c(&x), o.x1(n)) < 1e-11, "n = {n}");
    }
}

#[test]
fn coefficients_approach_one_plus_q_and_q() {
    let ctx = QContext::real(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = random_point(&mut rng, &ctx);
    let k = coeffs(&p, 60).unwrap();
    assert!((k.a.re() - 1.5).abs() < 1e-12 && k.a.im().abs() < 1e-12);
    assert!((k.b.re() - 0.5).abs() < 1e-12 && k.b.im().abs() < 1e-12);
}

#[test]
fn scaled_terminating_coefficients_tend_to_reduced_ones() {
    // With f = a q^{N+1}, f q^n a_n -> c_n and f^2 q^{2n-1} b_n -> d_n.
    let ctx = QContext::new(qfrac::Scalar::real(0.3, 128), 128).unwrap();
    let s = |x| ctx.scalar(x);
    let (a, b, cc, d) = (0.5, 0.3, -0.4, 0.6);
    let e = 0.4 * a * a * 0.3 / (b * cc * d);
    let r = ReducedParams::new(s(a), [s(b), s(cc), s(d), s(e)], &ctx).unwrap();
    let mut last = f64::INFINITY;
    for big_n in [10usize, 20, 40] {
        let p = r.terminating(big_n).unwrap();
        let f = p.params()[4].clone();
        let mut worst: f64 = 0.0;
        for n in 1..4i64 {
            let k = coeffs(&p, n).unwrap();
            let (cn, dn) = corollary3_coeffs(&r, n).unwrap();
            let sa = &f * ctx.q_pow(n).unwrap() * &k.a;
            let sb = &f * &f * ctx.q_pow(2 * n - 1).unwrap() * &k.b;
            worst = worst
                .max((sa - &cn).abs() / cn.abs())
                .max((sb - &dn).abs() / dn.abs());
        }
        assert!(worst < last / 100.0, "N = {big_n}: {worst:e}");
        last = worst;
    }
    assert!(last < 1e-15);
}
