mod common;

use common::{ctx, interior};
use qfrac::cfrac::{eval_cf, pincherle_value, Method};
use qfrac::closed_form::{
    askey_wilson_sequence, corollary2_rhs, corollary2_scaled, corollary3_rhs, theorem1_rhs,
    theorem1_rhs_removable, ReducedParams,
};
use qfrac::vwp::Slot;
use qfrac::{MassonParams, Scalar};

fn rel(x: &Scalar, y: &Scalar) -> f64 {
    (x - y).abs() / y.abs()
}

#[test]
fn forward_and_bottom_up_agree_within_their_estimates() {
    for bits in [64, 128] {
        let p = interior(0.3, bits);
        let f = eval_cf(&p, 400, p.ctx(), Method::ForwardConvergents).unwrap();
        let b = eval_cf(&p, 400, p.ctx(), Method::BottomUp).unwrap();
        assert!((&f.value - &b.value).abs() <= (f.est_error + b.est_error) * f.value.abs());
    }
}

#[test]
fn fraction_equals_minimal_solution_ratio_and_closed_form() {
    let p = interior(0.3, 128);
    let cf = eval_cf(&p, 400, p.ctx(), Method::ForwardConvergents).unwrap();
    let pv = pincherle_value(&p).unwrap();
    let th = theorem1_rhs(&p).unwrap();
    assert!(rel(&pv, &cf.value) < 1e-30);
    assert!(rel(&th, &cf.value) < 1e-30);
}

#[test]
fn terminating_fraction_matches_its_closed_form() {
    let c = ctx(0.3, 96);
    let s = |x| c.scalar(x);
    for n in [0, 1, 2, 5, 9] {
        // s inside |a| q^2 < |s| < |a| q, so that both limits exist as well.
        let sv = s(0.4 * 0.3f64.powf(1.5));
        let p = MassonParams::terminating_with_s(
            s(0.4),
            Slot::F,
            [s(0.45), s(-0.5), s(0.6)],
            n,
            sv,
            &c,
        )
        .unwrap();
        let cf = eval_cf(&p, 50, &c, Method::ForwardConvergents).unwrap();
        assert!(
            cf.terminated && cf.depth == n,
            "N = {n}: depth {}",
            cf.depth
        );
        let rhs = corollary2_rhs(&p).unwrap();
        assert!(rel(&rhs, &cf.value) < 1e-25, "N = {n}");
        // The nonterminating closed form, taken as a removable limit.
        let lim = theorem1_rhs_removable(&p).unwrap();
        assert!(rel(&lim, &rhs) < 1e-20, "N = {n}");
    }
}

#[test]
fn terminating_family_with_s_equal_q_squared() {
    let c = ctx(0.35, 64);
    let s = |x| c.scalar(x);
    let q2 = c.q_pow(2).unwrap();
    for n in [0, 1, 2, 5] {
        let p = MassonParams::terminating_with_s(
            s(0.3),
            Slot::F,
            [s(0.5), s(0.6), s(-0.45)],
            n,
            q2.clone(),
            &c,
        )
        .unwrap();
        assert!((&p.s() - &q2).abs() < 1e-18);
        let cf = eval_cf(&p, 50, &c, Method::ForwardConvergents).unwrap();
        assert!(
            rel(&corollary2_rhs(&p).unwrap(), &cf.value) < 1e-10,
            "N = {n}"
        );
    }
}

fn reduced(bits: u32) -> ReducedParams {
    let c = ctx(0.3, bits);
    let s = |x| c.scalar(x);
    let (a, b, cc, d) = (0.5, 0.3, -0.4, 0.6);
    let e = 0.4 * a * a * 0.3 / (b * cc * d);
    ReducedParams::new(s(a), [s(b), s(cc), s(d), s(e)], &c).unwrap()
}

#[test]
fn scaled_terminating_values_approach_the_8phi7_form() {
    let r = reduced(128);
    let rhs = corollary3_rhs(&r).unwrap();
    let errs: Vec<f64> = [4, 8, 16, 32]
        .iter()
        .map(|&n| rel(&corollary2_scaled(&r, n).unwrap(), &rhs))
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0] / 5.0), "{errs:?}");
    assert!(errs[3] < 1e-16, "{errs:?}");
}

#[test]
fn double_substitution_sequence_stabilises() {
    let c = ctx(0.3, 128);
    let s = |x| c.scalar(x);
    let seq = askey_wilson_sequence(
        &s(0.4),
        &[s(0.5), s(0.6), s(-0.3)],
        &s(0.07),
        &[4, 8, 12, 16, 20],
        &c,
    )
    .unwrap();
    let diffs: Vec<f64> = seq.windows(2).map(|w| rel(&w[1], &w[0])).collect();
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
    assert!(diffs[3] < 1e-6 * diffs[0]);
}
