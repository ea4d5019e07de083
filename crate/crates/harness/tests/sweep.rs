use qfrac::cfrac::Method;
use qfrac::QContext;
use qfrac_harness::sweep::{run_sweep, sweep_point, Axis};

#[test]
fn depth_scan_converges_to_the_closed_form() {
    let ctx = QContext::real(0.3).unwrap();
    let p = sweep_point(None, &ctx, 4).unwrap();
    let s = run_sweep(&p, Axis::Depth, &[2, 4, 8, 16, 64], &[], Method::ForwardConvergents).unwrap();
    let diffs: Vec<f64> = s.rows.iter().map(|r| r.closed_form_diff.unwrap()).collect();
    assert!(diffs.windows(2).take(3).all(|w| w[1] < w[0]), "{diffs:?}");
    assert!(diffs[4] < 1e-15);
}

#[test]
fn precision_scan_tightens() {
    let ctx = QContext::real(0.3).unwrap();
    let p = sweep_point(None, &ctx, 4).unwrap();
    let s = run_sweep(&p, Axis::Precision, &[10, 120], &[53, 128, 200], Method::BottomUp).unwrap();
    assert!(s.rows.iter().all(|r| r.depth == 120));
    let diffs: Vec<f64> = s.rows.iter().map(|r| r.closed_form_diff.unwrap()).collect();
    assert!(diffs[0] > diffs[1] && diffs[1] > diffs[2], "{diffs:?}");
}
