use qfrac::QContext;
use qfrac_harness::report::Status;
use qfrac_harness::sampler::{sample_params, PointParams, Region, RegionKind};
use qfrac_harness::{run_check, CheckName, CheckSpec, HarnessError, ParamFile, Points};

fn ctx() -> QContext {
    QContext::real(0.3).unwrap()
}

#[test]
fn theorem1_reports_are_byte_identical() {
    let spec = CheckSpec::sampled(CheckName::Theorem1, ctx(), 10, 1);
    let first = run_check(&spec).unwrap().to_json().unwrap();
    let second = run_check(&spec).unwrap().to_json().unwrap();
    assert_eq!(first, second);
    assert!(!first.contains("runtime"));
}

#[test]
fn resampling_reproduces_the_points() {
    let region = Region::new(RegionKind::Interior).complex(true);
    let a = sample_params(&region, &ctx(), 6, 42).unwrap();
    let b = sample_params(&region, &ctx(), 6, 42).unwrap();
    let c = sample_params(&region, &ctx(), 6, 43).unwrap();
    let key = |s: &qfrac_harness::sampler::Sample| {
        s.points
            .iter()
            .map(|p| match &p.params {
                PointParams::Masson(m) => format!("{} {}", m.a(), m.s()),
                _ => unreachable!(),
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
    assert_ne!(key(&a), key(&c));
}

#[test]
fn sampled_ten_points_are_balanced() {
    let ctx = ctx();
    let sample = sample_params(&Region::new(RegionKind::Ten).complex(true), &ctx, 10, 5).unwrap();
    for pt in &sample.points {
        let PointParams::Ten { set, .. } = &pt.params else {
            panic!()
        };
        // a^3 q^2 = b c d e f g h for the balanced well-poised series.
        let lhs = ctx.q() * ctx.q() * &set.a * &set.a * &set.a;
        let mut rhs = ctx.one();
        for x in &set.params {
            rhs = rhs * x;
        }
        assert!((lhs - &rhs).abs() <= 1e-15 * rhs.abs());
    }
}

#[test]
fn empty_region_is_an_error() {
    let mut region = Region::new(RegionKind::Interior);
    region.a = (0.6, 0.2);
    assert!(matches!(
        sample_params(&region, &ctx(), 4, 1),
        Err(HarnessError::EmptyRegion { .. })
    ));
}

#[test]
fn malformed_spec_is_a_config_error() {
    let spec = CheckSpec::sampled(CheckName::Pincherle, ctx(), 0, 1);
    assert!(matches!(run_check(&spec), Err(HarnessError::Config(_))));
    assert!("theorem_one".parse::<CheckName>().is_err());
}

#[test]
fn every_point_appears_once_with_a_terminal_status() {
    let spec = CheckSpec::sampled(CheckName::All, ctx(), 5, 3);
    let report = run_check(&spec).unwrap();
    assert_eq!(report.records.len(), 5 * CheckName::EACH.len());
    for name in CheckName::EACH {
        let idx: Vec<usize> = report
            .records
            .iter()
            .filter(|r| r.check == name.as_str())
            .map(|r| r.index)
            .collect();
        assert_eq!(idx, [0, 1, 2, 3, 4], "{name}");
    }
    for r in &report.records {
        if r.status != Status::Pass {
            assert!(r.error.is_some() || r.residual.is_some());
        }
    }
    let s = &report.summary;
    assert_eq!(s.passed + s.failed + s.errors, s.total);
}

#[test]
fn component_errors_are_captured_not_raised() {
    // |q| = 0.9 with a far outside the interior window of the limits.
    let file = ParamFile::parse(
        r#"{"a": "0.5", "b": "0.3", "c": "0.4", "d": "0.6", "e": "0.7", "s": "5"}"#,
    )
    .unwrap();
    let spec = CheckSpec {
        name: CheckName::Theorem1,
        ctx: ctx(),
        depth: 50,
        seed: 0,
        points: Points::Explicit(Box::new(file)),
    };
    let report = run_check(&spec).unwrap();
    assert_eq!(report.records.len(), 1);
    let r = &report.records[0];
    assert_ne!(r.status, Status::Pass);
    assert!(r.error.is_some(), "{r:?}");
}

#[test]
fn s_equal_q_squared_family_passes() {
    // Every second block of the terminating sampler has s = q^2.
    let report = run_check(&CheckSpec::sampled(CheckName::Corollary2, ctx(), 16, 7)).unwrap();
    let family: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.label.ends_with("s=q^2"))
        .collect();
    assert_eq!(family.len(), 8);
    for r in &family {
        assert_eq!(r.status, Status::Pass, "{r:?}");
    }
    assert!(report.all_passed());
}

#[test]
fn asymptotic_check_stays_in_envelope() {
    let report = run_check(&CheckSpec::sampled(CheckName::Asymptotics, ctx(), 10, 11)).unwrap();
    assert!(report.all_passed());
}

#[test]
fn csv_has_one_row_per_record() {
    let report = run_check(&CheckSpec::sampled(CheckName::Contiguous, ctx(), 4, 2)).unwrap();
    let csv = report.to_csv().unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "check,index,label,status,residual,tolerance,error"
    );
    assert_eq!(lines.count(), 4);
}
