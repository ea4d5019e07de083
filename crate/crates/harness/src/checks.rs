//! The named identity suites and the driver that runs them over sampled or
//! explicit points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use qfrac::cfrac::{eval_cf, pincherle_value, ConvergentTrace, Method};
use qfrac::closed_form::{
    askey_wilson_sequence, corollary2_rhs, corollary2_scaled, corollary3_rhs, theorem1_rhs,
    theorem1_rhs_removable, ReducedParams,
};
use qfrac::recurrence::{asymptotic_check, residuals, Which};
use qfrac::vwp::{contiguous_terms, ParameterSet10, Slot};
use qfrac::{MassonParams, QContext, QError, Scalar};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{HarnessError, Result};
use crate::input::ParamFile;
use crate::report::{decimal, Decimal, Record, RejectionRecord, Report, Status};
use crate::sampler::{sample_params, PointParams, Region, RegionKind, SamplePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckName {
    Contiguous,
    RecurrenceResiduals,
    Asymptotics,
    Pincherle,
    Theorem1,
    Corollary2,
    Corollary3,
    AwLimitTrend,
    All,
}

impl CheckName {
    pub const EACH: [CheckName; 8] = [
        CheckName::Contiguous,
        CheckName::RecurrenceResiduals,
        CheckName::Asymptotics,
        CheckName::Pincherle,
        CheckName::Theorem1,
        CheckName::Corollary2,
        CheckName::Corollary3,
        CheckName::AwLimitTrend,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Contiguous => "contiguous",
            CheckName::RecurrenceResiduals => "recurrence_residuals",
            CheckName::Asymptotics => "asymptotics",
            CheckName::Pincherle => "pincherle",
            CheckName::Theorem1 => "theorem1",
            CheckName::Corollary2 => "corollary2",
            CheckName::Corollary3 => "corollary3",
            CheckName::AwLimitTrend => "aw_limit_trend",
            CheckName::All => "all",
        }
    }

    pub fn region(self) -> RegionKind {
        match self {
            CheckName::Contiguous => RegionKind::Ten,
            CheckName::Corollary2 => RegionKind::Terminating,
            CheckName::Corollary3 => RegionKind::Reduced,
            CheckName::AwLimitTrend => RegionKind::AskeyWilson,
            _ => RegionKind::Interior,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<CheckName> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        CheckName::EACH
            .iter()
            .chain(std::iter::once(&CheckName::All))
            .copied()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| HarnessError::Config(format!("unknown check {s:?}")))
    }
}

/// Where the points of a check come from.
#[derive(Clone, Debug)]
pub enum Points {
    Sampled { count: usize, complex: bool },
    Explicit(Box<ParamFile>),
}

#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub name: CheckName,
    pub ctx: QContext,
    /// Maximum continued-fraction depth.
    pub depth: usize,
    pub seed: u64,
    pub points: Points,
}

impl CheckSpec {
    pub fn sampled(name: CheckName, ctx: QContext, count: usize, seed: u64) -> CheckSpec {
        CheckSpec {
            name,
            ctx,
            depth: 200,
            seed,
            points: Points::Sampled {
                count,
                complex: false,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.depth < 1 {
            return Err(HarnessError::Config("depth must be at least 1".into()));
        }
        if let Points::Sampled { count: 0, .. } = self.points {
            return Err(HarnessError::Config("count must be at least 1".into()));
        }
        Ok(())
    }
}

/// What a check computed at one point.
struct Outcome {
    values: BTreeMap<String, Decimal>,
    residual: Option<f64>,
    pass: bool,
    note: Option<String>,
    diagnostics: BTreeMap<String, serde_json::Value>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            values: BTreeMap::new(),
            residual: None,
            pass: false,
            note: None,
            diagnostics: BTreeMap::new(),
        }
    }

    fn value(&mut self, name: &str, x: &Scalar) {
        self.values.insert(name.to_string(), decimal(x));
    }

    fn diag(&mut self, name: &str, v: serde_json::Value) {
        self.diagnostics.insert(name.to_string(), v);
    }

    fn trace(&mut self, name: &str, t: &ConvergentTrace) {
        self.value(name, &t.value);
        self.diag(
            name,
            json!({"method": t.method.as_str(), "depth": t.depth, "est_error": t.est_error, "terminated": t.terminated}),
        );
    }
}

/// `|x - y| / |y|`, or the absolute difference when `y = 0`.
pub fn rel_diff(x: &Scalar, y: &Scalar) -> f64 {
    let d = (x - y).abs();
    let m = y.abs();
    if m > 0.0 {
        d / m
    } else {
        d
    }
}

type Eval = std::result::Result<Outcome, QError>;

fn contiguous(set: &ParameterSet10, slot: Slot, ctx: &QContext) -> Eval {
    let t = contiguous_terms(set, slot, ctx)?;
    let mut o = Outcome::new();
    o.value("first", &t.first);
    o.value("second", &t.second);
    o.value("third", &t.third);
    o.diag("tail", json!(t.tail));
    o.residual = Some(t.residual);
    o.pass = t.residual <= ctx.identity_tol();
    Ok(o)
}

fn recurrence_residuals(p: &MassonParams, ctx: &QContext) -> Eval {
    let mut o = Outcome::new();
    let mut worst: f64 = 0.0;
    for which in [Which::X1, Which::X2, Which::Xmin] {
        // The minimal solution is formed by cancellation; when the working
        // precision cannot resolve it, retry once at twice the precision.
        let r = match residuals(p, which, 1..=8) {
            Err(QError::MinimalityLost { .. }) => {
                let bits = 2 * ctx.precision_bits();
                o.diag(&format!("escalated_bits_{which}"), json!(bits));
                residuals(&p.with_precision(bits)?, which, 1..=8)?
            }
            r => r?,
        };
        let m = r.iter().cloned().fold(0.0, f64::max);
        o.diag(&format!("max_residual_{which}"), json!(m));
        worst = worst.max(m);
    }
    o.residual = Some(worst);
    o.pass = worst <= ctx.identity_tol();
    Ok(o)
}

fn asymptotics(p: &MassonParams) -> Eval {
    let r = asymptotic_check(p, 20)?;
    let mut o = Outcome::new();
    let (a10, a10_one, b10) = r.at(10);
    let (a20, a20_one, b20) = r.at(20);
    o.diag("a_minus_1_plus_q", json!({"n10": a10, "n20": a20}));
    o.diag("a_minus_1", json!({"n10": a10_one, "n20": a20_one}));
    o.diag("b_minus_q", json!({"n10": b10, "n20": b20}));
    o.diag(
        "top_quartile",
        json!({"a": r.a_top_quartile, "b": r.b_top_quartile}),
    );
    o.residual = Some(a20.max(b20));
    o.pass = r.within_envelope;
    if !o.pass {
        o.note = Some("deviation above the fitted geometric envelope".into());
    }
    Ok(o)
}

/// Harmonization: a convergent only counts when its own error estimate is
/// an order of magnitude below the tolerance it is compared at.
fn converged(t: &ConvergentTrace, ctx: &QContext, o: &mut Outcome) -> bool {
    let ok = t.terminated || t.est_error <= ctx.identity_tol() / 10.0;
    if !ok {
        o.note = Some(format!(
            "continued fraction error estimate {:e} above identity_tol/10",
            t.est_error
        ));
    }
    ok
}

fn pincherle(p: &MassonParams, depth: usize, ctx: &QContext) -> Eval {
    let cf = eval_cf(p, depth, ctx, Method::ForwardConvergents)?;
    let pv = pincherle_value(p)?;
    let mut o = Outcome::new();
    o.trace("cf", &cf);
    o.value("pincherle", &pv);
    let r = rel_diff(&pv, &cf.value);
    o.residual = Some(r);
    o.pass = converged(&cf, ctx, &mut o) && r <= ctx.identity_tol();
    Ok(o)
}

fn theorem1(p: &MassonParams, depth: usize, ctx: &QContext) -> Eval {
    let cf = eval_cf(p, depth, ctx, Method::ForwardConvergents)?;
    let pv = pincherle_value(p)?;
    let th = theorem1_rhs(p)?;
    let mut o = Outcome::new();
    o.trace("cf", &cf);
    o.value("pincherle", &pv);
    o.value("closed_form", &th);
    let r_pv = rel_diff(&pv, &cf.value);
    let r_th = rel_diff(&th, &cf.value);
    o.diag("cf_vs_pincherle", json!(r_pv));
    o.diag("cf_vs_closed_form", json!(r_th));
    o.residual = Some(r_pv.max(r_th));
    o.pass = converged(&cf, ctx, &mut o) && r_pv.max(r_th) <= ctx.identity_tol();
    Ok(o)
}

fn corollary2(p: &MassonParams, depth: usize, ctx: &QContext) -> Eval {
    let cf = eval_cf(p, depth, ctx, Method::ForwardConvergents)?;
    let rhs = corollary2_rhs(p)?;
    let mut o = Outcome::new();
    o.trace("cf", &cf);
    o.value("closed_form", &rhs);
    let r = rel_diff(&rhs, &cf.value);
    o.residual = Some(r);
    o.pass = cf.terminated && r <= ctx.identity_tol();
    if !cf.terminated {
        o.note = Some("continued fraction did not terminate".into());
    }
    // The nonterminating closed form must agree wherever it can be
    // evaluated; outside the window of its limits it is skipped.
    match theorem1_rhs_removable(p) {
        Ok(th) => {
            let rt = rel_diff(&th, &rhs);
            o.value("nonterminating_closed_form", &th);
            o.diag("nonterminating_vs_terminating", json!(rt));
            if rt > ctx.identity_tol() {
                o.pass = false;
                o.note = Some(format!("nonterminating closed form differs by {rt:e}"));
            }
        }
        Err(e) => o.diag(
            "nonterminating_vs_terminating",
            json!(format!("skipped: {}: {e}", e.kind())),
        ),
    }
    Ok(o)
}

/// Error of the scaled terminating values against the `8phi7` closed form
/// at `N = 4` and `N = 8`.
pub fn corollary3_trend(r: &ReducedParams) -> std::result::Result<(f64, f64), QError> {
    let rhs = corollary3_rhs(r)?;
    let e4 = rel_diff(&corollary2_scaled(r, 4)?, &rhs);
    let e8 = rel_diff(&corollary2_scaled(r, 8)?, &rhs);
    Ok((e4, e8))
}

fn corollary3(r: &ReducedParams, depth: usize, ctx: &QContext) -> Eval {
    let rhs = corollary3_rhs(r)?;
    let cf = eval_cf(r, depth, ctx, Method::ForwardConvergents)?;
    let (e4, e8) = corollary3_trend(r)?;
    let mut o = Outcome::new();
    o.trace("cf", &cf);
    o.value("closed_form", &rhs);
    let res = rel_diff(&cf.value, &rhs);
    o.diag(
        "limit_error",
        json!({"n4": e4, "n8": e8, "shrink": e4 / e8}),
    );
    o.residual = Some(res);
    let cf_ok = converged(&cf, ctx, &mut o) && res <= ctx.identity_tol();
    let trend_ok = e8 * 5.0 <= e4;
    o.pass = cf_ok && trend_ok;
    if !cf_ok {
        o.note = Some(format!(
            "continued fraction over (c_n, d_n) differs from the closed form by {res:e}"
        ));
    } else if !trend_ok {
        o.note = Some("limit error did not shrink fivefold from N = 4 to N = 8".into());
    }
    Ok(o)
}

/// Orders used for the double-substitution sequence.
pub const AW_ORDERS: [usize; 7] = [4, 6, 8, 10, 12, 14, 16];

fn aw_limit_trend(a: &Scalar, bcd: &[Scalar; 3], s: &Scalar, ctx: &QContext) -> Eval {
    let seq = askey_wilson_sequence(a, bcd, s, &AW_ORDERS, ctx)?;
    let mut o = Outcome::new();
    let last = seq.last().unwrap();
    let diffs: Vec<f64> = seq.windows(2).map(|w| rel_diff(&w[1], &w[0])).collect();
    for (n, v) in AW_ORDERS.iter().zip(&seq) {
        o.value(&format!("n{n:02}"), v);
    }
    o.value("last", last);
    o.diag("successive_differences", json!(diffs));
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let first = diffs[0];
    let final_diff = *diffs.last().unwrap();
    o.residual = Some(final_diff);
    o.pass = monotone && final_diff <= first * 1e-2;
    if !o.pass {
        o.note = Some("sequence does not stabilise geometrically".into());
    }
    Ok(o)
}

fn point_map(p: &PointParams, ctx: &QContext) -> BTreeMap<String, Decimal> {
    let mut m = BTreeMap::new();
    m.insert("q".to_string(), decimal(ctx.q()));
    let mut put = |k: &str, v: &Scalar| {
        m.insert(k.to_string(), decimal(v));
    };
    match p {
        PointParams::Ten { set, .. } => {
            put("a", &set.a);
            for s in Slot::ALL {
                put(s.name(), set.get(s));
            }
        }
        PointParams::Masson(mp) => {
            put("a", mp.a());
            for (s, x) in ["b", "c", "d", "e", "f"].iter().zip(mp.params()) {
                put(s, x);
            }
            put("s", &mp.s());
        }
        PointParams::Reduced(r) => {
            put("a", &r.a);
            for (s, x) in ["b", "c", "d", "e"].iter().zip(&r.params) {
                put(s, x);
            }
        }
        PointParams::AskeyWilson { a, bcd, s } => {
            put("a", a);
            for (k, x) in ["b", "c", "d"].iter().zip(bcd) {
                put(k, x);
            }
            put("s", s);
        }
    }
    m
}

fn evaluate(name: CheckName, pt: &SamplePoint, spec: &CheckSpec) -> Record {
    let ctx = &spec.ctx;
    let outcome = match (&pt.params, name) {
        (PointParams::Ten { set, slot }, CheckName::Contiguous) => contiguous(set, *slot, ctx),
        (PointParams::Masson(p), CheckName::RecurrenceResiduals) => recurrence_residuals(p, ctx),
        (PointParams::Masson(p), CheckName::Asymptotics) => asymptotics(p),
        (PointParams::Masson(p), CheckName::Pincherle) => pincherle(p, spec.depth, ctx),
        (PointParams::Masson(p), CheckName::Theorem1) => theorem1(p, spec.depth, ctx),
        (PointParams::Masson(p), CheckName::Corollary2) => corollary2(p, spec.depth, ctx),
        (PointParams::Reduced(r), CheckName::Corollary3) => corollary3(r, spec.depth, ctx),
        (PointParams::AskeyWilson { a, bcd, s }, CheckName::AwLimitTrend) => {
            aw_limit_trend(a, bcd, s, ctx)
        }
        _ => Err(QError::InvalidParameters(format!(
            "point shape does not fit check {name}"
        ))),
    };
    let base = |status, error| Record {
        check: name.to_string(),
        index: pt.index,
        label: pt.label.clone(),
        point: point_map(&pt.params, ctx),
        values: BTreeMap::new(),
        residual: None,
        tolerance: ctx.identity_tol(),
        status,
        error,
        diagnostics: BTreeMap::new(),
    };
    match outcome {
        Ok(o) => Record {
            values: o.values,
            residual: o.residual,
            diagnostics: o.diagnostics,
            ..base(
                if o.pass { Status::Pass } else { Status::Fail },
                if o.pass { None } else { o.note },
            )
        },
        Err(e) => base(Status::Error, Some(format!("{}: {e}", e.kind()))),
    }
}

fn explicit_point(name: CheckName, file: &ParamFile, ctx: &QContext) -> Result<SamplePoint> {
    let params = match name.region() {
        RegionKind::Ten => {
            let (set, slot) = file.ten(ctx)?;
            PointParams::Ten { set, slot }
        }
        RegionKind::Interior | RegionKind::Terminating => PointParams::Masson(file.masson(ctx)?),
        RegionKind::Reduced => PointParams::Reduced(file.reduced(ctx)?),
        RegionKind::AskeyWilson => {
            let (a, bcd, s) = file.askey_wilson(ctx)?;
            PointParams::AskeyWilson { a, bcd, s }
        }
    };
    Ok(SamplePoint {
        index: 0,
        label: "explicit".into(),
        params,
    })
}

/// The region a check samples from. Sampling seeds are derived from the
/// spec seed and the check name so that `all` reproduces each single check.
pub fn region_for(name: CheckName, complex: bool) -> Region {
    Region::new(name.region()).complex(complex)
}

fn run_single(
    name: CheckName,
    spec: &CheckSpec,
    records: &mut Vec<Record>,
    rejected: &mut Vec<RejectionRecord>,
) -> Result<()> {
    let points = match &spec.points {
        Points::Explicit(file) => vec![explicit_point(name, file, &spec.ctx)?],
        Points::Sampled { count, complex } => {
            let sample = sample_params(&region_for(name, *complex), &spec.ctx, *count, spec.seed)?;
            rejected.extend(sample.rejected.into_iter().map(|r| RejectionRecord {
                check: name.to_string(),
                rejection: r,
            }));
            sample.points
        }
    };
    let mut out: Vec<Record> = points
        .par_iter()
        .map(|pt| evaluate(name, pt, spec))
        .collect();
    out.sort_by_key(|r| r.index);
    records.extend(out);
    Ok(())
}

/// Runs a check (or all of them). Point-level failures are recorded, never
/// raised; only a malformed spec or an empty sampling region is an error.
pub fn run_check(spec: &CheckSpec) -> Result<Report> {
    spec.validate()?;
    let start = Instant::now();
    let names: Vec<CheckName> = match spec.name {
        CheckName::All => CheckName::EACH.to_vec(),
        n => vec![n],
    };
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for name in &names {
        run_single(*name, spec, &mut records, &mut rejected)?;
    }
    let summary = Report::summarize(&records);
    Ok(Report {
        checks: names.iter().map(|n| n.to_string()).collect(),
        q: decimal(spec.ctx.q()),
        precision_bits: spec.ctx.precision_bits(),
        series_tol: spec.ctx.series_tol(),
        identity_tol: spec.ctx.identity_tol(),
        depth: spec.depth,
        seed: spec.seed,
        records,
        rejected,
        summary,
        runtime: start.elapsed(),
    })
}
