//! Depth and precision scans of the continued fraction at one point.

use qfrac::cfrac::{eval_cf, FnCoefficients, Method};
use qfrac::closed_form::{theorem1_rhs, theorem1_rhs_removable};
use qfrac::recurrence::coeffs;
use qfrac::{MassonParams, QContext, QError, Scalar};
use serde::Serialize;

use crate::checks::rel_diff;
use crate::error::{HarnessError, Result};
use crate::input::ParamFile;
use crate::report::{decimal, Decimal};
use crate::sampler::{sample_params, PointParams, Region, RegionKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Depth,
    Precision,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub depth: usize,
    pub precision_bits: u32,
    /// The depth-`depth` convergent; absent when it could not be formed.
    pub value: Option<Decimal>,
    /// `Kind: message` when the convergent could not be formed.
    pub error: Option<String>,
    /// Relative distance to the closed form at the same precision, when it
    /// can be evaluated.
    pub closed_form_diff: Option<f64>,
    /// Relative change from the previous row with a value.
    pub step_diff: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub axis: Axis,
    pub method: String,
    pub point: Vec<(String, Decimal)>,
    pub rows: Vec<SweepRow>,
}

fn closed_form(p: &MassonParams) -> Option<Scalar> {
    theorem1_rhs(p).or_else(|_| theorem1_rhs_removable(p)).ok()
}

/// The explicit point, or the first interior point drawn with `seed`.
pub fn sweep_point(file: Option<&ParamFile>, ctx: &QContext, seed: u64) -> Result<MassonParams> {
    match file {
        Some(f) => f.masson(ctx),
        None => {
            let sample = sample_params(&Region::new(RegionKind::Interior), ctx, 1, seed)?;
            match sample.points.into_iter().next().map(|p| p.params) {
                Some(PointParams::Masson(p)) => Ok(p),
                _ => Err(HarnessError::Config(
                    "sampler returned no interior point".into(),
                )),
            }
        }
    }
}

/// The depth-`depth` convergent, computed as the fraction cut off after
/// `b_depth` (so that early stopping cannot shorten it).
pub fn convergent_at(
    p: &MassonParams,
    depth: usize,
    method: Method,
) -> std::result::Result<Scalar, QError> {
    let ctx = p.ctx();
    let cut = FnCoefficients(|n: usize| {
        if n > depth {
            Ok((ctx.one(), ctx.zero()))
        } else {
            let c = coeffs(p, n as i64)?;
            Ok((c.a, c.b))
        }
    });
    Ok(eval_cf(&cut, depth + 1, ctx, method)?.value)
}

/// Evaluates the convergent at each depth (at the context precision) or at
/// each precision (at the deepest of `depths`). Rows whose convergent
/// cannot be formed carry the error instead of a value.
pub fn run_sweep(
    p: &MassonParams,
    axis: Axis,
    depths: &[usize],
    precisions: &[u32],
    method: Method,
) -> Result<Sweep> {
    let grid: Vec<(usize, u32)> = match axis {
        Axis::Depth => depths
            .iter()
            .map(|&d| (d, p.ctx().precision_bits()))
            .collect(),
        Axis::Precision => {
            let d = *depths
                .iter()
                .max()
                .ok_or_else(|| HarnessError::Config("no depth given".into()))?;
            precisions.iter().map(|&b| (d, b)).collect()
        }
    };
    if grid.is_empty() {
        return Err(HarnessError::Config("empty sweep grid".into()));
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(grid.len());
    let mut prev: Option<Scalar> = None;
    for (depth, bits) in grid {
        let q = p.with_precision(bits)?;
        let mut row = SweepRow {
            depth,
            precision_bits: bits,
            value: None,
            error: None,
            closed_form_diff: None,
            step_diff: None,
        };
        match convergent_at(&q, depth, method) {
            Ok(v) => {
                row.value = Some(decimal(&v));
                row.closed_form_diff = closed_form(&q).map(|c| rel_diff(&v, &c));
                row.step_diff = prev.as_ref().map(|w| rel_diff(&v, &w.with_prec(bits)));
                prev = Some(v);
            }
            Err(e) => row.error = Some(format!("{}: {e}", e.kind())),
        }
        rows.push(row);
    }
    let mut point = vec![
        ("q".to_string(), decimal(p.ctx().q())),
        ("a".to_string(), decimal(p.a())),
    ];
    for (k, x) in ["b", "c", "d", "e", "f"].iter().zip(p.params()) {
        point.push((k.to_string(), decimal(x)));
    }
    Ok(Sweep {
        axis,
        method: method.as_str().to_string(),
        point,
        rows,
    })
}
