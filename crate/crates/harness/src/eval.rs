//! Single evaluations at an explicit point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use qfrac::cfrac::{eval_cf, pincherle_value, Method};
use qfrac::closed_form::{corollary2_rhs, corollary3_rhs, theorem1_rhs, theorem1_rhs_removable};
use qfrac::{QContext, QError};
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::input::ParamFile;
use crate::report::{decimal, Decimal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// The continued fraction over the recurrence coefficients.
    Cf,
    /// The continued fraction over the reduced `8phi7` coefficients.
    ReducedCf,
    Pincherle,
    Theorem1,
    Corollary2,
    Corollary3,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Cf => "cf",
            Target::ReducedCf => "reduced_cf",
            Target::Pincherle => "pincherle",
            Target::Theorem1 => "theorem1",
            Target::Corollary2 => "corollary2",
            Target::Corollary3 => "corollary3",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Target> {
        let all = [
            Target::Cf,
            Target::ReducedCf,
            Target::Pincherle,
            Target::Theorem1,
            Target::Corollary2,
            Target::Corollary3,
        ];
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        all.into_iter()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| HarnessError::Config(format!("unknown evaluation target {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub target: String,
    pub precision_bits: u32,
    pub value: Decimal,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

pub fn evaluate(
    target: Target,
    file: &ParamFile,
    ctx: &QContext,
    depth: usize,
    method: Method,
) -> Result<Evaluation> {
    let mut diagnostics = BTreeMap::new();
    let cf = |t: qfrac::ConvergentTrace, d: &mut BTreeMap<String, serde_json::Value>| {
        d.insert("method".into(), t.method.as_str().into());
        d.insert("depth".into(), t.depth.into());
        d.insert("est_error".into(), t.est_error.into());
        d.insert("terminated".into(), t.terminated.into());
        t.value
    };
    let value = match target {
        Target::Cf => cf(
            eval_cf(&file.masson(ctx)?, depth, ctx, method)?,
            &mut diagnostics,
        ),
        Target::ReducedCf => cf(
            eval_cf(&file.reduced(ctx)?, depth, ctx, method)?,
            &mut diagnostics,
        ),
        Target::Pincherle => pincherle_value(&file.masson(ctx)?)?,
        Target::Theorem1 => {
            let p = file.masson(ctx)?;
            match theorem1_rhs(&p) {
                Err(QError::ZeroDenominator { .. }) if p.terminating_slot().is_some() => {
                    diagnostics.insert("removable_limit".into(), true.into());
                    theorem1_rhs_removable(&p)?
                }
                r => r?,
            }
        }
        Target::Corollary2 => corollary2_rhs(&file.masson(ctx)?)?,
        Target::Corollary3 => corollary3_rhs(&file.reduced(ctx)?)?,
    };
    Ok(Evaluation {
        target: target.to_string(),
        precision_bits: ctx.precision_bits(),
        value: decimal(&value),
        diagnostics,
    })
}
