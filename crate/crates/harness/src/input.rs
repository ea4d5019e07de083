//! Parameter files: a flat JSON object of decimal strings.
//!
//! ```json
//! {"q": "0.3", "a": ["0.35", "0.05"], "b": "0.42", "c": "0.55",
//!  "d": "0.61", "e": "0.47", "s": "0.0575"}
//! ```
//!
//! A value is either one decimal string (real) or a `[re, im]` pair.
//! Plain JSON numbers are accepted but go through `f64` first.

use std::path::Path;

use qfrac::closed_form::ReducedParams;
use qfrac::vwp::{ParameterSet10, Slot};
use qfrac::{MassonParams, QContext, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(String),
    Pair([String; 2]),
    Number(f64),
}

impl ComplexInput {
    pub fn to_scalar(&self, prec: u32) -> Result<Scalar> {
        let v = match self {
            ComplexInput::Real(re) => Scalar::parse(re, "0", prec)?,
            ComplexInput::Pair([re, im]) => Scalar::parse(re, im, prec)?,
            ComplexInput::Number(x) => Scalar::parse(&x.to_string(), "0", prec)?,
        };
        Ok(v)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TerminatingInput {
    /// Which of `b..f` is set to `a q^{N+1}`.
    pub slot: String,
    pub n: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub q: Option<ComplexInput>,
    pub a: Option<ComplexInput>,
    pub b: Option<ComplexInput>,
    pub c: Option<ComplexInput>,
    pub d: Option<ComplexInput>,
    pub e: Option<ComplexInput>,
    pub f: Option<ComplexInput>,
    pub g: Option<ComplexInput>,
    pub h: Option<ComplexInput>,
    pub s: Option<ComplexInput>,
    pub terminating: Option<TerminatingInput>,
    /// Distinguished parameter of a complementary pair (default `h`).
    pub distinguished: Option<String>,
}

impl ParamFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Inline JSON when `arg` starts with `{`, otherwise a file path.
    pub fn load(arg: &str) -> Result<Self> {
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') {
            ParamFile::parse(trimmed)
        } else {
            ParamFile::parse(&std::fs::read_to_string(Path::new(arg))?)
        }
    }

    fn slot_value(&self, slot: Slot) -> Option<&ComplexInput> {
        match slot {
            Slot::B => self.b.as_ref(),
            Slot::C => self.c.as_ref(),
            Slot::D => self.d.as_ref(),
            Slot::E => self.e.as_ref(),
            Slot::F => self.f.as_ref(),
            Slot::G => self.g.as_ref(),
            Slot::H => self.h.as_ref(),
        }
    }

    fn required(&self, name: &str, v: Option<&ComplexInput>, prec: u32) -> Result<Scalar> {
        v.ok_or_else(|| HarnessError::Config(format!("parameter {name} is required")))?
            .to_scalar(prec)
    }

    fn slot(&self, slot: Slot, prec: u32) -> Result<Scalar> {
        self.required(slot.name(), self.slot_value(slot), prec)
    }

    fn a(&self, prec: u32) -> Result<Scalar> {
        self.required("a", self.a.as_ref(), prec)
    }

    pub fn q(&self, prec: u32) -> Result<Option<Scalar>> {
        self.q.as_ref().map(|q| q.to_scalar(prec)).transpose()
    }

    /// Recurrence parameters. Accepted shapes:
    ///
    /// - `a, b, c, d, e, f`;
    /// - `a, b, c, d, e, s` (f solved from s);
    /// - `terminating` with the other four of `b..f`;
    /// - `terminating` and `s` with three of the other four, the last of
    ///   them (in `b..f` order) left out and solved.
    pub fn masson(&self, ctx: &QContext) -> Result<MassonParams> {
        let prec = ctx.precision_bits();
        let a = self.a(prec)?;
        let five = [Slot::B, Slot::C, Slot::D, Slot::E, Slot::F];
        let s = self.s.as_ref().map(|s| s.to_scalar(prec)).transpose()?;
        match &self.terminating {
            Some(t) => {
                let slot: Slot = t.slot.parse()?;
                if !five.contains(&slot) {
                    return Err(HarnessError::Config(format!(
                        "terminating slot must be one of b..f, got {slot}"
                    )));
                }
                if self.slot_value(slot).is_some() {
                    return Err(HarnessError::Config(format!(
                        "{slot} is fixed by the terminating family; omit it"
                    )));
                }
                let rest: Vec<Slot> = five.iter().copied().filter(|x| *x != slot).collect();
                match s {
                    Some(s) => {
                        let last = rest[3];
                        if self.slot_value(last).is_some() {
                            return Err(HarnessError::Config(format!(
                                "{last} is solved from s; omit it"
                            )));
                        }
                        let three = [
                            self.slot(rest[0], prec)?,
                            self.slot(rest[1], prec)?,
                            self.slot(rest[2], prec)?,
                        ];
                        Ok(MassonParams::terminating_with_s(
                            a, slot, three, t.n, s, ctx,
                        )?)
                    }
                    None => {
                        let four = [
                            self.slot(rest[0], prec)?,
                            self.slot(rest[1], prec)?,
                            self.slot(rest[2], prec)?,
                            self.slot(rest[3], prec)?,
                        ];
                        Ok(MassonParams::terminating(a, slot, four, t.n, ctx)?)
                    }
                }
            }
            None => {
                let bcde = [
                    self.slot(Slot::B, prec)?,
                    self.slot(Slot::C, prec)?,
                    self.slot(Slot::D, prec)?,
                    self.slot(Slot::E, prec)?,
                ];
                match (s, self.f.is_some()) {
                    (Some(_), true) => {
                        Err(HarnessError::Config("give either f or s, not both".into()))
                    }
                    (Some(s), false) => Ok(MassonParams::with_s(a, bcde, s, ctx)?),
                    (None, _) => {
                        let [b, c, d, e] = bcde;
                        Ok(MassonParams::new(
                            a,
                            [b, c, d, e, self.slot(Slot::F, prec)?],
                            ctx,
                        )?)
                    }
                }
            }
        }
    }

    /// Balanced `10phi9` parameters; `h` is solved when absent.
    pub fn ten(&self, ctx: &QContext) -> Result<(ParameterSet10, Slot)> {
        let prec = ctx.precision_bits();
        let a = self.a(prec)?;
        let b_to_g =
            [Slot::B, Slot::C, Slot::D, Slot::E, Slot::F, Slot::G].map(|s| self.slot(s, prec));
        let [b, c, d, e, f, g] = b_to_g;
        let six = [b?, c?, d?, e?, f?, g?];
        let set = match &self.h {
            Some(h) => {
                let [b, c, d, e, f, g] = six;
                ParameterSet10::new(a, [b, c, d, e, f, g, h.to_scalar(prec)?], ctx)?
            }
            None => ParameterSet10::solve_for_h(a, six, ctx)?,
        };
        let slot = match &self.distinguished {
            Some(s) => s.parse()?,
            None => Slot::H,
        };
        Ok((set, slot))
    }

    /// The five parameters `a, b, c, d, e` of the `8phi7` limit.
    pub fn reduced(&self, ctx: &QContext) -> Result<ReducedParams> {
        let prec = ctx.precision_bits();
        let four = [
            self.slot(Slot::B, prec)?,
            self.slot(Slot::C, prec)?,
            self.slot(Slot::D, prec)?,
            self.slot(Slot::E, prec)?,
        ];
        Ok(ReducedParams::new(self.a(prec)?, four, ctx)?)
    }

    /// `a`, `b, c, d` and `s` of the double-substitution family.
    pub fn askey_wilson(&self, ctx: &QContext) -> Result<(Scalar, [Scalar; 3], Scalar)> {
        let prec = ctx.precision_bits();
        let bcd = [
            self.slot(Slot::B, prec)?,
            self.slot(Slot::C, prec)?,
            self.slot(Slot::D, prec)?,
        ];
        Ok((
            self.a(prec)?,
            bcd,
            self.required("s", self.s.as_ref(), prec)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_and_pair_values() {
        let p = ParamFile::parse(r#"{"q": "0.4", "a": ["0.3", "0.1"], "b": 0.5}"#).unwrap();
        assert_eq!(p.q, Some(ComplexInput::Real("0.4".into())));
        let a = p.a.unwrap().to_scalar(64).unwrap();
        assert!((a.im() - 0.1).abs() < 1e-18);
        assert!(matches!(p.b, Some(ComplexInput::Number(_))));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ParamFile::parse(r#"{"z": "1"}"#).is_err());
    }

    #[test]
    fn terminating_with_s_solves_last_slot() {
        let ctx = QContext::real(0.3).unwrap();
        let p = ParamFile::parse(
            r#"{"a": "0.3", "b": "0.5", "c": "0.6", "d": "0.7", "s": "0.09",
                "terminating": {"slot": "f", "n": 2}}"#,
        )
        .unwrap();
        let m = p.masson(&ctx).unwrap();
        assert!((m.s().re() - 0.09).abs() < 1e-17);
        // e was omitted and solved; giving it as well is a conflict.
        let mut bad = p.clone();
        bad.e = Some(ComplexInput::Real("0.4".into()));
        assert!(bad.masson(&ctx).is_err());
    }

    #[test]
    fn f_and_s_conflict() {
        let ctx = QContext::real(0.3).unwrap();
        let p = ParamFile::parse(
            r#"{"a": "0.3", "b": "0.5", "c": "0.6", "d": "0.7", "e": "0.4", "f": "0.2", "s": "0.09"}"#,
        )
        .unwrap();
        assert!(matches!(p.masson(&ctx), Err(HarnessError::Config(_))));
    }
}
