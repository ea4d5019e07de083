use crate::error::{QError, Result};
use crate::scalar::{Scalar, MIN_PRECISION};

/// Default working precision: a 64-bit mantissa.
pub const DEFAULT_PRECISION: u32 = 64;

/// Number of consecutive negligible terms required before a series or
/// product is truncated.
pub const DEFAULT_TAIL_RUN: usize = 3;

pub const DEFAULT_MAX_TERMS: usize = 20_000;

/// The base `q` together with the precision and tolerance bundle that every
/// evaluation reads.
///
/// Invariants, checked at construction: `|q| < 1`,
/// `0 < series_tol <= identity_tol < 1`, `max_terms >= 1`.
#[derive(Clone, Debug)]
pub struct QContext {
    q: Scalar,
    q_abs: f64,
    series_tol: f64,
    identity_tol: f64,
    max_terms: usize,
    tail_run: usize,
    precision_bits: u32,
}

impl QContext {
    /// Context with tolerances derived from the precision: a series tolerance
    /// a few bits above the unit roundoff and an identity tolerance of about
    /// half the working digits.
    pub fn new(q: Scalar, precision_bits: u32) -> Result<Self> {
        if precision_bits < MIN_PRECISION {
            return Err(QError::InvalidContext(format!(
                "precision {precision_bits} below the minimum of {MIN_PRECISION} bits"
            )));
        }
        let q = q.with_prec(precision_bits);
        if !q.is_finite() {
            return Err(QError::InvalidContext("q is not finite".into()));
        }
        let q_abs = q.abs();
        if q_abs >= 1.0 {
            return Err(QError::InvalidContext(format!(
                "|q| = {q_abs} is not below 1"
            )));
        }
        let ctx = QContext {
            q,
            q_abs,
            series_tol: 2f64.powi(-(precision_bits as i32 - 4)),
            identity_tol: 2f64.powi(-(precision_bits as i32 / 2)),
            max_terms: DEFAULT_MAX_TERMS,
            tail_run: DEFAULT_TAIL_RUN,
            precision_bits,
        };
        ctx.validate()
    }

    /// Real `q` at the default precision.
    pub fn real(q: f64) -> Result<Self> {
        QContext::new(Scalar::real(q, DEFAULT_PRECISION), DEFAULT_PRECISION)
    }

    pub fn with_series_tol(mut self, tol: f64) -> Result<Self> {
        self.series_tol = tol;
        self.validate()
    }

    pub fn with_identity_tol(mut self, tol: f64) -> Result<Self> {
        self.identity_tol = tol;
        self.validate()
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        self.max_terms = max_terms;
        self.validate()
    }

    pub fn with_tail_run(mut self, run: usize) -> Result<Self> {
        self.tail_run = run;
        self.validate()
    }

    /// Same `q` and tolerances at a different precision. The series
    /// tolerance is rescaled so truncation keeps pace with the roundoff.
    pub fn with_precision(&self, precision_bits: u32) -> Result<Self> {
        let fresh = QContext::new(self.q.clone(), precision_bits)?;
        QContext {
            identity_tol: self.identity_tol,
            max_terms: self.max_terms,
            tail_run: self.tail_run,
            series_tol: fresh.series_tol.min(self.identity_tol),
            ..fresh
        }
        .validate()
    }

    fn validate(self) -> Result<Self> {
        let ok = |c: bool, msg: &str| {
            if c {
                Ok(())
            } else {
                Err(QError::InvalidContext(msg.to_string()))
            }
        };
        ok(self.series_tol > 0.0, "series_tol must be positive")?;
        ok(
            self.series_tol <= self.identity_tol,
            "series_tol must not exceed identity_tol",
        )?;
        ok(self.identity_tol < 1.0, "identity_tol must be below 1")?;
        ok(self.max_terms >= 1, "max_terms must be at least 1")?;
        ok(self.tail_run >= 1, "tail_run must be at least 1")?;
        Ok(self)
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn q_abs(&self) -> f64 {
        self.q_abs
    }

    pub fn series_tol(&self) -> f64 {
        self.series_tol
    }

    pub fn identity_tol(&self) -> f64 {
        self.identity_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn tail_run(&self) -> usize {
        self.tail_run
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Unit roundoff of the working precision.
    pub fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.precision_bits as i32)
    }

    /// Magnitude below which a factor `1 - x q^k` is treated as an exact
    /// zero: a few hundred ulps, enough to absorb the rounding in `x q^k`
    /// when `x` was itself built as `q^{-k}` times a parameter.
    pub fn vanish_tol(&self) -> f64 {
        2f64.powi(12 - self.precision_bits as i32)
    }

    pub fn is_vanishing(&self, x: &Scalar) -> bool {
        x.abs() <= self.vanish_tol()
    }

    pub fn scalar(&self, re: f64) -> Scalar {
        Scalar::real(re, self.precision_bits)
    }

    pub fn complex(&self, re: f64, im: f64) -> Scalar {
        Scalar::new(re, im, self.precision_bits)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.precision_bits)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.precision_bits)
    }

    /// `q^k` for any integer `k`. With `q = 0`, negative powers are
    /// degenerate and `q^0 = 1`.
    pub fn q_pow(&self, k: i64) -> Result<Scalar> {
        if self.q.is_zero() {
            return match k.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(self.zero()),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Less => {
                    Err(QError::DegenerateParameters(format!("q^{k} with q = 0")))
                }
            };
        }
        Ok(self.q.powi(k))
    }

    /// `x q^k`.
    pub fn shift(&self, x: &Scalar, k: i64) -> Result<Scalar> {
        Ok(x * self.q_pow(k)?)
    }
}
