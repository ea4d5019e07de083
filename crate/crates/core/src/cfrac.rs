//! Continued fractions `1 / (a_0 - b_1 / (a_1 - b_2 / (a_2 - ...)))`.

use std::fmt;
use std::str::FromStr;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::recurrence::{coeffs, minimal_solution_with, Limits, MassonParams};
use crate::scalar::Scalar;

/// Source of the partial denominators `a_n` and numerators `b_n`.
/// `b_0` is never read.
pub trait CfCoefficients {
    fn coeff(&self, n: usize) -> Result<(Scalar, Scalar)>;
}

impl CfCoefficients for MassonParams {
    fn coeff(&self, n: usize) -> Result<(Scalar, Scalar)> {
        let c = coeffs(self, n as i64)?;
        Ok((c.a, c.b))
    }
}

/// Explicit coefficient table; indices past the end are an error.
#[derive(Clone, Debug)]
pub struct Table {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
}

impl CfCoefficients for Table {
    fn coeff(&self, n: usize) -> Result<(Scalar, Scalar)> {
        match (self.a.get(n), self.b.get(n)) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(QError::InvalidParameters(format!(
                "coefficient table has no entry {n}"
            ))),
        }
    }
}

/// Coefficients from a closure.
pub struct FnCoefficients<F>(pub F);

impl<F: Fn(usize) -> Result<(Scalar, Scalar)>> CfCoefficients for FnCoefficients<F> {
    fn coeff(&self, n: usize) -> Result<(Scalar, Scalar)> {
        (self.0)(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Numerator/denominator three-term recurrences, one convergent per step.
    ForwardConvergents,
    /// Backward nesting from a zero tail, repeated at doubling depths.
    BottomUp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ForwardConvergents => "forward_convergents",
            Method::BottomUp => "bottom_up",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = QError;

    fn from_str(s: &str) -> Result<Method> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "forward_convergents" | "forward" => Ok(Method::ForwardConvergents),
            "bottom_up" | "backward" => Ok(Method::BottomUp),
            other => Err(QError::InvalidParameters(format!(
                "unknown method {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConvergentTrace {
    /// Index of the last coefficient pair used.
    pub depth: usize,
    /// The convergents in the order they were produced. For
    /// [`Method::BottomUp`] these are the values at depths `1, 2, 4, ...`.
    pub convergents: Vec<Scalar>,
    pub value: Scalar,
    /// `|last - second-to-last| / max(1, |last|)`, floored at the rounding
    /// error accumulated over `depth` steps and at a forward error bound
    /// that reflects the conditioning of the value.
    pub est_error: f64,
    pub method: Method,
    /// Some `b_n` with `1 <= n <= depth` was exactly zero, so `value` is the
    /// exact finite fraction.
    pub terminated: bool,
}

fn rel_diff(x: &Scalar, y: &Scalar) -> f64 {
    (x - y).abs() / x.abs().max(1.0)
}

fn rounding_floor(depth: usize, ctx: &QContext) -> f64 {
    8.0 * (depth as f64 + 1.0) * ctx.epsilon()
}

/// Running forward error bound of the bottom-up evaluation over `table`
/// (`(a_n, b_n)` for `n = 0..`), in units of the value. A tail
/// `t = b_n / (a_n - t')` inherits `(|a_n| eps + |t'| err') / |a_n - t'|`,
/// so an ill-conditioned value (a near-cancelling denominator) shows up
/// here even when the fraction terminates after a few steps. Magnitudes
/// are tracked in double precision.
fn conditioning_bound(table: &[(Scalar, Scalar)], ctx: &QContext) -> f64 {
    let eps = ctx.epsilon();
    let low = |x: &Scalar| x.with_prec(53);
    let mut t = Scalar::zero(53);
    let mut err = 0.0;
    for n in (0..table.len()).rev() {
        let a = low(&table[n].0);
        let den = &a - &t;
        let mag = den.abs();
        if mag == 0.0 || !mag.is_finite() {
            return f64::INFINITY;
        }
        err = 2.0 * eps + (a.abs() * eps + t.abs() * err) / mag;
        if n > 0 {
            t = low(&table[n].1) / den;
        }
    }
    2.0 * err
}

/// Evaluates the continued fraction up to `max_depth`.
///
/// Stops early when `b_n = 0` (exact termination) or when successive
/// convergents agree to `series_tol` for `tail_run` consecutive steps. At
/// `max_depth` an estimated error above `identity_tol` is reported as
/// [`QError::NonConvergent`].
pub fn eval_cf(
    coeffs: &dyn CfCoefficients,
    max_depth: usize,
    ctx: &QContext,
    method: Method,
) -> Result<ConvergentTrace> {
    if max_depth < 1 {
        return Err(QError::InvalidParameters(
            "continued fraction depth must be at least 1".into(),
        ));
    }
    let trace = match method {
        Method::ForwardConvergents => forward(coeffs, max_depth, ctx)?,
        Method::BottomUp => bottom_up(coeffs, max_depth, ctx)?,
    };
    if !trace.terminated && trace.est_error > ctx.identity_tol() {
        return Err(QError::NonConvergent {
            depth: trace.depth,
            est_error: trace.est_error,
        });
    }
    Ok(trace)
}

fn forward(
    coeffs: &dyn CfCoefficients,
    max_depth: usize,
    ctx: &QContext,
) -> Result<ConvergentTrace> {
    let prec = ctx.precision_bits();
    let (a0, b0) = coeffs.coeff(0)?;
    if ctx.is_vanishing(&a0) {
        return Err(QError::ZeroPivot { index: 0 });
    }
    let mut table = vec![(a0.clone(), b0)];
    // Convergent k is P_k / Q_k with
    // P_k = a_k P_{k-1} - b_k P_{k-2},  Q_k likewise,
    // P_{-1} = 0, Q_{-1} = 1, P_0 = 1, Q_0 = a_0.
    let (mut p_prev, mut q_prev) = (Scalar::zero(prec), Scalar::one(prec));
    let (mut p, mut q) = (Scalar::one(prec), a0);
    let mut convergents = vec![(&p / &q).finite_or("convergent")?];
    let mut run = 0usize;
    let mut depth = 0usize;
    let mut terminated = false;

    for k in 1..=max_depth {
        let (ak, bk) = coeffs.coeff(k)?;
        if bk.is_zero() {
            terminated = true;
            break;
        }
        table.push((ak.clone(), bk.clone()));
        let p_next = &ak * &p - &bk * &p_prev;
        let q_next = &ak * &q - &bk * &q_prev;
        let scale = (&ak * &q).abs() + (&bk * &q_prev).abs();
        if q_next.abs() <= ctx.vanish_tol() * scale {
            return Err(QError::ZeroPivot { index: k });
        }
        // Keep the magnitudes bounded; convergents are scale invariant.
        let norm = q_next.recip();
        p_prev = &p * &norm;
        q_prev = &q * &norm;
        p = &p_next * &norm;
        q = Scalar::one(prec);
        depth = k;

        let c = p.clone().finite_or("convergent")?;
        let diff = rel_diff(&c, convergents.last().unwrap());
        convergents.push(c);
        if diff < ctx.series_tol() {
            run += 1;
            if run >= ctx.tail_run() {
                break;
            }
        } else {
            run = 0;
        }
    }
    let cond = conditioning_bound(&table, ctx);
    finish(
        convergents,
        depth,
        terminated,
        cond,
        Method::ForwardConvergents,
        ctx,
    )
}

fn nest(coeffs: &dyn CfCoefficients, depth: usize, ctx: &QContext) -> Result<(Scalar, bool, f64)> {
    let prec = ctx.precision_bits();
    // Find the effective depth: the fraction ends before the first b_n = 0.
    let mut table = Vec::with_capacity(depth + 1);
    let mut terminated = false;
    for n in 0..=depth {
        let (a, b) = coeffs.coeff(n)?;
        if n > 0 && b.is_zero() {
            terminated = true;
            break;
        }
        table.push((a, b));
    }
    let mut t = Scalar::zero(prec);
    for n in (1..table.len()).rev() {
        let (a, b) = &table[n];
        let den = a - &t;
        if den.abs() <= ctx.vanish_tol() * (a.abs() + t.abs()) {
            return Err(QError::ZeroPivot { index: n });
        }
        t = b / den;
    }
    let den = &table[0].0 - &t;
    if den.abs() <= ctx.vanish_tol() * (table[0].0.abs() + t.abs()) {
        return Err(QError::ZeroPivot { index: 0 });
    }
    Ok((
        den.recip().finite_or("bottom-up value")?,
        terminated,
        conditioning_bound(&table, ctx),
    ))
}

fn bottom_up(
    coeffs: &dyn CfCoefficients,
    max_depth: usize,
    ctx: &QContext,
) -> Result<ConvergentTrace> {
    let mut convergents: Vec<Scalar> = Vec::new();
    let mut d = 1usize;
    let mut last_depth = 0;
    loop {
        let depth = d.min(max_depth);
        let (v, terminated, cond) = nest(coeffs, depth, ctx)?;
        last_depth = depth.max(last_depth);
        if terminated {
            convergents.push(v);
            return finish(convergents, depth, true, cond, Method::BottomUp, ctx);
        }
        let converged = convergents
            .last()
            .map(|prev| rel_diff(&v, prev) < ctx.series_tol())
            .unwrap_or(false);
        convergents.push(v);
        if converged || depth == max_depth {
            return finish(convergents, last_depth, false, cond, Method::BottomUp, ctx);
        }
        d *= 2;
    }
}

fn finish(
    convergents: Vec<Scalar>,
    depth: usize,
    terminated: bool,
    cond: f64,
    method: Method,
    ctx: &QContext,
) -> Result<ConvergentTrace> {
    let value = convergents.last().unwrap().clone();
    let diff = if terminated || convergents.len() < 2 {
        0.0
    } else {
        rel_diff(&value, &convergents[convergents.len() - 2])
    };
    Ok(ConvergentTrace {
        depth,
        est_error: diff.max(rounding_floor(depth, ctx)).max(cond),
        convergents,
        value,
        method,
        terminated,
    })
}

/// `X_0 / (a_0 X_0 - X_1)` for the minimal solution `X = X^{(min)}`.
pub fn pincherle_value(p: &MassonParams) -> Result<Scalar> {
    let lim = Limits::new(p)?;
    let x0 = minimal_solution_with(p, &lim, 0)?.value;
    let x1 = minimal_solution_with(p, &lim, 1)?.value;
    let a0 = coeffs(p, 0)?.a;
    let den = &a0 * &x0 - &x1;
    if den.abs() <= p.ctx().vanish_tol() * (&a0 * &x0).abs() {
        return Err(QError::DegenerateParameters(
            "a_0 X_0 - X_1 vanishes for the minimal solution".into(),
        ));
    }
    (x0 / den).finite_or("Pincherle value")
}
