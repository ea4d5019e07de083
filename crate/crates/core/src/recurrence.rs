//! The three-term recurrence `X_{n+1} - a_n X_n + b_n X_{n-1} = 0` obtained
//! from the contiguous relation with `g = s q^{n-1}`, `h = q^{-n}`, its two
//! explicit solutions, their `8phi7` limits and the minimal solution.

use std::fmt;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::pochhammer::qpoch_inf_ratio;
use crate::scalar::{product, Scalar};
use crate::series::{SeriesResult, Termination};
use crate::vwp::{complementary_pair, vwp_8_7, vwp_balanced_10_9, ParameterSet10, Slot};

/// The free parameters `a, b, c, d, e, f` of the recurrence together with
/// `s = a^3 q^3 / (bcdef)`.
///
/// `s` is stored as `sigma = a^3 / (bcdef)` so that `s q^k = sigma q^{k+3}`
/// stays well defined at `q = 0`. A parameter built as `x = a q^{N+1}` is
/// remembered, and `(a/x) q^k` is then formed as the exact power `q^{k-N-1}`.
#[derive(Clone, Debug)]
pub struct MassonParams {
    a: Scalar,
    params: [Scalar; 5],
    sigma: Scalar,
    pinned: Option<(Slot, usize)>,
    ctx: QContext,
}

fn check_slot(slot: Slot) -> Result<usize> {
    match slot {
        Slot::G | Slot::H => Err(QError::InvalidParameters(format!(
            "slot {slot} is not one of b, c, d, e, f"
        ))),
        _ => Ok(slot.index()),
    }
}

/// Fills the five slots with `fixed` at `slot` and `rest` elsewhere, in order.
fn fill(slot: usize, fixed: Scalar, rest: Vec<Scalar>) -> [Scalar; 5] {
    let mut rest = rest.into_iter();
    std::array::from_fn(|i| {
        if i == slot {
            fixed.clone()
        } else {
            rest.next().unwrap()
        }
    })
}

impl MassonParams {
    pub fn new(a: Scalar, params: [Scalar; 5], ctx: &QContext) -> Result<Self> {
        let prec = ctx.precision_bits();
        let a = a.with_prec(prec).finite_or("a")?;
        let params = params.map(|x| x.with_prec(prec));
        if a.is_zero() {
            return Err(QError::DegenerateParameters("a = 0".into()));
        }
        if params.iter().any(|x| !x.is_finite() || x.is_zero()) {
            return Err(QError::DegenerateParameters(
                "b, c, d, e, f must be finite and nonzero".into(),
            ));
        }
        let sigma = (a.powi(3) / product(prec, &params)).finite_or("s")?;
        Ok(MassonParams {
            a,
            params,
            sigma,
            pinned: None,
            ctx: ctx.clone(),
        })
    }

    /// Takes `s` as given and solves `f = a^3 q^3 / (bcde s)`.
    pub fn with_s(a: Scalar, bcde: [Scalar; 4], s: Scalar, ctx: &QContext) -> Result<Self> {
        let f = solve_last(&a, &bcde, &s, ctx)?;
        let [b, c, d, e] = bcde;
        MassonParams::new(a, [b, c, d, e, f], ctx)
    }

    /// The terminating family: the parameter at `slot` is `a q^{N+1}`, so
    /// `aq/x = q^{-N}` and the continued fraction stops after `N + 1` steps.
    /// `others` fills the remaining four slots in order.
    pub fn terminating(
        a: Scalar,
        slot: Slot,
        others: [Scalar; 4],
        n: usize,
        ctx: &QContext,
    ) -> Result<Self> {
        let i = check_slot(slot)?;
        let x = ctx.shift(&a, n as i64 + 1)?;
        let mut p = MassonParams::new(a, fill(i, x, others.to_vec()), ctx)?;
        p.pinned = Some((slot, n));
        Ok(p)
    }

    /// Terminating family with a prescribed `s`: three of the remaining
    /// slots come from `others`, the last one is solved from `s`.
    pub fn terminating_with_s(
        a: Scalar,
        slot: Slot,
        others: [Scalar; 3],
        n: usize,
        s: Scalar,
        ctx: &QContext,
    ) -> Result<Self> {
        let i = check_slot(slot)?;
        let x = ctx.shift(&a, n as i64 + 1)?;
        let mut four = vec![x];
        four.extend(others.iter().cloned());
        let four: [Scalar; 4] = four.try_into().unwrap();
        let last = solve_last(&a, &four, &s, ctx)?;
        let mut rest: Vec<Scalar> = others.to_vec();
        rest.push(last);
        let mut p = MassonParams::new(a, fill(i, four[0].clone(), rest), ctx)?;
        p.pinned = Some((slot, n));
        Ok(p)
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    /// `b, c, d, e, f` in order.
    pub fn params(&self) -> &[Scalar; 5] {
        &self.params
    }

    pub fn get(&self, slot: Slot) -> Result<&Scalar> {
        Ok(&self.params[check_slot(slot)?])
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    /// The slot and `N` of a terminating family.
    pub fn terminating_slot(&self) -> Option<(Slot, usize)> {
        self.pinned
    }

    /// `s = a^3 q^3 / (bcdef)`.
    pub fn s(&self) -> Scalar {
        self.s_pow(0).expect("nonnegative power")
    }

    /// `s q^k`.
    pub fn s_pow(&self, k: i64) -> Result<Scalar> {
        self.ctx.shift(&self.sigma, k + 3)
    }

    /// `(a / x_i) q^k` for the i-th of `b..f`.
    fn a_over(&self, i: usize, k: i64) -> Result<Scalar> {
        match self.pinned {
            Some((slot, n)) if slot.index() == i => self.ctx.q_pow(k - n as i64 - 1),
            _ => self.ctx.shift(&(&self.a / &self.params[i]), k),
        }
    }

    /// Same point at another precision.
    pub fn with_precision(&self, bits: u32) -> Result<Self> {
        let ctx = self.ctx.with_precision(bits)?;
        let mut p = MassonParams::new(self.a.clone(), self.params.clone(), &ctx)?;
        if let Some((slot, n)) = self.pinned {
            let x = ctx.shift(&p.a, n as i64 + 1)?;
            p.params[slot.index()] = x;
            p.sigma = (p.a.powi(3) / product(bits, &p.params)).finite_or("s")?;
            p.pinned = self.pinned;
        }
        Ok(p)
    }

    /// The reciprocal point `(q/a; q/b, ..., q/f)`, for which `s` becomes
    /// `q^4 / s`.
    pub fn reciprocal(&self) -> Result<Self> {
        let q = self.ctx.q();
        if q.is_zero() {
            return Err(QError::DegenerateParameters(
                "reciprocal point needs q != 0".into(),
            ));
        }
        let params = self.params.clone().map(|x| q / x);
        MassonParams::new(q / &self.a, params, &self.ctx)
    }
}

fn solve_last(a: &Scalar, known: &[Scalar; 4], s: &Scalar, ctx: &QContext) -> Result<Scalar> {
    let den = product(ctx.precision_bits(), known) * s;
    if den.is_zero() {
        return Err(QError::DegenerateParameters(
            "cannot solve for the last parameter: zero product".into(),
        ));
    }
    (a.powi(3) * ctx.q_pow(3)? / den).finite_or("solved parameter")
}

/// `A_n`, `B_n` and the recurrence coefficients `a_n`, `b_n = A_{n-1} B_n`.
#[derive(Clone, Debug)]
pub struct RecurrenceCoeffs {
    pub n: i64,
    pub big_a: Scalar,
    pub big_b: Scalar,
    pub a: Scalar,
    pub b: Scalar,
}

fn nonzero(x: Scalar, ctx: &QContext, what: &str, n: i64) -> Result<Scalar> {
    if ctx.is_vanishing(&x) {
        Err(QError::DegenerateParameters(format!(
            "{what} vanishes at n = {n}"
        )))
    } else {
        Ok(x)
    }
}

/// `A_n = (1 - s q^{n-1})(1 - (s/aq) q^n) prod_x (1 - (a/x) q^{n+1})
///        / [(1 - s q^{2n})(1 - s q^{2n-1})(1 - a q^{n+1})]`.
pub fn coeff_big_a(p: &MassonParams, n: i64) -> Result<Scalar> {
    let ctx = &p.ctx;
    let mut num = p.s_pow(n - 1)?.one_minus() * (p.s_pow(n - 1)? / &p.a).one_minus();
    for i in 0..5 {
        num = num * p.a_over(i, n + 1)?.one_minus();
    }
    let den = nonzero(p.s_pow(2 * n)?.one_minus(), ctx, "1 - s q^{2n}", n)?
        * nonzero(p.s_pow(2 * n - 1)?.one_minus(), ctx, "1 - s q^{2n-1}", n)?
        * nonzero(ctx.shift(&p.a, n + 1)?.one_minus(), ctx, "1 - a q^{n+1}", n)?;
    (num / den).finite_or("A_n")
}

/// `B_n = q (1 - q^n)(1 - a q^n) prod_x (1 - (xs/a) q^{n-2})
///        / [(1 - s q^{2n-1})(1 - s q^{2n-2})(1 - (s/a) q^{n-2})]`,
/// with `B_0 = 0` exactly.
///
/// The factor `1 - q^0` is taken as an exact zero rather than evaluated, since
/// at `s = q^2` the denominator factor `1 - s q^{-2}` vanishes as well.
pub fn coeff_big_b(p: &MassonParams, n: i64) -> Result<Scalar> {
    let ctx = &p.ctx;
    if n == 0 {
        return Ok(ctx.zero());
    }
    let sa = p.s_pow(n - 2)? / &p.a;
    let mut num = ctx.q() * ctx.q_pow(n)?.one_minus() * ctx.shift(&p.a, n)?.one_minus();
    for x in &p.params {
        num = num * (x * &sa).one_minus();
    }
    let den = nonzero(p.s_pow(2 * n - 1)?.one_minus(), ctx, "1 - s q^{2n-1}", n)?
        * nonzero(p.s_pow(2 * n - 2)?.one_minus(), ctx, "1 - s q^{2n-2}", n)?
        * nonzero(sa.one_minus(), ctx, "1 - (s/a) q^{n-2}", n)?;
    (num / den).finite_or("B_n")
}

/// Coefficients at index `n`. Negative `n` is accepted (the same formulas
/// apply), which the reciprocal-symmetry check relies on. `b_0` is zero
/// because `B_0` is.
pub fn coeffs(p: &MassonParams, n: i64) -> Result<RecurrenceCoeffs> {
    let ctx = &p.ctx;
    let big_a = coeff_big_a(p, n)?;
    let big_b = coeff_big_b(p, n)?;

    // (s q^{2n} / aq)(1 - s/aq^2)(1-b)...(1-f) / [(1 - a q^{n+1})(1 - (s/a) q^{n-2})]
    let mut extra = p.s_pow(2 * n - 1)? / &p.a * (p.s_pow(-2)? / &p.a).one_minus();
    for x in &p.params {
        extra = extra * x.one_minus();
    }
    let den = nonzero(ctx.shift(&p.a, n + 1)?.one_minus(), ctx, "1 - a q^{n+1}", n)?
        * nonzero(
            (p.s_pow(n - 2)? / &p.a).one_minus(),
            ctx,
            "1 - (s/a) q^{n-2}",
            n,
        )?;
    let a = (&big_a + &big_b + extra / den).finite_or("a_n")?;

    let b = if big_b.is_zero() {
        ctx.zero()
    } else {
        (coeff_big_a(p, n - 1)? * &big_b).finite_or("b_n")?
    };
    Ok(RecurrenceCoeffs {
        n,
        big_a,
        big_b,
        a,
        b,
    })
}

/// Which solution a [`SolutionSample`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    X1,
    X2,
    Xmin,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::X1 => "X1",
            Which::X2 => "X2",
            Which::Xmin => "Xmin",
        })
    }
}

/// A value of one solution at index `n`, with the diagnostics of the series
/// behind it. `diagnostics.value` is the bare `phi` (or `Phi`), without the
/// product prefactor.
#[derive(Clone, Debug)]
pub struct SolutionSample {
    pub which: Which,
    pub n: i64,
    pub value: Scalar,
    pub diagnostics: SeriesResult,
}

fn check_index(n: i64) -> Result<()> {
    if n < 0 {
        return Err(QError::InvalidParameters(format!(
            "solution index {n} is negative"
        )));
    }
    Ok(())
}

/// `X_n^{(1)} = (s q^{2n-1}, a q^{n+1})_inf
///   / (s q^{n-1}, (s/a) q^{n-1}, (a/b) q^{n+1}, ..., (a/f) q^{n+1})_inf
///   * phi(a; b, c, d, e, f, s q^{n-1}, q^{-n})`.
pub fn solution_x1(p: &MassonParams, n: i64) -> Result<SolutionSample> {
    check_index(n)?;
    let ctx = &p.ctx;
    let nums = [p.s_pow(2 * n - 1)?, ctx.shift(&p.a, n + 1)?];
    let mut dens = vec![p.s_pow(n - 1)?, p.s_pow(n - 1)? / &p.a];
    for i in 0..5 {
        dens.push(p.a_over(i, n + 1)?);
    }
    let pre = qpoch_inf_ratio(&nums, &dens, ctx, "X1 prefactor")?;

    let [b, c, d, e, f] = p.params.clone();
    let set = ParameterSet10::new(
        p.a.clone(),
        [b, c, d, e, f, p.s_pow(n - 1)?, ctx.q_pow(-n)?],
        ctx,
    )?;
    let phi = vwp_balanced_10_9(&set, ctx)?;
    let value = (&pre.value * &phi.value).finite_or("X1")?;
    Ok(SolutionSample {
        which: Which::X1,
        n,
        value,
        diagnostics: SeriesResult {
            tail_estimate: phi.tail_estimate + pre.tail_estimate * phi.value.abs(),
            ..phi
        },
    })
}

/// `X_n^{(2)} = (s q^{2n-1}, (s/a) q^n)_inf
///   / (q^{n+1}, a q^n, (bs/a) q^{n-1}, ..., (fs/a) q^{n-1})_inf
///   * Phi^{(q^{n+1})}(q/a; q/b, ..., q/f, q^{2-n}/s, q^{n+1})`.
pub fn solution_x2(p: &MassonParams, n: i64) -> Result<SolutionSample> {
    check_index(n)?;
    let ctx = &p.ctx;
    let q = ctx.q();
    if q.is_zero() {
        return Err(QError::DegenerateParameters("X2 needs q != 0".into()));
    }
    let sa = p.s_pow(n - 1)? / &p.a;
    let nums = [p.s_pow(2 * n - 1)?, &sa * q];
    let mut dens = vec![ctx.q_pow(n + 1)?, ctx.shift(&p.a, n)?];
    dens.extend(p.params.iter().map(|x| x * &sa));
    let pre = qpoch_inf_ratio(&nums, &dens, ctx, "X2 prefactor")?;

    let [b, c, d, e, f] = p.params.clone().map(|x| q / x);
    let g = ctx.q_pow(2 - n)? / p.s();
    let set = ParameterSet10::new(q / &p.a, [b, c, d, e, f, g, ctx.q_pow(n + 1)?], ctx)?;
    let phi = complementary_pair(&set, Slot::H, ctx)?;
    let value = (&pre.value * &phi.value).finite_or("X2")?;
    Ok(SolutionSample {
        which: Which::X2,
        n,
        value,
        diagnostics: SeriesResult {
            tail_estimate: phi.tail_estimate + pre.tail_estimate * phi.value.abs(),
            ..phi
        },
    })
}

/// `W_1 = lim X_n^{(1)}`: the `8phi7` `W(a; b, c, d, e, f)` with argument
/// `a^2 q^2 / (bcdef) = s / (aq)`.
pub fn limit_w1(p: &MassonParams) -> Result<SeriesResult> {
    vwp_8_7(&p.a, &p.params, &p.ctx, "W1")
}

/// `W_2 = lim X_n^{(2)}`: `W(q/a; q/b, ..., q/f)` with argument
/// `bcdef / (a^2 q) = aq^2 / s`.
pub fn limit_w2(p: &MassonParams) -> Result<SeriesResult> {
    let r = p.reciprocal()?;
    vwp_8_7(&r.a, &r.params, &p.ctx, "W2")
}

/// The limits `W_1`, `W_2`, evaluated once and reused across indices.
#[derive(Clone, Debug)]
pub struct Limits {
    pub w1: SeriesResult,
    pub w2: SeriesResult,
}

impl Limits {
    pub fn new(p: &MassonParams) -> Result<Self> {
        Ok(Limits {
            w1: limit_w1(p)?,
            w2: limit_w2(p)?,
        })
    }
}

/// `X_n^{(min)} = W_2 X_n^{(1)} - W_1 X_n^{(2)}`.
pub fn minimal_solution(p: &MassonParams, n: i64) -> Result<SolutionSample> {
    minimal_solution_with(p, &Limits::new(p)?, n)
}

/// [`minimal_solution`] with precomputed limits.
///
/// The combination cancels: both products approach `W_1 W_2` while their
/// difference decays like `q^n`. The relative error of the result is
/// estimated from the rounding and truncation errors of the two products
/// divided by the size of what survives; when that estimate exceeds
/// `identity_tol` the value is rejected with [`QError::MinimalityLost`].
pub fn minimal_solution_with(p: &MassonParams, lim: &Limits, n: i64) -> Result<SolutionSample> {
    let x1 = solution_x1(p, n)?;
    let x2 = solution_x2(p, n)?;
    let left = &lim.w2.value * &x1.value;
    let right = &lim.w1.value * &x2.value;
    let value = (&left - &right).finite_or("Xmin")?;

    let rel = |s: &SeriesResult| s.relative_tail();
    let scale = left.abs().max(right.abs());
    let abs_err = scale * (16.0 * p.ctx.epsilon())
        + left.abs() * (rel(&lim.w2) + rel(&x1.diagnostics))
        + right.abs() * (rel(&lim.w1) + rel(&x2.diagnostics));
    let mag = value.abs();
    let estimate = if mag > 0.0 {
        abs_err / mag
    } else {
        f64::INFINITY
    };
    if estimate > p.ctx.identity_tol() {
        return Err(QError::MinimalityLost { n, estimate });
    }
    Ok(SolutionSample {
        which: Which::Xmin,
        n,
        value: value.clone(),
        diagnostics: SeriesResult {
            value,
            terms_used: x1.diagnostics.terms_used + x2.diagnostics.terms_used,
            tail_estimate: abs_err,
            terminated: Termination::ToleranceMet,
        },
    })
}

/// Evaluates one solution at index `n`.
pub fn solution(p: &MassonParams, which: Which, n: i64) -> Result<SolutionSample> {
    match which {
        Which::X1 => solution_x1(p, n),
        Which::X2 => solution_x2(p, n),
        Which::Xmin => minimal_solution(p, n),
    }
}

/// `|X_{n+1} - a_n X_n + b_n X_{n-1}| / max(|X_{n+1}|, |a_n X_n|, |b_n X_{n-1}|)`.
pub fn relative_residual(prev: &Scalar, cur: &Scalar, next: &Scalar, c: &RecurrenceCoeffs) -> f64 {
    let t1 = next.clone();
    let t2 = &c.a * cur;
    let t3 = &c.b * prev;
    let scale = t1.abs().max(t2.abs()).max(t3.abs());
    let r = (&t1 - &t2 + &t3).abs();
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// Relative residuals of one solution for `n` in `range`, evaluating each
/// `X_k` once.
pub fn residuals(
    p: &MassonParams,
    which: Which,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<f64>> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 1 {
        return Err(QError::InvalidParameters("residuals need n >= 1".into()));
    }
    let values = match which {
        Which::Xmin => {
            let lim = Limits::new(p)?;
            (lo - 1..=hi + 1)
                .map(|k| minimal_solution_with(p, &lim, k).map(|s| s.value))
                .collect::<Result<Vec<_>>>()?
        }
        _ => (lo - 1..=hi + 1)
            .map(|k| solution(p, which, k).map(|s| s.value))
            .collect::<Result<Vec<_>>>()?,
    };
    (lo..=hi)
        .map(|n| {
            let i = (n - lo) as usize;
            let c = coeffs(p, n)?;
            Ok(relative_residual(
                &values[i],
                &values[i + 1],
                &values[i + 2],
                &c,
            ))
        })
        .collect()
}

/// Deviations of the coefficients from their limits over `1..=n_max`.
#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub n_max: i64,
    /// `|a_n - (1 + q)|`, indexed from `n = 1`.
    pub a_dev: Vec<f64>,
    /// `|a_n - 1|`.
    pub a_dev_from_one: Vec<f64>,
    /// `|b_n - q|`.
    pub b_dev: Vec<f64>,
    /// Largest `|a_n - (1 + q)|` over the top quartile of `[0, n_max]`.
    pub a_top_quartile: f64,
    pub b_top_quartile: f64,
    /// Whether both deviations stay under the geometric envelope
    /// `C |q|^{n/2}`, with `C` fitted on the first half of the range.
    pub within_envelope: bool,
}

impl AsymptoticReport {
    pub fn at(&self, n: i64) -> (f64, f64, f64) {
        let i = (n - 1) as usize;
        (self.a_dev[i], self.a_dev_from_one[i], self.b_dev[i])
    }
}

/// Tracks `a_n -> 1 + q` and `b_n -> q`.
///
/// With `A_n -> 1` and `B_n -> q` the characteristic roots are `1` and `q`,
/// so `a_n` tends to their sum. `|a_n - 1|` is recorded alongside.
pub fn asymptotic_check(p: &MassonParams, n_max: i64) -> Result<AsymptoticReport> {
    if n_max < 4 {
        return Err(QError::InvalidParameters(
            "asymptotic check needs n_max >= 4".into(),
        ));
    }
    let ctx = &p.ctx;
    let q = ctx.q();
    let limit_a = ctx.one() + q;
    let mut a_dev = Vec::new();
    let mut a_one = Vec::new();
    let mut b_dev = Vec::new();
    for n in 1..=n_max {
        let c = coeffs(p, n)?;
        a_dev.push((&c.a - &limit_a).abs());
        a_one.push((&c.a - &ctx.one()).abs());
        b_dev.push((&c.b - q).abs());
    }
    let top = (3 * n_max / 4).max(1);
    let top_max = |v: &[f64]| v[(top - 1) as usize..].iter().cloned().fold(0.0, f64::max);

    let qa = ctx.q_abs();
    let envelope_ok = |v: &[f64]| {
        let floor = 64.0 * ctx.epsilon();
        if qa == 0.0 {
            return v[(top - 1) as usize..].iter().all(|d| *d <= floor);
        }
        let half = (n_max / 2).max(1);
        let c = (1..=half)
            .map(|n| v[(n - 1) as usize] / qa.powf(n as f64 / 2.0))
            .fold(0.0, f64::max);
        (top..=n_max).all(|n| v[(n - 1) as usize] <= c * qa.powf(n as f64 / 2.0) + floor)
    };
    Ok(AsymptoticReport {
        n_max,
        a_top_quartile: top_max(&a_dev),
        b_top_quartile: top_max(&b_dev),
        within_envelope: envelope_ok(&a_dev) && envelope_ok(&b_dev),
        a_dev,
        a_dev_from_one: a_one,
        b_dev,
    })
}

/// Relative defect of the reciprocal symmetry at index `n`.
///
/// Under `(a, ..., f) -> (q/a, ..., q/f)` the recurrence index runs
/// backwards and the solutions pick up a different normalisation, so the
/// coefficients themselves are not preserved; the normalisation-free
/// combination `b_n / (a_{n-1} a_n)` is. This returns
/// `|k'_{-n} - k_n| / |k_n|` with `k_n = b_n / (a_{n-1} a_n)`.
pub fn reciprocal_symmetry_defect(p: &MassonParams, n: i64) -> Result<f64> {
    let r = p.reciprocal()?;
    let k = |p: &MassonParams, n: i64| -> Result<Scalar> {
        let prev = coeffs(p, n - 1)?;
        let cur = coeffs(p, n)?;
        (&cur.b / (&prev.a * &cur.a)).finite_or("b_n / (a_{n-1} a_n)")
    };
    let orig = k(p, n)?;
    let mapped = k(&r, -n)?;
    let mag = orig.abs();
    let diff = (&mapped - &orig).abs();
    Ok(if mag > 0.0 { diff / mag } else { diff })
}
