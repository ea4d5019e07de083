//! Closed-form values of the continued fraction: the general nonterminating
//! case, the terminating case `x = a q^{N+1}`, and the `8phi7` limit with its
//! coefficient pair `(c_n, d_n)`.

use crate::cfrac::CfCoefficients;
use crate::context::QContext;
use crate::error::{QError, Result};
use crate::pochhammer::qpoch_inf_ratio;
use crate::recurrence::{limit_w1, limit_w2, MassonParams};
use crate::scalar::{product, Scalar};
use crate::vwp::{vwp_8_7, vwp_balanced_10_9, ParameterSet10, Slot};

fn nonvanishing(x: Scalar, ctx: &QContext, what: &str) -> Result<Scalar> {
    if ctx.is_vanishing(&x) {
        Err(QError::ZeroDenominator {
            what: what.to_string(),
        })
    } else {
        Ok(x)
    }
}

/// `Pi_n = (q^2/a, q/b..q/f, q^{3-n}/s, a q^{n-1}, s q^{2n-2}, b q^n..f q^n)_inf
///       / (a q^{2n}, q^{1-n}/a, bq/a..fq/a, a q^2/s, s q^{n-1}/a, a q^n/b..a q^n/f)_inf`.
pub fn pi_ratio(p: &MassonParams, n: i64) -> Result<Scalar> {
    let ctx = p.ctx();
    let q = ctx.q();
    let a = p.a();
    let s = p.s();
    let xs = p.params();
    let mut nums = vec![q * q / a];
    nums.extend(xs.iter().map(|x| q / x));
    nums.push(ctx.q_pow(3 - n)? / &s);
    nums.push(ctx.shift(a, n - 1)?);
    nums.push(p.s_pow(2 * n - 2)?);
    for x in xs {
        nums.push(ctx.shift(x, n)?);
    }
    let mut dens = vec![ctx.shift(a, 2 * n)?, ctx.q_pow(1 - n)? / a];
    dens.extend(xs.iter().map(|x| x * q / a));
    dens.push(a * ctx.q_pow(2)? / &s);
    dens.push(p.s_pow(n - 1)? / a);
    for x in xs {
        dens.push(ctx.shift(&(a / x), n)?);
    }
    Ok(qpoch_inf_ratio(&nums, &dens, ctx, "Pi_n")?.value)
}

/// The balanced `10phi9` `phi(a'; q, a'^2 q / s', ...)` pieces of the
/// nonterminating closed form, for `a' = q/a` or `a' = aq`.
fn edge_series(a2: Scalar, second: Scalar, rest: [Scalar; 5], ctx: &QContext) -> Result<Scalar> {
    let [b, c, d, e, f] = rest;
    let set = ParameterSet10::new(a2, [ctx.q().clone(), second, b, c, d, e, f], ctx)?;
    Ok(vwp_balanced_10_9(&set, ctx)?.value)
}

/// The nonterminating evaluation of `1/(a_0 - b_1/(a_1 - ...))`:
///
/// ```text
/// (1 - s/q)(1 - a/q) / [q (1 - s/aq)(1 - a/b)...(1 - a/f)] / (1 + Pi_0)
///   * [ phi(q/a; q, q^2/s, q/b, ..., q/f)
///     + Pi_1 phi(aq; q, aq^2/s, aq/b, ..., aq/f)
///     - R W_2 / W_1 ]
/// R = (q, a, aq, bs/aq, ..., fs/aq)_inf / (s/q, s/a, s/aq, aq/b, ..., aq/f)_inf
/// ```
pub fn theorem1_rhs(p: &MassonParams) -> Result<Scalar> {
    let ctx = p.ctx();
    let q = ctx.q();
    if q.is_zero() {
        return Err(QError::DegenerateParameters(
            "closed form needs q != 0".into(),
        ));
    }
    let a = p.a();
    let s = p.s();
    let xs = p.params();

    let mut den = q * nonvanishing((&s / (a * q)).one_minus(), ctx, "1 - s/aq")?;
    for x in xs {
        den = den * nonvanishing((a / x).one_minus(), ctx, "1 - a/x")?;
    }
    let pre = (&s / q).one_minus() * (a / q).one_minus() / den;

    let w1 = limit_w1(p)?.value;
    let w2 = limit_w2(p)?.value;
    let w1 = nonvanishing(w1, ctx, "W1")?;

    let mut nums = vec![q.clone(), a.clone(), a * q];
    nums.extend(xs.iter().map(|x| x * &s / (a * q)));
    let mut dens = vec![&s / q, &s / a, &s / (a * q)];
    dens.extend(xs.iter().map(|x| a * q / x));
    let r = qpoch_inf_ratio(&nums, &dens, ctx, "W-ratio prefactor")?.value;

    let first = edge_series(q / a, q * q / &s, xs.clone().map(|x| q / x), ctx)?;
    let second = edge_series(a * q, a * q * q / &s, xs.clone().map(|x| a * q / x), ctx)?;
    let bracket = first + pi_ratio(p, 1)? * second - r * w2 / w1;
    let norm = nonvanishing(ctx.one() + pi_ratio(p, 0)?, ctx, "1 + Pi_0")?;
    (pre * bracket / norm).finite_or("nonterminating closed form")
}

/// [`theorem1_rhs`] at a terminating point `x = a q^{N+1}`.
///
/// There `W_1` has a vanishing denominator factor and the display is a
/// removable `0/0`. The pinned parameter is perturbed to `x (1 +- delta)`;
/// symmetric pairs at `delta` and `2 delta` are averaged and the `delta^2`
/// term eliminated, `(4 A(delta) - A(2 delta)) / 3`, with `delta = 2^{-p/2}`.
/// The perturbed values are computed at `2p` bits, since the difference
/// quotient cancels about `p/2` of them, and rounded back to `p`.
pub fn theorem1_rhs_removable(p: &MassonParams) -> Result<Scalar> {
    let (slot, _) = p.terminating_slot().ok_or_else(|| {
        QError::InvalidParameters("removable evaluation needs a terminating point".into())
    })?;
    let bits = p.ctx().precision_bits();
    let p = &p.with_precision(2 * bits)?;
    let ctx = p.ctx();
    let i = slot.index();
    let delta = 2f64.powi(-(bits as i32) / 2);
    let at = |d: f64| -> Result<Scalar> {
        let mut xs = p.params().clone();
        xs[i] = &xs[i] * ctx.scalar(1.0 + d);
        theorem1_rhs(&MassonParams::new(p.a().clone(), xs, ctx)?)
    };
    let half = ctx.scalar(0.5);
    let near = (at(delta)? + at(-delta)?) * &half;
    let far = (at(2.0 * delta)? + at(-2.0 * delta)?) * &half;
    let value = (near * ctx.scalar(4.0) - far) / ctx.scalar(3.0);
    value.with_prec(bits).finite_or("removable closed form")
}

/// The terminating evaluation, for parameters built with
/// [`MassonParams::terminating`]:
///
/// `aq (1 - aq) / (s (1-b)...(1-f)) phi(aq; q, aq^2/s, aq/b, ..., aq/f)`.
///
/// The `10phi9` terminates because `aq/x = q^{-N}` for the pinned slot.
pub fn corollary2_rhs(p: &MassonParams) -> Result<Scalar> {
    if p.terminating_slot().is_none() {
        return Err(QError::InvalidParameters(
            "terminating closed form needs parameters built with a q^{N+1}".into(),
        ));
    }
    corollary2_formula(p)
}

/// The terminating formula evaluated at any point, pinned or not.
pub fn corollary2_formula(p: &MassonParams) -> Result<Scalar> {
    let ctx = p.ctx();
    let q = ctx.q();
    let a = p.a();
    let s = nonvanishing(p.s(), ctx, "s")?;
    let xs = p.params();
    let mut den = s.clone();
    for x in xs {
        den = den * nonvanishing(x.one_minus(), ctx, "1 - x")?;
    }
    let pre = a * q * (a * q).one_minus() / den;
    let phi = edge_series(a * q, a * q * q / &s, xs.clone().map(|x| a * q / x), ctx)?;
    (pre * phi).finite_or("terminating closed form")
}

/// The reduced parameters `a, b, c, d, e` of the `8phi7` limit.
#[derive(Clone, Debug)]
pub struct ReducedParams {
    pub a: Scalar,
    pub params: [Scalar; 4],
    pub ctx: QContext,
}

impl ReducedParams {
    pub fn new(a: Scalar, params: [Scalar; 4], ctx: &QContext) -> Result<Self> {
        let prec = ctx.precision_bits();
        let a = a.with_prec(prec).finite_or("a")?;
        let params = params.map(|x| x.with_prec(prec));
        if a.is_zero() || params.iter().any(|x| x.is_zero() || !x.is_finite()) {
            return Err(QError::DegenerateParameters(
                "a, b, c, d, e must be finite and nonzero".into(),
            ));
        }
        Ok(ReducedParams {
            a,
            params,
            ctx: ctx.clone(),
        })
    }

    /// `bcde / (a^2 q)`, the argument of the `8phi7`.
    pub fn argument(&self) -> Result<Scalar> {
        let prod = product(self.ctx.precision_bits(), &self.params);
        (prod / (&self.a * &self.a * self.ctx.q())).finite_or("8phi7 argument")
    }

    /// The terminating point with `f = a q^{N+1}`.
    pub fn terminating(&self, n: usize) -> Result<MassonParams> {
        MassonParams::terminating(self.a.clone(), Slot::F, self.params.clone(), n, &self.ctx)
    }
}

/// `(c_n, d_n)`:
///
/// ```text
/// c_n = -(1 - aq^{n+1}/b)(1 - aq^{n+1}/c)(1 - aq^{n+1}/d)(1 - aq^{n+1}/e) / (1 - aq^{n+1})
///       - q (1 - q^n)(1 - aq^n)(1 - a^2 q^{n+1}/bcde)
///       + (a^2 q^{2n+2} / bcde)(1-b)(1-c)(1-d)(1-e) / (1 - aq^{n+1})
/// d_n = q (1 - q^n)(1 - aq^n/b)(1 - aq^n/c)(1 - aq^n/d)(1 - aq^n/e)(1 - a^2 q^{n+1}/bcde)
/// ```
pub fn corollary3_coeffs(r: &ReducedParams, n: i64) -> Result<(Scalar, Scalar)> {
    let ctx = &r.ctx;
    let a = &r.a;
    let prod = product(ctx.precision_bits(), &r.params);
    let aq1 = ctx.shift(a, n + 1)?;
    let den = aq1.one_minus();
    if ctx.is_vanishing(&den) {
        return Err(QError::DegenerateParameters(format!(
            "1 - a q^{{n+1}} vanishes at n = {n}"
        )));
    }
    let k = a * a * ctx.q_pow(n + 1)? / &prod;

    let mut first = ctx.one();
    for x in &r.params {
        first = first * (&aq1 / x).one_minus();
    }
    let first = -(first / &den);
    let middle = ctx.q() * ctx.q_pow(n)?.one_minus() * ctx.shift(a, n)?.one_minus() * k.one_minus();
    let mut last = a * a * ctx.q_pow(2 * n + 2)? / &prod;
    for x in &r.params {
        last = last * x.one_minus();
    }
    let c = (first - middle + last / den).finite_or("c_n")?;

    let aqn = ctx.shift(a, n)?;
    let mut d = ctx.q() * ctx.q_pow(n)?.one_minus() * k.one_minus();
    for x in &r.params {
        d = d * (&aqn / x).one_minus();
    }
    Ok((c, d.finite_or("d_n")?))
}

impl CfCoefficients for ReducedParams {
    fn coeff(&self, n: usize) -> Result<(Scalar, Scalar)> {
        corollary3_coeffs(self, n as i64)
    }
}

/// `[bcde / (a^2 q^2)] (1 - aq) / ((1-b)(1-c)(1-d)(1-e))
///   * W(aq; q, aq/b, aq/c, aq/d, aq/e)` with argument `bcde / (a^2 q)`.
pub fn corollary3_rhs(r: &ReducedParams) -> Result<Scalar> {
    let ctx = &r.ctx;
    let q = ctx.q();
    let a = &r.a;
    let z = r.argument()?;
    let mut den = ctx.one();
    for x in &r.params {
        den = den * nonvanishing(x.one_minus(), ctx, "1 - x")?;
    }
    let pre = &z / q * (a * q).one_minus() / den;
    let aq = a * q;
    let [b, c, d, e] = &r.params;
    let w = vwp_8_7(
        &aq,
        &[q.clone(), &aq / b, &aq / c, &aq / d, &aq / e],
        ctx,
        "8phi7 limit",
    )?;
    (pre * w.value).finite_or("8phi7 closed form")
}

/// The terminating value at `f = a q^{N+1}` divided by `f`.
///
/// Dividing by `f` is the equivalence transformation with multipliers
/// `r_n = f q^n`, under which `f q^n a_n -> c_n` and
/// `f^2 q^{2n-1} b_n -> d_n` as `N` grows. These quotients approach the
/// `8phi7` closed form.
pub fn corollary2_scaled(r: &ReducedParams, n: usize) -> Result<Scalar> {
    let p = r.terminating(n)?;
    let f = p.params()[4].clone();
    Ok(corollary2_rhs(&p)? / f)
}

/// The double substitution `f = a q^{N+1}`, `e = a^2 q^{2-N} / (bcd s)` with
/// `s` free: returns the terminating value divided by `f` for each `N`.
pub fn askey_wilson_sequence(
    a: &Scalar,
    bcd: &[Scalar; 3],
    s: &Scalar,
    ns: &[usize],
    ctx: &QContext,
) -> Result<Vec<Scalar>> {
    let bcd_prod = product(ctx.precision_bits(), bcd);
    let den = &bcd_prod * s;
    if den.is_zero() {
        return Err(QError::DegenerateParameters("bcd s = 0".into()));
    }
    ns.iter()
        .map(|&n| {
            let e = a * a * ctx.q_pow(2 - n as i64)? / &den;
            let [b, c, d] = bcd.clone();
            let p = MassonParams::terminating(a.clone(), Slot::F, [b, c, d, e], n, ctx)?;
            let f = p.params()[4].clone();
            Ok(corollary2_rhs(&p)? / f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduced() -> ReducedParams {
        let ctx = QContext::real(0.3).unwrap();
        let s = |x| ctx.scalar(x);
        let (a, b, c, d) = (0.5, 0.3, -0.4, 0.6);
        let e = 0.4 * a * a * 0.3 / (b * c * d);
        ReducedParams::new(s(a), [s(b), s(c), s(d), s(e)], &ctx).unwrap()
    }

    #[test]
    fn d0_vanishes() {
        let r = reduced();
        assert!(corollary3_coeffs(&r, 0).unwrap().1.is_zero());
    }

    #[test]
    fn closed_form_reference_value() {
        // 40-digit evaluation of the same display, done offline.
        let v = corollary3_rhs(&reduced()).unwrap();
        assert!((v.re() - 3.214_662_972_863_856).abs() < 1e-15);
    }

    #[test]
    fn divergent_argument_rejected() {
        let ctx = QContext::real(0.3).unwrap();
        let s = |x| ctx.scalar(x);
        let r = ReducedParams::new(s(0.2), [s(0.9), s(0.8), s(0.7), s(0.6)], &ctx).unwrap();
        assert!(r.argument().unwrap().abs() > 1.0);
        assert!(matches!(corollary3_rhs(&r), Err(QError::Divergent { .. })));
    }

    #[test]
    fn unpinned_point_rejected() {
        let ctx = QContext::real(0.3).unwrap();
        let s = |x| ctx.scalar(x);
        let p = MassonParams::new(s(0.3), [s(0.5), s(0.6), s(0.7), s(0.45), s(0.2)], &ctx).unwrap();
        assert!(corollary2_rhs(&p).is_err());
    }
}
