//! q-shifted factorials `(a; q)_n`, finite and infinite.

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::scalar::Scalar;
use crate::series::{SeriesResult, Termination};

/// Order of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    Infinite,
}

/// `(a)_n = prod_{j=1..n} (1 - a q^{j-1})`, with `(a)_0 = 1`.
pub fn qpoch(a: &Scalar, ctx: &QContext, n: usize) -> Scalar {
    let mut acc = ctx.one();
    let mut t = a.with_prec(ctx.precision_bits());
    for _ in 0..n {
        acc = acc * t.one_minus();
        t = &t * ctx.q();
    }
    acc
}

/// `(a)_inf`, truncated once `|a q^j| < series_tol` for `tail_run`
/// consecutive factors.
///
/// `tail_estimate` bounds the relative error of the omitted factors via the
/// geometric tail `sum_{k > j} |a q^k|`.
pub fn qpoch_inf(a: &Scalar, ctx: &QContext) -> Result<SeriesResult> {
    let mut acc = ctx.one();
    let mut t = a.with_prec(ctx.precision_bits());
    let mut small_run = 0usize;
    for j in 0..ctx.max_terms() {
        let factor = t.one_minus();
        if ctx.is_vanishing(&factor) {
            return Ok(SeriesResult::exact(ctx.zero(), j + 1));
        }
        acc = acc * factor;
        let t_abs = t.abs();
        if t_abs < ctx.series_tol() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= ctx.tail_run() {
            let r = ctx.q_abs();
            let tail_sum = t_abs * r / (1.0 - r);
            return Ok(SeriesResult {
                value: acc,
                terms_used: j + 1,
                tail_estimate: tail_sum.exp_m1(),
                terminated: Termination::ToleranceMet,
            });
        }
        t = &t * ctx.q();
    }
    Err(QError::MaxTermsExceeded {
        what: "infinite q-shifted factorial".into(),
        terms: ctx.max_terms(),
    })
}

/// `(a_1, ..., a_k)_n`: the product of the individual factorials.
pub fn qpoch_multi(params: &[Scalar], ctx: &QContext, order: Order) -> Result<Scalar> {
    if params.is_empty() {
        return Err(QError::InvalidParameters(
            "q-shifted factorial product needs at least one parameter".into(),
        ));
    }
    let mut acc = ctx.one();
    for a in params {
        let f = match order {
            Order::Finite(n) => qpoch(a, ctx, n),
            Order::Infinite => qpoch_inf(a, ctx)?.value,
        };
        acc = acc * f;
    }
    Ok(acc)
}

/// Ratio of infinite-product families `(nums)_inf / (dens)_inf` with the
/// per-factor tail estimates accumulated into a relative bound.
///
/// A vanishing denominator factorial is an error; a vanishing numerator
/// factorial makes the ratio an exact zero (reported as
/// [`Termination::ExactTermination`]).
pub fn qpoch_inf_ratio(
    nums: &[Scalar],
    dens: &[Scalar],
    ctx: &QContext,
    what: &str,
) -> Result<SeriesResult> {
    let mut den = ctx.one();
    let mut tail = 0.0;
    let mut terms = 0;
    for (i, y) in dens.iter().enumerate() {
        let r = qpoch_inf(y, ctx)?;
        if r.terminated == Termination::ExactTermination {
            return Err(QError::ZeroDenominator {
                what: format!("{what}: denominator factorial #{i} vanishes"),
            });
        }
        tail += r.tail_estimate;
        terms += r.terms_used;
        den = den * r.value;
    }
    let mut num = ctx.one();
    for x in nums {
        let r = qpoch_inf(x, ctx)?;
        terms += r.terms_used;
        if r.terminated == Termination::ExactTermination {
            return Ok(SeriesResult::exact(ctx.zero(), terms));
        }
        tail += r.tail_estimate;
        num = num * r.value;
    }
    let value = (num / den).finite_or(what)?;
    Ok(SeriesResult {
        value,
        terms_used: terms,
        tail_estimate: tail,
        terminated: Termination::ToleranceMet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::real(q).unwrap()
    }

    #[test]
    fn empty_product_is_one() {
        let c = ctx(0.7);
        assert_eq!(qpoch(&c.complex(3.0, 1.0), &c, 0), c.one());
    }

    #[test]
    fn zero_parameter_gives_one() {
        let c = ctx(0.5);
        assert_eq!(qpoch(&c.zero(), &c, 5), c.one());
        assert!((&qpoch_inf(&c.zero(), &ctx(0.9)).unwrap().value - &c.one()).abs() == 0.0);
    }

    #[test]
    fn three_factor_product() {
        let c = ctx(0.5);
        // (1 - .5)(1 - .25)(1 - .125)
        assert_eq!(qpoch(&c.scalar(0.5), &c, 3).re(), 0.328125);
    }

    #[test]
    fn q_zero_single_factor() {
        let c = ctx(0.0);
        let r = qpoch_inf(&c.scalar(0.3), &c).unwrap();
        assert!((r.value.re() - 0.7).abs() < 1e-18);
    }

    #[test]
    fn infinite_product_reference_value() {
        // (0.5; 0.5)_inf, product iterated to 40 digits offline.
        let c = ctx(0.5);
        let r = qpoch_inf(&c.scalar(0.5), &c).unwrap();
        assert!((r.value.re() - 0.288_788_095_086_602_4).abs() < 1e-17);
        assert!(r.tail_estimate < 1e-17);
    }

    #[test]
    fn vanishing_factor_is_exact_zero() {
        let c = ctx(0.5);
        let r = qpoch_inf(&c.q_pow(-4).unwrap(), &c).unwrap();
        assert!(r.value.is_zero());
        assert_eq!(r.terminated, Termination::ExactTermination);
    }

    #[test]
    fn multi_products() {
        let c = ctx(0.5);
        let v = qpoch_multi(&[c.scalar(0.5), c.scalar(0.25)], &c, Order::Finite(2)).unwrap();
        assert_eq!(v.re(), 0.24609375);
        let v = qpoch_multi(&[c.zero(), c.zero()], &c, Order::Infinite).unwrap();
        assert_eq!(v, c.one());
        assert!(qpoch_multi(&[], &c, Order::Infinite).is_err());
    }

    #[test]
    fn ratio_rejects_vanishing_denominator() {
        let c = ctx(0.5);
        let one = c.one();
        let err = qpoch_inf_ratio(&[c.scalar(0.2)], &[one], &c, "test").unwrap_err();
        assert!(matches!(err, QError::ZeroDenominator { .. }));
        let r = qpoch_inf_ratio(&[c.one()], &[c.scalar(0.2)], &c, "test").unwrap();
        assert!(r.value.is_zero());
    }

    #[test]
    fn max_terms_exceeded_near_unit_circle() {
        let c = ctx(0.999).with_max_terms(50).unwrap();
        assert!(matches!(
            qpoch_inf(&c.scalar(0.5), &c),
            Err(QError::MaxTermsExceeded { .. })
        ));
    }
}
