//! Basic hypergeometric series summed by their term-ratio recurrence.

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::scalar::Scalar;

/// Why a series or product stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Termination {
    /// A numerator factor vanished exactly; the sum is finite.
    ExactTermination,
    /// The tail fell below `series_tol` for `tail_run` consecutive terms.
    ToleranceMet,
    /// The term budget ran out before the tolerance was met.
    MaxTermsHit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ExactTermination => "exact_termination",
            Termination::ToleranceMet => "tolerance_met",
            Termination::MaxTermsHit => "max_terms_hit",
        }
    }
}

/// A computed value plus truncation diagnostics.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: Scalar,
    pub terms_used: usize,
    /// Bound on the absolute error from the omitted tail (for products, the
    /// relative error of the omitted factors).
    pub tail_estimate: f64,
    pub terminated: Termination,
}

impl SeriesResult {
    pub fn exact(value: Scalar, terms_used: usize) -> Self {
        SeriesResult {
            value,
            terms_used,
            tail_estimate: 0.0,
            terminated: Termination::ExactTermination,
        }
    }

    /// Relative form of `tail_estimate`.
    pub fn relative_tail(&self) -> f64 {
        let mag = self.value.abs();
        if mag > 0.0 {
            self.tail_estimate / mag
        } else {
            self.tail_estimate
        }
    }
}

/// Index `m >= 0` with `x q^m = 1` (to the vanishing tolerance), if any.
///
/// Such a numerator parameter `x = q^{-m}` makes `(x)_n = 0` for `n > m`.
pub fn termination_index(x: &Scalar, ctx: &QContext) -> Option<usize> {
    let mut t = x.clone();
    for m in 0..ctx.max_terms() {
        if ctx.is_vanishing(&t.one_minus()) {
            return Some(m);
        }
        // Once |x q^m| is well below 1 it can never return to 1.
        if t.abs() < 0.5 || ctx.q().is_zero() {
            return None;
        }
        t = &t * ctx.q();
    }
    None
}

/// Evaluates `r+1 phi r (nums; dens; z)`:
/// `sum_n (nums)_n / (dens, q)_n z^n`.
///
/// Terminates exactly when a numerator parameter equals `q^{-N}` (the sum
/// then has `N + 1` terms). Otherwise truncation follows the tail rule of
/// the context.
pub fn phi_series(
    nums: &[Scalar],
    dens: &[Scalar],
    z: &Scalar,
    ctx: &QContext,
) -> Result<SeriesResult> {
    if nums.len() != dens.len() + 1 {
        return Err(QError::InvalidParameters(format!(
            "phi series needs r+1 numerator and r denominator parameters, got {} and {}",
            nums.len(),
            dens.len()
        )));
    }
    sum_series(nums, dens, z, None, ctx, "phi series")
}

/// Shared summation kernel.
///
/// With `vwp = Some(a)` each term is additionally multiplied by
/// `(1 - a q^{2n}) / (1 - a)`, the very-well-poised factor that replaces
/// `(q sqrt a, -q sqrt a)_n / (sqrt a, -sqrt a)_n`.
pub(crate) fn sum_series(
    nums: &[Scalar],
    dens: &[Scalar],
    z: &Scalar,
    vwp: Option<&Scalar>,
    ctx: &QContext,
    what: &str,
) -> Result<SeriesResult> {
    let prec = ctx.precision_bits();
    let one = ctx.one();

    let terminating = nums.iter().filter_map(|x| termination_index(x, ctx)).min();
    let z_abs = z.abs();
    if terminating.is_none() && z_abs >= 1.0 {
        return Err(QError::Divergent {
            what: what.to_string(),
            ratio: z_abs,
        });
    }

    let vwp_scale = match vwp {
        Some(a) => {
            let d = a.one_minus();
            if ctx.is_vanishing(&d) {
                return Err(QError::ZeroDenominator {
                    what: format!("{what}: very-well-poised factor 1 - a"),
                });
            }
            Some((a.clone(), d.recip()))
        }
        None => None,
    };
    let weight = |qn: &Scalar| -> Scalar {
        match &vwp_scale {
            Some((a, inv)) => (a * qn * qn).one_minus() * inv,
            None => one.clone(),
        }
    };

    // `term` is the plain hypergeometric term; `qn` tracks q^n.
    let mut term = Scalar::one(prec);
    let mut qn = Scalar::one(prec);
    let mut sum = weight(&qn);
    let mut small_run = 0usize;
    let mut last_ratio = z_abs;

    for n in 0..ctx.max_terms() {
        let mut num = z.clone();
        for x in nums {
            let f = (x * &qn).one_minus();
            if ctx.is_vanishing(&f) {
                return Ok(SeriesResult::exact(sum.finite_or(what)?, n + 1));
            }
            num = num * f;
        }
        let mut den = (&qn * ctx.q()).one_minus();
        for y in dens {
            let f = (y * &qn).one_minus();
            if ctx.is_vanishing(&f) {
                return Err(QError::ZeroDenominator {
                    what: format!("{what}: denominator factor at n = {n}"),
                });
            }
            den = den * f;
        }
        let ratio = num / den;
        let ratio_abs = ratio.abs();
        let prev_abs = term.abs();
        term = term * ratio;
        qn = &qn * ctx.q();
        let contribution = &term * weight(&qn);
        sum = sum + &contribution;
        if prev_abs > 0.0 {
            last_ratio = ratio_abs;
        }

        let sum_abs = sum.abs();
        if contribution.abs() <= ctx.series_tol() * sum_abs {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= ctx.tail_run() && last_ratio < 1.0 {
            let r = last_ratio.max(z_abs.min(0.999_999));
            let tail = contribution.abs() * r / (1.0 - r);
            return Ok(SeriesResult {
                value: sum.finite_or(what)?,
                terms_used: n + 2,
                tail_estimate: tail,
                terminated: Termination::ToleranceMet,
            });
        }
        if !sum.is_finite() {
            return Err(QError::NonFinite(what.to_string()));
        }
    }
    if last_ratio >= 1.0 {
        return Err(QError::Divergent {
            what: what.to_string(),
            ratio: last_ratio,
        });
    }
    Err(QError::MaxTermsExceeded {
        what: what.to_string(),
        terms: ctx.max_terms(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pochhammer::qpoch_inf;

    fn ctx(q: f64) -> QContext {
        QContext::new(Scalar::real(q, 64), 64).unwrap()
    }

    #[test]
    fn z_zero_gives_one() {
        let c = ctx(0.4);
        let r = phi_series(
            &[c.scalar(0.3), c.scalar(0.7)],
            &[c.scalar(0.2)],
            &c.zero(),
            &c,
        )
        .unwrap();
        assert!((&r.value - &c.one()).abs() < 1e-18);
    }

    #[test]
    fn numerator_q_inverse_gives_two_terms() {
        let c = ctx(0.4);
        let qinv = c.q_pow(-1).unwrap();
        let a2 = c.scalar(0.3);
        let b1 = c.scalar(0.6);
        let z = c.scalar(0.7);
        let r = phi_series(
            &[qinv.clone(), a2.clone()],
            std::slice::from_ref(&b1),
            &z,
            &c,
        )
        .unwrap();
        assert_eq!(r.terminated, Termination::ExactTermination);
        assert_eq!(r.terms_used, 2);
        // 1 + (1 - q^{-1})(1 - a2) / ((1 - b1)(1 - q)) z
        let expect =
            c.one() + qinv.one_minus() * a2.one_minus() / (b1.one_minus() * c.q().one_minus()) * z;
        assert!((&r.value - &expect).abs() < 1e-17);
    }

    #[test]
    fn termination_uses_n_plus_one_terms() {
        let c = ctx(0.5);
        for n in 0..8 {
            let r = phi_series(
                &[c.q_pow(-n).unwrap(), c.scalar(0.2), c.scalar(0.3)],
                &[c.scalar(0.4), c.scalar(0.9)],
                &c.scalar(0.5),
                &c,
            )
            .unwrap();
            assert_eq!(r.terminated, Termination::ExactTermination);
            assert_eq!(r.terms_used, n as usize + 1);
        }
    }

    #[test]
    fn q_binomial_theorem() {
        // 1phi0(a;;z) = (az)_inf / (z)_inf
        let c = ctx(0.6);
        let a = c.complex(0.3, 0.2);
        let z = c.complex(-0.5, 0.1);
        let lhs = phi_series(std::slice::from_ref(&a), &[], &z, &c).unwrap();
        let rhs = qpoch_inf(&(&a * &z), &c).unwrap().value / qpoch_inf(&z, &c).unwrap().value;
        assert!((&lhs.value - &rhs).abs() / rhs.abs() < c.identity_tol());
    }

    #[test]
    fn divergent_argument_rejected() {
        let c = ctx(0.5);
        let err = phi_series(&[c.scalar(0.3)], &[], &c.scalar(1.5), &c).unwrap_err();
        assert!(matches!(err, QError::Divergent { .. }));
    }

    #[test]
    fn zero_denominator_before_termination() {
        let c = ctx(0.5);
        // Denominator q^{-1} vanishes at n = 1, numerator q^{-3} only at n = 3.
        let err = phi_series(
            &[c.q_pow(-3).unwrap(), c.scalar(0.2)],
            &[c.q_pow(-1).unwrap()],
            &c.scalar(0.5),
            &c,
        )
        .unwrap_err();
        assert!(matches!(err, QError::ZeroDenominator { .. }));
    }

    #[test]
    fn max_terms_exceeded() {
        let c = ctx(0.5).with_max_terms(5).unwrap();
        let err = phi_series(&[c.scalar(0.3)], &[], &c.scalar(0.9), &c).unwrap_err();
        assert!(matches!(err, QError::MaxTermsExceeded { .. }));
    }

    #[test]
    fn arity_mismatch_rejected() {
        let c = ctx(0.5);
        assert!(phi_series(&[c.scalar(0.3)], &[c.scalar(0.2)], &c.scalar(0.1), &c).is_err());
    }
}
