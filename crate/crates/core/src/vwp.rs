//! Very-well-poised balanced `10phi9` functions, their complementary pairs
//! and the three-term contiguous relation they satisfy.

use std::fmt;
use std::str::FromStr;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::pochhammer::qpoch_inf_ratio;
use crate::scalar::{product, Scalar};
use crate::series::{sum_series, SeriesResult, Termination};

/// One of the seven numerator slots `b, c, d, e, f, g, h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Slot {
    pub const ALL: [Slot; 7] = [
        Slot::B,
        Slot::C,
        Slot::D,
        Slot::E,
        Slot::F,
        Slot::G,
        Slot::H,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Slot> {
        Slot::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        ["b", "c", "d", "e", "f", "g", "h"][self.index()]
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Slot {
    type Err = QError;

    fn from_str(s: &str) -> Result<Slot> {
        Slot::ALL
            .iter()
            .copied()
            .find(|slot| slot.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| QError::InvalidParameters(format!("unknown parameter slot {s:?}")))
    }
}

/// Parameters `(a; b, c, d, e, f, g, h)` of a balanced very-well-poised
/// `10phi9`, balanced meaning `bcdefgh = a^3 q^2`.
#[derive(Clone, Debug)]
pub struct ParameterSet10 {
    pub a: Scalar,
    /// `b` through `h`, indexed by [`Slot`].
    pub params: [Scalar; 7],
}

impl ParameterSet10 {
    /// Validates the balance condition to `identity_tol`.
    pub fn new(a: Scalar, params: [Scalar; 7], ctx: &QContext) -> Result<Self> {
        let p = ParameterSet10 { a, params };
        let defect = p.balance_defect(ctx)?;
        if defect > ctx.identity_tol() {
            return Err(QError::BalanceViolated {
                defect,
                tol: ctx.identity_tol(),
            });
        }
        Ok(p)
    }

    /// Builds an exactly balanced set by solving `h = a^3 q^2 / (bcdefg)`.
    pub fn solve_for_h(a: Scalar, b_to_g: [Scalar; 6], ctx: &QContext) -> Result<Self> {
        let prod = product(ctx.precision_bits(), &b_to_g);
        if prod.is_zero() {
            return Err(QError::DegenerateParameters(
                "cannot solve the balance condition for h: bcdefg = 0".into(),
            ));
        }
        let h = (a.powi(3) * ctx.q_pow(2)? / prod).finite_or("solved h")?;
        let [b, c, d, e, f, g] = b_to_g;
        Ok(ParameterSet10 {
            a,
            params: [b, c, d, e, f, g, h],
        })
    }

    pub fn get(&self, slot: Slot) -> &Scalar {
        &self.params[slot.index()]
    }

    pub fn set(&mut self, slot: Slot, value: Scalar) {
        self.params[slot.index()] = value;
    }

    /// `|bcdefgh - a^3 q^2| / |a^3 q^2|` (absolute when `a^3 q^2 = 0`).
    pub fn balance_defect(&self, ctx: &QContext) -> Result<f64> {
        let target = self.a.powi(3) * ctx.q_pow(2)?;
        let prod = product(ctx.precision_bits(), &self.params);
        let diff = (&prod - &target).abs();
        let scale = target.abs();
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }

    /// The six parameters other than `slot`, in slot order.
    pub fn others(&self, slot: Slot) -> Vec<Scalar> {
        Slot::ALL
            .iter()
            .filter(|s| **s != slot)
            .map(|s| self.get(*s).clone())
            .collect()
    }

    /// `g -> g q^{dg}`, `h -> h q^{dh}` applied to arbitrary slots.
    pub fn shifted(
        &self,
        first: Slot,
        k_first: i64,
        second: Slot,
        k_second: i64,
        ctx: &QContext,
    ) -> Result<Self> {
        let mut out = self.clone();
        out.set(first, ctx.shift(self.get(first), k_first)?);
        out.set(second, ctx.shift(self.get(second), k_second)?);
        Ok(out)
    }
}

/// Very-well-poised series
/// `sum_n (a)_n (1 - a q^{2n}) / (1 - a) prod_x (x)_n / (aq/x)_n z^n / (q)_n`.
///
/// This is `_{k+3}phi_{k+2}(a, q sqrt a, -q sqrt a, x...; sqrt a, -sqrt a, aq/x...; z)`
/// with the square-root pairs collapsed algebraically, so no branch of
/// `sqrt a` is ever chosen.
pub fn vwp_series(
    a: &Scalar,
    params: &[Scalar],
    z: &Scalar,
    ctx: &QContext,
    what: &str,
) -> Result<SeriesResult> {
    let aq = a * ctx.q();
    let mut nums = Vec::with_capacity(params.len() + 1);
    nums.push(a.clone());
    nums.extend(params.iter().cloned());
    let mut dens = Vec::with_capacity(params.len());
    for x in params {
        if x.is_zero() {
            return Err(QError::ZeroDenominator {
                what: format!("{what}: parameter 0 makes aq/x infinite"),
            });
        }
        dens.push(&aq / x);
    }
    sum_series(&nums, &dens, z, Some(a), ctx, what)
}

/// The balanced `10phi9` `phi(a; b, c, d, e, f, g, h; q)`.
pub fn vwp_balanced_10_9(p: &ParameterSet10, ctx: &QContext) -> Result<SeriesResult> {
    let defect = p.balance_defect(ctx)?;
    if defect > ctx.identity_tol() {
        return Err(QError::BalanceViolated {
            defect,
            tol: ctx.identity_tol(),
        });
    }
    vwp_series(&p.a, &p.params, ctx.q(), ctx, "balanced 10phi9")
}

/// The very-well-poised `8phi7` `W(a; b, c, d, e, f)` with its natural
/// argument `a^2 q^2 / (bcdef)`.
pub fn vwp_8_7(
    a: &Scalar,
    params: &[Scalar; 5],
    ctx: &QContext,
    what: &str,
) -> Result<SeriesResult> {
    let prod = product(ctx.precision_bits(), params);
    if prod.is_zero() {
        return Err(QError::DegenerateParameters(format!("{what}: bcdef = 0")));
    }
    let z = (a * a * ctx.q_pow(2)? / prod).finite_or(what)?;
    vwp_series(a, params, &z, ctx, what)
}

/// The two pieces of a complementary pair together with its value.
#[derive(Clone, Debug)]
pub struct ComplementaryPair {
    pub primary: SeriesResult,
    /// The 14-factor infinite-product ratio.
    pub prefactor: SeriesResult,
    /// `phi(x^2/a; x, x y/a, ...)`; absent when the prefactor vanishes.
    pub secondary: Option<SeriesResult>,
    pub value: Scalar,
}

impl ComplementaryPair {
    /// Collapses the components into one [`SeriesResult`]. The tail bound
    /// combines the series tails with the product truncation error.
    pub fn to_series_result(&self) -> SeriesResult {
        let mut tail = self.primary.tail_estimate;
        let mut terms = self.primary.terms_used;
        let mut exact = self.primary.terminated == Termination::ExactTermination;
        if let Some(sec) = &self.secondary {
            let pre = self.prefactor.value.abs();
            tail += pre * sec.tail_estimate + self.prefactor.tail_estimate * pre * sec.value.abs();
            terms += sec.terms_used;
            exact &= sec.terminated == Termination::ExactTermination
                && self.prefactor.terminated == Termination::ExactTermination;
        }
        SeriesResult {
            value: self.value.clone(),
            terms_used: terms,
            tail_estimate: tail,
            terminated: if exact {
                Termination::ExactTermination
            } else {
                Termination::ToleranceMet
            },
        }
    }
}

/// `Phi^{(x)}(a; b, ..., h)` with distinguished parameter `x = p[slot]` and
/// the remaining six `y_1..y_6`:
///
/// `phi(a; x, y...) + R phi(x^2/a; x, x y_1/a, ..., x y_6/a)`,
/// `R = (aq, x/a, y..., xq/y...)_inf / (x^2 q/a, a/x, aq/y..., x y/a...)_inf`.
pub fn complementary_pair_parts(
    p: &ParameterSet10,
    distinguished: Slot,
    ctx: &QContext,
) -> Result<ComplementaryPair> {
    let q = ctx.q();
    let a = &p.a;
    let x = p.get(distinguished);
    let ys = p.others(distinguished);
    if a.is_zero() || x.is_zero() || ys.iter().any(Scalar::is_zero) {
        return Err(QError::DegenerateParameters(
            "complementary pair needs nonzero a and b..h".into(),
        ));
    }

    let mut nums = vec![a * q, x / a];
    nums.extend(ys.iter().cloned());
    nums.extend(ys.iter().map(|y| x * q / y));
    let mut dens = vec![x * x * q / a, a / x];
    dens.extend(ys.iter().map(|y| a * q / y));
    dens.extend(ys.iter().map(|y| x * y / a));
    let prefactor = qpoch_inf_ratio(&nums, &dens, ctx, "complementary-pair prefactor")?;

    let primary = vwp_balanced_10_9(p, ctx)?;
    if prefactor.value.is_zero() {
        return Ok(ComplementaryPair {
            value: primary.value.clone(),
            primary,
            prefactor,
            secondary: None,
        });
    }

    let a2 = x * x / a;
    let mut second = Vec::with_capacity(7);
    second.push(x.clone());
    second.extend(ys.iter().map(|y| x * y / a));
    let secondary = vwp_series(&a2, &second, q, ctx, "complementary 10phi9")?;
    let value =
        (&primary.value + &prefactor.value * &secondary.value).finite_or("complementary pair")?;
    Ok(ComplementaryPair {
        primary,
        prefactor,
        secondary: Some(secondary),
        value,
    })
}

pub fn complementary_pair(
    p: &ParameterSet10,
    distinguished: Slot,
    ctx: &QContext,
) -> Result<SeriesResult> {
    Ok(complementary_pair_parts(p, distinguished, ctx)?.to_series_result())
}

/// The three terms of the contiguous relation and the resulting residual.
#[derive(Clone, Debug)]
pub struct ContiguousTerms {
    /// Coefficient times `Phi(g-, h+) - Phi`.
    pub first: Scalar,
    /// Coefficient times `Phi(h-, g+) - Phi`.
    pub second: Scalar,
    /// The `Phi` term.
    pub third: Scalar,
    /// `|first - second - third| / max(|first|, |second|, |third|)`.
    pub residual: f64,
    /// Combined relative tail bound of the three `Phi` evaluations.
    pub tail: f64,
}

/// Relative residual of the three-term contiguous relation in `g` and `h`:
///
/// ```text
///   g(1-h)(1-a/h)(1-aq/h) prod_{x=b..f}(1-aq/(gx)) / (1-hq/g) [Phi(g-,h+) - Phi]
/// - h(1-g)(1-a/g)(1-aq/g) prod_{x=b..f}(1-aq/(hx)) / (1-gq/h) [Phi(h-,g+) - Phi]
/// - (aq/h)(1-h/g)(1-gh/(aq)) (1-b)(1-c)(1-d)(1-e)(1-f) Phi  =  0
/// ```
///
/// where `g-` means `g/q` and `h+` means `hq`.
pub fn contiguous_terms(
    p: &ParameterSet10,
    distinguished: Slot,
    ctx: &QContext,
) -> Result<ContiguousTerms> {
    let q = ctx.q();
    let a = &p.a;
    let g = p.get(Slot::G);
    let h = p.get(Slot::H);
    if g.is_zero() || h.is_zero() || a.is_zero() {
        return Err(QError::DegenerateParameters(
            "contiguous relation needs nonzero a, g, h".into(),
        ));
    }
    if ctx.is_vanishing(&(g - h)) {
        return Err(QError::DegenerateParameters("g = h".into()));
    }
    let den_first = (h * q / g).one_minus();
    let den_second = (g * q / h).one_minus();
    if ctx.is_vanishing(&den_first) || ctx.is_vanishing(&den_second) {
        return Err(QError::DegenerateParameters(
            "1 - hq/g or 1 - gq/h vanishes".into(),
        ));
    }

    let base = complementary_pair(p, distinguished, ctx)?;
    let g_down = complementary_pair(
        &p.shifted(Slot::G, -1, Slot::H, 1, ctx)?,
        distinguished,
        ctx,
    )?;
    let h_down = complementary_pair(
        &p.shifted(Slot::H, -1, Slot::G, 1, ctx)?,
        distinguished,
        ctx,
    )?;

    let aq = a * q;
    let bf = &p.params[..5];
    let side = |u: &Scalar, v: &Scalar, den: &Scalar| -> Scalar {
        // u(1-v)(1-a/v)(1-aq/v) prod (1 - aq/(u x)) / den
        let mut c = u * v.one_minus() * (a / v).one_minus() * (&aq / v).one_minus();
        for x in bf {
            c = c * (&aq / (u * x)).one_minus();
        }
        c / den
    };
    let first = side(g, h, &den_first) * (&g_down.value - &base.value);
    let second = side(h, g, &den_second) * (&h_down.value - &base.value);
    let mut third = &aq / h * (h / g).one_minus() * (g * h / &aq).one_minus() * &base.value;
    for x in bf {
        third = third * x.one_minus();
    }
    let lhs = &first - &second - &third;
    let scale = first.abs().max(second.abs()).max(third.abs());
    if scale == 0.0 {
        return Err(QError::DegenerateParameters(
            "all three contiguous-relation terms vanish".into(),
        ));
    }
    let tail = base.relative_tail() + g_down.relative_tail() + h_down.relative_tail();
    Ok(ContiguousTerms {
        residual: lhs.abs() / scale,
        first: first.finite_or("contiguous relation")?,
        second,
        third,
        tail,
    })
}

pub fn contiguous_residual(p: &ParameterSet10, distinguished: Slot, ctx: &QContext) -> Result<f64> {
    Ok(contiguous_terms(p, distinguished, ctx)?.residual)
}
