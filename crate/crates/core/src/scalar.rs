//! Complex scalar at a caller-selected binary precision.
//!
//! [`Scalar`] wraps an MPC complex number. Arithmetic between two scalars
//! rounds to the larger of the two precisions, so a computation seeded from
//! one [`QContext`](crate::QContext) stays at that context's precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{QError, Result};

/// Lowest precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 24;

#[derive(Clone, PartialEq)]
pub struct Scalar(Complex);

impl Scalar {
    pub fn new(re: f64, im: f64, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, (re, im)))
    }

    pub fn real(re: f64, prec: u32) -> Self {
        Scalar::new(re, 0.0, prec)
    }

    pub fn zero(prec: u32) -> Self {
        Scalar(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Scalar::real(1.0, prec)
    }

    pub fn from_complex(value: Complex) -> Self {
        Scalar(value)
    }

    /// Parses decimal strings for the real and imaginary parts.
    ///
    /// Decimal input is rounded once, at the requested precision, so values
    /// such as `"0.1"` are represented as well as the precision allows.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let parse_part = |s: &str| {
            Float::parse(s.trim())
                .map(|p| Float::with_val(prec, p))
                .map_err(|e| QError::InvalidParameters(format!("cannot parse {s:?}: {e}")))
        };
        let value = Scalar(Complex::with_val(prec, (parse_part(re)?, parse_part(im)?)));
        value.finite_or("parsed value")
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    /// Re-rounds to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, &self.0))
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.0.imag().to_f64()
    }

    /// Modulus, rounded to `f64`.
    pub fn abs(&self) -> f64 {
        Float::with_val(self.prec(), self.0.abs_ref()).to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    /// `Ok(self)` when finite, otherwise [`QError::NonFinite`] naming `what`.
    pub fn finite_or(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(QError::NonFinite(what.to_string()))
        }
    }

    /// `1 - self`, the building block of every q-shifted factorial.
    pub fn one_minus(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), 1 - &self.0))
    }

    pub fn recip(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), 1 / &self.0))
    }

    /// Integer power, correctly rounded.
    pub fn powi(&self, n: i64) -> Self {
        Scalar(Complex::with_val(self.prec(), (&self.0).pow(n)))
    }

    /// Principal square root. Only used by tests and diagnostics; the series
    /// code never needs a branch of the square root.
    pub fn sqrt(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    /// Decimal strings `(re, im)` with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        let part = |f: &Float| {
            if f.is_zero() {
                "0".to_string()
            } else {
                f.to_string_radix(10, Some(digits))
            }
        };
        (part(self.0.real()), part(self.0.imag()))
    }

    /// Number of significant decimal digits carried by this precision.
    pub fn decimal_digits(&self) -> usize {
        ((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(self.decimal_digits());
        write!(f, "({re}, {im})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        let (re, im) = self.to_decimal(digits);
        if self.0.imag().is_zero() {
            write!(f, "{re}")
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let prec = self.prec().max(rhs.prec());
                Scalar(Complex::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(Complex::with_val(self.prec(), -&self.0))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Product of a sequence of scalars, starting from one at `prec`.
pub fn product<'a>(prec: u32, items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    items.into_iter().fold(Scalar::one(prec), |acc, x| acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_uses_widest_precision() {
        let a = Scalar::real(0.5, 53);
        let b = Scalar::real(0.25, 128);
        assert_eq!((&a * &b).prec(), 128);
        assert_eq!((&a + &b).re(), 0.75);
    }

    #[test]
    fn parse_keeps_precision() {
        let x = Scalar::parse("0.1", "0", 200).unwrap();
        let y = Scalar::real(0.1, 200);
        // The f64 literal carries its own binary rounding error.
        assert!((&x - &y).abs() > 1e-19);
        assert!((&x - &Scalar::parse("0.1", "0", 200).unwrap()).is_zero());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            Scalar::parse("zero point one", "0", 53),
            Err(QError::InvalidParameters(_))
        ));
    }

    #[test]
    fn division_by_zero_is_not_finite() {
        let z = Scalar::one(53) / Scalar::zero(53);
        assert!(!z.is_finite());
        assert!(matches!(z.finite_or("x"), Err(QError::NonFinite(_))));
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let q = Scalar::new(0.3, 0.4, 64);
        let p = q.powi(-3) * q.powi(3);
        assert!((&p - &Scalar::one(64)).abs() < 1e-18);
    }
}
