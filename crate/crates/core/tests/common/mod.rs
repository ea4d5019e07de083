//! Double-precision transcription of the recurrence, written directly from
//! the formulas and sharing no code with the crate.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qfrac::{MassonParams, QContext, Scalar};

pub fn c(x: &Scalar) -> C {
    C::new(x.re(), x.im())
}

pub fn one() -> C {
    C::new(1.0, 0.0)
}

pub fn rel(x: C, y: C) -> f64 {
    (x - y).norm() / y.norm().max(f64::MIN_POSITIVE)
}

pub fn poch(a: C, q: C, n: usize) -> C {
    (0..n).fold(one(), |acc, j| acc * (one() - a * q.powi(j as i32)))
}

pub fn poch_inf(a: C, q: C) -> C {
    let mut acc = one();
    let mut t = a;
    while t.norm() > 1e-18 {
        acc *= one() - t;
        t *= q;
    }
    acc
}

#[derive(Clone, Copy, Debug)]
pub struct Point {
    pub q: C,
    pub a: C,
    /// b, c, d, e, f
    pub x: [C; 5],
}

impl Point {
    pub fn from_params(p: &MassonParams) -> Point {
        let x = p.params();
        Point {
            q: c(p.ctx().q()),
            a: c(p.a()),
            x: [c(&x[0]), c(&x[1]), c(&x[2]), c(&x[3]), c(&x[4])],
        }
    }

    pub fn s(&self) -> C {
        self.a.powi(3) * self.q.powi(3) / self.x.iter().product::<C>()
    }

    fn qn(&self, n: i64) -> C {
        self.q.powi(n as i32)
    }

    pub fn big_a(&self, n: i64) -> C {
        let (s, a) = (self.s(), self.a);
        let mut num = (one() - s * self.qn(n - 1)) * (one() - s / (a * self.q) * self.qn(n));
        for x in self.x {
            num *= one() - a / x * self.qn(n + 1);
        }
        num / ((one() - s * self.qn(2 * n))
            * (one() - s * self.qn(2 * n - 1))
            * (one() - a * self.qn(n + 1)))
    }

    pub fn big_b(&self, n: i64) -> C {
        if n == 0 {
            return C::new(0.0, 0.0);
        }
        let (s, a, q) = (self.s(), self.a, self.q);
        let mut num = q * (one() - self.qn(n)) * (one() - a * self.qn(n));
        for x in self.x {
            num *= one() - x * s / a * self.qn(n - 2);
        }
        num / ((one() - s * self.qn(2 * n - 1))
            * (one() - s * self.qn(2 * n - 2))
            * (one() - s / a * self.qn(n - 2)))
    }

    pub fn a_n(&self, n: i64) -> C {
        let (s, a, q) = (self.s(), self.a, self.q);
        let mut extra = s * self.qn(2 * n) / (a * q) * (one() - s / (a * q * q));
        for x in self.x {
            extra *= one() - x;
        }
        extra /= (one() - a * self.qn(n + 1)) * (one() - s / a * self.qn(n - 2));
        self.big_a(n) + self.big_b(n) + extra
    }

    pub fn b_n(&self, n: i64) -> C {
        self.big_a(n - 1) * self.big_b(n)
    }

    /// The terminating very-well-poised sum with `h = q^{-n}`,
    /// `g = s q^{n-1}`, times its product prefactor.
    pub fn x1(&self, n: i64) -> C {
        let (s, a, q) = (self.s(), self.a, self.q);
        let g = s * self.qn(n - 1);
        let h = self.qn(-n);
        let params = [self.x[0], self.x[1], self.x[2], self.x[3], self.x[4], g, h];
        let mut term = one();
        let mut sum = one();
        for k in 0..n {
            let qk = self.qn(k);
            let mut ratio = q * (one() - a * qk) / (one() - q * qk);
            for p in params {
                ratio *= (one() - p * qk) / (one() - a * q / p * qk);
            }
            term *= ratio;
            let k1 = k + 1;
            sum += term * (one() - a * self.qn(2 * k1)) / (one() - a);
        }
        let mut den = poch_inf(g, q) * poch_inf(s / a * self.qn(n - 1), q);
        for x in self.x {
            den *= poch_inf(a / x * self.qn(n + 1), q);
        }
        poch_inf(s * self.qn(2 * n - 1), q) * poch_inf(a * self.qn(n + 1), q) / den * sum
    }
}

pub fn ctx(q: f64, bits: u32) -> QContext {
    QContext::new(Scalar::real(q, bits), bits).unwrap()
}

/// A fixed interior point: `|a| q^2 < |s| < |a| q`.
pub fn interior(q: f64, bits: u32) -> MassonParams {
    let ctx = ctx(q, bits);
    let s = |x| ctx.scalar(x);
    let a = 0.35;
    let sv = a * q * q.powf(0.5);
    MassonParams::with_s(s(a), [s(0.42), s(0.55), s(0.61), s(0.47)], s(sv), &ctx).unwrap()
}
