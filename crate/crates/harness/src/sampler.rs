//! Seeded sampling of parameter points inside the regions where the
//! evaluations are known to make sense.

use qfrac::closed_form::ReducedParams;
use qfrac::recurrence::coeffs;
use qfrac::vwp::{ParameterSet10, Slot};
use qfrac::{MassonParams, QContext, QError, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// Balanced `10phi9` points with a random distinguished slot.
    Ten,
    /// Recurrence points with `|a| q^2 < |s| < |a| q`, where both `8phi7`
    /// limits converge.
    Interior,
    /// `x = a q^{N+1}` in slot `f`, cycling through `terminating_n`.
    Terminating,
    /// `a, b, c, d, e` with `|bcde / (a^2 q)|` in `reduced_arg`.
    Reduced,
    /// `a, b, c, d` and a free `s` for the double substitution.
    AskeyWilson,
}

#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub kind: RegionKind,
    /// Range of `|a|`.
    pub a: (f64, f64),
    /// Range of `|b|, |c|, ...`.
    pub params: (f64, f64),
    /// `s = a q |q|^t` with `t` in this range. `(0, 1)` is the window in
    /// which both limits converge.
    pub s_exponent: (f64, f64),
    /// Range of `|bcde / (a^2 q)|`.
    pub reduced_arg: (f64, f64),
    pub terminating_n: Vec<usize>,
    /// Every `k`-th terminating point (from the second block on) uses
    /// `s = q^2`; `0` disables this.
    pub q_squared_every: usize,
    /// Complex parameters with phases up to `max_phase`.
    pub complex: bool,
    pub max_phase: f64,
    /// Minimum distance of `|1 - x|` for every sampled or solved parameter.
    pub min_gap: f64,
    /// Solved parameters above this modulus are rejected.
    pub max_modulus: f64,
    pub attempts_per_point: usize,
}

impl Region {
    pub fn new(kind: RegionKind) -> Region {
        Region {
            kind,
            a: (0.2, 0.6),
            params: (0.3, 0.8),
            s_exponent: (0.2, 0.8),
            reduced_arg: (0.1, 0.5),
            terminating_n: vec![0, 1, 2, 5],
            q_squared_every: 2,
            complex: false,
            max_phase: 0.5,
            min_gap: 0.05,
            max_modulus: 1.0e4,
            attempts_per_point: 50,
        }
    }

    pub fn complex(mut self, on: bool) -> Region {
        self.complex = on;
        self
    }

    fn check_bounds(&self) -> bool {
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi;
        let s_ok = match self.kind {
            RegionKind::Interior => {
                let (lo, hi) = self.s_exponent;
                lo < hi && lo > 0.0 && hi < 1.0
            }
            _ => self.s_exponent.0 < self.s_exponent.1,
        };
        let arg_ok =
            self.kind != RegionKind::Reduced || (ok(self.reduced_arg) && self.reduced_arg.1 < 1.0);
        let n_ok = self.kind != RegionKind::Terminating || !self.terminating_n.is_empty();
        ok(self.a) && ok(self.params) && s_ok && arg_ok && n_ok && self.attempts_per_point > 0
    }
}

#[derive(Clone, Debug)]
pub enum PointParams {
    Ten {
        set: ParameterSet10,
        slot: Slot,
    },
    Masson(MassonParams),
    Reduced(ReducedParams),
    AskeyWilson {
        a: Scalar,
        bcd: [Scalar; 3],
        s: Scalar,
    },
}

#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub index: usize,
    /// Short family tag such as `"N=2"` or `"N=5 s=q^2"`.
    pub label: String,
    pub params: PointParams,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rejection {
    pub attempt: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub points: Vec<SamplePoint>,
    pub rejected: Vec<Rejection>,
}

struct Draw<'a> {
    rng: ChaCha8Rng,
    region: &'a Region,
    ctx: &'a QContext,
}

impl Draw<'_> {
    fn value(&mut self, (lo, hi): (f64, f64)) -> Scalar {
        let r = self.rng.gen_range(lo..hi);
        if self.region.complex {
            let phase = self
                .rng
                .gen_range(-self.region.max_phase..self.region.max_phase);
            self.ctx.complex(r * phase.cos(), r * phase.sin())
        } else {
            self.ctx.scalar(r)
        }
    }

    /// `a q |q|^t`.
    fn s_for(&mut self, a: &Scalar) -> Scalar {
        let t = self
            .rng
            .gen_range(self.region.s_exponent.0..self.region.s_exponent.1);
        let mut s = a * self.ctx.q() * self.ctx.scalar(self.ctx.q_abs().powf(t));
        if self.region.complex {
            let phase = self
                .rng
                .gen_range(-self.region.max_phase..self.region.max_phase);
            s = s * self.ctx.complex(phase.cos(), phase.sin());
        }
        s
    }
}

fn reject(reason: impl Into<String>) -> QError {
    QError::InvalidParameters(reason.into())
}

fn screen(xs: &[Scalar], region: &Region) -> std::result::Result<(), QError> {
    for x in xs {
        if x.one_minus().abs() < region.min_gap {
            return Err(reject(format!("parameter {x} too close to 1")));
        }
        if x.abs() > region.max_modulus {
            return Err(reject(format!("parameter {x} too large")));
        }
    }
    Ok(())
}

fn probe(p: &MassonParams) -> std::result::Result<(), QError> {
    for n in 0..=4 {
        coeffs(p, n)?;
    }
    Ok(())
}

fn draw_point(d: &mut Draw, index: usize) -> std::result::Result<(String, PointParams), QError> {
    let region = d.region;
    let ctx = d.ctx;
    match region.kind {
        RegionKind::Ten => {
            let a = d.value(region.a);
            let six: [Scalar; 6] = std::array::from_fn(|_| d.value(region.params));
            let slot = Slot::ALL[d.rng.gen_range(0..7)];
            let set = ParameterSet10::solve_for_h(a, six, ctx)?;
            screen(&set.params, region)?;
            Ok((
                format!("distinguished={slot}"),
                PointParams::Ten { set, slot },
            ))
        }
        RegionKind::Interior => {
            let a = d.value(region.a);
            let bcde: [Scalar; 4] = std::array::from_fn(|_| d.value(region.params));
            let s = d.s_for(&a);
            let p = MassonParams::with_s(a, bcde, s, ctx)?;
            screen(p.params(), region)?;
            probe(&p)?;
            Ok((String::from("interior"), PointParams::Masson(p)))
        }
        RegionKind::Terminating => {
            let k = region.terminating_n.len();
            let n = region.terminating_n[index % k];
            let q_squared = region.q_squared_every > 0 && (index / k) % region.q_squared_every == 1;
            let a = d.value(region.a);
            let three: [Scalar; 3] = std::array::from_fn(|_| d.value(region.params));
            let s = if q_squared {
                ctx.q_pow(2)?
            } else {
                d.s_for(&a)
            };
            let p = MassonParams::terminating_with_s(a, Slot::F, three, n, s, ctx)?;
            screen(p.params(), region)?;
            probe(&p)?;
            let label = if q_squared {
                format!("N={n} s=q^2")
            } else {
                format!("N={n}")
            };
            Ok((label, PointParams::Masson(p)))
        }
        RegionKind::Reduced => {
            let a = d.value(region.a);
            let bcd: [Scalar; 3] = std::array::from_fn(|_| d.value(region.params));
            let z = d.value(region.reduced_arg);
            let e =
                (&z * &a * &a * ctx.q() / (&bcd[0] * &bcd[1] * &bcd[2])).finite_or("solved e")?;
            let [b, c, dd] = bcd;
            let r = ReducedParams::new(a, [b, c, dd, e], ctx)?;
            screen(&r.params, region)?;
            Ok((String::from("reduced"), PointParams::Reduced(r)))
        }
        RegionKind::AskeyWilson => {
            let a = d.value(region.a);
            let bcd: [Scalar; 3] = std::array::from_fn(|_| d.value(region.params));
            screen(&bcd, region)?;
            let s = d.s_for(&a);
            Ok((
                String::from("double substitution"),
                PointParams::AskeyWilson { a, bcd, s },
            ))
        }
    }
}

/// Draws `count` points. The seed alone determines the result; rejected
/// candidates are returned with their reasons.
pub fn sample_params(region: &Region, ctx: &QContext, count: usize, seed: u64) -> Result<Sample> {
    if !region.check_bounds() {
        return Err(HarnessError::EmptyRegion {
            wanted: count,
            accepted: 0,
            attempts: 0,
        });
    }
    let budget = region.attempts_per_point * count.max(1);
    let mut d = Draw {
        rng: ChaCha8Rng::seed_from_u64(seed),
        region,
        ctx,
    };
    let mut points = Vec::with_capacity(count);
    let mut rejected = Vec::new();
    let mut attempt = 0;
    while points.len() < count {
        if attempt >= budget {
            return Err(HarnessError::EmptyRegion {
                wanted: count,
                accepted: points.len(),
                attempts: attempt,
            });
        }
        match draw_point(&mut d, points.len()) {
            Ok((label, params)) => points.push(SamplePoint {
                index: points.len(),
                label,
                params,
            }),
            Err(e) => rejected.push(Rejection {
                attempt,
                reason: e.to_string(),
            }),
        }
        attempt += 1;
    }
    Ok(Sample { points, rejected })
}
