//! Quotient and difference functionals of `F` and of `g(x) = x F(c, d; c+d; x)`,
//! the auxiliary monotone functions `f1`..`f4`, `f`, `h`, and the theorem
//! registry built on top of them.
//!
//! Every functional returns an [`Estimate`]: the value together with a
//! first-order propagation of the evaluator error estimates.

mod registry;

use std::ops::{Add, Div, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp2f1::{self, EvalConfig, EvalResult, ParamTriple, RegimeTag, UnitArg};
use crate::specfun;

pub use registry::{
    check, check_hypothesis, registry, CheckOptions, CheckRecord, ParamKind, Params, Point, PointKind, TheoremId, TheoremInfo,
    NUMERIC_SLACK,
};

/// A value with an estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error_est: f64,
}

impl Estimate {
    pub fn new(value: f64, abs_error_est: f64) -> Self {
        Self { value, abs_error_est }
    }

    /// A value carrying only its own representation error.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    fn rounded(value: f64, err: f64) -> Self {
        Self::new(value, err + f64::EPSILON * value.abs())
    }
}

impl From<EvalResult> for Estimate {
    fn from(r: EvalResult) -> Self {
        Self::new(r.value, r.abs_error_est)
    }
}

impl From<specfun::SpecialValue> for Estimate {
    fn from(r: specfun::SpecialValue) -> Self {
        Self::new(r.value, r.abs_error_est)
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate::rounded(self.value + o.value, self.abs_error_est + o.abs_error_est)
    }
}

impl Sub for Estimate {
    type Output = Estimate;
    fn sub(self, o: Estimate) -> Estimate {
        Estimate::rounded(self.value - o.value, self.abs_error_est + o.abs_error_est)
    }
}

impl Mul for Estimate {
    type Output = Estimate;
    fn mul(self, o: Estimate) -> Estimate {
        let err = self.value.abs() * o.abs_error_est
            + o.value.abs() * self.abs_error_est
            + self.abs_error_est * o.abs_error_est;
        Estimate::rounded(self.value * o.value, err)
    }
}

impl Div for Estimate {
    type Output = Estimate;
    fn div(self, o: Estimate) -> Estimate {
        let q = self.value / o.value;
        let den = o.value.abs() - o.abs_error_est;
        let err = if den > 0.0 {
            (self.abs_error_est + q.abs() * o.abs_error_est) / den
        } else {
            f64::INFINITY
        };
        Estimate::rounded(q, err)
    }
}

impl Add<f64> for Estimate {
    type Output = Estimate;
    fn add(self, o: f64) -> Estimate {
        self + Estimate::exact(o)
    }
}

impl Sub<f64> for Estimate {
    type Output = Estimate;
    fn sub(self, o: f64) -> Estimate {
        self - Estimate::exact(o)
    }
}

impl Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, o: f64) -> Estimate {
        self * Estimate::exact(o)
    }
}

/// Arguments `x, y ∈ (0, 1)` and `z = x + y - xy`.
///
/// `z` is formed as `max + min·(1 - max)`, so `z >= max(x, y)` holds in
/// floating point, and its complement is the exact-in-spirit product
/// `(1 - x)(1 - y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct PointPair {
    x: UnitArg,
    y: UnitArg,
    z: UnitArg,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    x: f64,
    y: f64,
    #[serde(default, skip_deserializing)]
    z: f64,
}

impl TryFrom<PointRepr> for PointPair {
    type Error = Error;
    fn try_from(r: PointRepr) -> Result<Self> {
        PointPair::new(r.x, r.y)
    }
}

impl From<PointPair> for PointRepr {
    fn from(p: PointPair) -> Self {
        PointRepr {
            x: p.x(),
            y: p.y(),
            z: p.z(),
        }
    }
}

impl PointPair {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::domain(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        Self::from_args(UnitArg::from_x(x)?, UnitArg::from_x(y)?)
    }

    /// Build from points that carry their own complements, e.g. ones made by
    /// [`UnitArg::from_log_complement`].
    pub fn from_args(x: UnitArg, y: UnitArg) -> Result<Self> {
        for (name, v) in [("x", &x), ("y", &y)] {
            if v.x() <= 0.0 {
                return Err(Error::domain(format!("{name} must lie in (0,1), got {}", v.x())));
            }
        }
        let (hi, lo) = if x.x() >= y.x() { (&x, &y) } else { (&y, &x) };
        let z = UnitArg::from_parts(
            hi.x() + lo.x() * hi.complement(),
            x.complement() * y.complement(),
            x.ln_complement() + y.ln_complement(),
        );
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x.x()
    }

    pub fn y(&self) -> f64 {
        self.y.x()
    }

    pub fn z(&self) -> f64 {
        self.z.x()
    }

    pub fn x_arg(&self) -> &UnitArg {
        &self.x
    }

    pub fn y_arg(&self) -> &UnitArg {
        &self.y
    }

    pub fn z_arg(&self) -> &UnitArg {
        &self.z
    }
}

/// `B(a, b)`, `R(a, b)` and, when `c > a + b`, `A = F(a, b; c; 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "A")]
    pub a: Option<f64>,
}

pub fn bound_constants(t: &ParamTriple) -> Result<BoundConstants> {
    let b = specfun::beta(t.a(), t.b())?.value;
    let r = specfun::r_coeff(t.a(), t.b())?.value;
    let a = if hyp2f1::classify(t).tag == RegimeTag::ConvergentAtOne {
        Some(hyp2f1::value_at_one(t)?)
    } else {
        None
    };
    Ok(BoundConstants { b, r, a })
}

fn f_at(t: &ParamTriple, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    Ok(hyp2f1::eval_arg(t, arg, cfg)?.into())
}

fn g_at(c: f64, d: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    Ok(hyp2f1::g_zb_arg(c, d, arg, cfg)?.into())
}

fn nonzero_denominator(e: Estimate, what: &str) -> Result<Estimate> {
    if e.value == 0.0 || !e.value.is_finite() {
        return Err(Error::Degenerate(format!("{what} is {}", e.value)));
    }
    Ok(e)
}

/// `Q_F(x, y) = (F(x) + F(y)) / F(z)`.
pub fn q_f(t: &ParamTriple, p: &PointPair, cfg: &EvalConfig) -> Result<Estimate> {
    let fx = f_at(t, &p.x, cfg)?;
    let fy = f_at(t, &p.y, cfg)?;
    let fz = nonzero_denominator(f_at(t, &p.z, cfg)?, "F(z)")?;
    Ok((fx + fy) / fz)
}

/// `D_F(x, y) = F(x) + F(y) - F(z)`.
pub fn d_f(t: &ParamTriple, p: &PointPair, cfg: &EvalConfig) -> Result<Estimate> {
    let fx = f_at(t, &p.x, cfg)?;
    let fy = f_at(t, &p.y, cfg)?;
    let fz = f_at(t, &p.z, cfg)?;
    Ok(fx + fy - fz)
}

/// `Q_g(x, y) = (g(x) + g(y)) / g(z)`.
pub fn q_g(c: f64, d: f64, p: &PointPair, cfg: &EvalConfig) -> Result<Estimate> {
    let gx = g_at(c, d, &p.x, cfg)?;
    let gy = g_at(c, d, &p.y, cfg)?;
    let gz = nonzero_denominator(g_at(c, d, &p.z, cfg)?, "g(z)")?;
    Ok((gx + gy) / gz)
}

/// `D_g(x, y) = g(x) + g(y) - g(z)`.
pub fn d_g(c: f64, d: f64, p: &PointPair, cfg: &EvalConfig) -> Result<Estimate> {
    let gx = g_at(c, d, &p.x, cfg)?;
    let gy = g_at(c, d, &p.y, cfg)?;
    let gz = g_at(c, d, &p.z, cfg)?;
    Ok(gx + gy - gz)
}

/// The point `1 - sqrt(1 - t)` with complement `sqrt(1 - t)`.
pub fn half_log_point(t: &UnitArg) -> UnitArg {
    let root = t.complement().sqrt();
    UnitArg::from_parts(t.x() / (1.0 + root), root, 0.5 * t.ln_complement())
}

/// `S(t) = g(t) / g(1 - sqrt(1 - t))`.
pub fn s_func(a: f64, b: f64, t: f64, cfg: &EvalConfig) -> Result<Estimate> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("t must lie in (0,1), got {t}")));
    }
    s_func_arg(a, b, &UnitArg::from_x(t)?, cfg)
}

pub fn s_func_arg(a: f64, b: f64, t: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    require_interior(t)?;
    let num = g_at(a, b, t, cfg)?;
    let den = nonzero_denominator(g_at(a, b, &half_log_point(t), cfg)?, "g(1 - sqrt(1 - t))")?;
    Ok(num / den)
}

fn require_interior(arg: &UnitArg) -> Result<()> {
    if arg.x() <= 0.0 {
        return Err(Error::domain(format!(
            "x must lie in (0,1), got {}; the limit at 0 is not evaluated",
            arg.x()
        )));
    }
    Ok(())
}

fn zb_value(a: f64, b: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    require_interior(arg)?;
    let t = ParamTriple::zero_balanced(a, b)?;
    f_at(&t, arg, cfg)
}

fn beta_est(a: f64, b: f64) -> Result<Estimate> {
    Ok(specfun::beta(a, b)?.into())
}

fn log_inverse(arg: &UnitArg) -> Estimate {
    let l = arg.log_inverse_complement();
    Estimate::new(l, f64::EPSILON * l.abs())
}

/// `f1(x) = (F(a, b; a+b; x) - 1) / log(1/(1-x))`.
pub fn f1(a: f64, b: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    let f = zb_value(a, b, arg, cfg)?;
    Ok((f - 1.0) / log_inverse(arg))
}

/// `f2(x) = B F(a, b; a+b; x) + log(1 - x)`.
pub fn f2(a: f64, b: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    let f = zb_value(a, b, arg, cfg)?;
    Ok(beta_est(a, b)? * f - log_inverse(arg))
}

/// `f3(x) = B F(a, b; a+b; x) + log(1 - x) / x`.
pub fn f3(a: f64, b: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    let f = zb_value(a, b, arg, cfg)?;
    Ok(beta_est(a, b)? * f - log_inverse(arg) / Estimate::exact(arg.x()))
}

/// `f4(x) = x F(a, b; a+b; x) / log(1/(1-x))`.
pub fn f4(a: f64, b: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    let f = zb_value(a, b, arg, cfg)?;
    Ok(f * arg.x() / log_inverse(arg))
}

/// `f(x) = x F(c, d; c+d; x) / log(1/(1-x))`; the same function as [`f4`].
pub fn f_pv(c: f64, d: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    f4(c, d, arg, cfg)
}

/// `h(x) = B F(c, d; c+d; x) + log(1 - x) / x`; the same function as [`f3`].
pub fn h_pv(c: f64, d: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<Estimate> {
    f3(c, d, arg, cfg)
}
