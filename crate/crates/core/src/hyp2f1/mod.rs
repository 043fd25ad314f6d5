//! Gauss hypergeometric function `F(a, b; c; x)` for positive parameters and
//! `0 <= x < 1`.
//!
//! Arguments up to `x_switch` (0.95 by default) are summed directly, with
//! Euler's transformation applied first in the divergent regime whenever
//! both reduced parameters stay positive. Beyond `x_switch` the evaluator
//! switches to connection formulas in `1 - x` (see [`near_one`]), which
//! keeps the cost bounded no matter how close `x` is to one.

mod near_one;
pub(crate) mod series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, ln_gamma_signed};
use series::sum_series;

/// Relative tolerance under which `c - a - b` counts as zero.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Positive parameters `(a, b, c)` of the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    a: f64,
    b: f64,
    c: f64,
}

impl ParamTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("parameter {name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { a, b, c })
    }

    /// The zero-balanced triple `(a, b, a + b)`.
    pub fn zero_balanced(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, a + b)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `c - a - b`.
    pub fn slack(&self) -> f64 {
        self.c - self.a - self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeTag {
    /// `c > a + b`: the series converges at `x = 1`.
    ConvergentAtOne,
    /// `c = a + b`: logarithmic singularity at `x = 1`.
    ZeroBalanced,
    /// `c < a + b`: algebraic singularity `(1 - x)^(c - a - b)`.
    DivergentAtOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Series,
    ZbAsymptotic,
    TransformedSeries,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "SERIES",
            Method::ZbAsymptotic => "ZB_ASYMPTOTIC",
            Method::TransformedSeries => "TRANSFORMED_SERIES",
            Method::ClosedForm => "CLOSED_FORM",
        }
    }
}

/// A function value, its estimated absolute error, the method that
/// produced it and the number of series terms summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_est: f64,
    pub method: Method,
    pub terms_used: usize,
}

impl EvalResult {
    fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_est: self.abs_error_est * factor.abs() + f64::EPSILON * (self.value * factor).abs(),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Arguments above this use the connection formulas in `1 - x`.
    pub x_switch: f64,
}

impl EvalConfig {
    pub const DEFAULT: EvalConfig = EvalConfig {
        rel_tol: 1e-14,
        max_terms: 100_000,
        x_switch: 0.95,
    };

    /// Budget for reference-grade direct summation.
    pub const ORACLE: EvalConfig = EvalConfig {
        rel_tol: 1e-14,
        max_terms: 2_000_000,
        x_switch: 0.95,
    };

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A point of `[0, 1)` carried together with its complement `w = 1 - x` and
/// `ln w`, so points extremely close to one keep full relative accuracy in
/// `w` even when `x` itself rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitArg {
    pub(crate) x: f64,
    pub(crate) w: f64,
    pub(crate) ln_w: f64,
}

impl UnitArg {
    pub fn from_x(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("x must lie in [0,1), got {x}")));
        }
        Ok(Self {
            x,
            w: 1.0 - x,
            ln_w: (-x).ln_1p(),
        })
    }

    /// The point `x = 1 - w`.
    pub fn from_complement(w: f64) -> Result<Self> {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::domain(format!("1 - x must lie in (0,1], got {w}")));
        }
        Ok(Self {
            x: 1.0 - w,
            w,
            ln_w: w.ln(),
        })
    }

    /// The point `x = 1 - e^(-s)`, meaningful for any finite `s >= 0`
    /// (including `s` so large that `e^(-s)` underflows).
    pub fn from_log_complement(s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::domain(format!("log complement must be finite and non-negative, got {s}")));
        }
        Ok(Self {
            x: -(-s).exp_m1(),
            w: (-s).exp(),
            ln_w: -s,
        })
    }

    pub(crate) fn from_parts(x: f64, w: f64, ln_w: f64) -> Self {
        Self { x, w, ln_w }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `1 - x`.
    pub fn complement(&self) -> f64 {
        self.w
    }

    /// `ln(1 - x)`.
    pub fn ln_complement(&self) -> f64 {
        self.ln_w
    }

    /// `ln(1 / (1 - x))`.
    pub fn log_inverse_complement(&self) -> f64 {
        -self.ln_w
    }
}

impl TryFrom<f64> for UnitArg {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        UnitArg::from_x(x)
    }
}

/// Classify `t` by the sign of `c - a - b`.
pub fn classify(t: &ParamTriple) -> Regime {
    let slack = t.slack();
    let tag = if slack.abs() <= CLASSIFY_TOL * t.c.max(1.0) {
        RegimeTag::ZeroBalanced
    } else if slack > 0.0 {
        RegimeTag::ConvergentAtOne
    } else {
        RegimeTag::DivergentAtOne
    };
    Regime {
        tag,
        slack: if tag == RegimeTag::ZeroBalanced { 0.0 } else { slack },
    }
}

/// Direct partial sums of the defining power series.
///
/// Returns [`Error::NoConvergence`] with the partial result if `max_terms`
/// runs out first.
pub fn eval_series(t: &ParamTriple, x: f64, rel_tol: f64, max_terms: usize) -> Result<EvalResult> {
    let arg = UnitArg::from_x(x)?;
    series_result(t.a, t.b, t.c, arg.x, rel_tol, max_terms, Method::Series)
}

fn series_result(a: f64, b: f64, c: f64, x: f64, rel_tol: f64, max_terms: usize, method: Method) -> Result<EvalResult> {
    let s = sum_series(a, b, c, x, rel_tol, max_terms);
    let r = EvalResult {
        value: s.value,
        abs_error_est: s.abs_error_est,
        method,
        terms_used: s.terms,
    };
    if s.converged {
        Ok(r)
    } else {
        Err(Error::NoConvergence(r))
    }
}

/// `F(a, b; c; x)` with the default configuration.
pub fn eval(t: &ParamTriple, x: f64) -> Result<EvalResult> {
    eval_arg(t, &UnitArg::from_x(x)?, &EvalConfig::DEFAULT)
}

/// `F(a, b; c; x)` with an explicit configuration.
pub fn eval_with(t: &ParamTriple, x: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    eval_arg(t, &UnitArg::from_x(x)?, cfg)
}

/// `F(a, b; c; x)` at a point given with its complement.
pub fn eval_arg(t: &ParamTriple, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    if arg.x <= cfg.x_switch {
        let regime = classify(t);
        let (a, b, c) = (t.a, t.b, t.c);
        if regime.tag == RegimeTag::DivergentAtOne && c - a > 0.0 && c - b > 0.0 {
            let inner = series_result(c - a, c - b, c, arg.x, cfg.rel_tol, cfg.max_terms, Method::TransformedSeries)?;
            return Ok(inner.scaled((regime.slack * arg.ln_w).exp()));
        }
        return series_result(a, b, c, arg.x, cfg.rel_tol, cfg.max_terms, Method::Series);
    }
    near_one::eval_near_one(t.a, t.b, t.c, arg, cfg)
}

/// The zero-balanced asymptote `(R(a, b) - ln(1 - x)) / B(a, b)` with the
/// logarithmic error term bounded by twice the first neglected term of the
/// logarithmic connection series,
/// `2 (ab/B) (1 - x) (|ln(1 - x)| + |2ψ(2) - ψ(a+1) - ψ(b+1)|)`.
pub fn zb_asymptote(a: f64, b: f64, arg: &UnitArg) -> Result<EvalResult> {
    let beta = specfun::beta(a, b)?;
    let r = specfun::r_coeff(a, b)?;
    let value = (r.value - arg.ln_w) / beta.value;
    let shift = (2.0 * specfun::digamma(2.0)?.value - specfun::digamma(a + 1.0)?.value - specfun::digamma(b + 1.0)?.value).abs();
    let logarithmic = 2.0 * (a * b / beta.value) * arg.w * (arg.ln_w.abs() + shift);
    let rounding = (r.abs_error_est + value.abs() * beta.abs_error_est) / beta.value + 2.0 * f64::EPSILON * value.abs();
    Ok(EvalResult {
        value,
        abs_error_est: logarithmic + rounding,
        method: Method::ZbAsymptotic,
        terms_used: 1,
    })
}

/// `F(a, b; c; 1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))` for `c > a + b`.
pub fn value_at_one(t: &ParamTriple) -> Result<f64> {
    let regime = classify(t);
    if regime.tag != RegimeTag::ConvergentAtOne {
        return Err(Error::Regime(format!(
            "F(a,b;c;1) is finite only for c > a + b (got c - a - b = {})",
            t.slack()
        )));
    }
    let lg = |v: f64| ln_gamma_signed(v).map(|(l, _)| l).expect("positive argument");
    let (a, b, c) = (t.a, t.b, t.c);
    let log_value = (lg(c) + lg(regime.slack)) - (lg(c - a) + lg(c - b));
    let v = log_value.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("F(a,b;c;1) = exp({log_value}) is not representable")));
    }
    Ok(v)
}

/// `d/dx F(a, b; c; x) = (ab/c) F(a+1, b+1; c+1; x)`.
pub fn derivative(t: &ParamTriple, x: f64) -> Result<EvalResult> {
    derivative_arg(t, &UnitArg::from_x(x)?, &EvalConfig::DEFAULT)
}

pub fn derivative_arg(t: &ParamTriple, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let shifted = ParamTriple::new(t.a + 1.0, t.b + 1.0, t.c + 1.0)?;
    Ok(eval_arg(&shifted, arg, cfg)?.scaled(t.a * t.b / t.c))
}

/// `g(x) = x F(c, d; c + d; x)`.
pub fn g_zb(c: f64, d: f64, x: f64) -> Result<EvalResult> {
    g_zb_arg(c, d, &UnitArg::from_x(x)?, &EvalConfig::DEFAULT)
}

pub fn g_zb_arg(c: f64, d: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let t = ParamTriple::zero_balanced(c, d)?;
    Ok(eval_arg(&t, arg, cfg)?.scaled(arg.x))
}
