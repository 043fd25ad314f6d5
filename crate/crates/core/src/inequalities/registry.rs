//! Theorem predicates: hypothesis, value, bounds and strictness per id.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{d_f, d_g, q_f, q_g, s_func_arg, Estimate, PointPair};
use crate::error::{Error, Result};
use crate::hyp2f1::{classify, EvalConfig, ParamTriple, RegimeTag, UnitArg};
use crate::specfun;

/// Absolute slack added to the propagated error budget before a margin
/// counts as a failure.
pub const NUMERIC_SLACK: f64 = 1e-10;

// Relative tolerance on the parameter-side hypothesis boundaries, so that
// e.g. d = 1/c typed in decimal still counts as cd = 1.
const HYPOTHESIS_TOL: f64 = 8.0 * f64::EPSILON;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    T1_1,
    T1_2,
    T1_3,
    T3_2,
    T3_3_1,
    T3_3_2,
    T3_4,
    T3_5_1,
    T3_5_2,
    T3_6_1,
    T3_6_2,
    C3_8_1,
    C3_8_2,
    T3_9_1,
    T3_9_2,
    R3_7,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T1_1,
        TheoremId::T1_2,
        TheoremId::T1_3,
        TheoremId::T3_2,
        TheoremId::T3_3_1,
        TheoremId::T3_3_2,
        TheoremId::T3_4,
        TheoremId::T3_5_1,
        TheoremId::T3_5_2,
        TheoremId::T3_6_1,
        TheoremId::T3_6_2,
        TheoremId::C3_8_1,
        TheoremId::C3_8_2,
        TheoremId::T3_9_1,
        TheoremId::T3_9_2,
        TheoremId::R3_7,
    ];

    pub fn as_str(&self) -> &'static str {
        self.info().id_str
    }

    pub fn info(&self) -> &'static TheoremInfo {
        &REGISTRY[*self as usize]
    }

    /// Which parameter shape the predicate takes.
    pub fn param_kind(&self) -> ParamKind {
        match self {
            TheoremId::T1_1 | TheoremId::T1_2 => ParamKind::Triple,
            _ => ParamKind::Pair,
        }
    }

    pub fn point_kind(&self) -> PointKind {
        match self {
            TheoremId::T3_9_1 | TheoremId::T3_9_2 => PointKind::Scalar,
            TheoremId::R3_7 => PointKind::None,
            _ => PointKind::Pair,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Triple,
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Pair,
    Scalar,
    None,
}

/// Documentation row for one predicate.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremInfo {
    #[serde(rename = "id")]
    pub id_str: &'static str,
    pub hypothesis: &'static str,
    pub functional: &'static str,
    pub lower: Option<&'static str>,
    pub upper: Option<&'static str>,
    pub strict_lower: bool,
    pub strict_upper: bool,
    pub statement: &'static str,
}

const fn info(
    id_str: &'static str,
    hypothesis: &'static str,
    functional: &'static str,
    lower: Option<&'static str>,
    upper: Option<&'static str>,
    strict: (bool, bool),
    statement: &'static str,
) -> TheoremInfo {
    TheoremInfo {
        id_str,
        hypothesis,
        functional,
        lower,
        upper,
        strict_lower: strict.0,
        strict_upper: strict.1,
        statement,
    }
}

static REGISTRY: [TheoremInfo; 16] = [
    info("T1_1", "a, b, c > 0", "Q_F", Some("0"), Some("2"), (true, false), "0 < Q_F(x,y) <= 2"),
    info("T1_2", "a, b > 0, c > a + b", "D_F", Some("-A"), Some("A"), (false, false), "|D_F(x,y)| <= A, A = F(a,b;c;1)"),
    info(
        "T1_3",
        "a, b > 0, c = a + b",
        "D_F",
        Some("2R(a,b)/B(a,b) - 1"),
        Some("1"),
        (true, false),
        "2R/B - 1 < D_F(x,y) <= 1",
    ),
    info("T3_2", "c, d > 0", "Q_g", Some("0"), Some("2"), (true, true), "0 < Q_g(x,y) < 2"),
    info(
        "T3_3_1",
        "c, d > 0, cd <= 1",
        "Q_g",
        Some("1/B(c,d)"),
        Some("B(c,d)"),
        (false, false),
        "1/B(c,d) <= Q_g(x,y) <= B(c,d)",
    ),
    info(
        "T3_3_2",
        "c, d > 0, 1/c + 1/d <= 2",
        "Q_g",
        Some("B(c,d)"),
        Some("1/B(c,d)"),
        (false, false),
        "B(c,d) <= Q_g(x,y) <= 1/B(c,d)",
    ),
    info(
        "T3_4",
        "c, d > 0, cd <= 1, (c,d) != (1,1)",
        "Q_g",
        Some("(B(c,d) - 1)/R(c,d)"),
        Some("2R(c,d)/(B(c,d) - 1)"),
        (false, false),
        "(B-1)/R <= Q_g(x,y) <= 2R/(B-1)",
    ),
    info("T3_5_1", "c, d > 0, cd <= 1", "Q_g", Some("1"), None, (false, false), "Q_g(x,y) >= 1"),
    info("T3_5_2", "c, d > 0, 1/c + 1/d <= 2", "Q_g", None, Some("1"), (false, false), "Q_g(x,y) <= 1"),
    info(
        "T3_6_1",
        "c, d > 0, cd <= 1",
        "D_g",
        Some("0"),
        Some("(2R(c,d) + 1)/B(c,d) - 1"),
        (false, true),
        "0 <= D_g(x,y) < (2R+1)/B - 1",
    ),
    info(
        "T3_6_2",
        "c, d > 0, 1/c + 1/d <= 2",
        "D_g",
        Some("(2R(c,d) + 1)/B(c,d) - 1"),
        Some("0"),
        (true, false),
        "(2R+1)/B - 1 < D_g(x,y) <= 0",
    ),
    info(
        "C3_8_1",
        "c, d > 0, cd <= 1",
        "Q_g",
        Some("1"),
        Some("min(B(c,d), 2)"),
        (false, true),
        "1 <= Q_g(x,y) < min(B, 2)",
    ),
    info(
        "C3_8_2",
        "c, d > 0, 1/c + 1/d <= 2",
        "Q_g",
        Some("B(c,d)"),
        Some("1"),
        (true, false),
        "B(c,d) < Q_g(x,y) <= 1",
    ),
    info("T3_9_1", "a, b > 0, ab <= 1", "S", Some("1"), Some("2"), (true, false), "1 < S(t) <= 2"),
    info(
        "T3_9_2",
        "a, b > 0, 1/a + 1/b <= 2",
        "S",
        Some("2"),
        Some("2/B(a,b)"),
        (false, true),
        "2 <= S(t) < 2/B(a,b)",
    ),
    info(
        "R3_7",
        "c, d > 0, cd <= 1, (c,d) != (1,1)",
        "B(c,d) - 1",
        Some("0"),
        Some("R(c,d)"),
        (true, true),
        "R(c,d) > B(c,d) - 1 > 0",
    ),
];

/// The full registry in id order.
pub fn registry() -> &'static [TheoremInfo] {
    &REGISTRY
}

/// Parameters of a predicate: a general triple, or a pair `(c, d)` standing
/// for the zero-balanced triple `(c, d, c + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Params {
    Triple { a: f64, b: f64, c: f64 },
    Pair { c: f64, d: f64 },
}

impl Params {
    /// The triple the functional is evaluated at.
    pub fn triple(&self) -> Result<ParamTriple> {
        match *self {
            Params::Triple { a, b, c } => ParamTriple::new(a, b, c),
            Params::Pair { c, d } => ParamTriple::zero_balanced(c, d),
        }
    }

    /// `(a, b, c)` columns for flat reports.
    pub fn columns(&self) -> (f64, f64, f64) {
        match *self {
            Params::Triple { a, b, c } => (a, b, c),
            Params::Pair { c, d } => (c, d, c + d),
        }
    }
}

/// Argument of a predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Pair(PointPair),
    Scalar(f64),
    None,
}

impl Point {
    /// `(x, y)` columns for flat reports; a scalar goes in `x`.
    pub fn columns(&self) -> (Option<f64>, Option<f64>) {
        match self {
            Point::Pair(p) => (Some(p.x()), Some(p.y())),
            Point::Scalar(t) => (Some(*t), None),
            Point::None => (None, None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub eval: EvalConfig,
    pub slack: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            eval: EvalConfig::DEFAULT,
            slack: NUMERIC_SLACK,
        }
    }
}

/// One predicate evaluated at one parameter/argument point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: TheoremId,
    pub params: Params,
    pub point: Point,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub margin_lower: Option<f64>,
    pub margin_upper: Option<f64>,
    pub strict_lower: bool,
    pub strict_upper: bool,
    pub pass: bool,
    pub eval_error_budget: f64,
    /// A strict bound is met with a margin smaller than ten error budgets,
    /// so floating point cannot confirm the strictness.
    pub strictness_unresolved: bool,
}

impl CheckRecord {
    /// The smaller of the present margins.
    pub fn min_margin(&self) -> Option<f64> {
        match (self.margin_lower, self.margin_upper) {
            (Some(l), Some(u)) => Some(l.min(u)),
            (l, u) => l.or(u),
        }
    }
}

fn violation(id: TheoremId, reason: impl Into<String>) -> Error {
    Error::HypothesisViolation {
        id: id.to_string(),
        reason: reason.into(),
    }
}

fn product_at_most_one(c: f64, d: f64) -> bool {
    c * d <= 1.0 + HYPOTHESIS_TOL
}

fn harmonic_at_most_two(c: f64, d: f64) -> bool {
    // 1/c + 1/d <= 2  <=>  c + d <= 2cd
    c + d <= 2.0 * c * d * (1.0 + HYPOTHESIS_TOL)
}

fn is_one_one(c: f64, d: f64) -> bool {
    (c - 1.0).abs() <= HYPOTHESIS_TOL && (d - 1.0).abs() <= HYPOTHESIS_TOL
}

/// `Ok` iff `params` has the shape and satisfies the hypothesis of `id`.
pub fn check_hypothesis(id: TheoremId, params: &Params) -> Result<()> {
    let triple = params.triple()?;
    match (id.param_kind(), params) {
        (ParamKind::Triple, Params::Pair { .. }) => {
            return Err(Error::Config(format!("{id} takes a parameter triple (a, b, c)")));
        }
        (ParamKind::Pair, Params::Triple { .. }) => {
            return Err(Error::Config(format!("{id} takes a parameter pair")));
        }
        _ => {}
    }
    let (c, d, _) = params.columns();
    let ok = |cond: bool, reason: String| if cond { Ok(()) } else { Err(violation(id, reason)) };
    match id {
        TheoremId::T1_1 | TheoremId::T1_3 | TheoremId::T3_2 => Ok(()),
        TheoremId::T1_2 => ok(
            classify(&triple).tag == RegimeTag::ConvergentAtOne,
            format!("requires c > a + b, got c - a - b = {}", triple.slack()),
        ),
        TheoremId::T3_3_1 | TheoremId::T3_5_1 | TheoremId::T3_6_1 | TheoremId::C3_8_1 => {
            ok(product_at_most_one(c, d), format!("requires cd <= 1, got cd = {}", c * d))
        }
        TheoremId::T3_9_1 => ok(product_at_most_one(c, d), format!("requires ab <= 1, got ab = {}", c * d)),
        TheoremId::T3_3_2 | TheoremId::T3_5_2 | TheoremId::T3_6_2 | TheoremId::C3_8_2 => ok(
            harmonic_at_most_two(c, d),
            format!("requires 1/c + 1/d <= 2, got {}", 1.0 / c + 1.0 / d),
        ),
        TheoremId::T3_9_2 => ok(
            harmonic_at_most_two(c, d),
            format!("requires 1/a + 1/b <= 2, got {}", 1.0 / c + 1.0 / d),
        ),
        TheoremId::T3_4 | TheoremId::R3_7 => {
            if is_one_one(c, d) {
                return Err(violation(id, "(c,d)=(1,1) excluded"));
            }
            ok(product_at_most_one(c, d), format!("requires cd <= 1, got cd = {}", c * d))
        }
    }
}

fn pair_point(id: TheoremId, point: &Point) -> Result<PointPair> {
    match point {
        Point::Pair(p) => Ok(*p),
        _ => Err(Error::Config(format!("{id} takes a point pair (x, y)"))),
    }
}

struct Bounds {
    lower: Option<Estimate>,
    upper: Option<Estimate>,
    strict_lower: bool,
    strict_upper: bool,
}

fn constants(c: f64, d: f64) -> Result<(Estimate, Estimate)> {
    Ok((specfun::beta(c, d)?.into(), specfun::r_coeff(c, d)?.into()))
}

fn bounds(id: TheoremId, params: &Params) -> Result<Bounds> {
    let info = id.info();
    let (c, d, _) = params.columns();
    let k = Estimate::exact;
    let (lower, upper) = match id {
        TheoremId::T1_1 | TheoremId::T3_2 => (Some(k(0.0)), Some(k(2.0))),
        TheoremId::T1_2 => {
            let t = params.triple()?;
            let a = crate::hyp2f1::value_at_one(&t)?;
            // Four log-gammas of size about c ln c, then one exp.
            let a = Estimate::new(a, 8.0 * f64::EPSILON * a * (1.0 + t.c() * t.c().ln().abs()));
            (Some(Estimate::exact(0.0) - a), Some(a))
        }
        TheoremId::T1_3 => {
            let (b, r) = constants(c, d)?;
            (Some(r * 2.0 / b - 1.0), Some(k(1.0)))
        }
        TheoremId::T3_3_1 => {
            let (b, _) = constants(c, d)?;
            (Some(k(1.0) / b), Some(b))
        }
        TheoremId::T3_3_2 => {
            let (b, _) = constants(c, d)?;
            (Some(b), Some(k(1.0) / b))
        }
        TheoremId::T3_4 => {
            let (b, r) = constants(c, d)?;
            let bm1 = b - 1.0;
            (Some(bm1 / r), Some(r * 2.0 / bm1))
        }
        TheoremId::T3_5_1 => (Some(k(1.0)), None),
        TheoremId::T3_5_2 => (None, Some(k(1.0))),
        TheoremId::T3_6_1 => {
            let (b, r) = constants(c, d)?;
            (Some(k(0.0)), Some((r * 2.0 + 1.0) / b - 1.0))
        }
        TheoremId::T3_6_2 => {
            let (b, r) = constants(c, d)?;
            (Some((r * 2.0 + 1.0) / b - 1.0), Some(k(0.0)))
        }
        TheoremId::C3_8_1 => {
            let (b, _) = constants(c, d)?;
            (Some(k(1.0)), Some(if b.value < 2.0 { b } else { k(2.0) }))
        }
        TheoremId::C3_8_2 => {
            let (b, _) = constants(c, d)?;
            (Some(b), Some(k(1.0)))
        }
        TheoremId::T3_9_1 => (Some(k(1.0)), Some(k(2.0))),
        TheoremId::T3_9_2 => {
            let (b, _) = constants(c, d)?;
            (Some(k(2.0)), Some(k(2.0) / b))
        }
        TheoremId::R3_7 => {
            let (_, r) = constants(c, d)?;
            (Some(k(0.0)), Some(r))
        }
    };
    // At (1,1) these strict bounds collapse onto the identically attained
    // value, so only the non-strict form can hold.
    let degenerate = is_one_one(c, d)
        && matches!(
            id,
            TheoremId::T3_6_1 | TheoremId::T3_6_2 | TheoremId::C3_8_1 | TheoremId::C3_8_2 | TheoremId::T3_9_2
        );
    Ok(Bounds {
        lower,
        upper,
        strict_lower: info.strict_lower && !degenerate,
        strict_upper: info.strict_upper && !degenerate,
    })
}

fn value(id: TheoremId, params: &Params, point: &Point, cfg: &EvalConfig) -> Result<Estimate> {
    let (c, d, _) = params.columns();
    match id {
        TheoremId::T1_1 => q_f(&params.triple()?, &pair_point(id, point)?, cfg),
        TheoremId::T1_2 | TheoremId::T1_3 => d_f(&params.triple()?, &pair_point(id, point)?, cfg),
        TheoremId::T3_6_1 | TheoremId::T3_6_2 => d_g(c, d, &pair_point(id, point)?, cfg),
        TheoremId::T3_9_1 | TheoremId::T3_9_2 => match point {
            Point::Scalar(t) => {
                if !(*t > 0.0 && *t < 1.0) {
                    return Err(Error::domain(format!("t must lie in (0,1), got {t}")));
                }
                s_func_arg(c, d, &UnitArg::from_x(*t)?, cfg)
            }
            _ => Err(Error::Config(format!("{id} takes a scalar point t"))),
        },
        TheoremId::R3_7 => {
            let (b, _) = constants(c, d)?;
            Ok(b - 1.0)
        }
        _ => q_g(c, d, &pair_point(id, point)?, cfg),
    }
}

/// Evaluate predicate `id` at `(params, point)`.
///
/// Fails with [`Error::HypothesisViolation`] if the parameters are outside
/// the predicate's hypothesis. A returned record passes iff every present
/// margin is at least `-(eval_error_budget + opts.slack)`.
pub fn check(id: TheoremId, params: &Params, point: &Point, opts: &CheckOptions) -> Result<CheckRecord> {
    check_hypothesis(id, params)?;
    let v = value(id, params, point, &opts.eval)?;
    let b = bounds(id, params)?;
    let margin_lower = b.lower.map(|l| v.value - l.value);
    let margin_upper = b.upper.map(|u| u.value - v.value);
    let budget_lower = b.lower.map_or(0.0, |l| l.abs_error_est);
    let budget_upper = b.upper.map_or(0.0, |u| u.abs_error_est);
    let budget = v.abs_error_est + budget_lower.max(budget_upper);
    let tol = budget + opts.slack;
    let pass = v.value.is_finite()
        && margin_lower.is_none_or(|m| m >= -tol)
        && margin_upper.is_none_or(|m| m >= -tol);
    let tight = |m: Option<f64>, strict: bool| strict && m.is_some_and(|m| m.abs() < 10.0 * budget);
    let strictness_unresolved = tight(margin_lower, b.strict_lower) || tight(margin_upper, b.strict_upper);
    Ok(CheckRecord {
        id,
        params: *params,
        point: *point,
        value: v.value,
        lower: b.lower.map(|l| l.value),
        upper: b.upper.map(|u| u.value),
        margin_lower,
        margin_upper,
        strict_lower: b.strict_lower,
        strict_upper: b.strict_upper,
        pass,
        eval_error_budget: budget,
        strictness_unresolved,
    })
}
