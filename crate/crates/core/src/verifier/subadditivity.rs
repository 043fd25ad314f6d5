//! Sub- and super-additivity of `G(t) = g(1 - e^(-t))`.
//!
//! With `x = 1 - e^(-u)` and `y = 1 - e^(-v)` one has
//! `x + y - xy = 1 - e^(-(u+v))`, so `G(u) + G(v) >= G(u + v)` is the same
//! statement as `Q_g(x, y) >= 1`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hyp2f1::{g_zb_arg, UnitArg};
use crate::inequalities::{check_hypothesis, CheckOptions, Estimate, Params, TheoremId};

pub const DEFAULT_T_MIN: f64 = 0.01;
pub const DEFAULT_T_MAX: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `G(u) + G(v) <= G(u + v)`.
    Sub,
    /// `G(u) + G(v) >= G(u + v)`.
    Super,
}

impl Direction {
    /// The predicate whose hypothesis licenses this direction.
    pub fn theorem(self) -> TheoremId {
        match self {
            Direction::Super => TheoremId::T3_5_1,
            Direction::Sub => TheoremId::T3_5_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub u: f64,
    pub v: f64,
    /// `G(u) + G(v)`.
    pub lhs: f64,
    /// `G(u + v)`.
    pub rhs: f64,
    /// Signed so that non-negative means the requested direction holds.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub c: f64,
    pub d: f64,
    pub direction: Direction,
    pub pairs_checked: usize,
    pub violations: Vec<PairOutcome>,
    pub min_margin: f64,
    /// `G(t)/t` is monotone on the grid in the direction that implies the
    /// additivity property (decreasing for super, increasing for sub).
    pub ratio_monotone: bool,
    /// Grid values `t_i` where `G(t)/t` steps the wrong way to `t_{i+1}`.
    pub ratio_violations: Vec<f64>,
    /// Every pair in row-major grid order.
    #[serde(skip)]
    pub outcomes: Vec<PairOutcome>,
}

impl SubadditivityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.ratio_monotone
    }
}

/// `n` log-spaced points in `[0.01, 7]`.
pub fn default_t_grid(n: usize) -> Vec<f64> {
    log_grid(DEFAULT_T_MIN, DEFAULT_T_MAX, n)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn big_g(c: f64, d: f64, t: f64, opts: &CheckOptions) -> Result<Estimate> {
    Ok(g_zb_arg(c, d, &UnitArg::from_log_complement(t)?, &opts.eval)?.into())
}

/// Like [`subadditivity_check`] without the hypothesis guard, for probing
/// parameters where the direction is not guaranteed.
pub fn subadditivity_scan(
    c: f64,
    d: f64,
    direction: Direction,
    t_grid: &[f64],
    opts: &CheckOptions,
) -> Result<SubadditivityReport> {
    let mut grid = t_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let sign = match direction {
        Direction::Super => 1.0,
        Direction::Sub => -1.0,
    };
    let g: Vec<Estimate> = grid.iter().map(|&t| big_g(c, d, t, opts)).collect::<Result<_>>()?;
    let mut outcomes = Vec::with_capacity(grid.len() * grid.len());
    for (i, &u) in grid.iter().enumerate() {
        for (j, &v) in grid.iter().enumerate() {
            let sum = big_g(c, d, u + v, opts)?;
            let lhs = g[i] + g[j];
            let margin = sign * (lhs.value - sum.value);
            let tol = lhs.abs_error_est + sum.abs_error_est + opts.slack;
            outcomes.push(PairOutcome {
                u,
                v,
                lhs: lhs.value,
                rhs: sum.value,
                margin,
                holds: margin >= -tol,
            });
        }
    }
    let mut ratio_violations = Vec::new();
    for i in 1..grid.len() {
        let r0 = g[i - 1] / Estimate::exact(grid[i - 1]);
        let r1 = g[i] / Estimate::exact(grid[i]);
        // Super needs r1 <= r0, sub needs r1 >= r0.
        let step = sign * (r0.value - r1.value);
        if step < -(r0.abs_error_est + r1.abs_error_est + opts.slack) {
            ratio_violations.push(grid[i - 1]);
        }
    }
    let min_margin = outcomes.iter().map(|o| o.margin).fold(f64::INFINITY, f64::min);
    Ok(SubadditivityReport {
        c,
        d,
        direction,
        pairs_checked: outcomes.len(),
        violations: outcomes.iter().filter(|o| !o.holds).copied().collect(),
        min_margin,
        ratio_monotone: ratio_violations.is_empty(),
        ratio_violations,
        outcomes,
    })
}

/// Check `G(u) + G(v) >= G(u + v)` (super, requires `cd <= 1`) or `<=`
/// (sub, requires `1/c + 1/d <= 2`) on all pairs of `t_grid`, and the
/// matching monotonicity of `G(t)/t`.
pub fn subadditivity_check(
    c: f64,
    d: f64,
    direction: Direction,
    t_grid: &[f64],
    opts: &CheckOptions,
) -> Result<SubadditivityReport> {
    check_hypothesis(direction.theorem(), &Params::Pair { c, d })?;
    subadditivity_scan(c, d, direction, t_grid, opts)
}
