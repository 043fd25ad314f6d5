//! Derivative-free search for the infimum of the zero-balanced `D_F`.
//!
//! The search works in `s = -ln(1 - x)`, and on a log scale in `s`, so both
//! corners of the unit square are reachable: `s = 1e-6` is `x ≈ 1e-6` and
//! `s = 50` is `1 - x ≈ 2e-22`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hyp2f1::{ParamTriple, UnitArg};
use crate::inequalities::{d_f, CheckOptions, Params, Point, PointPair};
use crate::specfun;

const S_MIN: f64 = 1e-6;
const S_MAX: f64 = 50.0;
const MAX_GRID_SIDE: usize = 40;
const ROUNDS: usize = 3;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub evaluations: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub objective: String,
    pub params: Params,
    pub best_value: f64,
    pub location: Point,
    /// `-ln(1 - x)` and `-ln(1 - y)` at the best point.
    pub log_complements: [f64; 2],
    pub evaluations: usize,
    pub budget: usize,
    /// Best value after the grid (iteration 0) and after each coordinate
    /// search; non-increasing.
    pub trace: Vec<TracePoint>,
    /// `2R/B - 1`.
    pub lower_bound: f64,
    pub above_lower_bound: bool,
}

struct Objective<'a> {
    t: ParamTriple,
    opts: &'a CheckOptions,
    evaluations: usize,
}

impl Objective<'_> {
    /// `D_F` at `(s_x, s_y) = (e^p, e^q)`; evaluation failures count as +inf.
    fn at(&mut self, p: f64, q: f64) -> f64 {
        self.evaluations += 1;
        let point = |l: f64| UnitArg::from_log_complement(l.exp());
        match (point(p), point(q)) {
            (Ok(x), Ok(y)) => PointPair::from_args(x, y)
                .and_then(|pp| d_f(&self.t, &pp, &self.opts.eval))
                .map_or(f64::INFINITY, |e| e.value),
            _ => f64::INFINITY,
        }
    }
}

fn golden_section(lo: f64, hi: f64, iters: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters.saturating_sub(2) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Empirical infimum of `D_F` for `(a, b, a + b)`: the minimum of a coarse
/// grid, refined by three rounds of golden-section search along each
/// coordinate. `budget` caps the number of `D_F` evaluations (at least 8).
/// The result is an observation, not a certified bound.
pub fn probe_infimum_d_f(a: f64, b: f64, budget: usize, opts: &CheckOptions) -> Result<ExtremalResult> {
    let t = ParamTriple::zero_balanced(a, b)?;
    let beta = specfun::beta(a, b)?.value;
    let r = specfun::r_coeff(a, b)?.value;
    let lower_bound = 2.0 * r / beta - 1.0;
    let budget = budget.max(8);

    let mut obj = Objective { t, opts, evaluations: 0 };
    let (lo, hi) = (S_MIN.ln(), S_MAX.ln());
    let side = (((budget / 2) as f64).sqrt() as usize).clamp(2, MAX_GRID_SIDE);
    let h = (hi - lo) / (side - 1) as f64;
    let mut best = (lo, lo, f64::INFINITY);
    for i in 0..side {
        for j in 0..side {
            let (p, q) = (lo + i as f64 * h, lo + j as f64 * h);
            let v = obj.at(p, q);
            if v < best.2 {
                best = (p, q, v);
            }
        }
    }
    let mut trace = vec![TracePoint {
        iteration: 0,
        evaluations: obj.evaluations,
        value: best.2,
    }];

    let per_search = (budget.saturating_sub(obj.evaluations)) / (2 * ROUNDS);
    let mut radius = h;
    let mut iteration = 0;
    if per_search >= 2 {
        for _ in 0..ROUNDS {
            for axis in 0..2 {
                iteration += 1;
                let centre = if axis == 0 { best.0 } else { best.1 };
                let (l, u) = ((centre - radius).max(lo), (centre + radius).min(hi));
                let (arg, val) = golden_section(l, u, per_search, |s| {
                    if axis == 0 {
                        obj.at(s, best.1)
                    } else {
                        obj.at(best.0, s)
                    }
                });
                if val < best.2 {
                    if axis == 0 {
                        best.0 = arg;
                    } else {
                        best.1 = arg;
                    }
                    best.2 = val;
                }
                trace.push(TracePoint {
                    iteration,
                    evaluations: obj.evaluations,
                    value: best.2,
                });
            }
            radius *= 0.5;
        }
    }

    let (sx, sy) = (best.0.exp(), best.1.exp());
    let location = PointPair::from_args(UnitArg::from_log_complement(sx)?, UnitArg::from_log_complement(sy)?)?;
    Ok(ExtremalResult {
        objective: "inf_D_F".to_string(),
        params: Params::Pair { c: a, d: b },
        best_value: best.2,
        location: Point::Pair(location),
        log_complements: [sx, sy],
        evaluations: obj.evaluations,
        budget,
        trace,
        lower_bound,
        above_lower_bound: best.2 > lower_bound - opts.slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_is_monotone_and_budget_respected() {
        let r = probe_infimum_d_f(0.5, 0.5, 2000, &CheckOptions::default()).unwrap();
        assert!(r.evaluations <= r.budget);
        for w in r.trace.windows(2) {
            assert!(w[1].value <= w[0].value);
        }
        assert!(r.above_lower_bound);
        assert!(r.best_value > 0.765_084_801_221_212_7 && r.best_value < 1.0);
        assert_eq!(r.trace.len(), 1 + 2 * ROUNDS);
    }

    #[test]
    fn one_one_stays_above_bound() {
        let r = probe_infimum_d_f(1.0, 1.0, 500, &CheckOptions::default()).unwrap();
        assert_eq!(r.lower_bound, -1.0);
        assert!(r.above_lower_bound);
        assert!(r.best_value < 0.5);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, v) = golden_section(-1.0, 3.0, 60, |x| (x - 0.7) * (x - 0.7));
        assert!((x - 0.7).abs() < 1e-6 && v < 1e-12);
    }
}
