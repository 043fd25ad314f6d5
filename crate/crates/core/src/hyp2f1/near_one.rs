//! Evaluation of `F(a, b; c; x)` for `x` close to one through the
//! connection formulas in the complementary variable `w = 1 - x`.
//!
//! * `c - a - b = s < 0`: Euler's transformation
//!   `F(a,b;c;x) = w^s F(c-a, c-b; c; x)` moves to a positive slack.
//! * non-integer `s > 0`: the two-term Gauss connection
//!   `F = Γ(c)Γ(s)/(Γ(c-a)Γ(c-b)) F(a,b;1-s;w)
//!      + w^s Γ(c)Γ(-s)/(Γ(a)Γ(b)) F(c-a,c-b;1+s;w)`.
//! * integer `s = m >= 0`: the logarithmic form, whose `n = 0` term for
//!   `m = 0` is the zero-balanced asymptote `(R(a,b) - ln w)/B(a,b)`.
//! * `s` within `NEAR_INTEGER_BAND` of an integer: both forms above lose
//!   accuracy (the Gauss terms cancel like `1/(s - m)`), so the value is
//!   interpolated in `c` through the integer case and two Gauss nodes.
//!
//! All series here have ratio about `w < 1 - x_switch`, so they converge
//! in a handful of terms.

use super::series::sum_series;
use super::{EvalConfig, EvalResult, Method, UnitArg, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::specfun::{digamma_real, ln_gamma_signed, EULER_GAMMA};
use crate::sum::NeumaierSum;

const NEAR_INTEGER_BAND: f64 = 1e-4;
const INTERPOLATION_STEP: f64 = 1e-3;
const MAX_CONNECTION_TERMS: usize = 10_000;

fn slack_tolerance(c: f64) -> f64 {
    CLASSIFY_TOL * c.abs().max(1.0)
}

fn nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && (v - v.round()).abs() <= slack_tolerance(v)
}

/// Product of gamma functions `Π Γ(num) / Π Γ(den)` via signed log-gamma.
/// Returns `(value, relative error estimate)`; a pole in the denominator
/// gives zero, a pole in the numerator is a caller bug.
fn gamma_ratio(num: &[f64], den: &[f64]) -> (f64, f64) {
    let mut log_sum = 0.0;
    let mut log_mag = 0.0;
    let mut sign = 1.0;
    for &v in num {
        let (lg, s) = ln_gamma_signed(v).expect("gamma pole in numerator");
        log_sum += lg;
        log_mag += lg.abs();
        sign *= s;
    }
    for &v in den {
        match ln_gamma_signed(v) {
            None => return (0.0, 0.0),
            Some((lg, s)) => {
                log_sum -= lg;
                log_mag += lg.abs();
                sign *= s;
            }
        }
    }
    (sign * log_sum.exp(), 8.0 * f64::EPSILON * (log_mag + 1.0))
}

pub(crate) fn eval_near_one(a: f64, b: f64, c: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let s = c - a - b;
    if s < -slack_tolerance(c) {
        let inner = eval_nonnegative_slack(c - a, c - b, c, arg, cfg)?;
        let factor = (s * arg.ln_w).exp();
        let value = factor * inner.value;
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "F({a}, {b}; {c}; x) overflows at 1 - x = exp({})",
                arg.ln_w
            )));
        }
        let err = factor * inner.abs_error_est + value.abs() * f64::EPSILON * (2.0 + (s * arg.ln_w).abs());
        return Ok(EvalResult {
            value,
            abs_error_est: err,
            method: Method::TransformedSeries,
            terms_used: inner.terms_used,
        });
    }
    eval_nonnegative_slack(a, b, c, arg, cfg)
}

fn eval_nonnegative_slack(a: f64, b: f64, c: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    if nonpositive_integer(a) || nonpositive_integer(b) {
        // Terminating polynomial; the direct sum is finite.
        let s = sum_series(a.round_if_near(), b.round_if_near(), c, arg.x, cfg.rel_tol, cfg.max_terms);
        return Ok(EvalResult {
            value: s.value,
            abs_error_est: s.abs_error_est,
            method: Method::Series,
            terms_used: s.terms,
        });
    }
    let s = (c - a - b).max(0.0);
    let m = s.round();
    let offset = s - m;
    if offset.abs() <= slack_tolerance(c) {
        integer_slack(a, b, m as u32, arg, cfg)
    } else if offset.abs() < NEAR_INTEGER_BAND {
        interpolate_near_integer(a, b, c, m as u32, arg, cfg)
    } else {
        gauss_connection(a, b, c, arg, cfg)
    }
}

trait RoundIfNear {
    fn round_if_near(self) -> f64;
}

impl RoundIfNear for f64 {
    fn round_if_near(self) -> f64 {
        if (self - self.round()).abs() <= slack_tolerance(self) {
            self.round()
        } else {
            self
        }
    }
}

fn gauss_connection(a: f64, b: f64, c: f64, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let s = c - a - b;
    let w = arg.w;
    let (coef1, rel1) = gamma_ratio(&[c, s], &[c - a, c - b]);
    let (coef2, rel2) = gamma_ratio(&[c, -s], &[a, b]);
    let f1 = sum_series(a, b, 1.0 - s, w, cfg.rel_tol, MAX_CONNECTION_TERMS);
    let f2 = sum_series(c - a, c - b, 1.0 + s, w, cfg.rel_tol, MAX_CONNECTION_TERMS);
    let ws = (s * arg.ln_w).exp();
    let part1 = coef1 * f1.value;
    let part2 = ws * coef2 * f2.value;
    let value = part1 + part2;
    let err = coef1.abs() * f1.abs_error_est
        + (ws * coef2).abs() * f2.abs_error_est
        + part1.abs() * rel1
        + part2.abs() * (rel2 + f64::EPSILON * (1.0 + (s * arg.ln_w).abs()))
        + 2.0 * f64::EPSILON * value.abs();
    let result = EvalResult {
        value,
        abs_error_est: err,
        method: Method::TransformedSeries,
        terms_used: f1.terms + f2.terms,
    };
    if f1.converged && f2.converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(result))
    }
}

/// Logarithmic connection formula for `c = a + b + m`.
fn integer_slack(a: f64, b: f64, m: u32, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let mf = f64::from(m);
    let c = a + b + mf;
    let w = arg.w;
    let ln_w = arg.ln_w;

    // Finite part: Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n (b)_n / (n! (1-m)_n) wⁿ
    let mut finite = 0.0;
    let mut finite_err = 0.0;
    if m > 0 {
        let (coef, rel) = gamma_ratio(&[mf, c], &[a + mf, b + mf]);
        let mut acc = NeumaierSum::new();
        let mut term = 1.0;
        for n in 0..m {
            acc.add(term);
            let nf = f64::from(n);
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
        }
        finite = coef * acc.total();
        finite_err = finite.abs() * rel + coef.abs() * 4.0 * f64::EPSILON * acc.abs_total();
    }

    // Logarithmic part: -(-w)^m Γ(c)/(Γ(a)Γ(b)) Σ_n (a+m)_n (b+m)_n / (n! (n+m)!) wⁿ
    //   × [ln w - ψ(n+1) - ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]
    let (pref, pref_rel) = gamma_ratio(&[c], &[a, b]);
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let wm = if m == 0 { 1.0 } else { w.powi(m as i32) };
    let outer = -sign_m * wm * pref;

    let mut log_sum = NeumaierSum::new();
    let mut lead = 0.0;
    let mut terms = 0usize;
    let mut tail_est = 0.0;
    let mut converged = false;
    if outer != 0.0 || m == 0 {
        let psi_a = digamma_real(a + mf).ok_or_else(|| Error::domain("digamma pole in connection formula"))?;
        let psi_b = digamma_real(b + mf).ok_or_else(|| Error::domain("digamma pole in connection formula"))?;
        // ψ(n+1) = -γ + H_n, ψ(n+m+1) = -γ + H_{n+m}
        let mut h_n = 0.0;
        let mut h_nm: f64 = (1..=m).map(|k| 1.0 / f64::from(k)).sum();
        let mut psi_an = psi_a;
        let mut psi_bn = psi_b;
        let mut coef = 1.0 / (1..=m).fold(1.0, |acc, k| acc * f64::from(k));
        let n_min = (a.abs().max(b.abs()) + mf).ceil() as usize + 2;
        for n in 0..MAX_CONNECTION_TERMS {
            let bracket = ln_w - (h_n - EULER_GAMMA) - (h_nm - EULER_GAMMA) + psi_an + psi_bn;
            let term = coef * bracket;
            if n == 0 {
                lead = term;
            }
            log_sum.add(term);
            terms = n + 1;
            let nf = n as f64;
            let ratio = (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
            let next_coef = coef * ratio;
            if next_coef == 0.0 {
                converged = true;
                tail_est = 0.0;
                break;
            }
            // bracket grows by at most ~2/n per step; fold that into the ratio
            let rho = (ratio.abs().max(w) * 1.25).min(0.999);
            let next_bracket = bracket.abs() + 4.0;
            tail_est = next_coef.abs() * next_bracket / (1.0 - rho);
            if n >= n_min && tail_est <= cfg.rel_tol * log_sum.total().abs() {
                converged = true;
                break;
            }
            coef = next_coef;
            h_n += 1.0 / (nf + 1.0);
            h_nm += 1.0 / (nf + mf + 1.0);
            psi_an += 1.0 / (a + mf + nf);
            psi_bn += 1.0 / (b + mf + nf);
        }
    } else {
        converged = true;
    }

    let log_part = outer * log_sum.total();
    let value = finite + log_part;
    let log_err = outer.abs() * (tail_est + 8.0 * f64::EPSILON * log_sum.abs_total() * (1.0 + terms as f64))
        + log_part.abs() * pref_rel;
    let abs_error_est = finite_err + log_err + 2.0 * f64::EPSILON * value.abs();
    let leading_only = m == 0 && (outer * (log_sum.total() - lead)).abs() <= f64::EPSILON * value.abs();
    let result = EvalResult {
        value,
        abs_error_est,
        method: if leading_only { Method::ZbAsymptotic } else { Method::TransformedSeries },
        terms_used: terms + m as usize,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(result))
    }
}

/// Cubic interpolation in `c` through the integer-slack value at
/// `c0 = a + b + m` and Gauss-connection values at `c0 + kh`, `k = 1, 2, 3`.
fn interpolate_near_integer(a: f64, b: f64, c: f64, m: u32, arg: &UnitArg, cfg: &EvalConfig) -> Result<EvalResult> {
    let h = INTERPOLATION_STEP;
    let c0 = a + b + f64::from(m);
    let nodes = [
        integer_slack(a, b, m, arg, cfg)?,
        gauss_connection(a, b, c0 + h, arg, cfg)?,
        gauss_connection(a, b, c0 + 2.0 * h, arg, cfg)?,
        gauss_connection(a, b, c0 + 3.0 * h, arg, cfg)?,
    ];
    let t = (c - c0) / h;
    let weight = |k: usize| {
        (0..4)
            .filter(|&j| j != k)
            .map(|j| (t - j as f64) / (k as f64 - j as f64))
            .product::<f64>()
    };
    let mut value = 0.0;
    let mut node_err = 0.0;
    let mut terms = 0;
    for (k, node) in nodes.iter().enumerate() {
        let l = weight(k);
        value += l * node.value;
        node_err += l.abs() * node.abs_error_est;
        terms += node.terms_used;
    }
    // |t| times the third difference over-bounds the quartic remainder for
    // |t| <= 1/10.
    let third = (nodes[3].value - 3.0 * nodes[2].value + 3.0 * nodes[1].value - nodes[0].value).abs();
    Ok(EvalResult {
        value,
        abs_error_est: node_err + third * t.abs() + 2.0 * f64::EPSILON * value.abs(),
        method: Method::TransformedSeries,
        terms_used: terms,
    })
}
