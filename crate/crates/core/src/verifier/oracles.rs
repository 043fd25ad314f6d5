//! Closed-form and independently computed reference values.

use crate::error::{Error, Result};
use crate::hyp2f1::{eval_series, EvalResult, ParamTriple};

const SERIES_HQ_REL_TOL: f64 = 1e-15;
const SERIES_HQ_MAX_TERMS: usize = 10_000_000;
const SERIES_HQ_MAX_X: f64 = 0.999;

/// `F(a, b; b; x) = (1 - x)^(-a)`.
pub fn oracle_binomial(a: f64, x: f64) -> f64 {
    (-a * (-x).ln_1p()).exp()
}

/// `x F(1, 1; 2; x) = log(1/(1 - x))`.
pub fn oracle_log(x: f64) -> f64 {
    -(-x).ln_1p()
}

/// `F(1/2, 1/2; 1; m) = 1 / AGM(1, sqrt(1 - m))`.
pub fn oracle_elliptic_agm(m: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut g = (1.0 - m).sqrt();
    for _ in 0..64 {
        if (a - g).abs() <= 1e-15 * a {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    1.0 / (0.5 * (a + g))
}

/// Plain power series summed to `1e-15` relative with a ten-million-term
/// budget, for `x <= 0.999`.
pub fn oracle_series_hq(t: &ParamTriple, x: f64) -> Result<EvalResult> {
    if !(0.0..=SERIES_HQ_MAX_X).contains(&x) {
        return Err(Error::domain(format!("the series oracle needs 0 <= x <= {SERIES_HQ_MAX_X}, got {x}")));
    }
    eval_series(t, x, SERIES_HQ_REL_TOL, SERIES_HQ_MAX_TERMS)
}
