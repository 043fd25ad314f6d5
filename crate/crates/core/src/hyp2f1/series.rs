//! Power-series summation of `F(a, b; c; x)` for real parameters.
//!
//! Parameters here are raw `f64`s: the connection formulas near `x = 1`
//! need series whose parameters may be negative. Callers guarantee that `c`
//! is not a non-positive integer.

use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub abs_error_est: f64,
    pub terms: usize,
    pub converged: bool,
}

/// Sum `Σ (a)_n (b)_n / ((c)_n n!) xⁿ` for `0 <= x < 1`.
///
/// The term recurrence `t_{n+1} = t_n (a+n)(b+n) x / ((c+n)(n+1))` replaces
/// the Pochhammer symbols. Once `n` is past every parameter magnitude the
/// term ratios approach `x` monotonically, so the tail after term `n` is
/// bounded by `|t_{n+1}| / (1 - ρ)` with `ρ = max(|ratio|, x)`. Summation
/// stops when that bound drops below `rel_tol · |sum|`.
pub(crate) fn sum_series(a: f64, b: f64, c: f64, x: f64, rel_tol: f64, max_terms: usize) -> SeriesSum {
    debug_assert!((0.0..1.0).contains(&x));
    let mut acc = NeumaierSum::new();
    let mut term = 1.0_f64;
    acc.add(term);
    let n_min = a.abs().max(b.abs()).max(c.abs()).ceil() as usize + 2;
    let mut n = 0usize;
    let mut tail = 0.0;
    let mut converged = false;
    let mut max_abs_term = 1.0_f64;
    while n + 1 < max_terms.max(1) {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        let next = term * ratio;
        if next == 0.0 {
            // Terminating polynomial or underflow: nothing further contributes.
            tail = 0.0;
            converged = true;
            n += 1;
            break;
        }
        if n >= n_min {
            let rho = ratio.abs().max(x);
            if rho < 1.0 {
                tail = next.abs() / (1.0 - rho);
                if tail <= rel_tol * acc.total().abs() {
                    converged = true;
                    n += 1;
                    break;
                }
            }
        }
        acc.add(next);
        max_abs_term = max_abs_term.max(next.abs());
        term = next;
        n += 1;
    }
    let value = acc.total();
    if !converged {
        // Budget exhausted: bound the tail with the last available ratio.
        let nf = n as f64;
        let ratio = ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x).abs().max(x);
        let next = (term * ratio).abs();
        tail = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::MAX };
    }
    // Recurrence rounding grows linearly with the term index in the worst case.
    let rounding = f64::EPSILON * (2.0 * value.abs() + 2.0 * (n as f64) * acc.abs_total().max(max_abs_term));
    SeriesSum {
        value,
        abs_error_est: tail + rounding,
        terms: if converged { n } else { n + 1 },
        converged,
    }
}
