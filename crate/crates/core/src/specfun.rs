//! Real gamma, log-gamma, digamma and beta functions, the coefficient
//! `R(a, b) = -2γ - ψ(a) - ψ(b)` of the zero-balanced logarithmic
//! asymptote, and the Euler–Mascheroni constant.
//!
//! Gamma uses the Lanczos approximation (g = 7, nine coefficients) with the
//! reflection formula below one half. Digamma shifts its argument upward
//! with `ψ(x) = ψ(x + 1) - 1/x` until it reaches 8 and then sums the
//! asymptotic expansion through the `B₁₄` term. Error estimates are fixed
//! a-priori bounds per method.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest argument accepted by [`gamma`].
pub const GAMMA_MAX_ARG: f64 = 170.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

// B_{2k} / (2k) for k = 1..7.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];
const DIGAMMA_SHIFT_TARGET: f64 = 8.0;

const GAMMA_REL_ERR: f64 = 2e-14;
const DIGAMMA_ABS_ERR: f64 = 2e-15;

/// A function value with an a-priori absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_est: f64,
}

impl SpecialValue {
    fn new(value: f64, abs_error_est: f64) -> Self {
        debug_assert!(abs_error_est.is_finite() && abs_error_est >= 0.0);
        Self { value, abs_error_est }
    }

    fn with_rel(value: f64, rel: f64) -> Self {
        Self::new(value, value.abs() * rel)
    }
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("{name} requires a positive argument, got {x}")));
    }
    if x.is_infinite() {
        return Err(Error::domain(format!("{name} requires a finite argument")));
    }
    Ok(())
}

/// `x` as a small positive integer, if it is one.
fn small_positive_integer(x: f64) -> Option<u32> {
    if (1.0..=171.0).contains(&x) && x.fract() == 0.0 {
        Some(x as u32)
    } else {
        None
    }
}

fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    acc
}

/// Lanczos gamma for `x >= 0.5`.
fn gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // Split the power so t^(z+1/2) cannot overflow before e^-t pulls it back.
    let half = t.powf((z + 0.5) / 2.0);
    SQRT_2PI * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// Lanczos log-gamma for `x >= 0.5`.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `sin(πx)`, reduced to `[-1/2, 1/2]` first so it keeps full relative
/// accuracy next to the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.fract() == 0.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(πx)`, via `cos(πr) = sin(π(1/2 - |r|))`.
fn cos_pi(x: f64) -> f64 {
    let r = (x - 2.0 * (x / 2.0).round()).abs();
    sin_pi(0.5 - r)
}

/// Gamma function for `0 < x <= 170`.
pub fn gamma(x: f64) -> Result<SpecialValue> {
    require_positive("gamma", x)?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds the double range guard x <= 170")));
    }
    if let Some(n) = small_positive_integer(x) {
        let v = factorial(n - 1);
        // Exact through 22!, then one rounding per factor.
        let rel = if n <= 23 { 0.0 } else { f64::from(n) * f64::EPSILON };
        return Ok(SpecialValue::with_rel(v, rel));
    }
    let v = if x < 0.5 {
        PI / (sin_pi(x) * gamma_lanczos(1.0 - x))
    } else {
        gamma_lanczos(x)
    };
    if !v.is_finite() {
        return Err(Error::Overflow(format!("gamma({x}) is not representable")));
    }
    Ok(SpecialValue::with_rel(v, GAMMA_REL_ERR * (1.0 + x / 50.0)))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if let Some(n) = small_positive_integer(x) {
        return factorial(n - 1).ln();
    }
    if x < 0.5 {
        // ln Γ(x) = ln Γ(x + 1) - ln x keeps tiny arguments finite.
        return ln_gamma_lanczos(x + 1.0) - x.ln();
    }
    ln_gamma_lanczos(x)
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<SpecialValue> {
    require_positive("log_gamma", x)?;
    let v = ln_gamma_positive(x);
    Ok(SpecialValue::new(v, 4.0 * f64::EPSILON * v.abs().max(1.0)))
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub(crate) fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_positive(x), 1.0));
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return None;
    }
    // Γ(x) Γ(1 - x) = π / sin(πx)
    let lg = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    Some((lg, s.signum()))
}

fn digamma_positive(x: f64) -> f64 {
    if let Some(n) = small_positive_integer(x) {
        if n <= 64 {
            let h: NeumaierSum = (1..n).map(|k| 1.0 / f64::from(k)).collect();
            return h.total() - EULER_GAMMA;
        }
    }
    let mut shift = NeumaierSum::new();
    let mut y = x;
    while y < DIGAMMA_SHIFT_TARGET {
        shift.add(1.0 / y);
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut poly = 0.0;
    for &coef in DIGAMMA_ASYMPTOTIC.iter().rev() {
        poly = poly * inv2 + coef;
    }
    let asym = y.ln() - 0.5 / y - poly * inv2;
    asym - shift.total()
}

/// Digamma (psi) function for `x > 0`.
pub fn digamma(x: f64) -> Result<SpecialValue> {
    require_positive("digamma", x)?;
    let v = digamma_positive(x);
    Ok(SpecialValue::new(v, DIGAMMA_ABS_ERR * v.abs().max(1.0)))
}

/// Digamma for any real non-pole argument (reflection below zero).
pub(crate) fn digamma_real(x: f64) -> Option<f64> {
    if x > 0.0 {
        return Some(digamma_positive(x));
    }
    let s = sin_pi(x);
    if s == 0.0 {
        return None;
    }
    // ψ(1 - x) - ψ(x) = π cot(πx)
    Some(digamma_positive(1.0 - x) - PI * cos_pi(x) / s)
}

/// Euler beta function `B(x, y) = Γ(x)Γ(y)/Γ(x + y)`, evaluated through
/// log-gamma so large arguments do not overflow. Symmetric bit-for-bit.
pub fn beta(x: f64, y: f64) -> Result<SpecialValue> {
    require_positive("beta", x)?;
    require_positive("beta", y)?;
    let (lx, ly, lxy) = (ln_gamma_positive(x), ln_gamma_positive(y), ln_gamma_positive(x + y));
    let v = ((lx + ly) - lxy).exp();
    let rel = 4.0 * f64::EPSILON * (lx.abs() + ly.abs() + lxy.abs() + 1.0);
    Ok(SpecialValue::with_rel(v, rel))
}

/// `R(a, b) = -2γ - ψ(a) - ψ(b)`. Symmetric bit-for-bit.
pub fn r_coeff(a: f64, b: f64) -> Result<SpecialValue> {
    let pa = digamma(a)?;
    let pb = digamma(b)?;
    let v = -2.0 * EULER_GAMMA - (pa.value + pb.value);
    Ok(SpecialValue::new(v, pa.abs_error_est + pb.abs_error_est + 4.0 * f64::EPSILON))
}

/// The Euler–Mascheroni constant γ.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_reference_values() {
        assert_eq!(gamma(1.0).unwrap().value, 1.0);
        assert_eq!(gamma(5.0).unwrap().value, 24.0);
        assert!(rel(gamma(0.5).unwrap().value, PI.sqrt()) < 1e-14);
        // Γ(1.5) = √π / 2
        assert!(rel(gamma(1.5).unwrap().value, PI.sqrt() / 2.0) < 1e-14);
    }

    #[test]
    fn gamma_domain_and_overflow() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-1.5), Err(Error::Domain(_))));
        assert!(matches!(gamma(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(gamma(170.5), Err(Error::Overflow(_))));
        assert!(gamma(170.0).unwrap().value.is_finite());
    }

    #[test]
    fn log_gamma_reference_values() {
        assert_eq!(log_gamma(1.0).unwrap().value, 0.0);
        assert_eq!(log_gamma(2.0).unwrap().value, 0.0);
        assert!((log_gamma(0.5).unwrap().value - 0.572_364_942_924_700_1).abs() < 1e-14);
        // ln Γ(171) = ln 170!
        let v = log_gamma(171.0).unwrap().value;
        assert!((v - 706.573_062_245_787_3).abs() < 1e-10, "{v}");
        assert!(log_gamma(1e-300).unwrap().value.is_finite());
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_matches_gamma() {
        for i in 1..400 {
            let x = 0.013 + 0.42 * f64::from(i);
            if x > GAMMA_MAX_ARG {
                break;
            }
            let g = gamma(x).unwrap().value;
            let lg = log_gamma(x).unwrap().value;
            assert!(rel(lg.exp(), g) < 1e-11, "x={x}");
        }
    }

    #[test]
    fn digamma_reference_values() {
        assert!((digamma(1.0).unwrap().value + EULER_GAMMA).abs() < 1e-15);
        assert!((digamma(2.0).unwrap().value - 0.422_784_335_098_467_1).abs() < 1e-15);
        assert!((digamma(0.5).unwrap().value + 1.963_510_026_021_423_5).abs() < 1e-14);
        // non-integer argument going through the asymptotic branch
        assert!((digamma(0.3).unwrap().value + 3.502_524_222_200_133).abs() < 1e-13);
        assert!(matches!(digamma(-0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn digamma_real_reflection() {
        // ψ(-0.5) = ψ(1.5) + π cot(-π/2)·... ; reference from the recurrence
        // ψ(0.5) = ψ(-0.5) + 1/(-0.5).
        let lhs = digamma_real(-0.5).unwrap();
        let rhs = digamma_positive(0.5) + 2.0;
        assert!((lhs - rhs).abs() < 1e-13);
        assert!(digamma_real(-2.0).is_none());
    }

    #[test]
    fn beta_reference_values() {
        assert_eq!(beta(1.0, 1.0).unwrap().value, 1.0);
        assert!(rel(beta(0.5, 0.5).unwrap().value, PI) < 1e-13);
        assert!(rel(beta(2.0, 3.0).unwrap().value, 1.0 / 12.0) < 1e-14);
        assert!(matches!(beta(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(beta(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn r_coeff_reference_values() {
        assert!((r_coeff(0.5, 0.5).unwrap().value - 16f64.ln()).abs() < 1e-13);
        assert_eq!(r_coeff(1.0, 1.0).unwrap().value, 0.0);
        assert!((r_coeff(2.0, 2.0).unwrap().value + 2.0).abs() < 1e-14);
        assert!(matches!(r_coeff(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_log_gamma() {
        // Γ(-0.5) = -2√π
        let (lg, s) = ln_gamma_signed(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert!(rel(lg.exp(), 2.0 * PI.sqrt()) < 1e-14);
    }

    #[test]
    fn euler_gamma_constant() {
        assert_eq!(euler_gamma(), 0.577_215_664_901_532_9);
    }
}
