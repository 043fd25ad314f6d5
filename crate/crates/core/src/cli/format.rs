//! Number formatting for human-readable output.

/// `v` with 12 significant digits, fixed notation for moderate exponents
/// and scientific otherwise, trailing zeros trimmed (like C's `%.12g`).
pub fn sig12(v: f64) -> String {
    const DIGITS: i32 = 12;
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn opt12(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), sig12)
}
