//! Compensated (Neumaier) summation.

use std::ops::AddAssign;

/// Running sum with a Neumaier compensation term.
///
/// The series evaluators add up to millions of positive terms near `x = 1`;
/// plain accumulation loses roughly `n * eps` relative accuracy there.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += value.abs();
    }

    /// Compensated total.
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of the magnitudes of everything added so far; bounds the rounding
    /// error of the total together with `f64::EPSILON`.
    pub fn abs_total(&self) -> f64 {
        self.abs_sum
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}
