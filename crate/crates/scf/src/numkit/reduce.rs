//! Stable scalar reductions.

use crate::error::{Error, Result};

/// `log(sum(exp(v)))` computed against the running maximum, so it stays
/// finite whenever the inputs are finite.
pub fn log_sum_exp(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyReduction);
    }
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = v.iter().map(|&x| (x - max).exp()).sum();
    Ok(max + sum.ln())
}
