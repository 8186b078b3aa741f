//! Compensated summation helpers shared by the memory and statistics modules.

/// Neumaier-compensated sum. Returns the rounded sum and the accumulated
/// compensation separately so callers can carry the correction through a
/// subsequent division.
pub(crate) fn compensated_sum(values: &[f64]) -> (f64, f64) {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    (sum, comp)
}

/// Arithmetic mean with the compensation term divided through before the final
/// rounding. A slice of identical values returns that value exactly.
pub(crate) fn compensated_mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let (sum, comp) = compensated_sum(values);
    let n = values.len() as f64;
    sum / n + comp / n
}
