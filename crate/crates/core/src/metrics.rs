//! Depth-map quality metrics: RMSE against ground truth, Pearson
//! correlation, and RMSD against the initial estimate.

use crate::grid::check_same_dims;
use crate::{Error, ImageGrid, Result};

/// Root mean square error between two same-sized grids.
pub fn rmse(a: &ImageGrid, b: &ImageGrid) -> Result<f64> {
    check_same_dims(a, b, "rmse")?;
    let mut acc = 0.0;
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let d = x - y;
        acc += d * d;
    }
    Ok((acc / a.len() as f64).sqrt())
}

/// Pearson correlation coefficient, clamped to `[-1, 1]`.
///
/// Errors on constant input, where the denominator vanishes.
pub fn corr(a: &ImageGrid, b: &ImageGrid) -> Result<f64> {
    check_same_dims(a, b, "corr")?;
    let n = a.len() as f64;
    let mean_a = a.values().iter().sum::<f64>() / n;
    let mean_b = b.values().iter().sum::<f64>() / n;
    let (mut num, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let da = x - mean_a;
        let db = y - mean_b;
        num += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((num / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Root mean square difference between an improved depth map and the
/// initial one; identical arithmetic to [`rmse`] with the initial map as
/// the reference.
pub fn rmsd(improved: &ImageGrid, initial: &ImageGrid) -> Result<f64> {
    rmse(improved, initial)
}
