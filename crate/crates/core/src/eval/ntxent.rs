//! Normalized temperature-scaled cross-entropy over a batch of positive pairs.

use ndarray::{concatenate, Array2, Axis};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

pub const DEFAULT_TEMPERATURE: f64 = 0.5;

/// Rows `i` of `first` and `second` form the positive pairs. With the `2N`
/// rows stacked, the loss of row `i` with partner `j` is
/// `-log(exp(s_ij / tau) / sum_{k != i} exp(s_ik / tau))` for cosine `s`;
/// the result is the mean over all `2N` rows.
pub fn nt_xent(first: &Array2<f64>, second: &Array2<f64>, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.nrows(),
            found: second.nrows(),
        });
    }
    let n = first.nrows();
    if n == 0 {
        return Err(Error::InvalidArgument("NT-XENT needs at least one pair".into()));
    }
    let mut z = concatenate(Axis(0), &[first.view(), second.view()]).expect("equal widths");
    for (i, mut row) in z.axis_iter_mut(Axis(0)).enumerate() {
        let len = norm(row.view());
        if len == 0.0 {
            return Err(Error::ZeroVector(i));
        }
        row.mapv_inplace(|x| x / len);
    }

    let rows = 2 * n;
    let mut total = 0.0;
    for i in 0..rows {
        let logits: Vec<(usize, f64)> = (0..rows)
            .filter(|&k| k != i)
            .map(|k| (k, dot(z.row(i), z.row(k)) / temperature))
            .collect();
        let partner = (i + n) % rows;
        let positive = logits.iter().find(|(k, _)| *k == partner).expect("partner present").1;
        let max = logits.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
        let lse = max + logits.iter().map(|x| (x.1 - max).exp()).sum::<f64>().ln();
        total += lse - positive;
    }
    Ok(total / rows as f64)
}
