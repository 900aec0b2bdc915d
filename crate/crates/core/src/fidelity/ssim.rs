//! Structural similarity between two grayscale images in `[0, 1]`.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

pub const WINDOW: usize = 7;
pub const DYNAMIC_RANGE: f64 = 1.0;
pub const C1: f64 = (0.01 * DYNAMIC_RANGE) * (0.01 * DYNAMIC_RANGE);
pub const C2: f64 = (0.03 * DYNAMIC_RANGE) * (0.03 * DYNAMIC_RANGE);

fn window_ssim(a: ArrayView2<f64>, b: ArrayView2<f64>) -> f64 {
    let n = (WINDOW * WINDOW) as f64;
    let mean_a = a.sum() / n;
    let mean_b = b.sum() / n;
    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b.iter()) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    // sample (N - 1) normalisation
    let (var_a, var_b, cov) = (var_a / (n - 1.0), var_b / (n - 1.0), cov / (n - 1.0));
    ((2.0 * mean_a * mean_b + C1) * (2.0 * cov + C2))
        / ((mean_a * mean_a + mean_b * mean_b + C1) * (var_a + var_b + C2))
}

/// Mean SSIM over every 7x7 window (uniform weights, stride 1).
pub fn ssim(a: &Array2<f64>, b: &Array2<f64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidArgument(format!(
            "image shapes differ: {:?} vs {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let (h, w) = a.dim();
    if h < WINDOW || w < WINDOW {
        return Err(Error::InvalidArgument(format!(
            "image {h}x{w} is smaller than the {WINDOW}x{WINDOW} window"
        )));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..=h - WINDOW {
        for j in 0..=w - WINDOW {
            let sa = a.slice(ndarray::s![i..i + WINDOW, j..j + WINDOW]);
            let sb = b.slice(ndarray::s![i..i + WINDOW, j..j + WINDOW]);
            total += window_ssim(sa, sb);
            count += 1;
        }
    }
    Ok(total / count as f64)
}
