//! Composite Simpson quadrature on uniform grids.

use std::ops::{Add, Mul};

/// Integral of samples `y` on a uniform grid of spacing `h`.
///
/// Even interval counts use composite Simpson; odd counts close the last
/// three intervals with Simpson's 3/8 rule. Two samples fall back to the
/// trapezoid rule.
pub fn simpson<T>(y: &[T], h: f64) -> T
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = y.len();
    match n {
        0 | 1 => T::default(),
        2 => (y[0] + y[1]) * (0.5 * h),
        3 => simpson_even(y, h),
        _ if (n - 1) % 2 == 0 => simpson_even(y, h),
        _ => {
            let m = n - 3;
            let head = if m >= 3 { simpson_even(&y[..m], h) } else { T::default() };
            let tail = (y[m - 1] + y[m] * 3.0 + y[m + 1] * 3.0 + y[m + 2]) * (3.0 * h / 8.0);
            head + tail
        }
    }
}

fn simpson_even<T>(y: &[T], h: f64) -> T
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = y.len();
    let mut odd = T::default();
    let mut even = T::default();
    for (k, &v) in y.iter().enumerate().take(n - 1).skip(1) {
        if k % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    (y[0] + y[n - 1] + odd * 4.0 + even * 2.0) * (h / 3.0)
}

/// Simpson integral of `f` over `[a, b]` using `points` nodes (rounded up to odd).
pub fn simpson_fn<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, points: usize) -> f64 {
    let points = points.max(3) | 1;
    let h = (b - a) / (points - 1) as f64;
    let ys: Vec<f64> = (0..points).map(|k| f(a + k as f64 * h)).collect();
    simpson(&ys, h)
}
