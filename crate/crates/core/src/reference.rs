//! Naive reference implementations of the windowed kernels.
//!
//! Everything here recomputes each window from scratch in O(M·ζ²), with no
//! shared state and no running sums, so the fast O(M) paths can be checked
//! against an independent route. Tests and benchmark baselines use these;
//! production code must not.

use crate::grid::check_same_dims;
use crate::window::window_bounds;
use crate::{FilterParams, ImageGrid, Result};

/// Clipped-window mean by direct summation.
pub fn box_mean_naive(img: &ImageGrid, radius: usize) -> ImageGrid {
    ImageGrid::from_fn(img.width(), img.height(), |u, v| {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, img.width(), img.height());
        let mut sum = 0.0;
        for y in v0..=v1 {
            for x in u0..=u1 {
                sum += img.get(x, y);
            }
        }
        sum / count
    })
}

/// Clipped-window population variance via the two-pass formula.
pub fn local_variance_naive(img: &ImageGrid, radius: usize) -> ImageGrid {
    ImageGrid::from_fn(img.width(), img.height(), |u, v| {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, img.width(), img.height());
        let mut sum = 0.0;
        for y in v0..=v1 {
            for x in u0..=u1 {
                sum += img.get(x, y);
            }
        }
        let mean = sum / count;
        let mut acc = 0.0;
        for y in v0..=v1 {
            for x in u0..=u1 {
                let d = img.get(x, y) - mean;
                acc += d * d;
            }
        }
        acc / count
    })
}

/// Clipped-window covariance via the two-pass formula.
pub fn local_covariance_naive(a: &ImageGrid, b: &ImageGrid, radius: usize) -> ImageGrid {
    assert!(a.same_dims(b));
    ImageGrid::from_fn(a.width(), a.height(), |u, v| {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, a.width(), a.height());
        let (mut sa, mut sb) = (0.0, 0.0);
        for y in v0..=v1 {
            for x in u0..=u1 {
                sa += a.get(x, y);
                sb += b.get(x, y);
            }
        }
        let (ma, mb) = (sa / count, sb / count);
        let mut acc = 0.0;
        for y in v0..=v1 {
            for x in u0..=u1 {
                acc += (a.get(x, y) - ma) * (b.get(x, y) - mb);
            }
        }
        acc / count
    })
}

/// Per-window linear coefficients by minimizing the weighted quadratic cost
/// directly: solves the 2x2 normal equations of
/// `Σ [Γ·(a·G + b - Z)² + λ·a²]` over the window, with fresh sums per
/// window. The regularizer sits inside the per-pixel sum, so its total
/// contribution is `count·λ·a²`.
pub fn solve_coefficients_naive(
    z: &ImageGrid,
    g: &ImageGrid,
    gamma: &ImageGrid,
    lambda: f64,
    radius: usize,
) -> Result<(ImageGrid, ImageGrid)> {
    check_same_dims(z, g, "solve_coefficients_naive")?;
    let (width, height) = z.dims();
    let mut a_out = vec![0.0; width * height];
    let mut b_out = vec![0.0; width * height];
    for v in 0..height {
        for u in 0..width {
            let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, width, height);
            let w = gamma.get(u, v);
            let (mut sg, mut sz, mut sgg, mut sgz) = (0.0, 0.0, 0.0, 0.0);
            for y in v0..=v1 {
                for x in u0..=u1 {
                    let gv = g.get(x, y);
                    let zv = z.get(x, y);
                    sg += gv;
                    sz += zv;
                    sgg += gv * gv;
                    sgz += gv * zv;
                }
            }
            // Normal equations:
            //   (w·sgg + count·λ)·a + w·sg·b = w·sgz
            //   w·sg·a + w·count·b = w·sz
            let a11 = w * sgg + count * lambda;
            let a12 = w * sg;
            let a22 = w * count;
            let r1 = w * sgz;
            let r2 = w * sz;
            let det = a11 * a22 - a12 * a12;
            let (a, b) = if det.abs() < 1e-12 * count {
                (0.0, sz / count)
            } else {
                let a = (r1 * a22 - a12 * r2) / det;
                let b = (a11 * r2 - a12 * r1) / det;
                (a, b)
            };
            a_out[v * width + u] = a;
            b_out[v * width + u] = b;
        }
    }
    Ok((
        ImageGrid::new(width, height, a_out)?,
        ImageGrid::new(width, height, b_out)?,
    ))
}

/// Aggregation weights by direct per-window residual sums.
pub fn aggregation_weights_naive(
    a: &ImageGrid,
    b: &ImageGrid,
    z: &ImageGrid,
    g: &ImageGrid,
    params: &FilterParams,
) -> ImageGrid {
    let radius = params.zeta;
    ImageGrid::from_fn(z.width(), z.height(), |u, v| {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, z.width(), z.height());
        let (av, bv) = (a.get(u, v), b.get(u, v));
        let mut acc = 0.0;
        for y in v0..=v1 {
            for x in u0..=u1 {
                let r = av * g.get(x, y) + bv - z.get(x, y);
                acc += r * r;
            }
        }
        (-(acc / count) / params.eta).exp() + 0.001
    })
}

/// Weighted aggregation of coefficient fields by direct per-window sums.
pub fn aggregate_naive(field: &ImageGrid, weights: &ImageGrid, radius: usize) -> ImageGrid {
    ImageGrid::from_fn(field.width(), field.height(), |u, v| {
        let (u0, v0, u1, v1, _) = window_bounds(u, v, radius, field.width(), field.height());
        let (mut num, mut den) = (0.0, 0.0);
        for y in v0..=v1 {
            for x in u0..=u1 {
                let w = weights.get(x, y);
                num += w * field.get(x, y);
                den += w;
            }
        }
        num / den
    })
}

/// Edge-aware weighting by literal evaluation: per-pixel 3x3 variances and
/// an explicit double loop over the normalizing sum.
pub fn edge_aware_weight_naive(g: &ImageGrid, epsilon: f64) -> ImageGrid {
    let var = local_variance_naive(g, 1);
    let m = var.len() as f64;
    ImageGrid::from_fn(g.width(), g.height(), |u, v| {
        let num = var.get(u, v) + epsilon;
        let mut sum = 0.0;
        for &x in var.values() {
            sum += num / (x + epsilon);
        }
        sum / m
    })
}
