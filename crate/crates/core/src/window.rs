//! O(M) sliding-window statistics over clipped square windows.
//!
//! Every statistic shares one window convention: `Ω_ζ(p)` is the
//! `(2ζ+1)×(2ζ+1)` square centered at `p`, intersected with the image
//! bounds, and averages divide by the actual clipped pixel count. Sums are
//! taken over deviations from a per-field reference (the field minimum)
//! through a summed-area table, so the cost is independent of the radius
//! and constant regions stay exact at the borders.

use crate::grid::check_same_dims;
use crate::{Error, ImageGrid, Result};

/// Radius of the square window `Ω_ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    radius: usize,
}

impl WindowSpec {
    pub fn new(radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidParameter(
                "window radius must be at least 1".to_string(),
            ));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Full window side length `2ζ+1`.
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }
}

/// Summed-area table over per-pixel terms, one row and column larger than
/// the source so that any clipped rectangle sum needs four lookups.
#[derive(Debug, Clone)]
pub(crate) struct Sat {
    width: usize,
    data: Vec<f64>,
}

impl Sat {
    /// Builds the table from `f(index)` evaluated over row-major pixels.
    pub(crate) fn build(width: usize, height: usize, f: impl Fn(usize) -> f64) -> Self {
        let stride = width + 1;
        let mut data = vec![0.0; stride * (height + 1)];
        for v in 0..height {
            let mut row_sum = 0.0;
            let base = v * width;
            for u in 0..width {
                row_sum += f(base + u);
                data[(v + 1) * stride + (u + 1)] = data[v * stride + (u + 1)] + row_sum;
            }
        }
        Self { width, data }
    }

    /// Sum over the inclusive pixel rectangle `[u0, u1] × [v0, v1]`.
    #[inline]
    pub(crate) fn rect_sum(&self, u0: usize, v0: usize, u1: usize, v1: usize) -> f64 {
        let s = self.width + 1;
        self.data[(v1 + 1) * s + (u1 + 1)] + self.data[v0 * s + u0]
            - self.data[v0 * s + (u1 + 1)]
            - self.data[(v1 + 1) * s + u0]
    }
}

/// Clips the window at `(u, v)` against the image bounds.
#[inline]
pub(crate) fn window_bounds(
    u: usize,
    v: usize,
    radius: usize,
    width: usize,
    height: usize,
) -> (usize, usize, usize, usize, f64) {
    let u0 = u.saturating_sub(radius);
    let v0 = v.saturating_sub(radius);
    let u1 = (u + radius).min(width - 1);
    let v1 = (v + radius).min(height - 1);
    let count = ((u1 - u0 + 1) * (v1 - v0 + 1)) as f64;
    (u0, v0, u1, v1, count)
}

/// First and second windowed moments of one field, stored as deviations
/// from the field minimum. Radius-independent: one set of tables serves
/// every window size.
pub(crate) struct FieldMoments {
    width: usize,
    height: usize,
    pub(crate) reference: f64,
    dev: Sat,
    dev_sq: Sat,
}

impl FieldMoments {
    pub(crate) fn new(img: &ImageGrid) -> Self {
        let reference = img.min_value();
        let values = img.values();
        let dev = Sat::build(img.width(), img.height(), |i| values[i] - reference);
        let dev_sq = Sat::build(img.width(), img.height(), |i| {
            let d = values[i] - reference;
            d * d
        });
        Self {
            width: img.width(),
            height: img.height(),
            reference,
            dev,
            dev_sq,
        }
    }

    /// Mean of the deviations over the clipped window.
    #[inline]
    pub(crate) fn dev_mean(&self, u: usize, v: usize, radius: usize) -> f64 {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, self.width, self.height);
        self.dev.rect_sum(u0, v0, u1, v1) / count
    }

    /// Windowed mean of the field itself.
    #[inline]
    pub(crate) fn mean(&self, u: usize, v: usize, radius: usize) -> f64 {
        self.reference + self.dev_mean(u, v, radius)
    }

    /// Mean of squared deviations (uncentered second moment of deviations).
    #[inline]
    pub(crate) fn dev_sq_mean(&self, u: usize, v: usize, radius: usize) -> f64 {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, self.width, self.height);
        self.dev_sq.rect_sum(u0, v0, u1, v1) / count
    }

    /// Population variance over the clipped window, clamped at zero to
    /// absorb running-sum round-off.
    #[inline]
    pub(crate) fn variance(&self, u: usize, v: usize, radius: usize) -> f64 {
        let m = self.dev_mean(u, v, radius);
        (self.dev_sq_mean(u, v, radius) - m * m).max(0.0)
    }
}

/// Cross moments of a field pair, for windowed covariances.
pub(crate) struct PairMoments {
    width: usize,
    height: usize,
    product: Sat,
}

impl PairMoments {
    pub(crate) fn new(a: &ImageGrid, ra: f64, b: &ImageGrid, rb: f64) -> Self {
        let av = a.values();
        let bv = b.values();
        let product = Sat::build(a.width(), a.height(), |i| (av[i] - ra) * (bv[i] - rb));
        Self {
            width: a.width(),
            height: a.height(),
            product,
        }
    }

    #[inline]
    pub(crate) fn product_mean(&self, u: usize, v: usize, radius: usize) -> f64 {
        let (u0, v0, u1, v1, count) = window_bounds(u, v, radius, self.width, self.height);
        self.product.rect_sum(u0, v0, u1, v1) / count
    }
}

/// Windowed mean `μ_ζ` with clipped windows and true-count normalization.
pub fn box_mean(img: &ImageGrid, w: WindowSpec) -> ImageGrid {
    let moments = FieldMoments::new(img);
    let radius = w.radius();
    ImageGrid::from_fn(img.width(), img.height(), |u, v| moments.mean(u, v, radius))
}

/// Windowed population variance `σ²_ζ`, non-negative by construction.
pub fn local_variance(img: &ImageGrid, w: WindowSpec) -> ImageGrid {
    let moments = FieldMoments::new(img);
    let radius = w.radius();
    ImageGrid::from_fn(img.width(), img.height(), |u, v| {
        moments.variance(u, v, radius)
    })
}

/// Windowed covariance `cov_ζ(a, b) = μ(a⊙b) - μ(a)μ(b)`, evaluated on
/// deviations so that a constant argument yields exact zeros.
pub fn local_covariance(a: &ImageGrid, b: &ImageGrid, w: WindowSpec) -> Result<ImageGrid> {
    check_same_dims(a, b, "local_covariance")?;
    let ra = a.min_value();
    let rb = b.min_value();
    let ma = FieldMoments::new(a);
    let mb = FieldMoments::new(b);
    let pair = PairMoments::new(a, ra, b, rb);
    let radius = w.radius();
    Ok(ImageGrid::from_fn(a.width(), a.height(), |u, v| {
        pair.product_mean(u, v, radius) - ma.dev_mean(u, v, radius) * mb.dev_mean(u, v, radius)
    }))
}
