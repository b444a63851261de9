//! Dense 2D/3D scalar containers for images, focus volumes and depth maps.
//!
//! Grids are row-major with `(u = column, v = row)` indexing: the sample at
//! column `u` and row `v` lives at `values[v * width + u]`. Intensities use
//! double precision in a canonical `[0, 1]` range; depth grids carry frame
//! indices instead. Every type is immutable after construction and safe to
//! share across threads.

use crate::{Error, Result};

/// A 2D scalar field of finite doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ImageGrid {
    /// Builds a grid from row-major values, validating shape and finiteness.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyGrid { width, height });
        }
        let expected = width * height;
        if values.len() != expected {
            return Err(Error::ValueCountMismatch {
                width,
                height,
                expected,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Grid filled with a single value.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        assert!(value.is_finite());
        Self {
            width,
            height,
            values: vec![value; width * height],
        }
    }

    /// Builds a grid by evaluating `f(u, v)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        let mut values = Vec::with_capacity(width * height);
        for v in 0..height {
            for u in 0..width {
                values.push(f(u, v));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Total pixel count.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.values[v * self.width + u]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.values[v * self.width..(v + 1) * self.width]
    }

    pub fn same_dims(&self, other: &ImageGrid) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise map onto a new grid.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ImageGrid {
        ImageGrid {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two same-sized grids.
    pub fn zip_map(
        &self,
        other: &ImageGrid,
        context: &str,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<ImageGrid> {
        check_same_dims(self, other, context)?;
        Ok(ImageGrid {
            width: self.width,
            height: self.height,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

/// Returns a dimension-mismatch error when the two grids disagree in shape.
pub(crate) fn check_same_dims(a: &ImageGrid, b: &ImageGrid, context: &str) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected_width: a.width,
            expected_height: a.height,
            width: b.width,
            height: b.height,
        });
    }
    Ok(())
}

/// An ordered multi-focus sequence of co-registered grids.
#[derive(Debug, Clone)]
pub struct ImageStack {
    frames: Vec<ImageGrid>,
}

impl ImageStack {
    /// Validates that there are at least two frames of identical size.
    pub fn new(frames: Vec<ImageGrid>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::StackTooSmall { got: frames.len() });
        }
        for (k, frame) in frames.iter().enumerate().skip(1) {
            check_same_dims(&frames[0], frame, &format!("frame {}", k + 1))?;
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[ImageGrid] {
        &self.frames
    }

    /// Number of frames K.
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].dims()
    }
}

/// Per-pixel focus scores for every frame of a stack.
///
/// Same shape contract as [`ImageStack`], but values are non-negative
/// sharpness scores rather than intensities.
#[derive(Debug, Clone)]
pub struct FocusVolume {
    slices: Vec<ImageGrid>,
}

impl FocusVolume {
    pub fn new(slices: Vec<ImageGrid>) -> Result<Self> {
        if slices.len() < 2 {
            return Err(Error::StackTooSmall { got: slices.len() });
        }
        for (k, slice) in slices.iter().enumerate().skip(1) {
            check_same_dims(&slices[0], slice, &format!("focus slice {}", k + 1))?;
        }
        for slice in &slices {
            if let Some(index) = slice.values().iter().position(|&v| v < 0.0) {
                return Err(Error::NegativeFocus {
                    value: slice.values()[index],
                    index,
                });
            }
        }
        Ok(Self { slices })
    }

    pub fn slices(&self) -> &[ImageGrid] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> (usize, usize) {
        self.slices[0].dims()
    }
}

/// A depth map whose values are frame indices in `[0, K-1]`.
///
/// Initial maps from the argmax pipeline are integer-valued; enhanced maps
/// are real-valued but still expressed in frame-index units.
#[derive(Debug, Clone)]
pub struct DepthMap {
    grid: ImageGrid,
    num_frames: usize,
}

impl DepthMap {
    /// Wraps a grid of frame indices, validating the `[0, K-1]` range.
    pub fn new(grid: ImageGrid, num_frames: usize) -> Result<Self> {
        let max = (num_frames - 1) as f64;
        for &v in grid.values() {
            if !(0.0..=max).contains(&v) {
                return Err(Error::DepthOutOfRange { value: v, max });
            }
        }
        Ok(Self { grid, num_frames })
    }

    pub fn grid(&self) -> &ImageGrid {
        &self.grid
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    /// Depth rescaled to `[0, 1]` by dividing by K-1.
    pub fn normalized(&self) -> ImageGrid {
        let scale = 1.0 / (self.num_frames - 1) as f64;
        self.grid.map(|v| v * scale)
    }
}
