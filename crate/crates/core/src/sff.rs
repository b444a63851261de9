//! Shape-from-focus front end: focus measurement, volume aggregation,
//! argmax depth, guidance construction, and the full enhancement pipeline.

use rayon::prelude::*;

use crate::filter::{FilterKind, FilterParams};
use crate::window::{box_mean, local_variance, WindowSpec};
use crate::{DepthMap, FocusVolume, ImageGrid, ImageStack, Result};

/// Parameters of the shape-from-focus pipeline.
#[derive(Debug, Clone)]
pub struct SffParams {
    /// Radius of the gray-level-variance focus window (default 2, a 5x5
    /// window matching the aggregation scale).
    pub fm_radius: usize,
    /// Radius of the focus-volume aggregation window (default 2; 0 disables
    /// aggregation).
    pub agg_radius: usize,
    /// Guided-filter parameters for the refinement stage.
    pub filter: FilterParams,
    /// Which filter backs the refinement (default the adaptive one).
    pub filter_kind: FilterKind,
    /// Adaptive detail gain β of the final recombination (default 1.0).
    pub beta: f64,
}

impl SffParams {
    pub fn new(filter: FilterParams) -> Self {
        Self {
            fm_radius: 2,
            agg_radius: 2,
            filter,
            filter_kind: FilterKind::Awgif,
            beta: 1.0,
        }
    }
}

/// Gray-level-variance focus measure: the local variance of the frame over
/// the `(2r+1)²` clipped window.
pub fn glv_focus(frame: &ImageGrid, fm_radius: usize) -> ImageGrid {
    let w = WindowSpec::new(fm_radius).expect("focus radius must be at least 1");
    local_variance(frame, w)
}

/// Per-frame focus scores for the whole stack.
pub fn build_focus_volume(stack: &ImageStack, params: &SffParams) -> FocusVolume {
    let slices: Vec<ImageGrid> = stack
        .frames()
        .par_iter()
        .map(|frame| glv_focus(frame, params.fm_radius))
        .collect();
    FocusVolume::new(slices).expect("focus slices inherit the stack shape")
}

/// Box-filters every slice of the focus volume to damp noisy focus scores.
/// A radius of 0 returns the volume unchanged.
pub fn aggregate_volume(vol: &FocusVolume, agg_radius: usize) -> FocusVolume {
    if agg_radius == 0 {
        return vol.clone();
    }
    let w = WindowSpec::new(agg_radius).expect("radius checked above");
    let slices: Vec<ImageGrid> = vol
        .slices()
        .par_iter()
        .map(|slice| box_mean(slice, w))
        .collect();
    FocusVolume::new(slices).expect("box means of non-negative slices stay non-negative")
}

/// Initial depth: the per-pixel index of the maximum focus score along the
/// stack, with ties broken toward the smallest index.
pub fn initial_depth(vol: &FocusVolume) -> DepthMap {
    let (width, height) = vol.dims();
    let k = vol.len();
    let mut best_score = vol.slices()[0].values().to_vec();
    let mut best_index = vec![0usize; width * height];
    for (slice_index, slice) in vol.slices().iter().enumerate().skip(1) {
        for (i, &score) in slice.values().iter().enumerate() {
            if score > best_score[i] {
                best_score[i] = score;
                best_index[i] = slice_index;
            }
        }
    }
    let grid = ImageGrid::from_fn(width, height, |u, v| best_index[v * width + u] as f64);
    DepthMap::new(grid, k).expect("argmax indices lie in [0, K-1]")
}

/// Guidance image: the per-pixel mean intensity along the stack.
pub fn guidance_image(stack: &ImageStack) -> ImageGrid {
    let (width, height) = stack.dims();
    let k = stack.len() as f64;
    let first = &stack.frames()[0];
    ImageGrid::from_fn(width, height, |u, v| {
        let r = first.get(u, v);
        let mut acc = 0.0;
        for frame in stack.frames() {
            acc += frame.get(u, v) - r;
        }
        r + acc / k
    })
}

/// Output of the full depth-enhancement pipeline.
#[derive(Debug, Clone)]
pub struct DepthEnhancement {
    /// Argmax depth map, integer frame indices.
    pub initial: DepthMap,
    /// Refined depth in frame-index units (real-valued, unclamped).
    pub final_depth: ImageGrid,
    /// The guidance image used for filtering.
    pub guidance: ImageGrid,
}

/// Runs the whole pipeline: focus volume, argmax depth, guided
/// decomposition of the normalized depth, and recombination with the
/// adaptive gain `β·ā`, rescaled back to frame-index units.
pub fn enhance_depth(stack: &ImageStack, params: &SffParams) -> Result<DepthEnhancement> {
    let volume = aggregate_volume(&build_focus_volume(stack, params), params.agg_radius);
    let initial = initial_depth(&volume);
    let guidance = guidance_image(stack);

    let normalized = initial.normalized();
    let out = params
        .filter_kind
        .apply(&normalized, &guidance, &params.filter)?;
    let scale = (stack.len() - 1) as f64;
    let beta = params.beta;
    let final_depth = ImageGrid::from_fn(stack.dims().0, stack.dims().1, |u, v| {
        let base = out.base.get(u, v);
        let detail = normalized.get(u, v) - base;
        (base + beta * out.a_bar.get(u, v) * detail) * scale
    });

    Ok(DepthEnhancement {
        initial,
        final_depth,
        guidance,
    })
}
