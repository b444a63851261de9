//! Shared helpers for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ImageGrid;

/// Default absolute tolerance for oracle comparisons.
pub const ABS_TOL: f64 = 1e-12;

/// Uniform random grid in [0, 1), reproducible from the seed.
pub fn deterministic_grid(width: usize, height: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ImageGrid::from_fn(width, height, |_, _| rng.gen::<f64>())
}

/// A 0/1 vertical step edge at `width/2` with additive Gaussian noise,
/// returned together with the clean step.
pub fn noisy_step(width: usize, height: usize, sigma: f64, seed: u64) -> (ImageGrid, ImageGrid) {
    let clean = ImageGrid::from_fn(width, height, |u, _| if u < width / 2 { 0.0 } else { 1.0 });
    let normal = Normal::new(0.0, sigma).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = clean.map(|v| (v + normal.sample(&mut rng)).clamp(0.0, 1.0));
    (noisy, clean)
}

/// Largest absolute pointwise difference between two same-sized grids.
pub fn max_abs_diff(a: &ImageGrid, b: &ImageGrid) -> f64 {
    assert!(a.same_dims(b));
    a.values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| (x - y).abs())
        .fold(0.0, f64::max)
}
