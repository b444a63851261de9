//! Synthetic multi-focus benchmark scenes: parametric depth surfaces, a
//! defocus forward model, and calibrated Gaussian noise.
//!
//! A scene is a textured surface imaged by a focal sweep: frame `k` shows
//! every pixel blurred by a Gaussian whose radius grows with the pixel's
//! focal distance `|k - Z_g(p)|`. The texture carries a depth-linked
//! shading term so that the stack's mean image (the guidance used by the
//! refinement stage) reflects the scene structure, as textured objects do.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::{DepthMap, Error, ImageGrid, ImageStack, Result};

/// Name of the seedable generator backing all synthetic randomness,
/// recorded in output metadata so runs are reproducible per binary.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Peak-to-mean amplitude of the granular texture component.
const TEXTURE_CONTRAST: f64 = 0.3;

/// Gain of the depth-linked shading component of the texture.
const DEPTH_SHADING: f64 = 0.2;

/// Blur radii below this are rendered sharp.
const MIN_BLUR_SIGMA: f64 = 0.3;

/// Parametric depth-surface families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceShape {
    Cone,
    CosWave,
    SineWave,
    Flat,
    Step,
}

impl SurfaceShape {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceShape::Cone => "cone",
            SurfaceShape::CosWave => "coswave",
            SurfaceShape::SineWave => "sinewave",
            SurfaceShape::Flat => "flat",
            SurfaceShape::Step => "step",
        }
    }
}

impl FromStr for SurfaceShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cone" => Ok(SurfaceShape::Cone),
            "coswave" => Ok(SurfaceShape::CosWave),
            "sinewave" => Ok(SurfaceShape::SineWave),
            "flat" => Ok(SurfaceShape::Flat),
            "step" => Ok(SurfaceShape::Step),
            other => Err(Error::UnknownName {
                kind: "shape",
                name: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for SurfaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Full description of a synthetic scene; equal specs render bit-identical
/// stacks.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub shape: SurfaceShape,
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub texture_seed: u64,
    /// Blur-radius growth in pixels per frame of defocus.
    pub blur_gain: f64,
    /// Gaussian noise variance in squared-intensity units; 0 means clean.
    pub noise_variance: f64,
}

impl SceneSpec {
    pub fn new(
        shape: SurfaceShape,
        width: usize,
        height: usize,
        frames: usize,
        texture_seed: u64,
        blur_gain: f64,
        noise_variance: f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyGrid { width, height });
        }
        if frames < 2 {
            return Err(Error::StackTooSmall { got: frames });
        }
        if !(blur_gain >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "blur gain must be non-negative, got {blur_gain}"
            )));
        }
        if !(noise_variance >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be non-negative, got {noise_variance}"
            )));
        }
        Ok(Self {
            shape,
            width,
            height,
            frames,
            texture_seed,
            blur_gain,
            noise_variance,
        })
    }

    /// Serializes the spec as `key=value` lines.
    pub fn to_config_string(&self) -> String {
        format!(
            "shape={}\nwidth={}\nheight={}\nframes={}\nseed={}\nblur_gain={}\nnoise_var={}\nrng={}\n",
            self.shape,
            self.width,
            self.height,
            self.frames,
            self.texture_seed,
            self.blur_gain,
            self.noise_variance,
            RNG_ALGORITHM,
        )
    }

    /// Parses `key=value` lines produced by [`SceneSpec::to_config_string`];
    /// `#` comments and blank lines are skipped.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut shape = None;
        let (mut width, mut height, mut frames) = (None, None, None);
        let mut seed = 0u64;
        let (mut blur_gain, mut noise_var) = (0.0, 0.0);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("expected key=value, got '{line}'"))
            })?;
            let bad =
                |k: &str| Error::InvalidParameter(format!("bad value for {k}: '{value}'"));
            match key.trim() {
                "shape" => shape = Some(value.trim().parse::<SurfaceShape>()?),
                "width" => width = Some(value.trim().parse().map_err(|_| bad("width"))?),
                "height" => height = Some(value.trim().parse().map_err(|_| bad("height"))?),
                "frames" => frames = Some(value.trim().parse().map_err(|_| bad("frames"))?),
                "seed" => seed = value.trim().parse().map_err(|_| bad("seed"))?,
                "blur_gain" => blur_gain = value.trim().parse().map_err(|_| bad("blur_gain"))?,
                "noise_var" => noise_var = value.trim().parse().map_err(|_| bad("noise_var"))?,
                "rng" => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown scene key '{other}'"
                    )))
                }
            }
        }
        let missing = |k: &str| Error::InvalidParameter(format!("missing scene key '{k}'"));
        SceneSpec::new(
            shape.ok_or_else(|| missing("shape"))?,
            width.ok_or_else(|| missing("width"))?,
            height.ok_or_else(|| missing("height"))?,
            frames.ok_or_else(|| missing("frames"))?,
            seed,
            blur_gain,
            noise_var,
        )
    }
}

/// Ground-truth depth for a synthetic scene, in frame-index units.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub depth: DepthMap,
}

/// Evaluates the parametric depth surface of the spec.
///
/// The cone peaks at the image center and falls off linearly with radial
/// distance, clamped at zero beyond `r_max = min(U, V)/2`; the wave shapes
/// oscillate over two full periods across the image.
pub fn make_depth_surface(spec: &SceneSpec) -> GroundTruth {
    let k1 = (spec.frames - 1) as f64;
    let (w, h) = (spec.width as f64, spec.height as f64);
    let grid = match spec.shape {
        SurfaceShape::Cone => {
            let cx = (w - 1.0) / 2.0;
            let cy = (h - 1.0) / 2.0;
            let r_max = w.min(h) / 2.0;
            ImageGrid::from_fn(spec.width, spec.height, |u, v| {
                let r = (u as f64 - cx).hypot(v as f64 - cy);
                k1 * (1.0 - r / r_max).max(0.0)
            })
        }
        SurfaceShape::CosWave => ImageGrid::from_fn(spec.width, spec.height, |u, _| {
            k1 * (1.0 + (4.0 * std::f64::consts::PI * u as f64 / w).cos()) / 2.0
        }),
        SurfaceShape::SineWave => ImageGrid::from_fn(spec.width, spec.height, |_, v| {
            k1 * (1.0 + (4.0 * std::f64::consts::PI * v as f64 / h).sin()) / 2.0
        }),
        SurfaceShape::Flat => ImageGrid::filled(spec.width, spec.height, k1 / 2.0),
        SurfaceShape::Step => ImageGrid::from_fn(spec.width, spec.height, |u, _| {
            if u < spec.width / 2 {
                0.25 * k1
            } else {
                0.75 * k1
            }
        }),
    };
    GroundTruth {
        depth: DepthMap::new(grid, spec.frames).expect("surfaces stay inside [0, K-1]"),
    }
}

/// Granular base texture with a depth-linked shading component.
fn generate_texture(spec: &SceneSpec, truth: &GroundTruth) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.texture_seed);
    rng.set_stream(0);
    let shading_scale = DEPTH_SHADING / (spec.frames - 1) as f64;
    let depth = truth.depth.grid();
    ImageGrid::from_fn(spec.width, spec.height, |u, v| {
        let grain = TEXTURE_CONTRAST * (2.0 * rng.gen::<f64>() - 1.0);
        let shading = shading_scale * depth.get(u, v) - DEPTH_SHADING / 2.0;
        0.5 + grain + shading
    })
}

/// One defocused frame: every pixel is the texture blurred by a normalized
/// Gaussian of `σ = κ·|k - Z_g(p)|`, truncated at 3σ and renormalized over
/// the clipped support.
fn render_frame(texture: &ImageGrid, depth: &ImageGrid, blur_gain: f64, k: usize) -> Vec<f64> {
    let (width, height) = texture.dims();
    let mut out = vec![0.0; width * height];
    let mut kernel = Vec::new();
    for v in 0..height {
        for u in 0..width {
            let sigma = blur_gain * (k as f64 - depth.get(u, v)).abs();
            out[v * width + u] = if sigma < MIN_BLUR_SIGMA {
                texture.get(u, v)
            } else {
                let radius = (3.0 * sigma).ceil() as usize;
                kernel.clear();
                let inv = 1.0 / (2.0 * sigma * sigma);
                for i in 0..=2 * radius {
                    let d = i as f64 - radius as f64;
                    kernel.push((-d * d * inv).exp());
                }
                let u0 = u.saturating_sub(radius);
                let v0 = v.saturating_sub(radius);
                let u1 = (u + radius).min(width - 1);
                let v1 = (v + radius).min(height - 1);
                let sx: f64 = (u0..=u1).map(|x| kernel[x + radius - u]).sum();
                let sy: f64 = (v0..=v1).map(|y| kernel[y + radius - v]).sum();
                let mut acc = 0.0;
                for y in v0..=v1 {
                    let row = texture.row(y);
                    let mut row_acc = 0.0;
                    for (x, &t) in row[u0..=u1].iter().enumerate() {
                        row_acc += kernel[u0 + x + radius - u] * t;
                    }
                    acc += kernel[y + radius - v] * row_acc;
                }
                acc / (sx * sy)
            };
        }
    }
    out
}

/// Renders the multi-focus stack for a ground-truth surface.
///
/// Frames render in parallel; the noise stream of frame `k` is derived
/// deterministically from the seed, so the result is bit-identical for any
/// thread count.
pub fn render_stack(truth: &GroundTruth, spec: &SceneSpec) -> ImageStack {
    let texture = generate_texture(spec, truth);
    let depth = truth.depth.grid();
    let frames: Vec<ImageGrid> = (0..spec.frames)
        .into_par_iter()
        .map(|k| {
            let mut values = render_frame(&texture, depth, spec.blur_gain, k);
            if spec.noise_variance > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.texture_seed);
                rng.set_stream(k as u64 + 1);
                let normal = Normal::new(0.0, spec.noise_variance.sqrt())
                    .expect("variance validated at construction");
                for v in values.iter_mut() {
                    *v = (*v + normal.sample(&mut rng)).clamp(0.0, 1.0);
                }
            }
            ImageGrid::new(spec.width, spec.height, values)
                .expect("rendered frames are finite by construction")
        })
        .collect();
    ImageStack::new(frames).expect("spec guarantees at least two frames")
}
