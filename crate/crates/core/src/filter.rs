//! Guided image filtering: an adaptive weighted filter plus the classic
//! guided filter and its edge-aware weighted variant as baselines.
//!
//! All three share the local linear model `Z ≈ a·G + b` fitted per window.
//! The adaptive filter differs from the baselines in three places: the
//! fidelity term is scaled by an edge-aware weight Γ, the regularizer λ is
//! derived from the guidance image instead of being fixed, and the per-window
//! coefficients are aggregated with residual-driven weights rather than a
//! plain box average.

use std::str::FromStr;

use crate::grid::check_same_dims;
use crate::window::{box_mean, local_variance, window_bounds, FieldMoments, PairMoments, Sat};
use crate::{Error, ImageGrid, Result, WindowSpec};

/// Edge-aware constant ε converted to the canonical `[0, 1]` intensity
/// scale (the usual quote of 1 is in 8-bit squared-intensity units).
pub const DEFAULT_EPSILON: f64 = 1.0 / (255.0 * 255.0);

/// Aggregation constant η = 1/200², already matched to `[0, 1]` residuals.
pub const DEFAULT_ETA: f64 = 1.0 / (200.0 * 200.0);

/// Below this, `Γσ² + λ` is treated as a degenerate flat window.
const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// Parameters shared by every filter in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    /// Window radius ζ.
    pub zeta: usize,
    /// Regularization base λ0.
    pub lambda0: f64,
    /// Edge-aware constant ε, in squared-intensity units.
    pub epsilon: f64,
    /// Aggregation constant η, in squared-intensity units.
    pub eta: f64,
}

impl FilterParams {
    pub fn new(zeta: usize, lambda0: f64) -> Result<Self> {
        if zeta == 0 {
            return Err(Error::InvalidParameter(
                "window radius zeta must be at least 1".to_string(),
            ));
        }
        if !(lambda0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda0 must be positive, got {lambda0}"
            )));
        }
        Ok(Self {
            zeta,
            lambda0,
            epsilon: DEFAULT_EPSILON,
            eta: DEFAULT_ETA,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must be positive, got {eta}"
            )));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn window(&self) -> WindowSpec {
        WindowSpec::new(self.zeta).expect("zeta validated at construction")
    }
}

/// Per-window slope and offset fields of the local linear model.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    pub a: ImageGrid,
    pub b: ImageGrid,
}

/// Filter result: the base layer and the aggregated slope that steers
/// detail amplification downstream.
#[derive(Debug, Clone)]
pub struct FilterOutput {
    pub base: ImageGrid,
    pub a_bar: ImageGrid,
}

/// Edge-aware weighting Γ: the 3x3 local variance at each pixel, measured
/// against the harmonic mean of the variances over the whole image.
///
/// The global sum is hoisted so the whole field costs O(M).
pub fn edge_aware_weight(g: &ImageGrid, epsilon: f64) -> ImageGrid {
    let var1 = local_variance(g, WindowSpec::new(1).expect("radius 1 is valid"));
    let m = var1.len() as f64;
    let inv_sum: f64 = var1.values().iter().map(|&s| 1.0 / (s + epsilon)).sum();
    let factor = inv_sum / m;
    var1.map(|s| (s + epsilon) * factor)
}

/// λ derived from a mean windowed variance: `λ0 · sqrt(mean σ²)`.
pub fn lambda_from_mean_variance(lambda0: f64, mean_variance: f64) -> f64 {
    lambda0 * mean_variance.sqrt()
}

/// Image-adaptive regularization: `λ0 · sqrt(mean of σ²_ζ over all pixels)`.
///
/// Returns 0 for a constant image; the coefficient solve handles that case
/// through its degenerate-denominator fallback.
pub fn adaptive_lambda(g: &ImageGrid, w: WindowSpec, lambda0: f64) -> f64 {
    let var = local_variance(g, w);
    let mean = var.values().iter().sum::<f64>() / var.len() as f64;
    lambda_from_mean_variance(lambda0, mean)
}

/// Per-window optimal coefficients of the weighted ridge fit:
/// `a = Γ·cov(Z,G) / (Γ·σ²_G + λ)` and `b = μ_Z - a·μ_G`.
///
/// Windows where `Γσ² + λ` vanishes fall back to `a = 0`, `b = μ_Z`, the
/// least-squares answer for constant guidance.
pub fn solve_coefficients(
    z: &ImageGrid,
    g: &ImageGrid,
    params: &FilterParams,
    gamma: &ImageGrid,
    lambda: f64,
) -> Result<CoefficientField> {
    check_same_dims(z, g, "solve_coefficients")?;
    check_same_dims(z, gamma, "solve_coefficients weighting")?;
    let radius = params.zeta;
    let mg = FieldMoments::new(g);
    let mz = FieldMoments::new(z);
    let pair = PairMoments::new(g, mg.reference, z, mz.reference);

    let (width, height) = z.dims();
    let mut a_out = vec![0.0; width * height];
    let mut b_out = vec![0.0; width * height];
    for v in 0..height {
        for u in 0..width {
            let w = gamma.get(u, v);
            let sigma = mg.variance(u, v, radius);
            let den = w * sigma + lambda;
            let idx = v * width + u;
            if den < DEGENERATE_DENOMINATOR {
                b_out[idx] = mz.mean(u, v, radius);
            } else {
                let cov =
                    pair.product_mean(u, v, radius) - mg.dev_mean(u, v, radius) * mz.dev_mean(u, v, radius);
                let a = w * cov / den;
                a_out[idx] = a;
                b_out[idx] = mz.mean(u, v, radius) - a * mg.mean(u, v, radius);
            }
        }
    }
    Ok(CoefficientField {
        a: ImageGrid::new(width, height, a_out)?,
        b: ImageGrid::new(width, height, b_out)?,
    })
}

/// Self-guided specialization: `G = Z`, with Γ and λ derived from the image
/// itself. For λ > 0 the slope satisfies `0 ≤ a < 1` and the offset reduces
/// to `(1 - a)·μ_Z`.
pub fn self_guided_coefficients(z: &ImageGrid, params: &FilterParams) -> CoefficientField {
    let gamma = edge_aware_weight(z, params.epsilon);
    let lambda = adaptive_lambda(z, params.window(), params.lambda0);
    solve_coefficients(z, z, params, &gamma, lambda).expect("dimensions match by construction")
}

/// Residual-driven aggregation weights:
/// `W = exp(-MSR/η) + 0.001`, where MSR is the mean squared residual of the
/// local linear fit over the clipped window. Values lie in `(0.001, 1.001]`.
///
/// The residual sum is expanded into windowed moments so the cost stays
/// O(M); the expansion is clamped at zero before the exponential.
pub fn aggregation_weights(
    coeff: &CoefficientField,
    z: &ImageGrid,
    g: &ImageGrid,
    params: &FilterParams,
) -> ImageGrid {
    assert!(
        z.same_dims(g) && z.same_dims(&coeff.a) && z.same_dims(&coeff.b),
        "aggregation_weights requires coefficients from the same (Z, G)"
    );
    let radius = params.zeta;
    let inv_eta = 1.0 / params.eta;
    let mg = FieldMoments::new(g);
    let mz = FieldMoments::new(z);
    let pair = PairMoments::new(g, mg.reference, z, mz.reference);
    let (rg, rz) = (mg.reference, mz.reference);

    ImageGrid::from_fn(z.width(), z.height(), |u, v| {
        let a = coeff.a.get(u, v);
        let b = coeff.b.get(u, v);
        // Residual a·G + b - Z in deviation form: c + a·dg - dz.
        let c = a * rg + b - rz;
        let eg = mg.dev_mean(u, v, radius);
        let ez = mz.dev_mean(u, v, radius);
        let egg = mg.dev_sq_mean(u, v, radius);
        let ezz = mz.dev_sq_mean(u, v, radius);
        let egz = pair.product_mean(u, v, radius);
        let msr =
            (c * c + a * a * egg + ezz + 2.0 * a * c * eg - 2.0 * c * ez - 2.0 * a * egz).max(0.0);
        (-msr * inv_eta).exp() + 0.001
    })
}

/// Weighted clipped-window average of the coefficient fields:
/// `ā = Σ W·a / Σ W` and likewise for `b̄`, in O(M) via running sums.
pub fn aggregate_coefficients(
    coeff: &CoefficientField,
    weights: &ImageGrid,
    w: WindowSpec,
) -> CoefficientField {
    assert!(
        coeff.a.same_dims(weights),
        "weights must match the coefficient fields"
    );
    debug_assert!(weights.values().iter().all(|&x| x > 0.0));
    let (width, height) = coeff.a.dims();
    let radius = w.radius();
    let ra = coeff.a.min_value();
    let rb = coeff.b.min_value();
    let wv = weights.values();
    let av = coeff.a.values();
    let bv = coeff.b.values();
    let sat_w = Sat::build(width, height, |i| wv[i]);
    let sat_wa = Sat::build(width, height, |i| wv[i] * (av[i] - ra));
    let sat_wb = Sat::build(width, height, |i| wv[i] * (bv[i] - rb));

    let mut a_out = vec![0.0; width * height];
    let mut b_out = vec![0.0; width * height];
    for v in 0..height {
        for u in 0..width {
            let (u0, v0, u1, v1, _) = window_bounds(u, v, radius, width, height);
            let wsum = sat_w.rect_sum(u0, v0, u1, v1);
            let idx = v * width + u;
            a_out[idx] = ra + sat_wa.rect_sum(u0, v0, u1, v1) / wsum;
            b_out[idx] = rb + sat_wb.rect_sum(u0, v0, u1, v1) / wsum;
        }
    }
    CoefficientField {
        a: ImageGrid::from_fn(width, height, |u, v| a_out[v * width + u]),
        b: ImageGrid::from_fn(width, height, |u, v| b_out[v * width + u]),
    }
}

fn compose_output(a_bar: ImageGrid, b_bar: &ImageGrid, g: &ImageGrid) -> FilterOutput {
    let base = ImageGrid::from_fn(g.width(), g.height(), |u, v| {
        a_bar.get(u, v) * g.get(u, v) + b_bar.get(u, v)
    });
    FilterOutput { base, a_bar }
}

/// The adaptive weighted filter: edge-aware Γ, image-adaptive λ, and
/// residual-weighted coefficient aggregation, composed end to end.
pub fn awgif(z: &ImageGrid, g: &ImageGrid, params: &FilterParams) -> Result<FilterOutput> {
    check_same_dims(z, g, "awgif")?;
    let gamma = edge_aware_weight(g, params.epsilon);
    let lambda = adaptive_lambda(g, params.window(), params.lambda0);
    let coeff = solve_coefficients(z, g, params, &gamma, lambda)?;
    let weights = aggregation_weights(&coeff, z, g, params);
    let agg = aggregate_coefficients(&coeff, &weights, params.window());
    Ok(compose_output(agg.a, &agg.b, g))
}

/// Baseline guided filter: Γ ≡ 1, fixed λ = λ0, unweighted box aggregation.
pub fn gif(z: &ImageGrid, g: &ImageGrid, params: &FilterParams) -> Result<FilterOutput> {
    check_same_dims(z, g, "gif")?;
    let gamma = ImageGrid::filled(g.width(), g.height(), 1.0);
    let coeff = solve_coefficients(z, g, params, &gamma, params.lambda0)?;
    let a_bar = box_mean(&coeff.a, params.window());
    let b_bar = box_mean(&coeff.b, params.window());
    Ok(compose_output(a_bar, &b_bar, g))
}

/// Weighted baseline: edge-aware Γ with fixed λ = λ0 and unweighted box
/// aggregation of the coefficients.
pub fn wgif(z: &ImageGrid, g: &ImageGrid, params: &FilterParams) -> Result<FilterOutput> {
    check_same_dims(z, g, "wgif")?;
    let gamma = edge_aware_weight(g, params.epsilon);
    let coeff = solve_coefficients(z, g, params, &gamma, params.lambda0)?;
    let a_bar = box_mean(&coeff.a, params.window());
    let b_bar = box_mean(&coeff.b, params.window());
    Ok(compose_output(a_bar, &b_bar, g))
}

/// Selects one of the three filters by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Awgif,
    Gif,
    Wgif,
}

impl FilterKind {
    pub fn apply(self, z: &ImageGrid, g: &ImageGrid, params: &FilterParams) -> Result<FilterOutput> {
        match self {
            FilterKind::Awgif => awgif(z, g, params),
            FilterKind::Gif => gif(z, g, params),
            FilterKind::Wgif => wgif(z, g, params),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Awgif => "awgif",
            FilterKind::Gif => "gif",
            FilterKind::Wgif => "wgif",
        }
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "awgif" => Ok(FilterKind::Awgif),
            "gif" => Ok(FilterKind::Gif),
            "wgif" => Ok(FilterKind::Wgif),
            other => Err(Error::UnknownName {
                kind: "filter",
                name: other.to_string(),
            }),
        }
    }
}

impl std::fmt::Display for FilterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rmse;
    use crate::reference;
    use crate::test_support::{deterministic_grid, max_abs_diff, noisy_step, ABS_TOL};

    fn params(zeta: usize, lambda0: f64) -> FilterParams {
        FilterParams::new(zeta, lambda0).unwrap()
    }

    #[test]
    fn params_are_validated() {
        assert!(FilterParams::new(0, 1.0).is_err());
        assert!(FilterParams::new(2, 0.0).is_err());
        assert!(FilterParams::new(2, 1.0).unwrap().with_epsilon(-1.0).is_err());
        assert!(FilterParams::new(2, 1.0).unwrap().with_eta(0.0).is_err());
        let p = params(2, 1.0);
        assert_eq!(p.epsilon, DEFAULT_EPSILON);
        assert_eq!(p.eta, DEFAULT_ETA);
    }

    #[test]
    fn gamma_is_unit_for_constant_guidance() {
        let g = ImageGrid::filled(12, 12, 0.4);
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        for &w in gamma.values() {
            assert!((w - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn gamma_brackets_one_on_textured_images() {
        let g = deterministic_grid(16, 16, 40);
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        assert!(gamma.min_value() <= 1.0);
        assert!(gamma.max_value() >= 1.0);
        assert!(gamma.min_value() > 0.0);
    }

    #[test]
    fn gamma_favors_the_textured_half() {
        // Left half flat, right half textured.
        let noise = deterministic_grid(8, 8, 9);
        let g = ImageGrid::from_fn(8, 8, |u, v| if u < 4 { 0.5 } else { noise.get(u, v) });
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        let flat_max = (0..8)
            .map(|v| gamma.get(0, v))
            .fold(f64::NEG_INFINITY, f64::max);
        let textured_min = (0..8).map(|v| gamma.get(6, v)).fold(f64::INFINITY, f64::min);
        assert!(textured_min > flat_max);

        // Γ spans several orders of magnitude with the default ε, so the
        // oracle comparison is relative.
        let oracle = reference::edge_aware_weight_naive(&g, DEFAULT_EPSILON);
        for (&a, &b) in gamma.values().iter().zip(oracle.values()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn adaptive_lambda_examples() {
        let constant = ImageGrid::filled(10, 10, 0.8);
        assert_eq!(
            adaptive_lambda(&constant, WindowSpec::new(3).unwrap(), 10.0),
            0.0
        );
        // A field whose windowed variance is 0.04 everywhere gives 10·√0.04.
        assert_eq!(lambda_from_mean_variance(10.0, 0.04), 2.0);

        let g = deterministic_grid(17, 13, 77);
        let w = WindowSpec::new(2).unwrap();
        let fast = adaptive_lambda(&g, w, 3.5);
        let var = reference::local_variance_naive(&g, 2);
        let mean = var.values().iter().sum::<f64>() / var.len() as f64;
        let slow = 3.5 * mean.sqrt();
        assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0));
    }

    #[test]
    fn constant_input_yields_zero_slope_and_mean_offset() {
        let z = ImageGrid::filled(10, 10, 0.3);
        let g = deterministic_grid(10, 10, 4);
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        let coeff = solve_coefficients(&z, &g, &params(2, 10.0), &gamma, 0.5).unwrap();
        assert!(coeff.a.values().iter().all(|&a| a == 0.0));
        assert!(coeff.b.values().iter().all(|&b| b == 0.3));
    }

    #[test]
    fn self_guidance_with_vanishing_lambda_approaches_identity() {
        let g = deterministic_grid(12, 12, 21);
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        let coeff = solve_coefficients(&g, &g, &params(2, 1.0), &gamma, 0.0).unwrap();
        for &a in coeff.a.values() {
            assert!((a - 1.0).abs() <= 1e-9);
        }
        for &b in coeff.b.values() {
            assert!(b.abs() <= 1e-9);
        }
    }

    #[test]
    fn solve_matches_direct_least_squares_oracle() {
        let z = deterministic_grid(14, 11, 101);
        let g = deterministic_grid(14, 11, 102);
        let gamma = edge_aware_weight(&g, DEFAULT_EPSILON);
        for &lambda in &[1e-3, 0.5, 1e3] {
            let p = params(2, 1.0);
            let fast = solve_coefficients(&z, &g, &p, &gamma, lambda).unwrap();
            let (a_ref, b_ref) =
                reference::solve_coefficients_naive(&z, &g, &gamma, lambda, 2).unwrap();
            assert!(max_abs_diff(&fast.a, &a_ref) <= 1e-9, "lambda = {lambda}");
            assert!(max_abs_diff(&fast.b, &b_ref) <= 1e-9, "lambda = {lambda}");
        }
    }

    #[test]
    fn self_guided_is_the_same_computation_as_solve() {
        let z = deterministic_grid(13, 13, 55);
        let p = params(3, 40.0);
        let direct = self_guided_coefficients(&z, &p);
        let gamma = edge_aware_weight(&z, p.epsilon);
        let lambda = adaptive_lambda(&z, p.window(), p.lambda0);
        let staged = solve_coefficients(&z, &z, &p, &gamma, lambda).unwrap();
        assert_eq!(direct.a.values(), staged.a.values());
        assert_eq!(direct.b.values(), staged.b.values());
    }

    #[test]
    fn self_guided_slope_stays_in_unit_interval() {
        for seed in 0..8 {
            let z = deterministic_grid(16, 16, 200 + seed);
            let coeff = self_guided_coefficients(&z, &params(2, 25.0));
            for &a in coeff.a.values() {
                assert!((0.0..1.0).contains(&a), "a = {a}");
            }
        }
    }

    #[test]
    fn self_guided_constant_falls_back_to_mean() {
        let z = ImageGrid::filled(9, 9, 0.6);
        let coeff = self_guided_coefficients(&z, &params(2, 5.0));
        assert!(coeff.a.values().iter().all(|&a| a == 0.0));
        assert!(coeff.b.values().iter().all(|&b| b == 0.6));
    }

    #[test]
    fn perfect_linear_fit_saturates_the_weights() {
        let g = deterministic_grid(12, 12, 14);
        let z = g.map(|x| 0.5 * x + 0.1);
        let p = params(2, 1.0);
        let gamma = edge_aware_weight(&g, p.epsilon);
        let coeff = solve_coefficients(&z, &g, &p, &gamma, 0.0).unwrap();
        let w = aggregation_weights(&coeff, &z, &g, &p);
        for &x in w.values() {
            assert!((x - 1.001).abs() <= 1e-9, "w = {x}");
        }
    }

    #[test]
    fn large_residuals_drive_weights_to_floor() {
        let z = deterministic_grid(12, 12, 15);
        let g = deterministic_grid(12, 12, 16);
        let p = params(2, 1.0);
        // A wildly wrong fit: slope 0, offset far from the data.
        let coeff = CoefficientField {
            a: ImageGrid::filled(12, 12, 0.0),
            b: ImageGrid::filled(12, 12, 50.0),
        };
        let w = aggregation_weights(&coeff, &z, &g, &p);
        for &x in w.values() {
            assert!((x - 0.001).abs() <= 1e-15);
        }
    }

    #[test]
    fn weights_match_direct_residual_oracle() {
        let z = deterministic_grid(15, 12, 61);
        let g = deterministic_grid(15, 12, 62);
        let p = params(2, 1e3);
        let gamma = edge_aware_weight(&g, p.epsilon);
        let lambda = adaptive_lambda(&g, p.window(), p.lambda0);
        let coeff = solve_coefficients(&z, &g, &p, &gamma, lambda).unwrap();
        let fast = aggregation_weights(&coeff, &z, &g, &p);
        let slow = reference::aggregation_weights_naive(&coeff.a, &coeff.b, &z, &g, &p);
        assert!(max_abs_diff(&fast, &slow) <= ABS_TOL);
    }

    #[test]
    fn constant_weights_reduce_to_box_means() {
        let coeff = CoefficientField {
            a: deterministic_grid(14, 14, 71),
            b: deterministic_grid(14, 14, 72),
        };
        let w = ImageGrid::filled(14, 14, 1.001);
        let spec = WindowSpec::new(3).unwrap();
        let agg = aggregate_coefficients(&coeff, &w, spec);
        assert!(max_abs_diff(&agg.a, &box_mean(&coeff.a, spec)) <= ABS_TOL);
        assert!(max_abs_diff(&agg.b, &box_mean(&coeff.b, spec)) <= ABS_TOL);
    }

    #[test]
    fn constant_field_is_preserved_under_any_weights() {
        let coeff = CoefficientField {
            a: ImageGrid::filled(12, 12, 0.37),
            b: deterministic_grid(12, 12, 73),
        };
        let w = deterministic_grid(12, 12, 74).map(|x| x + 0.01);
        let agg = aggregate_coefficients(&coeff, &w, WindowSpec::new(2).unwrap());
        assert!(agg.a.values().iter().all(|&a| a == 0.37));
    }

    #[test]
    fn aggregation_matches_naive_weighted_average() {
        let coeff = CoefficientField {
            a: deterministic_grid(16, 13, 81),
            b: deterministic_grid(16, 13, 82),
        };
        let w = deterministic_grid(16, 13, 83).map(|x| x + 0.001);
        let spec = WindowSpec::new(2).unwrap();
        let agg = aggregate_coefficients(&coeff, &w, spec);
        assert!(max_abs_diff(&agg.a, &reference::aggregate_naive(&coeff.a, &w, 2)) <= ABS_TOL);
        assert!(max_abs_diff(&agg.b, &reference::aggregate_naive(&coeff.b, &w, 2)) <= ABS_TOL);
    }

    #[test]
    fn constant_image_is_a_fixed_point_of_all_filters() {
        let z = ImageGrid::filled(16, 16, 0.42);
        let p = params(3, 50.0);
        for kind in [FilterKind::Awgif, FilterKind::Gif, FilterKind::Wgif] {
            let out = kind.apply(&z, &z, &p).unwrap();
            assert!(
                out.base.values().iter().all(|&v| v == 0.42),
                "{kind} broke constant idempotence"
            );
        }
    }

    #[test]
    fn awgif_equals_its_staged_pipeline_exactly() {
        let z = deterministic_grid(18, 15, 91);
        let g = deterministic_grid(18, 15, 92);
        let p = params(2, 10.0);
        let whole = awgif(&z, &g, &p).unwrap();

        let gamma = edge_aware_weight(&g, p.epsilon);
        let lambda = adaptive_lambda(&g, p.window(), p.lambda0);
        let coeff = solve_coefficients(&z, &g, &p, &gamma, lambda).unwrap();
        let w = aggregation_weights(&coeff, &z, &g, &p);
        let agg = aggregate_coefficients(&coeff, &w, p.window());
        let base = ImageGrid::from_fn(18, 15, |u, v| agg.a.get(u, v) * g.get(u, v) + agg.b.get(u, v));

        assert_eq!(whole.base.values(), base.values());
        assert_eq!(whole.a_bar.values(), agg.a.values());
    }

    #[test]
    fn awgif_preserves_a_noisy_step_better_than_gif() {
        let (noisy, clean) = noisy_step(64, 64, 0.05, 7);
        let p = params(15, 1e3);
        let ours = awgif(&noisy, &noisy, &p).unwrap();
        let baseline = gif(&noisy, &noisy, &p).unwrap();
        let e_ours = rmse(&ours.base, &clean).unwrap();
        let e_gif = rmse(&baseline.base, &clean).unwrap();
        assert!(
            e_ours < e_gif,
            "step edge: awgif rmse {e_ours} vs gif rmse {e_gif}"
        );
    }

    #[test]
    fn gif_matches_ridge_regression_oracle() {
        let z = deterministic_grid(14, 14, 33);
        let g = deterministic_grid(14, 14, 34);
        let p = params(2, 0.01);
        let out = gif(&z, &g, &p).unwrap();
        let ones = ImageGrid::filled(14, 14, 1.0);
        let (a_ref, b_ref) =
            reference::solve_coefficients_naive(&z, &g, &ones, p.lambda0, p.zeta).unwrap();
        let a_bar = reference::box_mean_naive(&a_ref, p.zeta);
        let b_bar = reference::box_mean_naive(&b_ref, p.zeta);
        let base = ImageGrid::from_fn(14, 14, |u, v| a_bar.get(u, v) * g.get(u, v) + b_bar.get(u, v));
        assert!(max_abs_diff(&out.base, &base) <= 1e-9);
    }

    #[test]
    fn gif_with_huge_lambda_collapses_to_cascaded_box_means() {
        // In the a → 0 limit the output is the box mean of the per-window
        // means, i.e. two box filters in cascade.
        let z = deterministic_grid(16, 16, 35);
        let p = params(2, 1e9);
        let out = gif(&z, &z, &p).unwrap();
        let w = p.window();
        let expected = box_mean(&box_mean(&z, w), w);
        assert!(max_abs_diff(&out.base, &expected) <= 1e-9);
    }

    #[test]
    fn wgif_matches_weighted_ridge_oracle() {
        let z = deterministic_grid(14, 14, 36);
        let g = deterministic_grid(14, 14, 37);
        let p = params(2, 0.01);
        let out = wgif(&z, &g, &p).unwrap();
        let gamma = edge_aware_weight(&g, p.epsilon);
        let (a_ref, b_ref) =
            reference::solve_coefficients_naive(&z, &g, &gamma, p.lambda0, p.zeta).unwrap();
        let a_bar = reference::box_mean_naive(&a_ref, p.zeta);
        let b_bar = reference::box_mean_naive(&b_ref, p.zeta);
        let base = ImageGrid::from_fn(14, 14, |u, v| a_bar.get(u, v) * g.get(u, v) + b_bar.get(u, v));
        assert!(max_abs_diff(&out.base, &base) <= 1e-9);
    }

    #[test]
    fn affine_guidance_is_reproduced_when_lambda_vanishes() {
        let g = deterministic_grid(16, 16, 44);
        let z = g.map(|x| 0.75 * x + 0.05);
        let p = params(2, 1.0);
        let gamma = edge_aware_weight(&g, p.epsilon);
        let coeff = solve_coefficients(&z, &g, &p, &gamma, 0.0).unwrap();
        let w = aggregation_weights(&coeff, &z, &g, &p);
        let agg = aggregate_coefficients(&coeff, &w, p.window());
        for v in 0..16 {
            for u in 0..16 {
                let base = agg.a.get(u, v) * g.get(u, v) + agg.b.get(u, v);
                assert!((base - z.get(u, v)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn filters_commute_with_grayscale_shifts() {
        let z = deterministic_grid(16, 16, 45);
        let g = deterministic_grid(16, 16, 46);
        let shifted = z.map(|x| x + 0.25);
        let p = params(2, 1.0);
        let out = awgif(&z, &g, &p).unwrap();
        let out_shifted = awgif(&shifted, &g, &p).unwrap();
        for (a, b) in out_shifted
            .base
            .values()
            .iter()
            .zip(out.base.values().iter())
        {
            assert!((a - (b + 0.25)).abs() <= 1e-12, "{a} vs {}", b + 0.25);
        }
        assert!(max_abs_diff(&out_shifted.a_bar, &out.a_bar) <= 1e-12);
    }

    #[test]
    fn aggregated_slope_is_higher_on_edges_than_in_flat_regions() {
        let z = ImageGrid::from_fn(32, 32, |u, _| if u < 16 { 0.2 } else { 0.8 });
        let p = params(3, 100.0);
        let out = awgif(&z, &z, &p).unwrap();
        let edge_min = (0..32)
            .flat_map(|v| [out.a_bar.get(15, v), out.a_bar.get(16, v)])
            .fold(f64::INFINITY, f64::min);
        let flat_max = (0..32)
            .flat_map(|v| [out.a_bar.get(3, v), out.a_bar.get(28, v)])
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            edge_min > flat_max,
            "edge slope {edge_min} should exceed flat slope {flat_max}"
        );
    }

    #[test]
    fn unknown_filter_names_are_rejected() {
        assert!("egif".parse::<FilterKind>().is_err());
        assert_eq!("awgif".parse::<FilterKind>().unwrap(), FilterKind::Awgif);
    }
}
