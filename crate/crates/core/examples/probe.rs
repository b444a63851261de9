// Scratch probe for argmax accuracy vs blur gain. Not part of the build.
use focusdepth::*;

fn main() {
    for &kappa in &[0.3, 0.4, 0.5, 0.6, 0.8, 1.2] {
        let spec = SceneSpec::new(SurfaceShape::Cone, 64, 64, 32, 7, kappa, 0.0).unwrap();
        let truth = make_depth_surface(&spec);
        let stack = render_stack(&truth, &spec);
        let params = SffParams::new(FilterParams::new(2, 100.0).unwrap());
        let vol = aggregate_volume(&build_focus_volume(&stack, &params), params.agg_radius);
        let depth = initial_depth(&vol);
        let within = depth
            .grid()
            .values()
            .iter()
            .zip(truth.depth.grid().values())
            .filter(|(&d, &t)| (d - t).abs() <= 1.0)
            .count();
        let frac = within as f64 / depth.grid().len() as f64;
        println!("kappa={kappa:4}  within_pm1={frac:.4}");
    }
}
