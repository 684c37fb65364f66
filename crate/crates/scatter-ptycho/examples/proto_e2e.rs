use scatter_ptycho::analysis::{aligned_nrmse, bar_contrast, orient_like, resolved_frequency};
use scatter_ptycho::retrieval::{run_retrieval, RetrievalConfig, ScatterMeasurement};
use scatter_ptycho::simulator::{make_target, scatter_plans, simulate_with_plan, OpticsGeometry, TargetKind, TargetSpec};
use std::time::Instant;

fn main() {
    // Quarter-scale scene: R_s, A_s, extent, offsets / 4; camera unchanged.
    let g = OpticsGeometry::new(532e-9, 2.518, 2.654 / 4.0, 0.139, 37e-3 / 4.0, 12e-3, 6.9e-6, 1.6, None).unwrap();
    let spec = TargetSpec {
        kind: TargetKind::UsafBars { groups: vec![3, 4], elements: vec![2, 4] },
        extent: (1.2e-3, 1.0e-3),
    };
    let pitch = 10e-6;
    let target = make_target(&spec, pitch).unwrap();
    println!("target grid {}x{}", target.height(), target.width());

    let config = RetrievalConfig {
        support_a: target.width() + 4,
        support_b: target.height() + 4,
        iterations: 200,
        resample_ratio: 0.25,
        target_pitch: pitch,
        wavelength: g.wavelength,
        seed: 7,
        realness_constraint: true,
        plane_order_shuffle: true,
    };

    let t0 = Instant::now();
    let distances: Vec<f64> = [0.0, 12.5e-3].iter().map(|o| g.range_target_scatter + o).collect();
    let plans = scatter_plans(&target, &distances, &g, 0.25).unwrap();
    let ms: Vec<ScatterMeasurement> = plans
        .iter()
        .map(|plan| simulate_with_plan(&target, plan).unwrap())
        .collect();
    println!("forward sims: {:.1?}; scatter grid {}", t0.elapsed(), ms[0].grid_size());

    let t1 = Instant::now();
    let result = run_retrieval(&ms, &config).unwrap();
    println!("retrieval (n_i=200, n_p=2): {:.1?}", t1.elapsed());
    println!("first/last mean residual: {:.4} / {:.4}", result.mean_residual(0), result.mean_residual(199));

    let truth = target.resized(result.estimate.height(), result.estimate.width()).unwrap();
    let nrmse = aligned_nrmse(&result.estimate, &truth).unwrap();
    let oriented = orient_like(&result.estimate, &truth).unwrap();
    let image = oriented.modulus();
    println!("aligned NRMSE: {:.4}", nrmse);
    for (gr, el) in [(3, 2), (3, 4), (4, 2), (4, 4)] {
        let c = bar_contrast(&image, gr, el, &spec).unwrap();
        println!("g{gr} e{el} ({:.2} lp/mm): contrast {:.3}", scatter_ptycho::simulator::bar_frequency_lp_mm(gr, el), c);
    }
    let resolved = resolved_frequency(&image, &spec, 0.1).unwrap();
    println!("resolved: {:.2} lp/mm (want >= 11.31)", resolved);
}
