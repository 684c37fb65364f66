use scatter_ptycho::analysis::aligned_nrmse;
use scatter_ptycho::retrieval::{run_retrieval, run_retrieval_from, RetrievalConfig, ScatterMeasurement};
use scatter_ptycho::simulator::{make_target, scatter_plans, simulate_with_plan, OpticsGeometry, TargetKind, TargetSpec};

fn main() {
    let g = OpticsGeometry::new(532e-9, 2.518, 2.654 / 4.0, 0.139, 37e-3 / 4.0, 12e-3, 6.9e-6, 1.6, None).unwrap();
    let spec = TargetSpec {
        kind: TargetKind::UsafBars { groups: vec![3, 4], elements: vec![2, 4] },
        extent: (1.2e-3, 1.0e-3),
    };
    let pitch = 10e-6;
    let target = make_target(&spec, pitch).unwrap();
    let distances: Vec<f64> = [0.0, 12.5e-3].iter().map(|o| g.range_target_scatter + o).collect();

    for beta in [0.25f64, 0.5] {
        let plans = scatter_plans(&target, &distances, &g, beta).unwrap();
        let ms: Vec<ScatterMeasurement> =
            plans.iter().map(|p| simulate_with_plan(&target, p).unwrap()).collect();
        let config = RetrievalConfig {
            support_a: target.width() + 4,
            support_b: target.height() + 4,
            iterations: 10,
            resample_ratio: beta,
            target_pitch: pitch,
            wavelength: g.wavelength,
            seed: 7,
            realness_constraint: true,
            plane_order_shuffle: true,
        };
        // Fixed-point probe: start from the truth.
        let n = plans[0].grid_size();
        let init = target.resized(n, n).unwrap();
        let r = run_retrieval_from(init, &ms, &config).unwrap();
        let truth = target.resized(n, n).unwrap();
        println!(
            "beta {beta}: grid {n}, fixed-point residuals it0 {:.4} -> it9 {:.4}, drift NRMSE {:.4}",
            r.mean_residual(0), r.mean_residual(9),
            aligned_nrmse(&r.estimate, &truth).unwrap()
        );
        // Random-start short run.
        let mut c2 = config;
        c2.iterations = 60;
        let rr = run_retrieval(&ms, &c2).unwrap();
        println!(
            "beta {beta}: random-start it0 {:.4} -> it59 {:.4}, NRMSE {:.4}",
            rr.mean_residual(0), rr.mean_residual(59),
            aligned_nrmse(&rr.estimate, &truth).unwrap()
        );
    }
}
