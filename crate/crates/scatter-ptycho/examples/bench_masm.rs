use scatter_ptycho::field::ComplexField;
use scatter_ptycho::propagation::{PropagationPlan, Propagator};
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    // Full bench geometry: 4096 grid, 10 um pitch, beta 0.25, z 2.654 m.
    let n = 4096;
    let target = ComplexField::from_physical_fn(500, 400, 10e-6, |x, y| {
        Complex64::new((-(x * x + y * y) / (1e-3f64).powi(2)).exp(), 0.0)
    }).unwrap();
    let plan = PropagationPlan::new(532e-9, 2.654, 10e-6, n, 0.25).unwrap();
    let t0 = Instant::now();
    let prop = Propagator::new(plan);
    println!("kernel build: {:.2?}", t0.elapsed());
    let t1 = Instant::now();
    let psi = prop.propagate(&target).unwrap();
    println!("forward masm (4096 grid): {:.2?}", t1.elapsed());
    let t2 = Instant::now();
    let back = prop.inverse(&psi).unwrap();
    println!("inverse masm: {:.2?}", t2.elapsed());
    println!("one plane visit ~= fwd+inv: {:.2?}", t1.elapsed());
    let visits = 200 * 2 * 2; // n_i * n_p * (fwd+inv)
    let per = (t1.elapsed().as_secs_f64() + t2.elapsed().as_secs_f64()) / 2.0;
    println!("estimated full-scale retrieval (n_i=200, n_p=2): {:.1} min", visits as f64 * per / 60.0);
    println!("sanity: back energy {:.3e}", back.energy());

    // Quarter-scale variant: 1024 grid.
    let plan_q = PropagationPlan::new(532e-9, 2.654/4.0, 10e-6, 1024, 0.25).unwrap();
    let t3 = Instant::now();
    let prop_q = Propagator::new(plan_q);
    let psi_q = prop_q.propagate(&target).unwrap();
    let _back_q = prop_q.inverse(&psi_q).unwrap();
    let cycle = t3.elapsed().as_secs_f64();
    println!("quarter-scale cycle (1024 grid, incl kernels): {:.2}s", cycle);
    println!("estimated quarter-scale retrieval: {:.1} min", 400.0 * cycle / 2.0 / 60.0);
}
