//! Multi-plane error-reduction phase retrieval with support and realness
//! constraints: cycle the target estimate through every scatter plane,
//! swapping the propagated amplitude for the measured one and
//! backpropagating, until the iteration budget is spent.

use ndarray::Array2;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rect_window, ComplexField, RealImage};
use crate::propagation::{PropagationPlan, Propagator};

/// Relative tolerance for pitch agreement between measurements and plans.
/// Ingested captures land near, not exactly on, the retrieval grid.
const PITCH_TOL: f64 = 1e-3;

// Separate ChaCha streams derived from the one seed, so changing the
// iteration count never changes the initial estimate.
const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;

/// One recorded intensity image and its target-to-screen distance.
///
/// The measured amplitude (square root of the intensity) is computed once
/// here and cached; the solver consumes it on every plane visit.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterMeasurement {
    intensity: RealImage,
    amplitude: RealImage,
    distance: f64,
}

impl ScatterMeasurement {
    pub fn new(intensity: RealImage, distance: f64) -> Result<Self> {
        if !(distance.is_finite() && distance > 0.0) {
            return Err(Error::invalid(format!(
                "measurement distance must be positive, got {distance}"
            )));
        }
        let amplitude = intensity.sqrt();
        Ok(Self { intensity, amplitude, distance })
    }

    pub fn intensity(&self) -> &RealImage {
        &self.intensity
    }

    pub fn amplitude(&self) -> &RealImage {
        &self.amplitude
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn grid_size(&self) -> usize {
        self.intensity.height()
    }

    pub fn pitch(&self) -> f64 {
        self.intensity.pitch()
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalConfig {
    /// Support width in samples along the x axis (a).
    pub support_a: usize,
    /// Support height in samples along the y axis (b).
    pub support_b: usize,
    /// Iteration count (n_i); every plane is visited once per iteration.
    pub iterations: usize,
    /// Total MASM resampling ratio (beta).
    pub resample_ratio: f64,
    /// Target-plane sample pitch (delta), meters.
    pub target_pitch: f64,
    /// Illumination wavelength, meters.
    pub wavelength: f64,
    /// Seed for the initial phase draw and the plane-order shuffle.
    pub seed: u64,
    /// Replace each estimate sample with its modulus before windowing
    /// (valid for real, non-negative amplitude masks; removes the
    /// constant-phase ambiguity).
    pub realness_constraint: bool,
    /// Visit the planes in a fresh random order each iteration.
    pub plane_order_shuffle: bool,
}

impl RetrievalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::invalid("iteration count must be at least 1"));
        }
        if !(self.resample_ratio > 0.0 && self.resample_ratio <= 1.0) {
            return Err(Error::invalid(format!(
                "resample ratio must be in (0, 1], got {}",
                self.resample_ratio
            )));
        }
        if !(self.target_pitch.is_finite() && self.target_pitch > 0.0) {
            return Err(Error::invalid("target pitch must be positive"));
        }
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(Error::invalid("wavelength must be positive"));
        }
        if self.support_a == 0 || self.support_b == 0 {
            return Err(Error::invalid("support must be positive in both axes"));
        }
        Ok(())
    }

    /// Target-plane working grid implied by a scatter grid of `scatter`
    /// samples: `round(scatter / ratio)`.
    pub fn target_grid_size(&self, scatter: usize) -> usize {
        (scatter as f64 / self.resample_ratio).round() as usize
    }
}

/// One amplitude-misfit sample from the residual log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRecord {
    /// 0-based iteration.
    pub iteration: usize,
    /// 0-based visit index within the iteration.
    pub visit: usize,
    /// Original index of the visited plane.
    pub plane: usize,
    /// Relative amplitude misfit at that plane, before projection.
    pub residual: f64,
}

/// Final estimate plus convergence diagnostics.
#[derive(Debug, Clone)]
pub struct RetrievalResult {
    /// Estimated target-plane field on the padded working grid.
    pub estimate: ComplexField,
    /// Residual log, one record per plane visit in execution order.
    pub log: Vec<ResidualRecord>,
    pub iterations_run: usize,
}

impl RetrievalResult {
    /// Residuals in visit order (length `iterations_run * n_p`).
    pub fn per_iteration_residual(&self) -> Vec<f64> {
        self.log.iter().map(|r| r.residual).collect()
    }

    /// Mean residual of one iteration across its plane visits.
    pub fn mean_residual(&self, iteration: usize) -> f64 {
        let (sum, count) = self
            .log
            .iter()
            .filter(|r| r.iteration == iteration)
            .fold((0.0, 0usize), |(s, c), r| (s + r.residual, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }
}

fn validate_measurements(measurements: &[ScatterMeasurement]) -> Result<()> {
    let Some(first) = measurements.first() else {
        return Err(Error::invalid("at least one measurement is required"));
    };
    if first.intensity.height() != first.intensity.width() {
        return Err(Error::mismatch(format!(
            "measurements must be square, got {}x{}",
            first.intensity.height(),
            first.intensity.width()
        )));
    }
    for (i, m) in measurements.iter().enumerate() {
        if m.grid_size() != first.grid_size()
            || m.intensity.width() != first.intensity.width()
        {
            return Err(Error::mismatch(format!(
                "measurement {i} grid differs from measurement 0"
            )));
        }
        if ((m.pitch() - first.pitch()) / first.pitch()).abs() > PITCH_TOL {
            return Err(Error::mismatch(format!(
                "measurement {i} pitch {} differs from measurement 0 pitch {}",
                m.pitch(),
                first.pitch()
            )));
        }
    }
    Ok(())
}

fn plan_for(measurement: &ScatterMeasurement, config: &RetrievalConfig) -> Result<PropagationPlan> {
    let scatter = measurement.grid_size();
    let n = config.target_grid_size(scatter);
    let plan = PropagationPlan::new(
        config.wavelength,
        measurement.distance(),
        config.target_pitch,
        n,
        config.resample_ratio,
    )?;
    if plan.output_size() != scatter {
        return Err(Error::mismatch(format!(
            "plan produces a {} scatter grid but the measurement has {scatter}",
            plan.output_size()
        )));
    }
    if ((plan.output_pitch() - measurement.pitch()) / plan.output_pitch()).abs() > PITCH_TOL {
        return Err(Error::mismatch(format!(
            "measurement pitch {} is off the retrieval grid pitch {}",
            measurement.pitch(),
            plan.output_pitch()
        )));
    }
    Ok(plan)
}

/// Draws a seeded i.i.d. standard-normal phase, attaches it to the first
/// measurement's amplitude and backpropagates to the target plane.
pub fn initialize_estimate(
    measurement: &ScatterMeasurement,
    config: &RetrievalConfig,
) -> Result<ComplexField> {
    config.validate()?;
    let plan = plan_for(measurement, config)?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    rng.set_stream(INIT_STREAM);
    let normal = StandardNormal;
    let amp = measurement.amplitude();
    let data = Array2::from_shape_fn((amp.height(), amp.width()), |(r, c)| {
        let phi: f64 = normal.sample(&mut rng);
        Complex64::from_polar(amp.data()[(r, c)], phi)
    });
    let seeded = ComplexField::new(data, plan.output_pitch())?;
    crate::propagation::masm_inverse(&seeded, &plan)
}

/// Replaces every sample's amplitude with the measured one while keeping
/// the input phase; a zero sample takes phase 0 (the measured amplitude on
/// the real axis).
pub fn project_data(field: &ComplexField, measurement: &ScatterMeasurement) -> Result<ComplexField> {
    let amp = measurement.amplitude();
    if field.height() != amp.height() || field.width() != amp.width() {
        return Err(Error::mismatch(format!(
            "field {}x{} vs measurement {}x{}",
            field.height(),
            field.width(),
            amp.height(),
            amp.width()
        )));
    }
    let data = ndarray::Zip::from(field.data()).and(amp.data()).map_collect(|v, &a| {
        let m = v.norm();
        if m == 0.0 {
            Complex64::new(a, 0.0)
        } else {
            v * (a / m)
        }
    });
    ComplexField::new(data, field.pitch())
}

/// Object-domain constraints: optional realness (each sample replaced by
/// its modulus), then the rectangular support window.
pub fn apply_constraints(field: &ComplexField, config: &RetrievalConfig) -> Result<ComplexField> {
    let constrained = if config.realness_constraint {
        let data = field.data().mapv(|v| Complex64::new(v.norm(), 0.0));
        ComplexField::new(data, field.pitch())?
    } else {
        field.clone()
    };
    rect_window(&constrained, config.support_a, config.support_b)
}

fn amplitude_residual(propagated: &ComplexField, measurement: &ScatterMeasurement) -> f64 {
    let amp = measurement.amplitude();
    let mut num = 0.0;
    let mut den = 0.0;
    for (v, &a) in propagated.data().iter().zip(amp.data().iter()) {
        let d = v.norm() - a;
        num += d * d;
        den += a * a;
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

/// Runs the full solver from a caller-supplied initial estimate (the
/// random-phase path goes through [`run_retrieval`]; this entry point
/// doubles as the fixed-point test hook).
pub fn run_retrieval_from(
    initial: ComplexField,
    measurements: &[ScatterMeasurement],
    config: &RetrievalConfig,
) -> Result<RetrievalResult> {
    config.validate()?;
    validate_measurements(measurements)?;
    let propagators: Vec<Propagator> = measurements
        .iter()
        .map(|m| plan_for(m, config).map(Propagator::new))
        .collect::<Result<_>>()?;
    let n = propagators[0].plan().grid_size();
    if config.support_a > n || config.support_b > n {
        return Err(Error::invalid(format!(
            "support {}x{} exceeds the {n} working grid",
            config.support_a, config.support_b
        )));
    }
    if initial.height() > n || initial.width() > n {
        return Err(Error::mismatch("initial estimate exceeds the working grid"));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    rng.set_stream(SHUFFLE_STREAM);

    let mut estimate = initial.resized(n, n)?;
    let mut log = Vec::with_capacity(config.iterations * measurements.len());
    for iteration in 0..config.iterations {
        let mut order: Vec<usize> = (0..measurements.len()).collect();
        if config.plane_order_shuffle {
            order.shuffle(&mut rng);
        }
        for (visit, &plane) in order.iter().enumerate() {
            estimate = apply_constraints(&estimate, config)?;
            let propagated = propagators[plane].propagate(&estimate)?;
            log.push(ResidualRecord {
                iteration,
                visit,
                plane,
                residual: amplitude_residual(&propagated, &measurements[plane]),
            });
            let projected = project_data(&propagated, &measurements[plane])?;
            estimate = propagators[plane].inverse(&projected)?;
            if estimate.has_non_finite() {
                return Err(Error::NumericalFailure {
                    iteration,
                    reason: format!("non-finite sample after visiting plane {plane}"),
                });
            }
        }
    }
    // The returned estimate satisfies the constraints it was optimized under.
    estimate = apply_constraints(&estimate, config)?;
    Ok(RetrievalResult { estimate, log, iterations_run: config.iterations })
}

/// The scatter-ptychography solver: random-phase initialization from the
/// first measurement, then `iterations` sweeps over the (optionally
/// shuffled) planes of constraint projection, forward propagation,
/// amplitude replacement and backpropagation.
pub fn run_retrieval(
    measurements: &[ScatterMeasurement],
    config: &RetrievalConfig,
) -> Result<RetrievalResult> {
    config.validate()?;
    validate_measurements(measurements)?;
    let initial = initialize_estimate(&measurements[0], config)?;
    run_retrieval_from(initial, measurements, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::masm_propagate;

    const LAMBDA: f64 = 532e-9;

    fn test_config() -> RetrievalConfig {
        RetrievalConfig {
            support_a: 40,
            support_b: 40,
            iterations: 5,
            resample_ratio: 0.25,
            target_pitch: 10e-6,
            wavelength: LAMBDA,
            seed: 11,
            realness_constraint: true,
            plane_order_shuffle: true,
        }
    }

    // A smooth in-support target and its noise-free measurements.
    fn synthetic_scene(
        config: &RetrievalConfig,
        distances: &[f64],
    ) -> (ComplexField, Vec<ScatterMeasurement>) {
        let n = 128;
        let sigma = 60e-6;
        let target = ComplexField::from_physical_fn(n, n, config.target_pitch, |x, y| {
            num_complex::Complex64::new((-(x * x + y * y) / (sigma * sigma)).exp(), 0.0)
        })
        .unwrap();
        let measurements = distances
            .iter()
            .map(|&z| {
                let plan = PropagationPlan::new(
                    config.wavelength,
                    z,
                    config.target_pitch,
                    n,
                    config.resample_ratio,
                )
                .unwrap();
                let psi = masm_propagate(&target, &plan).unwrap();
                ScatterMeasurement::new(psi.intensity(), z).unwrap()
            })
            .collect();
        (target, measurements)
    }

    #[test]
    fn initialization_is_deterministic() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02]);
        let a = initialize_estimate(&ms[0], &config).unwrap();
        let b = initialize_estimate(&ms[0], &config).unwrap();
        assert_eq!(a, b);
        let mut other = config;
        other.seed = 12;
        let c = initialize_estimate(&ms[0], &other).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn initialization_from_zero_intensity_is_zero() {
        let config = test_config();
        let zeros = RealImage::zeros(32, 32, config.target_pitch / config.resample_ratio).unwrap();
        let m = ScatterMeasurement::new(zeros, 0.02).unwrap();
        let est = initialize_estimate(&m, &config).unwrap();
        assert_eq!(est.energy(), 0.0);
    }

    #[test]
    fn initialization_restores_target_pitch() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02]);
        let est = initialize_estimate(&ms[0], &config).unwrap();
        assert!((est.pitch() - config.target_pitch).abs() < 1e-18);
        assert_eq!(est.height(), 128);
    }

    #[test]
    fn project_data_is_idempotent_on_satisfied_field() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02]);
        let plan = plan_for(&ms[0], &config).unwrap();
        let psi_amp = ms[0].amplitude().to_complex();
        let psi = ComplexField::new(psi_amp.data().clone(), plan.output_pitch()).unwrap();
        let projected = project_data(&psi, &ms[0]).unwrap();
        let err: f64 = projected
            .data()
            .iter()
            .zip(psi.data().iter())
            .map(|(a, b)| (a - b).norm())
            .sum();
        assert!(err < 1e-12);
    }

    #[test]
    fn project_data_scales_amplitude_only() {
        let n = 16;
        let pitch = 40e-6;
        let field = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            num_complex::Complex64::from_polar(1.0, 1e4 * (x + 2.0 * y))
        })
        .unwrap();
        let four = RealImage::new(ndarray::Array2::from_elem((n, n), 4.0), pitch).unwrap();
        let m = ScatterMeasurement::new(four, 0.02).unwrap();
        let projected = project_data(&field, &m).unwrap();
        for (p, f) in projected.data().iter().zip(field.data().iter()) {
            assert!((p.norm() - 2.0).abs() < 1e-12);
            assert!((p.arg() - f.arg()).abs() < 1e-12);
        }
    }

    #[test]
    fn project_data_amplitude_matches_sqrt_intensity_exactly() {
        let config = test_config();
        let (target, ms) = synthetic_scene(&config, &[0.03]);
        let plan = plan_for(&ms[0], &config).unwrap();
        let psi = masm_propagate(&target, &plan).unwrap();
        // Perturb the amplitude, keep the phase.
        let distorted = ComplexField::new(psi.data().mapv(|v| v * 1.7), psi.pitch()).unwrap();
        let projected = project_data(&distorted, &ms[0]).unwrap();
        for (p, a) in projected.data().iter().zip(ms[0].amplitude().data().iter()) {
            assert!((p.norm() - a).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn project_data_zero_sample_takes_phase_zero() {
        let pitch = 40e-6;
        let field = ComplexField::zeros(8, 8, pitch).unwrap();
        let ones = RealImage::new(ndarray::Array2::from_elem((8, 8), 9.0), pitch).unwrap();
        let m = ScatterMeasurement::new(ones, 0.02).unwrap();
        let projected = project_data(&field, &m).unwrap();
        for v in projected.data().iter() {
            assert_eq!(*v, num_complex::Complex64::new(3.0, 0.0));
        }
    }

    #[test]
    fn constraints_fix_real_nonnegative_interior() {
        let config = test_config();
        let n = 128;
        let field = ComplexField::from_physical_fn(n, n, config.target_pitch, |x, y| {
            let inside = x.abs() < 15.0 * config.target_pitch
                && y.abs() < 15.0 * config.target_pitch;
            num_complex::Complex64::new(if inside { 0.8 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let constrained = apply_constraints(&field, &config).unwrap();
        assert_eq!(field, constrained);
    }

    #[test]
    fn constraints_take_modulus_of_imaginary_field() {
        // Oracle: |j g| = g for positive g.
        let config = test_config();
        let n = 128;
        let g = 0.6;
        let field = ComplexField::from_physical_fn(n, n, config.target_pitch, |x, y| {
            let inside = x.abs() < 10.0 * config.target_pitch
                && y.abs() < 10.0 * config.target_pitch;
            num_complex::Complex64::new(0.0, if inside { g } else { 0.0 })
        })
        .unwrap();
        let constrained = apply_constraints(&field, &config).unwrap();
        let (cy, cx) = constrained.center();
        assert!((constrained.data()[(cy, cx)].re - g).abs() < 1e-15);
        assert_eq!(constrained.data()[(cy, cx)].im, 0.0);
    }

    #[test]
    fn constraints_window_only_when_realness_off() {
        let mut config = test_config();
        config.realness_constraint = false;
        let n = 128;
        let field = ComplexField::from_physical_fn(n, n, config.target_pitch, |_, _| {
            num_complex::Complex64::new(0.3, -0.4)
        })
        .unwrap();
        let constrained = apply_constraints(&field, &config).unwrap();
        let (cy, cx) = constrained.center();
        assert_eq!(constrained.data()[(cy, cx)], num_complex::Complex64::new(0.3, -0.4));
    }

    #[test]
    fn retrieval_is_deterministic() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02, 0.025]);
        let a = run_retrieval(&ms, &config).unwrap();
        let b = run_retrieval(&ms, &config).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.per_iteration_residual(), b.per_iteration_residual());
    }

    #[test]
    fn residual_log_has_expected_shape() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02, 0.025]);
        let result = run_retrieval(&ms, &config).unwrap();
        assert_eq!(result.iterations_run, config.iterations);
        assert_eq!(result.log.len(), config.iterations * ms.len());
        assert!(result.log.iter().all(|r| r.residual >= 0.0));
        // Every iteration visits every plane exactly once.
        for it in 0..config.iterations {
            let mut planes: Vec<usize> =
                result.log.iter().filter(|r| r.iteration == it).map(|r| r.plane).collect();
            planes.sort_unstable();
            assert_eq!(planes, vec![0, 1]);
        }
    }

    #[test]
    fn estimate_satisfies_constraints() {
        let config = test_config();
        let (_, ms) = synthetic_scene(&config, &[0.02, 0.025]);
        let result = run_retrieval(&ms, &config).unwrap();
        let est = &result.estimate;
        let (cy, cx) = est.center();
        for ((r, c), v) in est.data().indexed_iter() {
            let mx = (c as f64 - cx as f64).abs() / config.support_a as f64;
            let my = (r as f64 - cy as f64).abs() / config.support_b as f64;
            if mx > 0.5 || my > 0.5 {
                assert_eq!(*v, num_complex::Complex64::ZERO);
            }
            assert!(v.im == 0.0 && v.re >= 0.0, "realness violated at ({r},{c})");
        }
    }

    #[test]
    fn residuals_shrink_on_noise_free_data() {
        let mut config = test_config();
        config.iterations = 12;
        let (_, ms) = synthetic_scene(&config, &[0.02, 0.025]);
        let result = run_retrieval(&ms, &config).unwrap();
        let first = result.mean_residual(0);
        let last = result.mean_residual(config.iterations - 1);
        assert!(last < first, "mean residual went {first} -> {last}");
    }

    #[test]
    fn true_phase_initialization_is_a_fixed_point() {
        // Error reduction cannot move off the true solution: with the
        // exact field as the starting point (beta = 1 so propagation
        // round-trips are exact on the passband) every residual stays at
        // the noise floor.
        let mut config = test_config();
        config.resample_ratio = 1.0;
        config.iterations = 5;
        config.support_a = 80;
        config.support_b = 80;
        let n = 128;
        let sigma = 80e-6;
        let target = ComplexField::from_physical_fn(n, n, config.target_pitch, |x, y| {
            num_complex::Complex64::new((-(x * x + y * y) / (sigma * sigma)).exp(), 0.0)
        })
        .unwrap();
        let ms: Vec<ScatterMeasurement> = [0.02, 0.024]
            .iter()
            .map(|&z| {
                let plan =
                    PropagationPlan::new(LAMBDA, z, config.target_pitch, n, 1.0).unwrap();
                let psi = masm_propagate(&target, &plan).unwrap();
                ScatterMeasurement::new(psi.intensity(), z).unwrap()
            })
            .collect();
        let result = run_retrieval_from(target.clone(), &ms, &config).unwrap();
        for r in &result.log {
            assert!(r.residual < 1e-9, "residual {} at iteration {}", r.residual, r.iteration);
        }
        let diff: f64 = result
            .estimate
            .data()
            .iter()
            .zip(target.data().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / target.data().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff < 1e-9, "estimate moved {diff} from the fixed point");
    }

    #[test]
    fn empty_measurement_list_is_rejected() {
        let config = test_config();
        assert!(run_retrieval(&[], &config).is_err());
    }

    #[test]
    fn zero_iterations_rejected() {
        let mut config = test_config();
        config.iterations = 0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn mismatched_measurement_grids_rejected() {
        let config = test_config();
        let pitch = config.target_pitch / config.resample_ratio;
        let a = ScatterMeasurement::new(RealImage::zeros(32, 32, pitch).unwrap(), 0.02).unwrap();
        let b = ScatterMeasurement::new(RealImage::zeros(16, 16, pitch).unwrap(), 0.03).unwrap();
        assert!(run_retrieval(&[a, b], &config).is_err());
    }

    #[test]
    fn shuffle_stream_is_independent_of_init() {
        // Same seed, different iteration counts: the initial estimate and
        // the early residuals must coincide.
        let mut c5 = test_config();
        c5.plane_order_shuffle = true;
        let mut c3 = c5;
        c3.iterations = 3;
        let (_, ms) = synthetic_scene(&c5, &[0.02, 0.025]);
        let r5 = run_retrieval(&ms, &c5).unwrap();
        let r3 = run_retrieval(&ms, &c3).unwrap();
        assert_eq!(&r5.per_iteration_residual()[..6], &r3.per_iteration_residual()[..]);
    }
}
