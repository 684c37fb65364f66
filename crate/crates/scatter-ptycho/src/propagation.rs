//! Scalar-diffraction propagation: single-stage band-limited angular
//! spectrum method (ASM) and the multistage variant (MASM) that interleaves
//! propagation with bicubic resampling as the field's usable bandwidth
//! shrinks (forward) or grows (backward).

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{resample_bicubic_to, ComplexField};

/// Hard cap on working grids; anything larger signals a mis-sized scene.
pub const MAX_GRID: usize = 8192;

/// Everything needed to run one forward MASM propagation: wavelength,
/// signed distance, the target-plane sampling, the working grid size, the
/// total resampling ratio and the distances at which resampling happens.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPlan {
    wavelength: f64,
    distance: f64,
    input_pitch: f64,
    grid_size: usize,
    resample_ratio: f64,
    stage_boundaries: Vec<f64>,
}

/// One ASM hop at a fixed sampling, optionally followed by a resample.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    /// Signed hop length in meters.
    pub distance: f64,
    /// Grid size during the hop.
    pub size: usize,
    /// Sample pitch during the hop, meters.
    pub pitch: f64,
    /// Grid size and pitch after the post-hop resample, if any.
    pub resample_to: Option<(usize, f64)>,
}

/// Distance at which the anti-aliasing band limit of an `extent`-wide grid
/// falls to the reduced Nyquist rate `ratio / (2 pitch)`: resampling before
/// this point aliases content the grid still legitimately carries, after it
/// the downsampled grid loses nothing further.
pub fn nyquist_drop_distance(extent: f64, pitch: f64, wavelength: f64, ratio: f64) -> f64 {
    let q = 2.0 * pitch / (ratio * wavelength);
    0.5 * extent * (q * q - 1.0).max(0.0).sqrt()
}

impl PropagationPlan {
    /// Builds a plan with the default stage rule: one resampling stage at
    /// the distance where the field's usable bandwidth has dropped to the
    /// output Nyquist rate ([`nyquist_drop_distance`]), clamped to the end
    /// of the propagation (a terminal resample) when the bandwidth never
    /// drops that far in flight. With `ratio = 1` the plan degenerates to
    /// plain ASM.
    pub fn new(
        wavelength: f64,
        distance: f64,
        input_pitch: f64,
        grid_size: usize,
        resample_ratio: f64,
    ) -> Result<Self> {
        let boundaries = if resample_ratio < 1.0 && distance > 0.0 {
            let extent = grid_size as f64 * input_pitch;
            let drop = nyquist_drop_distance(extent, input_pitch, wavelength, resample_ratio);
            vec![drop.min(distance).max(distance * 1e-6)]
        } else {
            Vec::new()
        };
        Self::with_stage_boundaries(
            wavelength,
            distance,
            input_pitch,
            grid_size,
            resample_ratio,
            boundaries,
        )
    }

    /// Builds a plan with explicit resampling distances. Each boundary must
    /// lie in `(0, distance]` (a boundary at `distance` itself is a
    /// terminal resample); with `k` boundaries every resample applies
    /// `ratio^(1/k)` so the total comes out to `ratio`.
    pub fn with_stage_boundaries(
        wavelength: f64,
        distance: f64,
        input_pitch: f64,
        grid_size: usize,
        resample_ratio: f64,
        stage_boundaries: Vec<f64>,
    ) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::invalid(format!("wavelength must be > 0, got {wavelength}")));
        }
        if !(input_pitch.is_finite() && input_pitch > 0.0) {
            return Err(Error::invalid(format!("pitch must be > 0, got {input_pitch}")));
        }
        if grid_size < 4 {
            return Err(Error::invalid(format!("grid size must be at least 4, got {grid_size}")));
        }
        if grid_size > MAX_GRID {
            return Err(Error::invalid(format!(
                "grid size {grid_size} exceeds the {MAX_GRID} cap"
            )));
        }
        if !(resample_ratio > 0.0 && resample_ratio <= 1.0) {
            return Err(Error::invalid(format!(
                "resample ratio must be in (0, 1], got {resample_ratio}"
            )));
        }
        if !distance.is_finite() || distance < 0.0 {
            return Err(Error::invalid(format!(
                "plan distance must be finite and >= 0, got {distance}"
            )));
        }
        if resample_ratio < 1.0 && stage_boundaries.is_empty() && distance == 0.0 {
            return Err(Error::invalid("ratio < 1 requires a positive distance"));
        }
        let mut prev = 0.0;
        for &b in &stage_boundaries {
            if !(b > prev && b <= distance) {
                return Err(Error::invalid(format!(
                    "stage boundaries must be strictly monotone inside (0, {distance}]"
                )));
            }
            prev = b;
        }
        // The per-stage ratio must keep every intermediate grid non-degenerate.
        if !stage_boundaries.is_empty() {
            let r = resample_ratio.powf(1.0 / stage_boundaries.len() as f64);
            let mut size = grid_size as f64;
            for _ in &stage_boundaries {
                size = (r * size).round();
                if size < 4.0 {
                    return Err(Error::invalid(
                        "resampling would produce a grid smaller than 4x4",
                    ));
                }
            }
        }
        Ok(Self {
            wavelength,
            distance,
            input_pitch,
            grid_size,
            resample_ratio,
            stage_boundaries,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn input_pitch(&self) -> f64 {
        self.input_pitch
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn resample_ratio(&self) -> f64 {
        self.resample_ratio
    }

    pub fn stage_boundaries(&self) -> &[f64] {
        &self.stage_boundaries
    }

    /// The hop/resample chain executed by the forward propagation.
    pub fn stages(&self) -> Vec<Stage> {
        let k = self.stage_boundaries.len();
        let per_stage = if k == 0 { 1.0 } else { self.resample_ratio.powf(1.0 / k as f64) };
        let mut stages = Vec::with_capacity(k + 1);
        let mut size = self.grid_size;
        let mut pitch = self.input_pitch;
        let mut from = 0.0;
        for &b in &self.stage_boundaries {
            // Exact ratio for the single-stage default, root otherwise.
            let r = if k == 1 { self.resample_ratio } else { per_stage };
            let next_size = (r * size as f64).round() as usize;
            let next_pitch = pitch * size as f64 / next_size as f64;
            stages.push(Stage {
                distance: b - from,
                size,
                pitch,
                resample_to: Some((next_size, next_pitch)),
            });
            size = next_size;
            pitch = next_pitch;
            from = b;
        }
        stages.push(Stage {
            distance: self.distance - from,
            size,
            pitch,
            resample_to: None,
        });
        stages
    }

    /// Grid size of the scatter-plane output.
    pub fn output_size(&self) -> usize {
        self.stages().last().unwrap().size
    }

    /// Sample pitch of the scatter-plane output (`input_pitch / ratio` up
    /// to the integer rounding of the stage grids).
    pub fn output_pitch(&self) -> f64 {
        self.stages().last().unwrap().pitch
    }
}

/// Smallest power-of-two working grid that contains `content_extent`
/// (meters) plus the diffraction spread of frequencies up to the output
/// Nyquist `ratio / (2 pitch)` over `distance`.
pub fn required_grid_size(
    content_extent: f64,
    pitch: f64,
    wavelength: f64,
    distance: f64,
    ratio: f64,
) -> usize {
    let spread = wavelength * distance.abs() * ratio / pitch;
    let samples = ((content_extent + spread) / pitch).ceil().max(4.0) as usize;
    samples.next_power_of_two()
}

/// The discrete angular-spectrum transfer function on an `n x n` grid of
/// pitch `pitch`: `exp(j 2 pi z sqrt(1/lambda^2 - u^2 - v^2))` on
/// propagating components, exactly zero on evanescent ones and beyond the
/// anti-aliasing bound of the sampled chirp (the band-limited-ASM
/// criterion `|u| <= 1 / (lambda sqrt((2 z du)^2 + 1))` per axis, without
/// which the kernel wraps around on long hops).
pub fn transfer_function(n: usize, pitch: f64, wavelength: f64, z: f64) -> Array2<Complex64> {
    let du = 1.0 / (n as f64 * pitch);
    let inv_l2 = 1.0 / (wavelength * wavelength);
    let u_limit = 1.0 / (wavelength * (1.0 + (2.0 * z.abs() * du).powi(2)).sqrt());
    Array2::from_shape_fn((n, n), |(r, c)| {
        let v = fft::signed_index(r, n) * du;
        let u = fft::signed_index(c, n) * du;
        if u.abs() > u_limit || v.abs() > u_limit {
            return Complex64::ZERO;
        }
        let w2 = inv_l2 - u * u - v * v;
        if w2 <= 0.0 {
            return Complex64::ZERO;
        }
        Complex64::from_polar(1.0, 2.0 * PI * z * w2.sqrt())
    })
}

fn apply_kernel(data: &mut Array2<Complex64>, kernel: &Array2<Complex64>, conjugate: bool) {
    if conjugate {
        ndarray::Zip::from(data).and(kernel).for_each(|d, k| *d *= k.conj());
    } else {
        ndarray::Zip::from(data).and(kernel).for_each(|d, k| *d *= k);
    }
}

/// Single-stage band-limited angular spectrum propagation over a signed
/// distance `z` (negative backpropagates). Output pitch and grid equal the
/// input's; `z = 0` is the identity up to DFT round-trip error.
pub fn asm_propagate(field: &ComplexField, wavelength: f64, z: f64) -> Result<ComplexField> {
    if field.height() != field.width() {
        return Err(Error::invalid(format!(
            "ASM needs a square grid, got {}x{}",
            field.height(),
            field.width()
        )));
    }
    if field.height() < 4 {
        return Err(Error::invalid("ASM grid must be at least 4x4"));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::invalid(format!("wavelength must be > 0, got {wavelength}")));
    }
    let kernel = transfer_function(field.height(), field.pitch(), wavelength, z);
    let mut data = field.data().clone();
    fft::fft2(&mut data);
    apply_kernel(&mut data, &kernel, false);
    fft::ifft2(&mut data);
    ComplexField::new(data, field.pitch())
}

/// A plan with its transfer-function kernels built once, for repeated
/// forward/inverse propagation (phase retrieval visits each plan hundreds
/// of times). Kernels are shared read-only; the inverse direction reuses
/// the forward kernels conjugated, so round trips cancel bitwise on the
/// passband.
pub struct Propagator {
    plan: PropagationPlan,
    stages: Vec<Stage>,
    kernels: Vec<Array2<Complex64>>,
}

impl Propagator {
    pub fn new(plan: PropagationPlan) -> Self {
        let stages = plan.stages();
        let kernels = stages
            .iter()
            .map(|s| transfer_function(s.size, s.pitch, plan.wavelength(), s.distance))
            .collect();
        Self { plan, stages, kernels }
    }

    pub fn plan(&self) -> &PropagationPlan {
        &self.plan
    }

    fn check_input(&self, field: &ComplexField, size: usize, pitch: f64, what: &str) -> Result<()> {
        if field.height() > size || field.width() > size {
            return Err(Error::mismatch(format!(
                "{what} field {}x{} exceeds plan grid {size}",
                field.height(),
                field.width()
            )));
        }
        if ((field.pitch() - pitch) / pitch).abs() > 1e-9 {
            return Err(Error::mismatch(format!(
                "{what} pitch {} does not match plan pitch {pitch}",
                field.pitch()
            )));
        }
        Ok(())
    }

    /// Forward multistage propagation: pads to the plan grid, then hops and
    /// downsamples stage by stage. Output grid is `~ratio * grid_size` at
    /// pitch `input_pitch / ratio`.
    pub fn propagate(&self, field: &ComplexField) -> Result<ComplexField> {
        self.check_input(field, self.plan.grid_size(), self.plan.input_pitch(), "target")?;
        let mut current = field.resized(self.plan.grid_size(), self.plan.grid_size())?;
        for (stage, kernel) in self.stages.iter().zip(&self.kernels) {
            // A zero-length hop (terminal resample) is the identity.
            if stage.distance != 0.0 {
                let mut data = current.into_data();
                fft::fft2(&mut data);
                apply_kernel(&mut data, kernel, false);
                fft::ifft2(&mut data);
                current = ComplexField::new(data, stage.pitch)?;
            }
            if let Some((size, _)) = stage.resample_to {
                current = resample_bicubic_to(&current, size, size)?;
            }
        }
        Ok(current)
    }

    /// Inverse multistage propagation: upsamples and backpropagates in
    /// reverse stage order, returning to the target grid and pitch.
    pub fn inverse(&self, field: &ComplexField) -> Result<ComplexField> {
        let last = self.stages.last().unwrap();
        let (out_size, out_pitch) = last.resample_to.unwrap_or((last.size, last.pitch));
        self.check_input(field, out_size, out_pitch, "scatter")?;
        let mut current = field.resized(out_size, out_size)?;
        for (stage, kernel) in self.stages.iter().zip(&self.kernels).rev() {
            if stage.resample_to.is_some() {
                current = resample_bicubic_to(&current, stage.size, stage.size)?;
            }
            let mut data = current.into_data();
            fft::fft2(&mut data);
            apply_kernel(&mut data, kernel, true);
            fft::ifft2(&mut data);
            current = ComplexField::new(data, stage.pitch)?;
        }
        Ok(current)
    }
}

/// Forward MASM propagation of `field` under `plan` (one-shot; builds the
/// kernels on the fly). See [`Propagator`] for the reusable form.
pub fn masm_propagate(field: &ComplexField, plan: &PropagationPlan) -> Result<ComplexField> {
    if plan.distance() <= 0.0 && plan.resample_ratio() < 1.0 {
        return Err(Error::invalid("forward MASM requires a positive distance"));
    }
    Propagator::new(plan.clone()).propagate(field)
}

/// Inverse MASM propagation of a scatter-plane field back to the target
/// plane under the same forward `plan`.
pub fn masm_inverse(field: &ComplexField, plan: &PropagationPlan) -> Result<ComplexField> {
    Propagator::new(plan.clone()).inverse(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    const LAMBDA: f64 = 532e-9;

    fn random_field(n: usize, pitch: f64, seed: u64) -> ComplexField {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let data = Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ComplexField::new(data, pitch).unwrap()
    }

    fn nrmse(a: &ComplexField, b: &ComplexField) -> f64 {
        let num: f64 =
            a.data().iter().zip(b.data().iter()).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.data().iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    // Confine the spectrum inside a fraction of the tightest kernel bound so
    // every component propagates with |H| = 1.
    fn confine(field: &ComplexField, wavelength: f64, z: f64, frac: f64) -> ComplexField {
        let n = field.height();
        let du = 1.0 / (n as f64 * field.pitch());
        let u_limit = 1.0 / (wavelength * (1.0 + (2.0 * z.abs() * du).powi(2)).sqrt());
        let cut = frac * u_limit.min(1.0 / (2.0 * field.pitch()));
        let mut spec = field.data().clone();
        fft::fft2(&mut spec);
        for ((r, c), v) in spec.indexed_iter_mut() {
            let fv = fft::signed_index(r, n) * du;
            let fu = fft::signed_index(c, n) * du;
            if fu.abs() > cut || fv.abs() > cut {
                *v = Complex64::ZERO;
            }
        }
        fft::ifft2(&mut spec);
        ComplexField::new(spec, field.pitch()).unwrap()
    }

    #[test]
    fn zero_distance_is_identity() {
        let f = random_field(64, 10e-6, 1);
        let p = asm_propagate(&f, LAMBDA, 0.0).unwrap();
        assert!(nrmse(&p, &f) < 1e-12);
    }

    #[test]
    fn backpropagation_inverts_forward() {
        let f = confine(&random_field(128, 10e-6, 2), LAMBDA, 0.04, 0.9);
        let fwd = asm_propagate(&f, LAMBDA, 0.04).unwrap();
        let back = asm_propagate(&fwd, LAMBDA, -0.04).unwrap();
        assert!(nrmse(&back, &f) < 1e-10);
    }

    #[test]
    fn group_law_composes() {
        let (z1, z2) = (3e-3, 5e-3);
        let f = confine(&random_field(128, 10e-6, 3), LAMBDA, z1 + z2, 0.9);
        let once = asm_propagate(&f, LAMBDA, z1 + z2).unwrap();
        let twice =
            asm_propagate(&asm_propagate(&f, LAMBDA, z1).unwrap(), LAMBDA, z2).unwrap();
        assert!(nrmse(&twice, &once) < 1e-9);
    }

    #[test]
    fn energy_conserved_on_passband() {
        let f = confine(&random_field(128, 10e-6, 4), LAMBDA, 0.1, 0.9);
        let p = asm_propagate(&f, LAMBDA, 0.1).unwrap();
        let rel = (p.energy() - f.energy()).abs() / f.energy();
        assert!(rel < 1e-10, "relative energy drift {rel}");
    }

    #[test]
    fn kernel_magnitude_is_zero_or_one() {
        let h = transfer_function(64, 10e-6, LAMBDA, 0.2);
        let mut passband = 0usize;
        for v in h.iter() {
            let m = v.norm();
            assert!(m == 0.0 || (m - 1.0).abs() < 1e-15, "|H| = {m}");
            if m != 0.0 {
                passband += 1;
            }
        }
        assert!(passband > 0);
    }

    #[test]
    fn kernel_zeroes_evanescent_components() {
        // Pitch below half a wavelength puts grid corners past 1/lambda.
        let h = transfer_function(32, 0.2e-6, LAMBDA, 1e-3);
        let du = 1.0 / (32.0 * 0.2e-6);
        for ((r, c), v) in h.indexed_iter() {
            let fv = fft::signed_index(r, 32) * du;
            let fu = fft::signed_index(c, 32) * du;
            if fu * fu + fv * fv >= 1.0 / (LAMBDA * LAMBDA) {
                assert_eq!(*v, Complex64::ZERO);
            }
        }
    }

    #[test]
    fn gaussian_beam_matches_analytic_solution() {
        // Oracle: closed-form paraxial Gaussian-beam propagation. The beam
        // is deeply paraxial (divergence ~ 1e-3 rad) so the non-paraxial
        // correction is below 1e-7.
        let n = 256;
        let pitch = 10e-6;
        let w0 = 200e-6;
        let z = 0.05;
        let f = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            Complex64::new((-(x * x + y * y) / (w0 * w0)).exp(), 0.0)
        })
        .unwrap();
        let propagated = asm_propagate(&f, LAMBDA, z).unwrap();

        let k = 2.0 * PI / LAMBDA;
        let zr = PI * w0 * w0 / LAMBDA;
        let wz = w0 * (1.0 + (z / zr).powi(2)).sqrt();
        let rz = z * (1.0 + (zr / z).powi(2));
        let gouy = (z / zr).atan();
        let oracle = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            let r2 = x * x + y * y;
            let amp = w0 / wz * (-r2 / (wz * wz)).exp();
            let phase = k * z + k * r2 / (2.0 * rz) - gouy;
            Complex64::from_polar(amp, phase)
        })
        .unwrap();

        let err = nrmse(&propagated, &oracle);
        assert!(err < 1e-4, "Gaussian beam NRMSE {err}");
    }

    #[test]
    fn circular_aperture_first_zero_matches_airy_radius() {
        // Oracle: the Airy pattern first zero at 1.22 lambda z / D. The
        // aperture edge is area-weighted so the effective diameter is not
        // quantized to the grid.
        let n = 2048;
        let pitch = 7.5e-6;
        let d = 0.6e-3;
        let z = 3.0;
        let f = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            let r_out = (x * x + y * y).sqrt() - d / 2.0;
            let cover = (0.5 - r_out / pitch).clamp(0.0, 1.0);
            Complex64::new(cover, 0.0)
        })
        .unwrap();
        let psi = asm_propagate(&f, LAMBDA, z).unwrap();

        // Radial profile along +x through the center. The finite Fresnel
        // number leaves percent-level ripples on the main lobe, so only a
        // deep minimum counts as the first zero.
        let (cy, cx) = psi.center();
        let profile: Vec<f64> =
            (0..n / 2).map(|i| psi.data()[(cy, cx + i)].norm_sqr()).collect();
        let floor = 0.02 * profile[0];
        let first_min = (1..n / 2 - 1)
            .find(|&i| {
                profile[i] < floor && profile[i] < profile[i - 1] && profile[i] <= profile[i + 1]
            })
            .expect("no minimum found") as f64
            * pitch;

        let airy = 1.22 * LAMBDA * z / d;
        assert!(
            (first_min - airy).abs() <= pitch,
            "first zero at {first_min}, Airy radius {airy}, pitch {pitch}"
        );
    }

    #[test]
    fn masm_with_unit_ratio_equals_asm() {
        let f = random_field(64, 10e-6, 5);
        let plan = PropagationPlan::new(LAMBDA, 0.02, 10e-6, 64, 1.0).unwrap();
        let via_masm = masm_propagate(&f, &plan).unwrap();
        let via_asm = asm_propagate(&f, LAMBDA, 0.02).unwrap();
        assert!(nrmse(&via_masm, &via_asm) < 1e-12);
        assert_eq!(via_masm.pitch(), f.pitch());
    }

    #[test]
    fn masm_output_pitch_follows_ratio() {
        let plan = PropagationPlan::new(LAMBDA, 0.1, 10e-6, 64, 0.25).unwrap();
        assert_eq!(plan.output_size(), 16);
        assert!((plan.output_pitch() - 40e-6).abs() < 1e-18);
        assert_eq!(plan.stage_boundaries(), &[0.025]);
    }

    #[test]
    fn masm_matches_single_stage_asm_plus_terminal_resample() {
        // Oracle: plain ASM over the whole distance followed by one
        // terminal resample.
        let n = 256;
        let pitch = 10e-6;
        let beta = 0.25;
        let z = 0.08;
        let blob = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            let r2 = x * x + y * y;
            Complex64::new((-r2 / (120e-6f64).powi(2)).exp(), 0.0)
        })
        .unwrap();
        let f = confine(&blob, LAMBDA, z, 0.2);

        let plan = PropagationPlan::new(LAMBDA, z, pitch, n, beta).unwrap();
        let multi = masm_propagate(&f, &plan).unwrap();

        let single = asm_propagate(&f, LAMBDA, z).unwrap();
        let single = resample_bicubic_to(&single, plan.output_size(), plan.output_size()).unwrap();

        assert!((multi.pitch() - single.pitch()).abs() < 1e-18);
        let err = nrmse(&multi, &single);
        assert!(err < 1e-2, "MASM vs ASM+resample NRMSE {err}");
    }

    #[test]
    fn masm_inverse_roundtrip_on_band_limited_target() {
        let n = 256;
        let pitch = 10e-6;
        let z = 0.08;
        let blob = ComplexField::from_physical_fn(n, n, pitch, |x, y| {
            Complex64::new((-(x * x + y * y) / (150e-6f64).powi(2)).exp(), 0.0)
        })
        .unwrap();
        let f = confine(&blob, LAMBDA, z, 0.12);
        let plan = PropagationPlan::new(LAMBDA, z, pitch, n, 0.25).unwrap();
        let back = masm_inverse(&masm_propagate(&f, &plan).unwrap(), &plan).unwrap();
        assert_eq!(back.height(), n);
        assert!((back.pitch() - pitch).abs() < 1e-18);
        let err = nrmse(&back, &f);
        assert!(err < 1e-2, "MASM round-trip NRMSE {err}");
    }

    #[test]
    fn masm_inverse_of_zeros_is_zeros() {
        let plan = PropagationPlan::new(LAMBDA, 0.1, 10e-6, 64, 0.25).unwrap();
        let zeros = ComplexField::zeros(16, 16, plan.output_pitch()).unwrap();
        let back = masm_inverse(&zeros, &plan).unwrap();
        assert!(back.data().iter().all(|v| *v == Complex64::ZERO));
    }

    #[test]
    fn plan_rejects_bad_boundaries() {
        assert!(PropagationPlan::with_stage_boundaries(LAMBDA, 0.1, 1e-5, 64, 0.25, vec![0.2])
            .is_err());
        assert!(PropagationPlan::with_stage_boundaries(
            LAMBDA,
            0.1,
            1e-5,
            64,
            0.25,
            vec![0.05, 0.03]
        )
        .is_err());
    }

    #[test]
    fn asm_rejects_non_square() {
        let f = ComplexField::zeros(8, 16, 1e-5).unwrap();
        assert!(asm_propagate(&f, LAMBDA, 0.01).is_err());
    }

    #[test]
    fn required_grid_covers_paper_footprint() {
        // 5 mm target, 10 um pitch, beta 0.25 over 2.654 m needs the 4096 grid.
        let n = required_grid_size(5e-3, 10e-6, LAMBDA, 2.654, 0.25);
        assert_eq!(n, 4096);
    }
}
