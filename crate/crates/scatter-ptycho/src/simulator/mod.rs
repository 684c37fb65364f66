//! Forward model and photometry: synthetic targets, propagation to scatter
//! planes, camera-geometry projection, shot noise and the resolution /
//! photon-budget formulas.

mod noise;
mod photometry;
mod target;

pub use noise::add_poisson_noise;
pub use photometry::{
    alpha_bound, alpha_factor, direct_view_ifov, fov_on_target, photons_per_second,
    resolution_limit, scatter_extent_bound, screen_sample_distance, PhotonBudget,
};
pub use target::{
    bar_frequency_lp_mm, bar_width_m, make_target, TargetKind, TargetSpec, UsafElement,
    UsafLayout,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{resample_bicubic_real, ComplexField, RealImage};
use crate::propagation::{required_grid_size, PropagationPlan, MAX_GRID};
use crate::retrieval::ScatterMeasurement;

/// Scalar constants of the imaging system. All lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticsGeometry {
    /// Illumination wavelength (lambda).
    pub wavelength: f64,
    /// Camera-to-target range (R_c).
    pub range_camera_target: f64,
    /// Target-to-scatter range at the home stage position (R_s).
    pub range_target_scatter: f64,
    /// Scatter-to-camera range (R_sc).
    pub range_scatter_camera: f64,
    /// Cross-section of the observed scatter (A_s).
    pub scatter_extent: f64,
    /// Camera focal length (F).
    pub focal_length: f64,
    /// Detector pixel pitch (Delta).
    pub pixel_pitch: f64,
    /// Lens f-number.
    pub f_number: f64,
    /// Camera aperture (A_c); derived as `focal_length / f_number` when
    /// not supplied.
    pub camera_aperture: f64,
}

impl OpticsGeometry {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        wavelength: f64,
        range_camera_target: f64,
        range_target_scatter: f64,
        range_scatter_camera: f64,
        scatter_extent: f64,
        focal_length: f64,
        pixel_pitch: f64,
        f_number: f64,
        camera_aperture: Option<f64>,
    ) -> Result<Self> {
        let g = Self {
            wavelength,
            range_camera_target,
            range_target_scatter,
            range_scatter_camera,
            scatter_extent,
            focal_length,
            pixel_pitch,
            f_number,
            camera_aperture: camera_aperture.unwrap_or(focal_length / f_number),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wavelength", self.wavelength),
            ("range_camera_target", self.range_camera_target),
            ("range_target_scatter", self.range_target_scatter),
            ("range_scatter_camera", self.range_scatter_camera),
            ("scatter_extent", self.scatter_extent),
            ("focal_length", self.focal_length),
            ("pixel_pitch", self.pixel_pitch),
            ("f_number", self.f_number),
            ("camera_aperture", self.camera_aperture),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Whether the detector sampling is consistent with the diffraction
    /// limit (`pixel_pitch >= wavelength * f_number`). Advisory only; a
    /// false return means the pixel pitch oversamples the lens spot.
    pub fn sampling_consistent(&self) -> bool {
        self.pixel_pitch >= self.wavelength * self.f_number
    }
}

/// Propagates `target` over `z` with a MASM plan sized for the diffraction
/// footprint and keeps only the intensity, exactly as a screen at the
/// scatter plane would record it. Deterministic and noise-free; all
/// stochasticity lives in [`add_poisson_noise`].
pub fn simulate_scatter_image(
    target: &ComplexField,
    z: f64,
    geometry: &OpticsGeometry,
    ratio: f64,
) -> Result<ScatterMeasurement> {
    geometry.validate()?;
    let plan = scatter_plan(target, z, geometry, ratio)?;
    simulate_with_plan(target, &plan)
}

/// Forward simulation on an explicit plan (several planes must share one
/// working grid to produce compatible measurements; see [`scatter_plans`]).
pub fn simulate_with_plan(target: &ComplexField, plan: &PropagationPlan) -> Result<ScatterMeasurement> {
    let psi = crate::propagation::masm_propagate(target, plan)?;
    ScatterMeasurement::new(psi.intensity(), plan.distance())
}

/// Plans for a set of scatter planes, harmonized to one working grid (the
/// largest any plane needs) so every measurement lands on the same scatter
/// grid.
pub fn scatter_plans(
    target: &ComplexField,
    distances: &[f64],
    geometry: &OpticsGeometry,
    ratio: f64,
) -> Result<Vec<PropagationPlan>> {
    if distances.is_empty() {
        return Err(Error::invalid("at least one plane distance is required"));
    }
    let per_plane: Vec<PropagationPlan> = distances
        .iter()
        .map(|&z| scatter_plan(target, z, geometry, ratio))
        .collect::<Result<_>>()?;
    let n = per_plane.iter().map(|p| p.grid_size()).max().unwrap();
    per_plane
        .into_iter()
        .map(|p| {
            PropagationPlan::new(p.wavelength(), p.distance(), p.input_pitch(), n, p.resample_ratio())
        })
        .collect()
}

/// The propagation plan [`simulate_scatter_image`] would use, exposed so a
/// reconstruction can mirror the forward grids exactly.
pub fn scatter_plan(
    target: &ComplexField,
    z: f64,
    geometry: &OpticsGeometry,
    ratio: f64,
) -> Result<PropagationPlan> {
    if !(z > 0.0) {
        return Err(Error::invalid(format!("scatter distance must be positive, got {z}")));
    }
    let extent = target.pitch() * target.width().max(target.height()) as f64;
    let n = required_grid_size(extent, target.pitch(), geometry.wavelength, z, ratio);
    if n > MAX_GRID {
        return Err(Error::invalid(format!(
            "scatter footprint needs a {n} grid, beyond the {MAX_GRID} cap (aliasing guard)"
        )));
    }
    PropagationPlan::new(geometry.wavelength, z, target.pitch(), n, ratio)
}

/// Projects a camera-frame capture onto screen coordinates: center-crops to
/// `crop x crop`, assigns the screen-plane pitch `pixel_pitch *
/// scatter_camera_range / focal_length`, and bicubically resamples onto the
/// retrieval grid pitch `scatter_pitch`. Pure pinhole magnification; no
/// distortion model.
pub fn project_camera_to_screen(
    raw: &RealImage,
    geometry: &OpticsGeometry,
    crop: usize,
    scatter_pitch: f64,
) -> Result<RealImage> {
    geometry.validate()?;
    if !(scatter_pitch.is_finite() && scatter_pitch > 0.0) {
        return Err(Error::invalid("scatter pitch must be positive"));
    }
    let cropped = raw.center_crop(crop)?;
    let screen_pitch = screen_sample_distance(geometry);
    let on_screen = cropped.with_pitch(screen_pitch)?;
    let out = (crop as f64 * screen_pitch / scatter_pitch).round() as usize;
    resample_bicubic_real(&on_screen, out, out)
}
