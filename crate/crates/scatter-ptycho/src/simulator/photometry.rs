//! Resolution and photon-budget formulas for the scatter imaging geometry.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::OpticsGeometry;
use crate::error::{Error, Result};

/// Photometric quantities bounding the achievable scatter aperture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonBudget {
    /// Fraction of the radiant power that is scattered (sigma, <= 1).
    pub scatter_fraction: f64,
    /// Exposure time in seconds (T).
    pub exposure_time: f64,
    /// Source power in photons per second (L).
    pub source_power: f64,
    /// Illumination density on the target, photons / s / m^2 (P).
    pub illumination_density: f64,
    /// Minimum photon count for a detectable feature (N_p).
    pub min_detectable_photons: f64,
}

impl PhotonBudget {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.scatter_fraction,
            self.exposure_time,
            self.source_power,
            self.illumination_density,
            self.min_detectable_photons,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("photon budget entries must be positive"));
        }
        if self.scatter_fraction > 1.0 {
            return Err(Error::invalid("scatter fraction cannot exceed 1"));
        }
        Ok(())
    }
}

/// Resolution improvement of scatter imaging over the direct view:
/// `alpha = pixel_pitch * scatter_extent * camera_range / (wavelength *
/// scatter_range * focal_length)`. Identically equal to
/// [`direct_view_ifov`] / [`resolution_limit`].
pub fn alpha_factor(g: &OpticsGeometry) -> f64 {
    g.pixel_pitch * g.scatter_extent * g.range_camera_target
        / (g.wavelength * g.range_target_scatter * g.focal_length)
}

/// Minimum resolvable target feature via the scatter:
/// `wavelength * scatter_range / scatter_extent` (meters).
pub fn resolution_limit(g: &OpticsGeometry) -> f64 {
    g.wavelength * g.range_target_scatter / g.scatter_extent
}

/// Ground sample distance of a direct-view pixel on the target:
/// `pixel_pitch * camera_range / focal_length` (meters).
pub fn direct_view_ifov(g: &OpticsGeometry) -> f64 {
    g.pixel_pitch * g.range_camera_target / g.focal_length
}

/// Ground sample distance of a camera pixel on the scatter screen:
/// `pixel_pitch * scatter_camera_range / focal_length` (meters).
pub fn screen_sample_distance(g: &OpticsGeometry) -> f64 {
    g.pixel_pitch * g.range_scatter_camera / g.focal_length
}

/// Maximum reconstructed field of view, `camera_aperture /
/// scatter_camera_range`, in radians at the target plane (multiply by the
/// target-to-scatter range for the linear extent).
pub fn fov_on_target(g: &OpticsGeometry) -> f64 {
    g.camera_aperture / g.range_scatter_camera
}

/// Photon-budget upper bound on the resolution improvement factor when the
/// illumination is itself diffraction-limited by the observing aperture:
/// three factors — pixel pitch over the diffraction limit, camera field of
/// view on the scatter, and the inverse root of the photon collection
/// efficiency.
pub fn alpha_bound(g: &OpticsGeometry, budget: &PhotonBudget) -> Result<f64> {
    budget.validate()?;
    let pitch_factor = g.pixel_pitch / (g.wavelength * g.f_number);
    let fov_factor = g.camera_aperture / (2.0 * g.range_scatter_camera);
    let flux = budget.scatter_fraction * budget.exposure_time * budget.source_power
        / (PI * budget.min_detectable_photons);
    Ok(pitch_factor * fov_factor * flux.sqrt())
}

/// Companion bound on the usable scatter cross-section given the
/// illumination density on the target:
/// `scatter_extent <= (wavelength * scatter_range * camera_aperture /
/// (2 * scatter_camera_range)) * sqrt(sigma T P / (pi N_p))`.
pub fn scatter_extent_bound(g: &OpticsGeometry, budget: &PhotonBudget) -> Result<f64> {
    budget.validate()?;
    let geom = g.wavelength * g.range_target_scatter * g.camera_aperture
        / (2.0 * g.range_scatter_camera);
    let flux = budget.scatter_fraction
        * budget.exposure_time
        * budget.illumination_density
        / (PI * budget.min_detectable_photons);
    Ok(geom * flux.sqrt())
}

/// Photon rate of a monochromatic source: `power * wavelength / (h c)`
/// photons per second.
///
/// A 1 kW source at 532 nm over 0.1 s delivers T*L ~ 2.7e20 photons; note
/// that quoting this at order-of-magnitude as 1e21 overstates the exact
/// count by roughly 4x.
pub fn photons_per_second(power_watts: f64, wavelength: f64) -> f64 {
    const H: f64 = 6.62607015e-34;
    const C: f64 = 2.99792458e8;
    power_watts * wavelength / (H * C)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::OpticsGeometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn bench_geometry() -> OpticsGeometry {
        OpticsGeometry::new(532e-9, 2.518, 2.654, 0.139, 37e-3, 12e-3, 6.9e-6, 1.6, None)
            .unwrap()
    }

    #[test]
    fn alpha_factor_on_bench_constants() {
        let a = alpha_factor(&bench_geometry());
        assert!((a - 38.0).abs() < 0.5, "alpha = {a}");
    }

    #[test]
    fn alpha_is_unity_when_constructed() {
        let mut g = bench_geometry();
        g.scatter_extent = g.wavelength * g.range_target_scatter * g.focal_length
            / (g.pixel_pitch * g.range_camera_target);
        assert!((alpha_factor(&g) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_is_linear_in_scatter_extent() {
        let mut g = bench_geometry();
        let a1 = alpha_factor(&g);
        g.scatter_extent *= 2.0;
        assert!((alpha_factor(&g) - 2.0 * a1).abs() < 1e-9);
    }

    #[test]
    fn resolution_limit_on_bench_constants() {
        let r = resolution_limit(&bench_geometry());
        assert!((r - 38.2e-6).abs() < 0.5e-6, "limit = {r}");
    }

    #[test]
    fn ifov_on_bench_constants() {
        let v = direct_view_ifov(&bench_geometry());
        assert!((v - 1.448e-3).abs() < 0.01e-3, "ifov = {v}");
    }

    #[test]
    fn screen_gsd_on_bench_constants() {
        let v = screen_sample_distance(&bench_geometry());
        assert!((v - 80e-6).abs() < 1e-6, "gsd = {v}");
    }

    #[test]
    fn fov_quotient() {
        let mut g = bench_geometry();
        let v = fov_on_target(&g);
        assert!((v - 0.054).abs() < 1e-3, "fov = {v}");
        g.camera_aperture = g.range_scatter_camera;
        assert!((fov_on_target(&g) - 1.0).abs() < 1e-15);
        g.range_scatter_camera *= 2.0;
        assert!((fov_on_target(&g) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_equals_ifov_over_resolution_limit_identically() {
        let mut rng = ChaCha12Rng::seed_from_u64(20);
        for _ in 0..200 {
            let g = OpticsGeometry::new(
                rng.gen_range(0.2e-6..2e-6),
                rng.gen_range(0.1..100.0),
                rng.gen_range(0.1..100.0),
                rng.gen_range(0.01..10.0),
                rng.gen_range(1e-3..1.0),
                rng.gen_range(1e-3..0.5),
                rng.gen_range(1e-6..20e-6),
                rng.gen_range(0.9..22.0),
                None,
            )
            .unwrap();
            let lhs = alpha_factor(&g);
            let rhs = direct_view_ifov(&g) / resolution_limit(&g);
            assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_bound_constructed_unity() {
        let g = bench_geometry();
        // Choose sigma*T*L so that the flux factor is exactly 1, and undo
        // the two geometric factors.
        let budget = PhotonBudget {
            scatter_fraction: 1.0,
            exposure_time: 1.0,
            source_power: PI
                * (2.0 * g.range_scatter_camera / g.camera_aperture).powi(2)
                * (g.wavelength * g.f_number / g.pixel_pitch).powi(2),
            illumination_density: 1.0,
            min_detectable_photons: 1.0,
        };
        let a = alpha_bound(&g, &budget).unwrap();
        assert!((a - 1.0).abs() < 1e-12, "bound = {a}");
    }

    #[test]
    fn alpha_bound_flux_order_of_magnitude() {
        let g = bench_geometry();
        let budget = PhotonBudget {
            scatter_fraction: 0.1,
            exposure_time: 1.0,
            source_power: 1e21,
            illumination_density: 1.0,
            min_detectable_photons: 1e5,
        };
        let flux = (budget.scatter_fraction * budget.exposure_time * budget.source_power
            / (PI * budget.min_detectable_photons))
            .sqrt();
        assert!((flux / 1.8e7 - 1.0).abs() < 0.02, "flux factor = {flux:e}");
        assert!(alpha_bound(&g, &budget).unwrap() > 1.0);
    }

    #[test]
    fn photon_count_oracle() {
        // Oracle: E = h c / lambda per photon.
        let rate = photons_per_second(1000.0, 532e-9);
        let tl = rate * 0.1;
        assert!((tl / 2.678e20 - 1.0).abs() < 1e-3, "TL = {tl:e}");
    }

    #[test]
    fn budget_validation() {
        let mut b = PhotonBudget {
            scatter_fraction: 0.5,
            exposure_time: 0.1,
            source_power: 1e20,
            illumination_density: 1e15,
            min_detectable_photons: 1e5,
        };
        assert!(b.validate().is_ok());
        b.scatter_fraction = 1.5;
        assert!(b.validate().is_err());
        b.scatter_fraction = -0.1;
        assert!(b.validate().is_err());
    }
}
