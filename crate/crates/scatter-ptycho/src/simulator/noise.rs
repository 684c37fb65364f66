//! Seeded Poisson shot noise for synthetic scatter measurements.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::field::RealImage;
use crate::retrieval::ScatterMeasurement;

/// Rescales the intensity so its spatial mean over the full grid equals
/// `mean_photons_per_pixel`, then replaces every pixel with a Poisson draw
/// of that expectation. The output is integer photon counts stored as
/// reals. The flux is quoted as a grid-wide mean because scatter intensity
/// is far from uniform; bright features see much more than the mean.
pub fn add_poisson_noise(
    measurement: &ScatterMeasurement,
    mean_photons_per_pixel: f64,
    seed: u64,
) -> Result<ScatterMeasurement> {
    if !(mean_photons_per_pixel.is_finite() && mean_photons_per_pixel >= 0.0) {
        return Err(Error::invalid(format!(
            "mean photons per pixel must be >= 0, got {mean_photons_per_pixel}"
        )));
    }
    let intensity = measurement.intensity();
    let total: f64 = intensity.sum();
    let npix = (intensity.height() * intensity.width()) as f64;
    if mean_photons_per_pixel == 0.0 || total == 0.0 {
        let zeros = RealImage::zeros(intensity.height(), intensity.width(), intensity.pitch())?;
        return ScatterMeasurement::new(zeros, measurement.distance());
    }
    let scale = mean_photons_per_pixel * npix / total;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let data = intensity.data().mapv(|v| {
        let lambda = v * scale;
        if lambda > 0.0 {
            Poisson::new(lambda).expect("positive mean").sample(&mut rng)
        } else {
            0.0
        }
    });
    ScatterMeasurement::new(RealImage::new(data, intensity.pitch())?, measurement.distance())
}
