//! Human-editable pipeline configuration: a flat, sectioned TOML file with
//! units spelled out in every key name (wavelength_nm, r_s_mm, ...), so a
//! unit mistake is visible in the file itself.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::retrieval::RetrievalConfig;
use crate::simulator::{OpticsGeometry, TargetKind, TargetSpec};

/// On-disk form of the full pipeline configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub geometry: GeometrySection,
    pub target: TargetSection,
    pub planes: PlanesSection,
    pub retrieval: RetrievalSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySection {
    pub wavelength_nm: f64,
    pub r_c_mm: f64,
    pub r_s_mm: f64,
    pub r_sc_mm: f64,
    pub scatter_extent_mm: f64,
    pub focal_length_mm: f64,
    pub pixel_pitch_um: f64,
    pub f_number: f64,
    /// Defaults to focal_length / f_number when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub camera_aperture_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSection {
    /// "usaf_bars", "text_mask" or "image_file".
    pub kind: String,
    pub extent_mm: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text_height_mm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanesSection {
    /// Stage positions added to r_s_mm, e.g. [0.0, 50.0].
    pub offsets_mm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalSection {
    pub support_width_px: usize,
    pub support_height_px: usize,
    pub iterations: usize,
    pub resample_ratio: f64,
    pub target_pitch_um: f64,
    pub seed: u64,
    pub realness_constraint: bool,
    pub plane_order_shuffle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSection {
    pub mean_photons_per_pixel: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub emit_plots: bool,
    /// Contrast threshold declaring a bar element resolved.
    #[serde(default = "default_threshold")]
    pub resolution_threshold: f64,
}

fn default_threshold() -> f64 {
    0.1
}

/// Validated in-memory pipeline configuration in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub geometry: OpticsGeometry,
    pub target: TargetSpec,
    /// Target-to-screen distances, meters (offsets already added to R_s).
    pub plane_distances: Vec<f64>,
    pub retrieval: RetrievalConfig,
    pub noise: Option<NoiseSection>,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    pub resolution_threshold: f64,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Converts every unit-suffixed value to SI and validates the result.
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let g = &self.geometry;
        let geometry = OpticsGeometry::new(
            g.wavelength_nm * 1e-9,
            g.r_c_mm * 1e-3,
            g.r_s_mm * 1e-3,
            g.r_sc_mm * 1e-3,
            g.scatter_extent_mm * 1e-3,
            g.focal_length_mm * 1e-3,
            g.pixel_pitch_um * 1e-6,
            g.f_number,
            g.camera_aperture_mm.map(|v| v * 1e-3),
        )?;

        let t = &self.target;
        let kind = match t.kind.as_str() {
            "usaf_bars" => TargetKind::UsafBars {
                groups: t
                    .groups
                    .clone()
                    .ok_or_else(|| Error::Config("usaf_bars needs `groups`".into()))?,
                elements: t.elements.clone().unwrap_or_else(|| (1..=6).collect()),
            },
            "text_mask" => TargetKind::TextMask {
                text: t
                    .text
                    .clone()
                    .ok_or_else(|| Error::Config("text_mask needs `text`".into()))?,
                height: t
                    .text_height_mm
                    .ok_or_else(|| Error::Config("text_mask needs `text_height_mm`".into()))?
                    * 1e-3,
            },
            "image_file" => TargetKind::ImageFile {
                path: t
                    .path
                    .clone()
                    .ok_or_else(|| Error::Config("image_file needs `path`".into()))?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown target kind {other:?} (expected usaf_bars, text_mask or image_file)"
                )))
            }
        };
        let target = TargetSpec {
            kind,
            extent: (t.extent_mm[0] * 1e-3, t.extent_mm[1] * 1e-3),
        };
        target.validate()?;

        if self.planes.offsets_mm.is_empty() {
            return Err(Error::Config("planes.offsets_mm must not be empty".into()));
        }
        let mut seen = self.planes.offsets_mm.clone();
        seen.sort_by(f64::total_cmp);
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("plane offsets must be distinct".into()));
        }
        let plane_distances: Vec<f64> = self
            .planes
            .offsets_mm
            .iter()
            .map(|o| geometry.range_target_scatter + o * 1e-3)
            .collect();
        if plane_distances.iter().any(|&z| z <= 0.0) {
            return Err(Error::Config("plane distances must stay positive".into()));
        }

        let r = &self.retrieval;
        let retrieval = RetrievalConfig {
            support_a: r.support_width_px,
            support_b: r.support_height_px,
            iterations: r.iterations,
            resample_ratio: r.resample_ratio,
            target_pitch: r.target_pitch_um * 1e-6,
            wavelength: geometry.wavelength,
            seed: r.seed,
            realness_constraint: r.realness_constraint,
            plane_order_shuffle: r.plane_order_shuffle,
        };
        retrieval.validate()?;

        if let Some(n) = &self.noise {
            if !(n.mean_photons_per_pixel.is_finite() && n.mean_photons_per_pixel >= 0.0) {
                return Err(Error::Config("noise.mean_photons_per_pixel must be >= 0".into()));
            }
        }
        if !(self.output.resolution_threshold > 0.0 && self.output.resolution_threshold < 1.0) {
            return Err(Error::Config("output.resolution_threshold must be in (0,1)".into()));
        }

        Ok(PipelineConfig {
            geometry,
            target,
            plane_distances,
            retrieval,
            noise: self.noise.clone(),
            output_dir: self.output.dir.clone(),
            emit_plots: self.output.emit_plots,
            resolution_threshold: self.output.resolution_threshold,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bench_config_toml() -> String {
        r#"
[geometry]
wavelength_nm = 532.0
r_c_mm = 2518.0
r_s_mm = 2654.0
r_sc_mm = 139.0
scatter_extent_mm = 37.0
focal_length_mm = 12.0
pixel_pitch_um = 6.9
f_number = 1.6

[target]
kind = "usaf_bars"
extent_mm = [5.0, 4.0]
groups = [2, 3]
elements = [1, 3, 5]

[planes]
offsets_mm = [0.0, 50.0]

[retrieval]
support_width_px = 500
support_height_px = 400
iterations = 200
resample_ratio = 0.25
target_pitch_um = 10.0
seed = 7
realness_constraint = true
plane_order_shuffle = true

[output]
dir = "out"
emit_plots = false
"#
        .to_string()
    }

    #[test]
    fn bench_config_resolves_to_si() {
        let cfg = ConfigFile::parse(&bench_config_toml()).unwrap().resolve().unwrap();
        assert!((cfg.geometry.wavelength - 532e-9).abs() < 1e-18);
        assert!((cfg.geometry.range_target_scatter - 2.654).abs() < 1e-12);
        assert!((cfg.geometry.camera_aperture - 7.5e-3).abs() < 1e-12);
        assert_eq!(cfg.plane_distances.len(), 2);
        assert!((cfg.plane_distances[1] - 2.704).abs() < 1e-12);
        assert!((cfg.retrieval.target_pitch - 10e-6).abs() < 1e-18);
        assert!((cfg.resolution_threshold - 0.1).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_preserves_config() {
        let parsed = ConfigFile::parse(&bench_config_toml()).unwrap();
        let serialized = parsed.to_toml().unwrap();
        let reparsed = ConfigFile::parse(&serialized).unwrap();
        assert_eq!(parsed, reparsed);
    }

    #[test]
    fn empty_planes_rejected() {
        let toml = bench_config_toml().replace("offsets_mm = [0.0, 50.0]", "offsets_mm = []");
        let err = ConfigFile::parse(&toml).unwrap().resolve();
        assert!(err.is_err());
    }

    #[test]
    fn duplicate_planes_rejected() {
        let toml = bench_config_toml().replace("[0.0, 50.0]", "[0.0, 0.0]");
        assert!(ConfigFile::parse(&toml).unwrap().resolve().is_err());
    }

    #[test]
    fn unknown_target_kind_rejected() {
        let toml = bench_config_toml().replace("usaf_bars", "mystery");
        assert!(ConfigFile::parse(&toml).unwrap().resolve().is_err());
    }

    #[test]
    fn zero_iterations_rejected() {
        let toml = bench_config_toml().replace("iterations = 200", "iterations = 0");
        assert!(ConfigFile::parse(&toml).unwrap().resolve().is_err());
    }
}
