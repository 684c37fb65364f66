//! Artifact file formats.
//!
//! - Intensity measurements: 16-bit grayscale PNG plus a TOML sidecar
//!   (`<name>.meta.toml`) recording pitch, distance and the quantization
//!   scale, so the raster never silently clips.
//! - Complex fields: a little-endian binary container (magic `SPFIELD1`,
//!   u32 width/height, f64 pitch, then row-major interleaved re/im f64) —
//!   the lossless channel.
//! - Tables: RFC-4180 CSV.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{ComplexField, RealImage};
use crate::retrieval::ResidualRecord;

const FIELD_MAGIC: &[u8; 8] = b"SPFIELD1";

/// Sidecar metadata for one intensity raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementMeta {
    /// "screen" for screen-plane images, "camera" for raw camera frames
    /// that still need projection.
    pub frame: String,
    /// Sample pitch of the stored raster, micrometers.
    pub pitch_um: f64,
    /// Target-to-screen distance for this plane, millimeters.
    pub z_mm: f64,
    /// Intensity value corresponding to the full-scale pixel 65535.
    pub max_intensity: f64,
    /// Center crop (pixels) to apply when projecting a camera frame.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub camera_crop_px: Option<usize>,
}

fn meta_path(image_path: &Path) -> PathBuf {
    let mut s = image_path.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

/// Writes `image` as a 16-bit grayscale PNG with its sidecar. The raster
/// stores `round(v / max * 65535)`; `max` goes to the sidecar.
pub fn save_measurement(path: &Path, image: &RealImage, z: f64, frame: &str) -> Result<()> {
    let max = image.max();
    let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
    let (h, w) = (image.height(), image.width());
    let mut buf = image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::new(w as u32, h as u32);
    for ((r, c), &v) in image.data().indexed_iter() {
        buf.put_pixel(c as u32, r as u32, image::Luma([(v * scale).round() as u16]));
    }
    buf.save(path)?;
    let meta = MeasurementMeta {
        frame: frame.to_string(),
        pitch_um: image.pitch() * 1e6,
        z_mm: z * 1e3,
        max_intensity: max,
        camera_crop_px: None,
    };
    let text = toml::to_string_pretty(&meta).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(meta_path(path), text)?;
    Ok(())
}

/// Loads a 16-bit measurement raster and its sidecar back into physical
/// intensity units.
pub fn load_measurement(path: &Path) -> Result<(RealImage, MeasurementMeta)> {
    let meta_file = meta_path(path);
    let text = std::fs::read_to_string(&meta_file).map_err(|_| Error::Format {
        path: meta_file.clone(),
        reason: "missing sidecar metadata".into(),
    })?;
    let meta: MeasurementMeta = toml::from_str(&text).map_err(|e| Error::Format {
        path: meta_file,
        reason: e.to_string(),
    })?;
    let img = image::open(path)?.into_luma16();
    let (w, h) = img.dimensions();
    let scale = meta.max_intensity / 65535.0;
    let data = Array2::from_shape_fn((h as usize, w as usize), |(r, c)| {
        img.get_pixel(c as u32, r as u32).0[0] as f64 * scale
    });
    let image = RealImage::new(data, meta.pitch_um * 1e-6)?;
    Ok((image, meta))
}

/// Writes a complex field in the lossless binary layout.
pub fn save_field(path: &Path, field: &ComplexField) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(FIELD_MAGIC)?;
    f.write_all(&(field.width() as u32).to_le_bytes())?;
    f.write_all(&(field.height() as u32).to_le_bytes())?;
    f.write_all(&field.pitch().to_le_bytes())?;
    for v in field.data().iter() {
        f.write_all(&v.re.to_le_bytes())?;
        f.write_all(&v.im.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

/// Reads a complex field written by [`save_field`].
pub fn load_field(path: &Path) -> Result<ComplexField> {
    let bad = |reason: &str| Error::Format { path: path.to_path_buf(), reason: reason.into() };
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic).map_err(|_| bad("truncated header"))?;
    if &magic != FIELD_MAGIC {
        return Err(bad("bad magic"));
    }
    let mut u32buf = [0u8; 4];
    f.read_exact(&mut u32buf).map_err(|_| bad("truncated header"))?;
    let width = u32::from_le_bytes(u32buf) as usize;
    f.read_exact(&mut u32buf).map_err(|_| bad("truncated header"))?;
    let height = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    f.read_exact(&mut f64buf).map_err(|_| bad("truncated header"))?;
    let pitch = f64::from_le_bytes(f64buf);
    if width == 0 || height == 0 || width > 65536 || height > 65536 {
        return Err(bad("implausible dimensions"));
    }
    let mut data = Array2::zeros((height, width));
    for v in data.iter_mut() {
        f.read_exact(&mut f64buf).map_err(|_| bad("truncated body"))?;
        let re = f64::from_le_bytes(f64buf);
        f.read_exact(&mut f64buf).map_err(|_| bad("truncated body"))?;
        let im = f64::from_le_bytes(f64buf);
        *v = Complex64::new(re, im);
    }
    ComplexField::new(data, pitch)
}

/// Writes the per-visit residual log as CSV
/// (`iteration,visit,plane,residual`).
pub fn save_residuals(path: &Path, log: &[ResidualRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iteration", "visit", "plane", "residual"])?;
    for r in log {
        w.write_record(&[
            r.iteration.to_string(),
            r.visit.to_string(),
            r.plane.to_string(),
            format!("{:e}", r.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads back a residual CSV (used by `report` and the plots).
pub fn load_residuals(path: &Path) -> Result<Vec<ResidualRecord>> {
    let mut out = Vec::new();
    let mut r = csv::Reader::from_path(path)?;
    for rec in r.records() {
        let rec = rec?;
        let parse_err = |reason: &str| Error::Format {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        out.push(ResidualRecord {
            iteration: rec
                .get(0)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err("bad iteration"))?,
            visit: rec
                .get(1)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err("bad visit"))?,
            plane: rec
                .get(2)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err("bad plane"))?,
            residual: rec
                .get(3)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err("bad residual"))?,
        });
    }
    Ok(out)
}

/// Writes the metric report as CSV: summary rows first, then one row per
/// chart element.
pub fn save_metrics(path: &Path, report: &crate::analysis::MetricReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["kind", "group", "element", "frequency_lp_mm", "value"])?;
    w.write_record(["nrmse_aligned", "", "", "", &format!("{:e}", report.nrmse_aligned)])?;
    w.write_record(["resolved_lp_mm", "", "", "", &format!("{:e}", report.resolved_lp_mm)])?;
    w.write_record(["alpha_achieved", "", "", "", &format!("{:e}", report.alpha_achieved)])?;
    for e in &report.contrast_by_element {
        w.write_record(&[
            "contrast".to_string(),
            e.group.to_string(),
            e.element.to_string(),
            format!("{:e}", e.frequency_lp_mm),
            format!("{:e}", e.contrast),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn field_roundtrip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("estimate.cfield");
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let data = Array2::from_shape_fn((17, 23), |_| {
            Complex64::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e-3..1e-3))
        });
        let field = ComplexField::new(data, 12.5e-6).unwrap();
        save_field(&path, &field).unwrap();
        let loaded = load_field(&path).unwrap();
        assert_eq!(field, loaded);
    }

    #[test]
    fn field_loader_rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.cfield");
        std::fs::write(&path, b"NOTAFLD0junkjunkjunk").unwrap();
        assert!(load_field(&path).is_err());
    }

    #[test]
    fn measurement_roundtrip_preserves_scale() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m0.png");
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let data = Array2::from_shape_fn((32, 32), |_| rng.gen_range(0.0..7.5e3));
        let image = RealImage::new(data, 40e-6).unwrap();
        save_measurement(&path, &image, 2.654, "screen").unwrap();
        let (loaded, meta) = load_measurement(&path).unwrap();
        assert_eq!(meta.frame, "screen");
        assert!((meta.z_mm - 2654.0).abs() < 1e-9);
        assert!((loaded.pitch() - 40e-6).abs() < 1e-15);
        // 16-bit quantization: within half a step of the recorded scale.
        let step = meta.max_intensity / 65535.0;
        for (a, b) in loaded.data().iter().zip(image.data().iter()) {
            assert!((a - b).abs() <= 0.5 * step + 1e-12);
        }
    }

    #[test]
    fn residual_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("residuals.csv");
        let log = vec![
            ResidualRecord { iteration: 0, visit: 0, plane: 1, residual: 0.25 },
            ResidualRecord { iteration: 0, visit: 1, plane: 0, residual: 0.125 },
            ResidualRecord { iteration: 1, visit: 0, plane: 0, residual: 1e-9 },
        ];
        save_residuals(&path, &log).unwrap();
        let loaded = load_residuals(&path).unwrap();
        assert_eq!(log.len(), loaded.len());
        for (a, b) in log.iter().zip(loaded.iter()) {
            assert_eq!(a.iteration, b.iteration);
            assert_eq!(a.plane, b.plane);
            assert_eq!(a.residual, b.residual);
        }
    }
}
