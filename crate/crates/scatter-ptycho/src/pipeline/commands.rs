//! The simulate / reconstruct / analyze / report pipeline behind the CLI.

use std::path::{Path, PathBuf};

use super::config::PipelineConfig;
use super::formats;
use super::plot::{line_chart, Series};
use crate::analysis::MetricReport;
use crate::error::{Error, Result};
use crate::field::RealImage;
use crate::retrieval::{run_retrieval, RetrievalResult, ScatterMeasurement};
use crate::simulator::{
    add_poisson_noise, direct_view_ifov, make_target, project_camera_to_screen, scatter_plans,
    simulate_with_plan, TargetKind,
};

pub struct SimulateOutput {
    pub measurement_paths: Vec<PathBuf>,
}

pub struct ReconstructOutput {
    pub estimate_path: PathBuf,
    pub modulus_path: PathBuf,
    pub residuals_path: PathBuf,
    pub result: RetrievalResult,
}

pub struct AnalyzeOutput {
    pub report: MetricReport,
    pub metrics_path: PathBuf,
    pub summary_path: PathBuf,
    pub plot_paths: Vec<PathBuf>,
}

/// Renders the configured target, propagates it to every plane, optionally
/// applies shot noise (per-plane seeds derived from the configured one)
/// and writes one 16-bit raster + sidecar per plane. Deterministic for a
/// fixed config.
pub fn cmd_simulate(config: &PipelineConfig) -> Result<SimulateOutput> {
    std::fs::create_dir_all(&config.output_dir)?;
    let target = make_target(&config.target, config.retrieval.target_pitch)?;
    let plans = scatter_plans(
        &target,
        &config.plane_distances,
        &config.geometry,
        config.retrieval.resample_ratio,
    )?;
    let mut paths = Vec::new();
    for (k, (&z, plan)) in config.plane_distances.iter().zip(&plans).enumerate() {
        let mut measurement = simulate_with_plan(&target, plan)?;
        if let Some(noise) = &config.noise {
            measurement = add_poisson_noise(
                &measurement,
                noise.mean_photons_per_pixel,
                noise.seed.wrapping_add(k as u64),
            )?;
        }
        let path = config.output_dir.join(format!("scatter_{k:03}.png"));
        formats::save_measurement(&path, measurement.intensity(), z, "screen")?;
        paths.push(path);
    }
    Ok(SimulateOutput { measurement_paths: paths })
}

fn ingest_one(path: &Path, config: &PipelineConfig) -> Result<ScatterMeasurement> {
    let (image, meta) = formats::load_measurement(path)?;
    let scatter_pitch = config.retrieval.target_pitch / config.retrieval.resample_ratio;
    let screen = match meta.frame.as_str() {
        "screen" => image,
        "camera" => {
            let crop = meta
                .camera_crop_px
                .unwrap_or_else(|| image.height().min(image.width()));
            project_camera_to_screen(&image, &config.geometry, crop, scatter_pitch)?
        }
        other => {
            return Err(Error::Format {
                path: path.to_path_buf(),
                reason: format!("unknown frame kind {other:?}"),
            })
        }
    };
    ScatterMeasurement::new(screen, meta.z_mm * 1e-3)
}

fn squared_up(measurements: Vec<ScatterMeasurement>) -> Result<Vec<ScatterMeasurement>> {
    // Ingested captures can disagree by a pixel after projection; cut all
    // of them to the smallest common square.
    let side = measurements
        .iter()
        .map(|m| m.intensity().height().min(m.intensity().width()))
        .min()
        .unwrap_or(0);
    measurements
        .into_iter()
        .map(|m| {
            if m.intensity().height() == side && m.intensity().width() == side {
                Ok(m)
            } else {
                ScatterMeasurement::new(m.intensity().center_crop(side)?, m.distance())
            }
        })
        .collect()
}

/// Ingests measurement rasters (projecting camera-frame captures onto
/// screen coordinates), runs the retrieval and writes the estimate (raw
/// complex + 16-bit modulus) and the residual log.
pub fn cmd_reconstruct(
    measurement_paths: &[PathBuf],
    config: &PipelineConfig,
) -> Result<ReconstructOutput> {
    if measurement_paths.is_empty() {
        return Err(Error::invalid("no measurement files given"));
    }
    std::fs::create_dir_all(&config.output_dir)?;
    let measurements = squared_up(
        measurement_paths
            .iter()
            .map(|p| ingest_one(p, config))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let result = run_retrieval(&measurements, &config.retrieval)?;

    let estimate_path = config.output_dir.join("estimate.cfield");
    formats::save_field(&estimate_path, &result.estimate)?;
    let modulus_path = config.output_dir.join("estimate_modulus.png");
    // Target-plane view; the sidecar distance is not meaningful here.
    formats::save_measurement(&modulus_path, &result.estimate.modulus(), 0.0, "screen")?;
    let residuals_path = config.output_dir.join("residuals.csv");
    formats::save_residuals(&residuals_path, &result.log)?;
    Ok(ReconstructOutput { estimate_path, modulus_path, residuals_path, result })
}

/// Scores a reconstruction against the configured target: ambiguity-aware
/// NRMSE always; bar contrasts and resolved frequency when the target is a
/// bar chart. Optionally renders the residual and contrast curves as SVG.
pub fn cmd_analyze(estimate_path: &Path, config: &PipelineConfig) -> Result<AnalyzeOutput> {
    let estimate = formats::load_field(estimate_path)?;
    let truth = make_target(&config.target, config.retrieval.target_pitch)?
        .resized(estimate.height(), estimate.width())?;
    let ifov = direct_view_ifov(&config.geometry);
    let report = match &config.target.kind {
        TargetKind::UsafBars { .. } => MetricReport::compute(
            &estimate,
            &truth,
            &config.target,
            config.resolution_threshold,
            ifov,
        )?,
        _ => MetricReport::nrmse_only(&estimate, &truth)?,
    };

    std::fs::create_dir_all(&config.output_dir)?;
    let metrics_path = config.output_dir.join("metrics.csv");
    formats::save_metrics(&metrics_path, &report)?;
    let summary_path = config.output_dir.join("summary.txt");
    std::fs::write(&summary_path, report.summary_text())?;

    let mut plot_paths = Vec::new();
    if config.emit_plots {
        let residuals_path = estimate_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join("residuals.csv");
        if residuals_path.exists() {
            let log = formats::load_residuals(&residuals_path)?;
            let path = config.output_dir.join("residuals.svg");
            residual_plot(&path, &log)?;
            plot_paths.push(path);
        }
        if !report.contrast_by_element.is_empty() {
            let path = config.output_dir.join("contrast.svg");
            let series = [Series {
                label: "contrast",
                points: report
                    .contrast_by_element
                    .iter()
                    .map(|e| (e.frequency_lp_mm, e.contrast))
                    .collect(),
            }];
            line_chart(&path, "bar contrast", "frequency [lp/mm]", "contrast", &series, false)?;
            plot_paths.push(path);
        }
    }
    Ok(AnalyzeOutput { report, metrics_path, summary_path, plot_paths })
}

fn residual_plot(path: &Path, log: &[crate::retrieval::ResidualRecord]) -> Result<()> {
    let planes: std::collections::BTreeSet<usize> = log.iter().map(|r| r.plane).collect();
    let per_plane: Vec<(String, Vec<(f64, f64)>)> = planes
        .iter()
        .map(|&p| {
            (
                format!("plane {p}"),
                log.iter()
                    .filter(|r| r.plane == p)
                    .map(|r| (r.iteration as f64, r.residual))
                    .collect(),
            )
        })
        .collect();
    let series: Vec<Series<'_>> = per_plane
        .iter()
        .map(|(label, points)| Series { label, points: points.clone() })
        .collect();
    line_chart(path, "amplitude residual", "iteration", "residual", &series, true)
}

/// Reads an output directory produced by the other commands and returns a
/// consolidated text report, regenerating the plots when asked.
pub fn cmd_report(dir: &Path, emit_plots: bool) -> Result<String> {
    let mut text = String::new();
    let summary = dir.join("summary.txt");
    if summary.exists() {
        text.push_str(&std::fs::read_to_string(&summary)?);
    }
    let residuals = dir.join("residuals.csv");
    if residuals.exists() {
        let log = formats::load_residuals(&residuals)?;
        if let (Some(first), Some(last)) = (log.first(), log.last()) {
            text.push_str(&format!(
                "iterations:           {}\nfirst residual:       {:.6}\nfinal residual:       {:.6}\n",
                last.iteration + 1,
                first.residual,
                last.residual
            ));
        }
        if emit_plots {
            residual_plot(&dir.join("residuals.svg"), &log)?;
        }
    }
    if text.is_empty() {
        return Err(Error::invalid(format!(
            "nothing to report in {} (expected summary.txt and/or residuals.csv)",
            dir.display()
        )));
    }
    Ok(text)
}

/// Writes a debug-friendly view of a real image alongside the pipeline
/// outputs (shared by examples).
pub fn save_preview(path: &Path, image: &RealImage) -> Result<()> {
    formats::save_measurement(path, image, 1.0, "screen")
}
