//! Thin subcommand front end over the pipeline library.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use scatter_ptycho::pipeline::{
    cmd_analyze, cmd_reconstruct, cmd_report, cmd_simulate, ConfigFile, PipelineConfig,
};

#[derive(Parser)]
#[command(name = "scatter-ptycho", version, about = "Scatter-ptychography pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the retrieval seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the stage positions, comma-separated millimeters
    /// (e.g. "0,50").
    #[arg(long)]
    planes: Option<String>,
    /// Override the iteration count.
    #[arg(long)]
    iterations: Option<usize>,
    /// Override the resolved-element contrast threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Emit SVG plots alongside the tabular outputs.
    #[arg(long)]
    emit_plots: bool,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Render the target and write one scatter measurement per plane.
    Simulate(ConfigArgs),
    /// Run phase retrieval over measurement files.
    Reconstruct {
        #[command(flatten)]
        config: ConfigArgs,
        /// Measurement rasters; defaults to the simulate outputs in the
        /// output directory.
        files: Vec<PathBuf>,
    },
    /// Score a reconstruction against the configured target.
    Analyze {
        #[command(flatten)]
        config: ConfigArgs,
        /// Reconstruction file; defaults to estimate.cfield in the output
        /// directory.
        #[arg(long)]
        reconstruction: Option<PathBuf>,
    },
    /// Print a consolidated report for an output directory.
    Report {
        /// Output directory produced by the other subcommands.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        emit_plots: bool,
    },
}

fn load_config(args: &ConfigArgs) -> scatter_ptycho::Result<PipelineConfig> {
    let file = ConfigFile::load(&args.config)?;
    let mut cfg = file.resolve()?;
    if let Some(seed) = args.seed {
        cfg.retrieval.seed = seed;
    }
    if let Some(planes) = &args.planes {
        let offsets: std::result::Result<Vec<f64>, _> =
            planes.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let offsets = offsets
            .map_err(|e| scatter_ptycho::Error::Config(format!("bad --planes: {e}")))?;
        if offsets.is_empty() {
            return Err(scatter_ptycho::Error::Config("--planes must not be empty".into()));
        }
        cfg.plane_distances = offsets
            .iter()
            .map(|o| cfg.geometry.range_target_scatter + o * 1e-3)
            .collect();
    }
    if let Some(iterations) = args.iterations {
        cfg.retrieval.iterations = iterations;
        cfg.retrieval.validate()?;
    }
    if let Some(threshold) = args.threshold {
        cfg.resolution_threshold = threshold;
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(scatter_ptycho::Error::Config(
                "--threshold must be in (0,1)".into(),
            ));
        }
    }
    if args.emit_plots {
        cfg.emit_plots = true;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn run() -> scatter_ptycho::Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => {
            let cfg = load_config(&args)?;
            let out = cmd_simulate(&cfg)?;
            for p in &out.measurement_paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Reconstruct { config, files } => {
            let cfg = load_config(&config)?;
            let files = if files.is_empty() {
                let mut found: Vec<PathBuf> = std::fs::read_dir(&cfg.output_dir)?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| {
                        p.extension().is_some_and(|x| x == "png")
                            && p.file_name()
                                .is_some_and(|n| n.to_string_lossy().starts_with("scatter_"))
                    })
                    .collect();
                found.sort();
                found
            } else {
                files
            };
            let out = cmd_reconstruct(&files, &cfg)?;
            println!("wrote {}", out.estimate_path.display());
            println!("wrote {}", out.modulus_path.display());
            println!("wrote {}", out.residuals_path.display());
        }
        Command::Analyze { config, reconstruction } => {
            let cfg = load_config(&config)?;
            let estimate =
                reconstruction.unwrap_or_else(|| cfg.output_dir.join("estimate.cfield"));
            let out = cmd_analyze(&estimate, &cfg)?;
            print!("{}", out.report.summary_text());
            println!("wrote {}", out.metrics_path.display());
            for p in &out.plot_paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Report { out, emit_plots } => {
            print!("{}", cmd_report(&out, emit_plots)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
