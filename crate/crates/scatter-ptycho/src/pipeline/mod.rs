//! Pipeline driver: configuration, file formats, plots and the
//! simulate / reconstruct / analyze / report commands.

mod commands;
mod config;
pub mod formats;
pub mod plot;

pub use commands::{
    cmd_analyze, cmd_reconstruct, cmd_report, cmd_simulate, save_preview, AnalyzeOutput,
    ReconstructOutput, SimulateOutput,
};
pub use config::{
    ConfigFile, GeometrySection, NoiseSection, OutputSection, PipelineConfig, PlanesSection,
    RetrievalSection, TargetSection,
};
