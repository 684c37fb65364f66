//! Scatter ptychography at desk scale: image a coherently illuminated
//! target from irradiance measurements of its field after secondary
//! scattering off a remote plane.
//!
//! The crate covers the full synthetic pipeline:
//!
//! - [`field`]: complex field / intensity containers, bicubic resampling,
//!   windowing and energy bookkeeping.
//! - [`propagation`]: band-limited angular-spectrum propagation and the
//!   multistage variant (MASM) with resampling, forward and inverse.
//! - [`simulator`]: synthetic bar/text targets, forward scatter imaging,
//!   camera-to-screen projection, Poisson shot noise and the photometric
//!   resolution/budget formulas.
//! - [`retrieval`]: the multi-plane error-reduction phase-retrieval engine
//!   with support and realness constraints.
//! - [`analysis`]: ambiguity-aware error metrics and resolved-frequency
//!   readout from bar targets.
//! - [`pipeline`]: config parsing, file formats and the simulate /
//!   reconstruct / analyze / report commands behind the CLI.
//!
//! Start with the `examples/` directory: each major capability has a
//! runnable example (`cargo run --release --example end_to_end`).

pub mod analysis;
pub mod error;
pub mod fft;
pub mod field;
pub mod pipeline;
pub mod propagation;
pub mod retrieval;
pub mod simulator;

pub use error::{Error, Result};
pub use field::{rect_window, resample_bicubic, ComplexField, RealImage};
pub use propagation::{asm_propagate, masm_inverse, masm_propagate, PropagationPlan, Propagator};
pub use retrieval::{run_retrieval, RetrievalConfig, RetrievalResult, ScatterMeasurement};
pub use simulator::{OpticsGeometry, PhotonBudget, TargetKind, TargetSpec};
