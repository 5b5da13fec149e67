//! Saliency detection for stereoscopic (RGB-D) images.
//!
//! The pipeline weighs how much to trust the depth channel, then combines
//! two complementary saliency cues on a superpixel graph:
//!
//! 1. A global confidence score is computed from the depth map's statistics
//!    ([`confidence`]); unreliable maps are smoothly gated out of every
//!    depth-dependent term downstream.
//! 2. The image is abstracted into SLIC superpixels ([`slic`]) with per-region
//!    color/depth/texture/position features ([`features`]) and an exponential
//!    affinity graph ([`graph`]).
//! 3. Compactness saliency ([`compactness`]) scores regions whose color and
//!    depth distributions concentrate spatially, weighted by an object prior.
//! 4. Foreground saliency ([`foreground`]) selects depth-refined seeds from
//!    the compactness result and scores similarity to them over color,
//!    texture, and position cues, propagated by manifold ranking
//!    ([`diffusion`]).
//! 5. The two maps are fused by a weighted sum ([`pipeline`]).
//!
//! [`eval`] implements the standard benchmark protocol (PR curve by 256
//! thresholds, adaptive-threshold F-measure, MAE), and [`batch`] provides the
//! single-image / dataset / scoring entry points behind the `stereosal` CLI.
//!
//! See the `examples/` directory for one runnable example per capability;
//! [`synth`] generates self-contained RGB-D test scenes so none of them
//! need external data.

pub mod batch;
pub mod color;
pub mod compactness;
pub mod confidence;
pub mod dataset;
pub mod diffusion;
pub mod error;
pub mod eval;
pub mod features;
pub mod field;
pub mod foreground;
pub mod graph;
pub mod manifest;
pub mod pipeline;
pub mod slic;
pub mod synth;

#[cfg(test)]
pub(crate) mod testutil;

pub use dataset::{RgbdSample, SaliencyMap};
pub use error::{Error, Result};
pub use field::ScalarField;
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutput};
