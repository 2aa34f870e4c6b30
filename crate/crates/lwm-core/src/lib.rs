//! Class-incremental learning without stored base-class data.
//!
//! A teacher/student training laboratory: a frozen teacher network from the
//! previous incremental step constrains a growing student network through two
//! information-preserving penalties — a sigmoid knowledge-distillation loss on
//! base-class logits and an attention-distillation loss on class-specific
//! gradient attention maps. The crate ships its own small reverse-mode
//! autodiff engine with support for differentiating through gradients
//! (required because the attention loss is itself built from a gradient).
//!
//! Modules map onto the pipeline stages:
//!
//! - [`autodiff`] — graph-based reverse-mode differentiation over `f64` arrays
//! - [`net`] — network models, architecture descriptors, frozen snapshots
//! - [`optim`] — momentum SGD with external velocity state
//! - [`gradcam`] — class-specific attention maps and the attention loss
//! - [`losses`] — classification / distillation losses, experiment gating
//! - [`data`] — CIFAR binary loading, synthetic shapes, class schedules
//! - [`protocol`] — the iterative teacher/student training protocol
//! - [`eval`] — single-headed evaluation and attention-retention curves
//! - [`checkpoint`] — versioned binary checkpoints with bit-exact round-trip
//! - [`config`] — TOML experiment configuration with strict key checking
//! - [`report`] — CSV and PGM emission for run directories

pub mod autodiff;
pub mod checkpoint;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod gradcam;
pub mod losses;
pub mod net;
pub mod optim;
pub mod par;
pub mod protocol;
pub mod report;

pub use error::{Error, Result};
