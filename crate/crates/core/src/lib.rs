//! Vibrato measurement for bowed-string recordings.
//!
//! The pipeline decodes an excerpt ([`audio_io`]), tracks its fundamental
//! with YIN ([`pitch_yin`]), smooths the contour and locates vibrato cycles
//! ([`contour`]), then maps acoustic depth onto finger position along the
//! string ([`vibrato_model`]). [`stats`] holds the regression and rank
//! correlation layer used over batches of measurements, and [`synth`]
//! renders tones with known vibrato for validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audio_io;
pub mod cli;
pub mod contour;
pub mod error;
pub mod pipeline;
pub mod pitch_yin;
pub mod stats;
pub mod synth;
pub mod vibrato_model;

mod linalg;

pub use error::{Error, Result};
