//! Clip-level data augmentation for video action recognition.
//!
//! A clip is a `t x h x w x c` block of `u8` samples ([`Clip`]). The crate
//! provides:
//!
//! - 14 RandAugment image ops ([`ops`]) and RandAugment-T ([`randaug`]), which
//!   interpolates the op magnitude linearly across the frames of a clip;
//! - temporal erasing: CutOut, FrameCutOut and CubeCutOut ([`erase`]);
//! - two-clip mixing with soft labels: MixUp, FadeMixUp, CutMix, FrameCutMix,
//!   CubeCutMix and the matching CutMixUp variants ([`mix`]);
//! - a seeded per-sample pipeline ([`pipeline`]) and file formats ([`io`]).
//!
//! All randomness comes from a counter-based generator keyed by
//! `(seed, clip_id, stream)` ([`rng`]), so results do not depend on thread
//! count or processing order.

pub mod cli;
pub mod clip;
pub mod erase;
pub mod error;
pub mod io;
pub mod label;
pub mod mask;
pub mod mix;
pub mod ops;
pub mod pipeline;
pub mod randaug;
pub mod rng;
pub mod schedule;

pub use clip::{Clip, Frame};
pub use error::{Error, FormatError, Result};
pub use label::{label_mix, LabelDist};
pub use mask::{MaskKind, MixMask};
pub use mix::{MixMethod, MixResult};
pub use ops::{OpKind, Sign};
pub use pipeline::{augment_sample, PipelineConfig};
pub use randaug::{randaugment, randaugment_t, MagnitudeMode, RandAugConfig};
pub use rng::{rng_derive, RngStream};
