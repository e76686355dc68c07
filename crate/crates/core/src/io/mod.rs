//! File formats: clip container, label sidecars, frame directories, manifests.

pub mod clipfile;
pub mod frames;
pub mod manifest;
pub mod sidecar;

pub use clipfile::{read_clip, read_header, write_clip, ClipHeader};
pub use frames::import_frames;
pub use manifest::{read_manifest, LabelSource, ManifestEntry};
pub use sidecar::{label_from_json, label_to_json, read_label, write_label};
