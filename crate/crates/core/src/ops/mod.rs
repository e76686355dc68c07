//! Single-frame RandAugment operations.

pub mod geometric;
pub mod kind;
pub mod photometric;

pub use geometric::apply_geometric;
pub use kind::{level_to_param, OpClass, OpKind, OpParam, Sign, MAX_LEVEL};
pub use photometric::apply_photometric;

use crate::clip::Frame;
use crate::error::Result;

/// Applies any of the fourteen ops to one frame.
pub fn apply_op(frame: &Frame, kind: OpKind, level: f64, sign: Sign) -> Result<Frame> {
    match kind.class() {
        OpClass::Geometric => apply_geometric(frame, kind, level, sign),
        OpClass::Photometric | OpClass::Parameterless => {
            apply_photometric(frame, kind, level, sign)
        }
    }
}
