use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_LEVEL: f64 = 10.0;

/// The fourteen RandAugment frame operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    Identity,
    Autocontrast,
    Equalize,
    Rotate,
    ShearX,
    ShearY,
    TranslateX,
    TranslateY,
    Solarize,
    Color,
    Posterize,
    Contrast,
    Brightness,
    Sharpness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    Geometric,
    Photometric,
    Parameterless,
}

impl OpKind {
    /// Sampling order used by RandAugment draws.
    pub const ALL: [OpKind; 14] = [
        OpKind::Identity,
        OpKind::Autocontrast,
        OpKind::Equalize,
        OpKind::Rotate,
        OpKind::ShearX,
        OpKind::ShearY,
        OpKind::TranslateX,
        OpKind::TranslateY,
        OpKind::Solarize,
        OpKind::Color,
        OpKind::Posterize,
        OpKind::Contrast,
        OpKind::Brightness,
        OpKind::Sharpness,
    ];

    pub fn class(self) -> OpClass {
        use OpKind::*;
        match self {
            Rotate | ShearX | ShearY | TranslateX | TranslateY => OpClass::Geometric,
            Solarize | Color | Posterize | Contrast | Brightness | Sharpness => {
                OpClass::Photometric
            }
            Identity | Autocontrast | Equalize => OpClass::Parameterless,
        }
    }

    pub fn has_magnitude(self) -> bool {
        self.class() != OpClass::Parameterless
    }

    pub fn name(self) -> &'static str {
        use OpKind::*;
        match self {
            Identity => "identity",
            Autocontrast => "autocontrast",
            Equalize => "equalize",
            Rotate => "rotate",
            ShearX => "shear-x",
            ShearY => "shear-y",
            TranslateX => "translate-x",
            TranslateY => "translate-y",
            Solarize => "solarize",
            Color => "color",
            Posterize => "posterize",
            Contrast => "contrast",
            Brightness => "brightness",
            Sharpness => "sharpness",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = OpKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown op `{s}`; valid: {}", names.join(", "))
            })
    }
}

/// Direction of a signed op. Drawn once per clip and op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Concrete parameter an op runs with after mapping its level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpParam {
    None,
    /// Degrees; positive rotates counter-clockwise as displayed.
    Angle(f64),
    /// Shear factor.
    Shear(f64),
    /// Signed fraction of the frame extent along the translation axis.
    Translate(f64),
    /// Enhancement factor; 1 is identity, 0 the degenerate image.
    Factor(f64),
    /// Number of high bits kept.
    Bits(u32),
    /// Samples `>=` threshold are inverted; 256 disables.
    Threshold(u32),
}

pub fn check_level(level: f64) -> Result<()> {
    if (0.0..=MAX_LEVEL).contains(&level) {
        Ok(())
    } else {
        Err(Error::InvalidLevel(level))
    }
}

/// Maps a 0..=10 level to the op's concrete parameter.
///
/// | op                                    | parameter                       |
/// |---------------------------------------|---------------------------------|
/// | rotate                                | `sign * 3 * level` degrees      |
/// | shear-x/y                             | `sign * 0.03 * level`           |
/// | translate-x/y                         | `sign * 0.03 * level` of extent |
/// | brightness, color, contrast, sharpness| `1 + sign * 0.09 * level`       |
/// | posterize                             | `8 - round(0.4 * level)` bits   |
/// | solarize                              | `256 - round(25.6 * level)`     |
pub fn level_to_param(kind: OpKind, level: f64, sign: Sign) -> Result<OpParam> {
    use OpKind::*;
    check_level(level)?;
    let s = sign.value();
    Ok(match kind {
        Identity | Autocontrast | Equalize => OpParam::None,
        Rotate => OpParam::Angle(s * 3.0 * level),
        ShearX | ShearY => OpParam::Shear(s * 0.03 * level),
        TranslateX | TranslateY => OpParam::Translate(s * 0.03 * level),
        Brightness | Color | Contrast | Sharpness => OpParam::Factor(1.0 + s * 0.09 * level),
        Posterize => OpParam::Bits(8 - (0.4 * level).round() as u32),
        Solarize => OpParam::Threshold(256 - (25.6 * level).round() as u32),
    })
}
