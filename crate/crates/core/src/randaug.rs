//! Clip-level RandAugment and its temporal variant.
//!
//! RandAugment-T draws `n` ops (uniformly, with replacement, plus one sign
//! per op), builds the per-frame schedule `linspace(m1, m2, t)`, and cascades
//! the ops: op `k` is applied to every frame of the output of op `k - 1`, each
//! frame at its own scheduled level.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clip::Clip;
use crate::error::{Error, Result};
use crate::ops::{apply_op, kind::check_level, OpKind, Sign, MAX_LEVEL};
use crate::rng::{sample_uniform, RngStream};
use crate::schedule::linspace;

/// How the two temporal end magnitudes are derived from the base magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MagnitudeMode {
    /// `(m, m)`: plain frame-wise RandAugment.
    #[serde(rename = "spatial")]
    Spatial,
    /// `m2 = m`, `m1 ~ Uniform(0.1, m2)`.
    #[serde(rename = "temporal")]
    Temporal,
    /// `(m - d, m + d)` with `d ~ Uniform(0, m / 2)`, clamped to `[0, 10]`.
    #[serde(rename = "temporal+")]
    TemporalPlus,
    /// Fair coin between `Spatial` and `TemporalPlus`.
    #[serde(rename = "mix")]
    Mix,
}

impl MagnitudeMode {
    pub const ALL: [MagnitudeMode; 4] = [
        MagnitudeMode::Spatial,
        MagnitudeMode::Temporal,
        MagnitudeMode::TemporalPlus,
        MagnitudeMode::Mix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MagnitudeMode::Spatial => "spatial",
            MagnitudeMode::Temporal => "temporal",
            MagnitudeMode::TemporalPlus => "temporal+",
            MagnitudeMode::Mix => "mix",
        }
    }
}

impl fmt::Display for MagnitudeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MagnitudeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        MagnitudeMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}`; valid: spatial, temporal, temporal+, mix"))
    }
}

/// Lower bound of the temporal mode's first-frame magnitude.
pub const TEMPORAL_MIN_LEVEL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandAugConfig {
    pub n: usize,
    pub mode: MagnitudeMode,
    pub m: f64,
}

impl RandAugConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("randaug n must be >= 1".into()));
        }
        check_level(self.m)
    }
}

/// Draws the magnitudes for the first and last frame.
pub fn sample_magnitude_range(
    mode: MagnitudeMode,
    m: f64,
    rng: &mut RngStream,
) -> Result<(f64, f64)> {
    check_level(m)?;
    Ok(match mode {
        MagnitudeMode::Spatial => (m, m),
        MagnitudeMode::Temporal => {
            // for m below 0.1 the range collapses to (m, m)
            let m1 = sample_uniform(rng, TEMPORAL_MIN_LEVEL.min(m), m)?;
            (m1, m)
        }
        MagnitudeMode::TemporalPlus => {
            let delta = sample_uniform(rng, 0.0, 0.5 * m)?;
            (
                (m - delta).clamp(0.0, MAX_LEVEL),
                (m + delta).clamp(0.0, MAX_LEVEL),
            )
        }
        MagnitudeMode::Mix => {
            if rng.next_bool() {
                sample_magnitude_range(MagnitudeMode::TemporalPlus, m, rng)?
            } else {
                (m, m)
            }
        }
    })
}

/// The ops and directions drawn for one clip.
#[derive(Debug, Clone, PartialEq)]
pub struct OpPlan {
    pub ops: Vec<(OpKind, Sign)>,
}

impl OpPlan {
    /// Draws `n` ops with replacement; each draw takes an op index then a sign.
    pub fn sample(n: usize, rng: &mut RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("op count n must be >= 1".into()));
        }
        let ops = (0..n)
            .map(|_| {
                let kind = OpKind::ALL[rng.below(OpKind::ALL.len() as u64) as usize];
                let sign = if rng.next_bool() {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                (kind, sign)
            })
            .collect();
        Ok(Self { ops })
    }

    pub fn single(kind: OpKind, sign: Sign) -> Self {
        Self {
            ops: vec![(kind, sign)],
        }
    }
}

/// Per-frame magnitude levels.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeSchedule(Vec<f64>);

impl MagnitudeSchedule {
    pub fn linear(m1: f64, m2: f64, frames: usize) -> Result<Self> {
        check_level(m1)?;
        check_level(m2)?;
        Ok(Self(linspace(m1, m2, frames)?))
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Cascades `plan` over `clip`, each frame at its scheduled level.
pub fn apply_plan(clip: &Clip, plan: &OpPlan, schedule: &MagnitudeSchedule) -> Result<Clip> {
    if schedule.len() != clip.frames() {
        return Err(Error::Config(format!(
            "schedule has {} levels for {} frames",
            schedule.len(),
            clip.frames()
        )));
    }
    let mut current = clip.clone();
    for &(kind, sign) in &plan.ops {
        current = current.map_frames(|t, frame| apply_op(&frame, kind, schedule.0[t], sign))?;
    }
    Ok(current)
}

/// RandAugment-T with explicit end magnitudes.
pub fn randaugment_t(clip: &Clip, n: usize, m1: f64, m2: f64, rng: &mut RngStream) -> Result<Clip> {
    check_level(m1)?;
    check_level(m2)?;
    let plan = OpPlan::sample(n, rng)?;
    let schedule = MagnitudeSchedule::linear(m1, m2, clip.frames())?;
    apply_plan(clip, &plan, &schedule)
}

/// Frame-wise RandAugment: one op plan, every frame at the same magnitude.
pub fn randaugment(clip: &Clip, n: usize, m: f64, rng: &mut RngStream) -> Result<Clip> {
    check_level(m)?;
    let plan = OpPlan::sample(n, rng)?;
    clip.map_frames(|_, frame| {
        plan.ops
            .iter()
            .try_fold(frame, |f, &(kind, sign)| apply_op(&f, kind, m, sign))
    })
}

/// Samples `(m1, m2)` by `cfg.mode` and runs RandAugment-T, all from one stream.
pub fn randaugment_config(clip: &Clip, cfg: &RandAugConfig, rng: &mut RngStream) -> Result<Clip> {
    cfg.validate()?;
    let (m1, m2) = sample_magnitude_range(cfg.mode, cfg.m, rng)?;
    randaugment_t(clip, cfg.n, m1, m2, rng)
}
