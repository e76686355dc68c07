//! End-to-end sample augmentation: baseline spatial transform, optional
//! RandAugment-T, then an optional probabilistic mix.
//!
//! All randomness for a sample comes from streams `rng_derive(seed, clip_id, k)`
//! with `k` fixed per stage (see [`stream`]), so a sample's output does not
//! depend on what other samples or stages drew.

use serde::{Deserialize, Serialize};

use crate::clip::{Clip, Frame};
use crate::error::{Error, Result};
use crate::label::LabelDist;
use crate::mix::{MixMethod, MixResult};
use crate::ops::geometric::resize_bilinear;
use crate::randaug::{randaugment_config, RandAugConfig};
use crate::rng::{rng_derive, RngStream};

/// Op indices passed to [`rng_derive`] for each pipeline stage.
pub mod stream {
    pub const BASELINE_A: u64 = 0;
    pub const BASELINE_B: u64 = 1;
    pub const RANDAUG_A: u64 = 2;
    pub const RANDAUG_B: u64 = 3;
    pub const MIX_GATE: u64 = 4;
    pub const MIX: u64 = 5;
    /// Used by the CLI to pick a mixing partner.
    pub const PARTNER: u64 = 6;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixSpec {
    pub method: MixMethod,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub crop_size: usize,
    /// Inclusive range for the resized short side.
    pub jitter_range: [usize; 2],
    pub hflip_prob: f64,
    pub randaug: Option<RandAugConfig>,
    pub mix_method: Option<MixSpec>,
    pub mix_prob: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            crop_size: 160,
            jitter_range: [160, 200],
            hflip_prob: 0.5,
            randaug: None,
            mix_method: None,
            mix_prob: 0.5,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.jitter_range;
        if self.crop_size == 0 {
            return Err(Error::Config("crop_size must be >= 1".into()));
        }
        if lo > hi {
            return Err(Error::Config(format!(
                "jitter_range [{lo}, {hi}] is reversed"
            )));
        }
        if self.crop_size > lo {
            return Err(Error::Config(format!(
                "crop_size {} exceeds jitter lower bound {lo}",
                self.crop_size
            )));
        }
        for (name, p) in [("hflip_prob", self.hflip_prob), ("mix_prob", self.mix_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} {p} not in [0, 1]")));
            }
        }
        if let Some(ra) = &self.randaug {
            ra.validate()?;
        }
        if let Some(mix) = &self.mix_method {
            if !mix.alpha.is_finite() || mix.alpha <= 0.0 {
                return Err(Error::Config(format!(
                    "mix alpha {} must be > 0",
                    mix.alpha
                )));
            }
        }
        Ok(())
    }
}

/// The random choices of one baseline application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineDraws {
    pub short_side: usize,
    pub crop_y: usize,
    pub crop_x: usize,
    pub flip: bool,
}

/// Size after scaling the short side to `short_side`, aspect preserved.
pub fn resized_dims(h: usize, w: usize, short_side: usize) -> (usize, usize) {
    let scale = |long: usize, short: usize| {
        ((long as f64 * short_side as f64 / short as f64).round() as usize).max(1)
    };
    if h <= w {
        (short_side, scale(w, h))
    } else {
        (scale(h, w), short_side)
    }
}

/// Resize, crop `crop_size^2` at the drawn offset, optionally mirror. Same for every frame.
pub fn baseline_with(clip: &Clip, crop_size: usize, draws: BaselineDraws) -> Result<Clip> {
    if draws.short_side == 0 || crop_size == 0 {
        return Err(Error::InvalidGeometry("zero resize or crop size".into()));
    }
    let (new_h, new_w) = resized_dims(clip.height(), clip.width(), draws.short_side);
    if new_h < crop_size || new_w < crop_size {
        return Err(Error::InvalidGeometry(format!(
            "clip resized to {new_h}x{new_w} is smaller than crop {crop_size}"
        )));
    }
    if draws.crop_y + crop_size > new_h || draws.crop_x + crop_size > new_w {
        return Err(Error::InvalidGeometry(format!(
            "crop at ({}, {}) leaves the {new_h}x{new_w} frame",
            draws.crop_y, draws.crop_x
        )));
    }
    clip.map_frames(|_, frame| {
        let resized = resize_bilinear(&frame, new_h, new_w);
        let c = resized.channels();
        let row = new_w * c;
        let mut data = Vec::with_capacity(crop_size * crop_size * c);
        for y in draws.crop_y..draws.crop_y + crop_size {
            let start = y * row + draws.crop_x * c;
            data.extend_from_slice(&resized.data()[start..start + crop_size * c]);
        }
        let cropped = Frame::new(crop_size, crop_size, c, data)?;
        Ok(if draws.flip { cropped.hflip() } else { cropped })
    })
}

/// Draws short side, crop offsets and flip (in that order), then applies them.
pub fn baseline(clip: &Clip, cfg: &PipelineConfig, rng: &mut RngStream) -> Result<Clip> {
    let [lo, hi] = cfg.jitter_range;
    if lo > hi {
        return Err(Error::Config(format!(
            "jitter_range [{lo}, {hi}] is reversed"
        )));
    }
    let short_side = rng.range_inclusive(lo, hi);
    let (new_h, new_w) = resized_dims(clip.height(), clip.width(), short_side);
    if new_h < cfg.crop_size || new_w < cfg.crop_size {
        return Err(Error::InvalidGeometry(format!(
            "clip resized to {new_h}x{new_w} is smaller than crop {}",
            cfg.crop_size
        )));
    }
    let crop_y = rng.range_inclusive(0, new_h - cfg.crop_size);
    let crop_x = rng.range_inclusive(0, new_w - cfg.crop_size);
    let flip = rng.bernoulli(cfg.hflip_prob);
    baseline_with(
        clip,
        cfg.crop_size,
        BaselineDraws {
            short_side,
            crop_y,
            crop_x,
            flip,
        },
    )
}

fn single_stream(
    clip: &Clip,
    cfg: &PipelineConfig,
    seed: u64,
    clip_id: u64,
    baseline_stream: u64,
    randaug_stream: u64,
) -> Result<Clip> {
    let out = baseline(clip, cfg, &mut rng_derive(seed, clip_id, baseline_stream))?;
    match &cfg.randaug {
        Some(ra) => randaugment_config(&out, ra, &mut rng_derive(seed, clip_id, randaug_stream)),
        None => Ok(out),
    }
}

/// Augments one sample, mixing with `partner` when configured and the gate fires.
///
/// `partner` must be given exactly when `cfg.mix_method` is set. It is only
/// touched if the mix gate fires.
pub fn augment_sample(
    sample: (&Clip, &LabelDist),
    partner: Option<(&Clip, &LabelDist)>,
    cfg: &PipelineConfig,
    seed: u64,
    clip_id: u64,
) -> Result<MixResult> {
    cfg.validate()?;
    let (clip_a, label_a) = sample;
    let mix = match (&cfg.mix_method, partner) {
        (Some(spec), Some(p)) => Some((spec, p)),
        (None, None) => None,
        (Some(_), None) => {
            return Err(Error::Config(
                "mix_method is set but no partner clip given".into(),
            ))
        }
        (None, Some(_)) => {
            return Err(Error::Config(
                "partner clip given but no mix_method set".into(),
            ))
        }
    };
    let a = single_stream(
        clip_a,
        cfg,
        seed,
        clip_id,
        stream::BASELINE_A,
        stream::RANDAUG_A,
    )?;
    let Some((spec, (clip_b, label_b))) = mix else {
        return Ok(MixResult::unmixed(a, label_a.clone()));
    };
    if !rng_derive(seed, clip_id, stream::MIX_GATE).bernoulli(cfg.mix_prob) {
        return Ok(MixResult::unmixed(a, label_a.clone()));
    }
    let b = single_stream(
        clip_b,
        cfg,
        seed,
        clip_id,
        stream::BASELINE_B,
        stream::RANDAUG_B,
    )?;
    spec.method.apply(
        &a,
        &b,
        label_a,
        label_b,
        spec.alpha,
        &mut rng_derive(seed, clip_id, stream::MIX),
    )
}
