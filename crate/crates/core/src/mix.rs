//! Two-clip mixing: MixUp, FadeMixUp, the CutMix family and the CutMixUp family.
//!
//! Each op has a `*_with` form taking the realized random quantities (mixing
//! ratio, fade half-range, mask) and a sampling form that draws them from an
//! [`RngStream`] and delegates. Labels always follow the realized pixel
//! provenance: the weight of `A` is the fraction of the volume that came
//! from `A`, with blended samples counted at their blend ratio.
//!
//! CutMixUp pastes `MixUp(A, B, l1)` into mask `M` over a background of `A`
//! when `l1 < 0.5` and of `B` otherwise. With `f` the realized mask fraction,
//! the weight of `A` is `l1 * f` when `l1 >= 0.5` and `1 - f + l1 * f` when
//! `l1 < 0.5`. The latter differs from the commonly printed
//! `l1 * l2 + (1 - l1)`, which does not sum to one with the `B` coefficient
//! `(1 - l1) * l2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clip::Clip;
use crate::error::{Error, Result};
use crate::label::{label_mix, LabelDist};
use crate::mask::{make_mask, MaskKind, MixMask};
use crate::rng::{sample_beta, sample_uniform, RngStream};
use crate::schedule::linspace;

/// Shape of the Beta distribution for the CutMixUp mask fraction.
pub const CUTMIXUP_MASK_ALPHA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixMethod {
    MixUp,
    FadeMixUp,
    /// Cut-and-paste of `B` into `A` inside a mask.
    CutMix(MaskKind),
    /// Paste of `MixUp(A, B)` inside a mask over a pure background.
    CutMixUp(MaskKind),
}

impl MixMethod {
    pub const ALL: [MixMethod; 8] = [
        MixMethod::MixUp,
        MixMethod::FadeMixUp,
        MixMethod::CutMix(MaskKind::SpatialBox),
        MixMethod::CutMix(MaskKind::FrameSet),
        MixMethod::CutMix(MaskKind::Cube),
        MixMethod::CutMixUp(MaskKind::SpatialBox),
        MixMethod::CutMixUp(MaskKind::FrameSet),
        MixMethod::CutMixUp(MaskKind::Cube),
    ];

    pub fn name(self) -> &'static str {
        match self {
            MixMethod::MixUp => "mixup",
            MixMethod::FadeMixUp => "fademixup",
            MixMethod::CutMix(MaskKind::SpatialBox) => "cutmix",
            MixMethod::CutMix(MaskKind::FrameSet) => "framecutmix",
            MixMethod::CutMix(MaskKind::Cube) => "cubecutmix",
            MixMethod::CutMixUp(MaskKind::SpatialBox) => "cutmixup",
            MixMethod::CutMixUp(MaskKind::FrameSet) => "framecutmixup",
            MixMethod::CutMixUp(MaskKind::Cube) => "cubecutmixup",
        }
    }

    /// Samples `(clip, label, ...)` with this method.
    pub fn apply(
        self,
        a: &Clip,
        b: &Clip,
        label_a: &LabelDist,
        label_b: &LabelDist,
        alpha: f64,
        rng: &mut RngStream,
    ) -> Result<MixResult> {
        let mut out = match self {
            MixMethod::MixUp => mixup(a, b, label_a, label_b, alpha, rng),
            MixMethod::FadeMixUp => fademixup(a, b, label_a, label_b, alpha, rng),
            MixMethod::CutMix(kind) => {
                cutmix_family(a, b, label_a, label_b, alpha, kind, false, rng)
            }
            MixMethod::CutMixUp(kind) => {
                cutmixup_family(a, b, label_a, label_b, alpha, kind, false, rng)
            }
        }?;
        out.method = Some(self);
        Ok(out)
    }
}

impl fmt::Display for MixMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MixMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "framemixup" => return Ok(MixMethod::CutMixUp(MaskKind::FrameSet)),
            "cubemixup" => return Ok(MixMethod::CutMixUp(MaskKind::Cube)),
            _ => {}
        }
        MixMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = MixMethod::ALL.iter().map(|m| m.name()).collect();
                format!(
                    "unknown mix method `{s}`; valid: {} (aliases: framemixup, cubemixup)",
                    names.join(", ")
                )
            })
    }
}

impl Serialize for MixMethod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for MixMethod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A mixed clip and everything needed to audit it.
#[derive(Debug, Clone, PartialEq)]
pub struct MixResult {
    pub clip: Clip,
    pub label: LabelDist,
    /// Realized weight of `A` after mask quantization.
    pub lambda_used: f64,
    pub mask: Option<MixMask>,
    /// FadeMixUp half-range.
    pub fade_gamma: Option<f64>,
    /// Blend ratio of the MixUp component (MixUp, FadeMixUp centre, CutMixUp `l1`).
    pub blend_lambda: Option<f64>,
    /// Method that produced this result; `None` when no mixing happened.
    pub method: Option<MixMethod>,
}

impl MixResult {
    /// Wraps an unmixed sample.
    pub fn unmixed(clip: Clip, label: LabelDist) -> Self {
        Self {
            clip,
            label,
            lambda_used: 1.0,
            mask: None,
            fade_gamma: None,
            blend_lambda: None,
            method: None,
        }
    }
}

/// `round(lambda * a + (1 - lambda) * b)`.
#[inline]
pub fn blend_sample(a: u8, b: u8, lambda: f64) -> u8 {
    (lambda * a as f64 + (1.0 - lambda) * b as f64)
        .round()
        .clamp(0.0, 255.0) as u8
}

fn check_pair(a: &Clip, b: &Clip, label_a: &LabelDist, label_b: &LabelDist) -> Result<()> {
    a.same_dims(b)?;
    if label_a.num_classes() != label_b.num_classes() {
        return Err(Error::IncompatibleLabels(format!(
            "{} classes vs {} classes",
            label_a.num_classes(),
            label_b.num_classes()
        )));
    }
    Ok(())
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} not in [0, 1]")))
    }
}

fn check_mask(a: &Clip, mask: &MixMask) -> Result<()> {
    let (t, h, w, _) = a.dims();
    if mask.dims() != (t, h, w) {
        return Err(Error::InvalidGeometry(format!(
            "mask for {:?} applied to clip {:?}",
            mask.dims(),
            (t, h, w)
        )));
    }
    Ok(())
}

/// Frame-wise blend with per-frame ratios.
fn blend_frames(a: &Clip, b: &Clip, ratios: &[f64]) -> Clip {
    let n = a.frame_len();
    let data = a
        .data()
        .chunks_exact(n)
        .zip(b.data().chunks_exact(n))
        .zip(ratios)
        .flat_map(|((fa, fb), &l)| fa.iter().zip(fb).map(move |(&x, &y)| blend_sample(x, y, l)))
        .collect();
    let (t, h, w, c) = a.dims();
    Clip::new(t, h, w, c, data).expect("dims preserved")
}

/// Per-sample composition: inside the mask `inside(a, b)`, outside `outside(a, b)`.
fn compose(
    a: &Clip,
    b: &Clip,
    mask: &MixMask,
    inside: impl Fn(u8, u8) -> u8,
    outside: impl Fn(u8, u8) -> u8,
) -> Clip {
    let (t, h, w, c) = a.dims();
    let flags = mask.frame_flags();
    let region = mask.region();
    let mut data = Vec::with_capacity(a.data().len());
    let (da, db) = (a.data(), b.data());
    let mut i = 0;
    for flag in flags.iter().take(t) {
        for y in 0..h {
            for x in 0..w {
                let masked = *flag && region.contains(y, x);
                for _ in 0..c {
                    data.push(if masked {
                        inside(da[i], db[i])
                    } else {
                        outside(da[i], db[i])
                    });
                    i += 1;
                }
            }
        }
    }
    Clip::new(t, h, w, c, data).expect("dims preserved")
}

pub fn mixup_with(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    lambda: f64,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    check_unit("lambda", lambda)?;
    let ratios = vec![lambda; a.frames()];
    Ok(MixResult {
        clip: blend_frames(a, b, &ratios),
        label: label_mix(label_a, label_b, lambda)?,
        lambda_used: lambda,
        mask: None,
        fade_gamma: None,
        blend_lambda: Some(lambda),
        method: Some(MixMethod::MixUp),
    })
}

/// `lambda ~ Beta(alpha, alpha)`, then [`mixup_with`].
pub fn mixup(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    let lambda = sample_beta(rng, alpha, alpha)?;
    mixup_with(a, b, label_a, label_b, lambda)
}

/// Per-frame ratios `linspace(lambda - gamma, lambda + gamma, t)`, clamped to `[0, 1]`.
/// A single frame gets `lambda` so the ratios always average to `lambda`.
pub fn fade_ratios(lambda: f64, gamma: f64, frames: usize) -> Result<Vec<f64>> {
    if frames == 1 {
        return Ok(vec![lambda]);
    }
    Ok(linspace(lambda - gamma, lambda + gamma, frames)?
        .into_iter()
        .map(|r| r.clamp(0.0, 1.0))
        .collect())
}

pub fn fademixup_with(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    lambda: f64,
    gamma: f64,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    check_unit("lambda", lambda)?;
    if !(0.0..=lambda.min(1.0 - lambda)).contains(&gamma) {
        return Err(Error::param(
            "gamma",
            format!("{gamma} not in [0, min(lambda, 1 - lambda)] for lambda {lambda}"),
        ));
    }
    let ratios = fade_ratios(lambda, gamma, a.frames())?;
    Ok(MixResult {
        clip: blend_frames(a, b, &ratios),
        label: label_mix(label_a, label_b, lambda)?,
        lambda_used: lambda,
        mask: None,
        fade_gamma: Some(gamma),
        blend_lambda: Some(lambda),
        method: Some(MixMethod::FadeMixUp),
    })
}

/// `lambda ~ Beta(alpha, alpha)`, `gamma ~ Uniform(0, min(lambda, 1 - lambda))`.
pub fn fademixup(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    let lambda = sample_beta(rng, alpha, alpha)?;
    let gamma = sample_uniform(rng, 0.0, lambda.min(1.0 - lambda))?;
    fademixup_with(a, b, label_a, label_b, lambda, gamma)
}

/// `B` inside `mask`, `A` elsewhere; `A` keeps the unmasked fraction of the label.
pub fn cutmix_with_mask(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    mask: MixMask,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    check_mask(a, &mask)?;
    let lambda_used = mask.unmasked_fraction();
    Ok(MixResult {
        clip: compose(a, b, &mask, |_, y| y, |x, _| x),
        label: label_mix(label_a, label_b, lambda_used)?,
        lambda_used,
        method: Some(MixMethod::CutMix(mask.kind())),
        mask: Some(mask),
        fade_gamma: None,
        blend_lambda: None,
    })
}

/// `lambda ~ Beta(alpha, alpha)`, mask targeting `1 - lambda` of the volume.
#[allow(clippy::too_many_arguments)]
pub fn cutmix_family(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    alpha: f64,
    kind: MaskKind,
    contiguous: bool,
    rng: &mut RngStream,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    let lambda = sample_beta(rng, alpha, alpha)?;
    let (t, h, w, _) = a.dims();
    let mask = make_mask(kind, 1.0 - lambda, (t, h, w), contiguous, rng)?;
    cutmix_with_mask(a, b, label_a, label_b, mask)
}

/// Weight of `A` for CutMixUp with blend ratio `lambda1` and mask `mask`.
pub fn cutmixup_weight_a(lambda1: f64, mask: &MixMask) -> f64 {
    let f = mask.volume_fraction();
    if lambda1 >= 0.5 {
        lambda1 * f
    } else {
        mask.unmasked_fraction() + lambda1 * f
    }
}

pub fn cutmixup_with(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    lambda1: f64,
    mask: MixMask,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    check_unit("lambda1", lambda1)?;
    check_mask(a, &mask)?;
    let weight_a = cutmixup_weight_a(lambda1, &mask);
    let inside = move |x, y| blend_sample(x, y, lambda1);
    let clip = if lambda1 < 0.5 {
        compose(a, b, &mask, inside, |x, _| x)
    } else {
        compose(a, b, &mask, inside, |_, y| y)
    };
    Ok(MixResult {
        clip,
        label: label_mix(label_a, label_b, weight_a)?,
        lambda_used: weight_a,
        method: Some(MixMethod::CutMixUp(mask.kind())),
        mask: Some(mask),
        fade_gamma: None,
        blend_lambda: Some(lambda1),
    })
}

/// `lambda1 ~ Beta(alpha1, alpha1)`, `lambda2 ~ Beta(2, 2)`, mask targeting `lambda2`.
#[allow(clippy::too_many_arguments)]
pub fn cutmixup_family(
    a: &Clip,
    b: &Clip,
    label_a: &LabelDist,
    label_b: &LabelDist,
    alpha1: f64,
    kind: MaskKind,
    contiguous: bool,
    rng: &mut RngStream,
) -> Result<MixResult> {
    check_pair(a, b, label_a, label_b)?;
    let lambda1 = sample_beta(rng, alpha1, alpha1)?;
    let lambda2 = sample_beta(rng, CUTMIXUP_MASK_ALPHA, CUTMIXUP_MASK_ALPHA)?;
    let (t, h, w, _) = a.dims();
    let mask = make_mask(kind, lambda2, (t, h, w), contiguous, rng)?;
    cutmixup_with(a, b, label_a, label_b, lambda1, mask)
}
