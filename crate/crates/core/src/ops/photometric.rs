//! Per-frame photometric and parameterless operations.
//!
//! Enhancement ops (brightness, color, contrast, sharpness) blend the frame
//! with a degenerate image `D`: `out = round(D + factor * (src - D))`, clamped
//! to `[0, 255]`. A factor of exactly 1 returns the input unchanged.

use super::kind::{level_to_param, OpClass, OpKind, OpParam, Sign};
use crate::clip::Frame;
use crate::error::{Error, Result};

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

/// Sharpness smoothing kernel, normalised by 13. Border pixels are not filtered.
pub const SMOOTH_KERNEL: [[u32; 3]; 3] = [[1, 1, 1], [1, 5, 1], [1, 1, 1]];

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn luma_at(px: &[u8]) -> f64 {
    if px.len() == 1 {
        px[0] as f64
    } else {
        LUMA[0] * px[0] as f64 + LUMA[1] * px[1] as f64 + LUMA[2] * px[2] as f64
    }
}

/// Blend every sample toward a per-pixel degenerate value.
fn blend_with(frame: &Frame, factor: f64, mut degenerate: impl FnMut(usize) -> f64) -> Frame {
    let data = frame
        .data()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let d = degenerate(i);
            to_u8(d + factor * (p as f64 - d))
        })
        .collect();
    Frame::from_parts_unchecked(frame.height(), frame.width(), frame.channels(), data)
}

pub fn brightness(frame: &Frame, factor: f64) -> Frame {
    if factor == 1.0 {
        return frame.clone();
    }
    blend_with(frame, factor, |_| 0.0)
}

/// Blend toward the grayscale frame (luma rounded to 8 bits, replicated per channel).
pub fn color(frame: &Frame, factor: f64) -> Frame {
    if factor == 1.0 {
        return frame.clone();
    }
    let c = frame.channels();
    let gray: Vec<f64> = frame
        .data()
        .chunks_exact(c)
        .map(|px| luma_at(px).round())
        .collect();
    blend_with(frame, factor, |i| gray[i / c])
}

/// Blend toward a constant frame at the mean luma.
pub fn contrast(frame: &Frame, factor: f64) -> Frame {
    if factor == 1.0 {
        return frame.clone();
    }
    let c = frame.channels();
    let n = frame.height() * frame.width();
    let mean = frame.data().chunks_exact(c).map(luma_at).sum::<f64>() / n as f64;
    blend_with(frame, factor, |_| mean)
}

/// Smoothed frame used as the sharpness degenerate.
pub fn smooth(frame: &Frame) -> Frame {
    let (h, w, c) = (frame.height(), frame.width(), frame.channels());
    let src = frame.data();
    let mut out = src.to_vec();
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            for ch in 0..c {
                let mut acc = 0u32;
                for (ky, row) in SMOOTH_KERNEL.iter().enumerate() {
                    for (kx, &k) in row.iter().enumerate() {
                        let (yy, xx) = (y + ky - 1, x + kx - 1);
                        acc += k * src[(yy * w + xx) * c + ch] as u32;
                    }
                }
                out[(y * w + x) * c + ch] = to_u8(acc as f64 / 13.0);
            }
        }
    }
    Frame::from_parts_unchecked(h, w, c, out)
}

pub fn sharpness(frame: &Frame, factor: f64) -> Frame {
    if factor == 1.0 {
        return frame.clone();
    }
    let smoothed = smooth(frame);
    let deg = smoothed.data();
    blend_with(frame, factor, |i| deg[i] as f64)
}

/// Keep the top `bits` bits of every sample.
pub fn posterize(frame: &Frame, bits: u32) -> Frame {
    let bits = bits.min(8);
    let mask = !((1u16 << (8 - bits)) - 1) as u8;
    map_samples(frame, |p| p & mask)
}

/// Invert every sample `>= threshold`.
pub fn solarize(frame: &Frame, threshold: u32) -> Frame {
    map_samples(frame, |p| if p as u32 >= threshold { 255 - p } else { p })
}

fn map_samples(frame: &Frame, f: impl Fn(u8) -> u8) -> Frame {
    let data = frame.data().iter().map(|&p| f(p)).collect();
    Frame::from_parts_unchecked(frame.height(), frame.width(), frame.channels(), data)
}

fn map_channels(frame: &Frame, luts: &[[u8; 256]]) -> Frame {
    let c = frame.channels();
    let data = frame
        .data()
        .iter()
        .enumerate()
        .map(|(i, &p)| luts[i % c][p as usize])
        .collect();
    Frame::from_parts_unchecked(frame.height(), frame.width(), c, data)
}

fn channel_histograms(frame: &Frame) -> Vec<[u32; 256]> {
    let c = frame.channels();
    let mut hists = vec![[0u32; 256]; c];
    for (i, &p) in frame.data().iter().enumerate() {
        hists[i % c][p as usize] += 1;
    }
    hists
}

/// Per-channel histogram equalization.
///
/// With `n` samples in the channel and `top` the count of its largest present
/// value, `step = (n - top) / 255` (integer division). If `step == 0` the
/// channel is left alone. Otherwise value `v` maps to
/// `min(255, (step / 2 + #samples below v) / step)`.
pub fn equalize(frame: &Frame) -> Frame {
    let luts: Vec<[u8; 256]> = channel_histograms(frame)
        .iter()
        .map(|hist| {
            let mut lut = [0u8; 256];
            for (v, slot) in lut.iter_mut().enumerate() {
                *slot = v as u8;
            }
            let n: u32 = hist.iter().sum();
            let top = hist.iter().rev().find(|&&k| k > 0).copied().unwrap_or(0);
            let step = (n - top) / 255;
            if step == 0 {
                return lut;
            }
            let mut acc = step / 2;
            for (v, &count) in hist.iter().enumerate() {
                lut[v] = (acc / step).min(255) as u8;
                acc += count;
            }
            lut
        })
        .collect();
    map_channels(frame, &luts)
}

/// Per-channel linear stretch of `[min, max]` onto `[0, 255]`; flat channels are untouched.
pub fn autocontrast(frame: &Frame) -> Frame {
    let luts: Vec<[u8; 256]> = channel_histograms(frame)
        .iter()
        .map(|hist| {
            let mut lut = [0u8; 256];
            for (v, slot) in lut.iter_mut().enumerate() {
                *slot = v as u8;
            }
            let lo = hist.iter().position(|&k| k > 0).unwrap_or(0);
            let hi = hist.iter().rposition(|&k| k > 0).unwrap_or(0);
            if hi > lo {
                let span = (hi - lo) as f64;
                for (v, slot) in lut.iter_mut().enumerate() {
                    *slot = to_u8((v as f64 - lo as f64) * 255.0 / span);
                }
            }
            lut
        })
        .collect();
    map_channels(frame, &luts)
}

/// Applies a photometric or parameterless op at one level.
pub fn apply_photometric(frame: &Frame, kind: OpKind, level: f64, sign: Sign) -> Result<Frame> {
    if kind.class() == OpClass::Geometric {
        return Err(Error::WrongOpClass {
            op: kind.name(),
            expected: "photometric",
        });
    }
    let param = level_to_param(kind, level, sign)?;
    Ok(match (kind, param) {
        (OpKind::Identity, _) => frame.clone(),
        (OpKind::Autocontrast, _) => autocontrast(frame),
        (OpKind::Equalize, _) => equalize(frame),
        (OpKind::Brightness, OpParam::Factor(f)) => brightness(frame, f),
        (OpKind::Color, OpParam::Factor(f)) => color(frame, f),
        (OpKind::Contrast, OpParam::Factor(f)) => contrast(frame, f),
        (OpKind::Sharpness, OpParam::Factor(f)) => sharpness(frame, f),
        (OpKind::Posterize, OpParam::Bits(b)) => posterize(frame, b),
        (OpKind::Solarize, OpParam::Threshold(t)) => solarize(frame, t),
        (k, p) => unreachable!("{k} mapped to {p:?}"),
    })
}
