//! Binary regions of a clip volume: spatial boxes, frame sets and cubes.
//!
//! Boxes are placed CutMix-style: the centre is uniform over the frame and the
//! box is clipped to the frame bounds, so border draws yield partial boxes.
//! Every mask reports its exact realized volume fraction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskKind {
    /// The same spatial box in every frame.
    SpatialBox,
    /// Whole frames.
    FrameSet,
    /// A spatial box over a contiguous run of frames.
    Cube,
}

impl MaskKind {
    pub fn name(self) -> &'static str {
        match self {
            MaskKind::SpatialBox => "spatial-box",
            MaskKind::FrameSet => "frame-set",
            MaskKind::Cube => "cube",
        }
    }
}

impl fmt::Display for MaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MaskKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [MaskKind::SpatialBox, MaskKind::FrameSet, MaskKind::Cube]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown mask kind `{s}`; valid: spatial-box, frame-set, cube"))
    }
}

/// Half-open pixel rectangle `[y0, y1) x [x0, x1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub y0: usize,
    pub y1: usize,
    pub x0: usize,
    pub x1: usize,
}

impl BoxRegion {
    pub fn full(h: usize, w: usize) -> Self {
        Self {
            y0: 0,
            y1: h,
            x0: 0,
            x1: w,
        }
    }

    pub fn empty() -> Self {
        Self {
            y0: 0,
            y1: 0,
            x0: 0,
            x1: 0,
        }
    }

    pub fn height(&self) -> usize {
        self.y1.saturating_sub(self.y0)
    }

    pub fn width(&self) -> usize {
        self.x1.saturating_sub(self.x0)
    }

    pub fn area(&self) -> usize {
        self.height() * self.width()
    }

    #[inline]
    pub fn contains(&self, y: usize, x: usize) -> bool {
        (self.y0..self.y1).contains(&y) && (self.x0..self.x1).contains(&x)
    }

    /// Box of `box_h x box_w` centred at `(cy, cx)` (offset by `size / 2`), clipped to `h x w`.
    pub fn centred_at(
        cy: usize,
        cx: usize,
        box_h: usize,
        box_w: usize,
        h: usize,
        w: usize,
    ) -> Self {
        let span = |c: usize, size: usize, limit: usize| {
            let lo = c as i64 - (size / 2) as i64;
            let hi = lo + size as i64;
            (
                lo.clamp(0, limit as i64) as usize,
                hi.clamp(0, limit as i64) as usize,
            )
        };
        let (y0, y1) = span(cy, box_h, h);
        let (x0, x1) = span(cx, box_w, w);
        if y0 == y1 || x0 == x1 {
            return Self::empty();
        }
        Self { y0, y1, x0, x1 }
    }

    /// Uniform centre over the `h x w` frame, clipped. Always takes two draws.
    pub fn place(box_h: usize, box_w: usize, h: usize, w: usize, rng: &mut RngStream) -> Self {
        let cy = rng.below(h as u64) as usize;
        let cx = rng.below(w as u64) as usize;
        Self::centred_at(cy, cx, box_h, box_w, h, w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixMask {
    kind: MaskKind,
    dims: (usize, usize, usize),
    frames: Vec<usize>,
    region: BoxRegion,
}

impl MixMask {
    /// Validates geometry against `dims = (t, h, w)`. `frames` must be strictly increasing.
    pub fn new(
        kind: MaskKind,
        dims: (usize, usize, usize),
        frames: Vec<usize>,
        region: BoxRegion,
    ) -> Result<Self> {
        let (t, h, w) = dims;
        if frames.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidGeometry(
                "mask frames not strictly increasing".into(),
            ));
        }
        if frames.last().is_some_and(|&f| f >= t) {
            return Err(Error::InvalidGeometry(format!("mask frame beyond t={t}")));
        }
        if region.y1 > h || region.x1 > w || region.y0 > region.y1 || region.x0 > region.x1 {
            return Err(Error::InvalidGeometry(format!(
                "box {region:?} outside {h}x{w}"
            )));
        }
        if kind == MaskKind::Cube && frames.windows(2).any(|p| p[1] != p[0] + 1) {
            return Err(Error::InvalidGeometry(
                "cube frames must be contiguous".into(),
            ));
        }
        Ok(Self {
            kind,
            dims,
            frames,
            region,
        })
    }

    pub fn empty(kind: MaskKind, dims: (usize, usize, usize)) -> Self {
        Self {
            kind,
            dims,
            frames: Vec::new(),
            region: BoxRegion::empty(),
        }
    }

    pub fn full(kind: MaskKind, dims: (usize, usize, usize)) -> Self {
        let (t, h, w) = dims;
        Self {
            kind,
            dims,
            frames: (0..t).collect(),
            region: BoxRegion::full(h, w),
        }
    }

    pub fn kind(&self) -> MaskKind {
        self.kind
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    /// Masked frame indices, ascending.
    pub fn frames(&self) -> &[usize] {
        &self.frames
    }

    pub fn region(&self) -> BoxRegion {
        self.region
    }

    /// Number of masked `(t, y, x)` positions.
    pub fn masked_count(&self) -> usize {
        self.frames.len() * self.region.area()
    }

    /// `t * h * w`.
    pub fn total(&self) -> usize {
        self.dims.0 * self.dims.1 * self.dims.2
    }

    /// `masked_count / total`.
    pub fn volume_fraction(&self) -> f64 {
        self.masked_count() as f64 / self.total() as f64
    }

    /// `1 - volume_fraction`, computed from counts.
    pub fn unmasked_fraction(&self) -> f64 {
        (self.total() - self.masked_count()) as f64 / self.total() as f64
    }

    pub fn is_empty(&self) -> bool {
        self.masked_count() == 0
    }

    /// Per-frame membership table.
    pub fn frame_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.dims.0];
        for &f in &self.frames {
            flags[f] = true;
        }
        flags
    }

    pub fn contains(&self, t: usize, y: usize, x: usize) -> bool {
        self.region.contains(y, x) && self.frames.binary_search(&t).is_ok()
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if (0.0..=1.0).contains(&fraction) {
        Ok(())
    } else {
        Err(Error::param(
            "fraction",
            format!("{fraction} not in [0, 1]"),
        ))
    }
}

fn scaled(extent: usize, ratio: f64) -> usize {
    ((extent as f64 * ratio).round() as usize).min(extent)
}

/// `k` frame indices out of `t`: a uniform subset, or a run with uniform start.
pub fn pick_frames(t: usize, k: usize, contiguous: bool, rng: &mut RngStream) -> Vec<usize> {
    if contiguous {
        let start = rng.range_inclusive(0, t - k);
        (start..start + k).collect()
    } else {
        rng.distinct(t, k)
    }
}

/// Builds a mask targeting `fraction` of the `(t, h, w)` volume.
///
/// - spatial-box: each spatial side scaled by `sqrt(fraction)`, all frames
/// - frame-set: `round(fraction * t)` frames, a subset or a run per `contiguous`
/// - cube: each of `t`, `h`, `w` scaled by `cbrt(fraction)`; contiguous frames
///   with uniform start, box placed as for spatial-box
pub fn make_mask(
    kind: MaskKind,
    fraction: f64,
    dims: (usize, usize, usize),
    contiguous: bool,
    rng: &mut RngStream,
) -> Result<MixMask> {
    check_fraction(fraction)?;
    let (t, h, w) = dims;
    if t == 0 || h == 0 || w == 0 {
        return Err(Error::InvalidGeometry(format!("empty volume {dims:?}")));
    }
    let (frames, region) = match kind {
        MaskKind::SpatialBox => {
            let r = fraction.sqrt();
            let region = BoxRegion::place(scaled(h, r), scaled(w, r), h, w, rng);
            ((0..t).collect(), region)
        }
        MaskKind::FrameSet => {
            let k = scaled(t, fraction);
            (pick_frames(t, k, contiguous, rng), BoxRegion::full(h, w))
        }
        MaskKind::Cube => {
            let r = fraction.cbrt();
            let frames = pick_frames(t, scaled(t, r), true, rng);
            let region = BoxRegion::place(scaled(h, r), scaled(w, r), h, w, rng);
            (frames, region)
        }
    };
    let (frames, region) = if frames.is_empty() || region.area() == 0 {
        (Vec::new(), BoxRegion::empty())
    } else {
        (frames, region)
    };
    MixMask::new(kind, dims, frames, region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_derive;

    #[test]
    fn frame_set_quarter() {
        let mut rng = rng_derive(0, 0, 0);
        let m = make_mask(MaskKind::FrameSet, 0.25, (64, 8, 8), false, &mut rng).unwrap();
        assert_eq!(m.frames().len(), 16);
        assert_eq!(m.volume_fraction(), 0.25);
        let c = make_mask(MaskKind::FrameSet, 0.25, (64, 8, 8), true, &mut rng).unwrap();
        assert!(c.frames().windows(2).all(|p| p[1] == p[0] + 1));
        assert_eq!(c.frames().len(), 16);
    }

    #[test]
    fn full_box_when_centred() {
        let r = BoxRegion::centred_at(80, 80, 160, 160, 160, 160);
        assert_eq!(r, BoxRegion::full(160, 160));
        let m = MixMask::new(MaskKind::SpatialBox, (4, 160, 160), (0..4).collect(), r).unwrap();
        assert_eq!(m.volume_fraction(), 1.0);
    }

    #[test]
    fn full_fraction_box_is_clipped_off_centre() {
        let mut rng = rng_derive(5, 0, 0);
        for _ in 0..200 {
            let m = make_mask(MaskKind::SpatialBox, 1.0, (2, 16, 16), false, &mut rng).unwrap();
            assert!(m.volume_fraction() >= 0.25 && m.volume_fraction() <= 1.0);
        }
    }

    #[test]
    fn cube_rounding_band() {
        // 0.125 -> 32 per axis on a 64^3 volume; interior draws hit 0.125 exactly
        let mut rng = rng_derive(1, 2, 3);
        let mut interior = 0;
        for _ in 0..500 {
            let m = make_mask(MaskKind::Cube, 0.125, (64, 64, 64), true, &mut rng).unwrap();
            let r = m.region();
            if r.height() == 32 && r.width() == 32 {
                interior += 1;
                assert_eq!(m.frames().len(), 32);
                let f = m.volume_fraction();
                assert!((0.11..=0.14).contains(&f), "{f}");
            }
        }
        assert!(interior > 100);
    }

    #[test]
    fn empty_and_full_fraction() {
        let mut rng = rng_derive(0, 0, 0);
        for kind in [MaskKind::SpatialBox, MaskKind::FrameSet, MaskKind::Cube] {
            let m = make_mask(kind, 0.0, (4, 5, 6), false, &mut rng).unwrap();
            assert!(m.is_empty());
            assert_eq!(m.volume_fraction(), 0.0);
        }
        let f = make_mask(MaskKind::FrameSet, 1.0, (4, 5, 6), false, &mut rng).unwrap();
        assert_eq!(f.volume_fraction(), 1.0);
        assert!(make_mask(MaskKind::Cube, 1.5, (4, 5, 6), false, &mut rng).is_err());
    }

    #[test]
    fn rejects_bad_geometry() {
        let r = BoxRegion {
            y0: 0,
            y1: 5,
            x0: 0,
            x1: 2,
        };
        assert!(MixMask::new(MaskKind::SpatialBox, (1, 4, 4), vec![0], r).is_err());
        assert!(MixMask::new(
            MaskKind::FrameSet,
            (2, 4, 4),
            vec![2],
            BoxRegion::full(4, 4)
        )
        .is_err());
        assert!(
            MixMask::new(MaskKind::Cube, (4, 4, 4), vec![0, 2], BoxRegion::full(4, 4)).is_err()
        );
    }

    #[test]
    fn volume_fraction_matches_enumeration() {
        let mut rng = rng_derive(8, 8, 8);
        for i in 0..300 {
            let kind = [MaskKind::SpatialBox, MaskKind::FrameSet, MaskKind::Cube][i % 3];
            let f = rng.next_f64();
            let m = make_mask(kind, f, (5, 7, 9), i % 2 == 0, &mut rng).unwrap();
            let mut count = 0;
            for t in 0..5 {
                for y in 0..7 {
                    for x in 0..9 {
                        count += m.contains(t, y, x) as usize;
                    }
                }
            }
            assert_eq!(count, m.masked_count());
            assert_eq!(m.volume_fraction(), count as f64 / 315.0);
        }
    }

    #[test]
    fn kind_names() {
        for k in [MaskKind::SpatialBox, MaskKind::FrameSet, MaskKind::Cube] {
            assert_eq!(k.name().parse::<MaskKind>().unwrap(), k);
        }
    }
}
