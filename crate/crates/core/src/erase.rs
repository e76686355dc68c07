//! Deletion augmentations: CutOut, FrameCutOut and CubeCutOut.

use crate::clip::Clip;
use crate::error::{Error, Result};
use crate::mask::{pick_frames, BoxRegion, MaskKind, MixMask};
use crate::rng::RngStream;

/// Value written into erased samples.
pub const ERASE_FILL: u8 = 0;

/// Writes [`ERASE_FILL`] into every masked sample, all channels.
pub fn erase(clip: &Clip, mask: &MixMask) -> Result<Clip> {
    let (t, h, w, c) = clip.dims();
    if mask.dims() != (t, h, w) {
        return Err(Error::InvalidGeometry(format!(
            "mask for {:?} applied to clip {:?}",
            mask.dims(),
            (t, h, w)
        )));
    }
    let mut out = clip.clone();
    let r = mask.region();
    let data = out.data_mut();
    for &f in mask.frames() {
        for y in r.y0..r.y1 {
            let row = ((f * h + y) * w + r.x0) * c;
            data[row..row + r.width() * c].fill(ERASE_FILL);
        }
    }
    Ok(out)
}

fn check_box(clip: &Clip, box_h: usize, box_w: usize) -> Result<()> {
    if box_h > clip.height() || box_w > clip.width() {
        return Err(Error::InvalidGeometry(format!(
            "box {box_h}x{box_w} larger than frame {}x{}",
            clip.height(),
            clip.width()
        )));
    }
    Ok(())
}

fn check_frames(clip: &Clip, n_frames: usize) -> Result<()> {
    if n_frames > clip.frames() {
        return Err(Error::InvalidGeometry(format!(
            "{n_frames} frames requested from a {}-frame clip",
            clip.frames()
        )));
    }
    Ok(())
}

fn nonempty(frames: Vec<usize>, region: BoxRegion) -> (Vec<usize>, BoxRegion) {
    if frames.is_empty() || region.area() == 0 {
        (Vec::new(), BoxRegion::empty())
    } else {
        (frames, region)
    }
}

/// Zeroes one `box_h x box_w` box (uniform centre, clipped) in every frame.
pub fn cutout(
    clip: &Clip,
    box_h: usize,
    box_w: usize,
    rng: &mut RngStream,
) -> Result<(Clip, MixMask)> {
    check_box(clip, box_h, box_w)?;
    let (t, h, w, _) = clip.dims();
    let region = BoxRegion::place(box_h, box_w, h, w, rng);
    let (frames, region) = nonempty((0..t).collect(), region);
    let mask = MixMask::new(MaskKind::SpatialBox, (t, h, w), frames, region)?;
    Ok((erase(clip, &mask)?, mask))
}

/// Zeroes `n_frames` whole frames: a uniform subset, or a run when `contiguous`.
pub fn frame_cutout(
    clip: &Clip,
    n_frames: usize,
    contiguous: bool,
    rng: &mut RngStream,
) -> Result<(Clip, MixMask)> {
    check_frames(clip, n_frames)?;
    let (t, h, w, _) = clip.dims();
    let frames = pick_frames(t, n_frames, contiguous, rng);
    let (frames, region) = nonempty(frames, BoxRegion::full(h, w));
    let mask = MixMask::new(MaskKind::FrameSet, (t, h, w), frames, region)?;
    Ok((erase(clip, &mask)?, mask))
}

/// Zeroes a box over a run of `n_frames` frames. Draws the run start, then the box.
pub fn cube_cutout(
    clip: &Clip,
    box_h: usize,
    box_w: usize,
    n_frames: usize,
    rng: &mut RngStream,
) -> Result<(Clip, MixMask)> {
    check_box(clip, box_h, box_w)?;
    check_frames(clip, n_frames)?;
    let (t, h, w, _) = clip.dims();
    let frames = pick_frames(t, n_frames, true, rng);
    let region = BoxRegion::place(box_h, box_w, h, w, rng);
    let (frames, region) = nonempty(frames, region);
    let mask = MixMask::new(MaskKind::Cube, (t, h, w), frames, region)?;
    Ok((erase(clip, &mask)?, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_derive;

    fn nonzero_clip(t: usize, h: usize, w: usize) -> Clip {
        Clip::from_fn(t, h, w, 3, |ti, y, x, c| {
            (1 + (ti + y * 3 + x * 5 + c) % 255) as u8
        })
        .unwrap()
    }

    fn zeros(clip: &Clip) -> usize {
        clip.data().iter().filter(|&&p| p == 0).count()
    }

    /// Recovers the set of changed `(t, y, x)` positions by diffing.
    fn diff_positions(a: &Clip, b: &Clip) -> Vec<(usize, usize, usize)> {
        let (t, h, w, c) = a.dims();
        let mut out = Vec::new();
        for ti in 0..t {
            for y in 0..h {
                for x in 0..w {
                    if (0..c).any(|ch| a.get(ti, y, x, ch) != b.get(ti, y, x, ch)) {
                        out.push((ti, y, x));
                    }
                }
            }
        }
        out
    }

    fn mask_positions(m: &MixMask) -> Vec<(usize, usize, usize)> {
        let (t, h, w) = m.dims();
        let mut out = Vec::new();
        for ti in 0..t {
            for y in 0..h {
                for x in 0..w {
                    if m.contains(ti, y, x) {
                        out.push((ti, y, x));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cutout_counts() {
        let clip = nonzero_clip(3, 160, 160);
        let mut interior = 0;
        for seed in 0..40 {
            let (out, mask) = cutout(&clip, 80, 80, &mut rng_derive(seed, 0, 0)).unwrap();
            let k = mask.region().area();
            assert!(k <= 6400);
            assert_eq!(zeros(&out), k * 3 * 3);
            if k == 6400 {
                interior += 1;
            }
            assert_eq!(diff_positions(&clip, &out), mask_positions(&mask));
            // same box in every frame
            assert_eq!(mask.frames(), &[0, 1, 2]);
        }
        assert!(interior > 5);
    }

    #[test]
    fn empty_erasures_are_identity() {
        let clip = nonzero_clip(4, 10, 12);
        let mut rng = rng_derive(0, 0, 0);
        assert_eq!(cutout(&clip, 0, 0, &mut rng).unwrap().0, clip);
        assert_eq!(frame_cutout(&clip, 0, false, &mut rng).unwrap().0, clip);
        assert_eq!(cube_cutout(&clip, 0, 0, 0, &mut rng).unwrap().0, clip);
        assert_eq!(cube_cutout(&clip, 5, 5, 0, &mut rng).unwrap().0, clip);
    }

    #[test]
    fn frame_cutout_counts() {
        let clip = nonzero_clip(64, 4, 4);
        let (out, mask) = frame_cutout(&clip, 16, false, &mut rng_derive(1, 0, 0)).unwrap();
        let flags = mask.frame_flags();
        let mut erased = 0;
        for (t, &flagged) in flags.iter().enumerate() {
            if out.frame_data(t).iter().all(|&p| p == 0) {
                erased += 1;
                assert!(flagged);
            } else {
                assert_eq!(out.frame_data(t), clip.frame_data(t));
            }
        }
        assert_eq!(erased, 16);
        let (all, _) = frame_cutout(&clip, 64, false, &mut rng_derive(1, 0, 0)).unwrap();
        assert_eq!(zeros(&all), all.data().len());
    }

    #[test]
    fn contiguous_frame_cutout() {
        let clip = nonzero_clip(20, 2, 2);
        let (_, mask) = frame_cutout(&clip, 5, true, &mut rng_derive(2, 0, 0)).unwrap();
        assert!(mask.frames().windows(2).all(|p| p[1] == p[0] + 1));
    }

    #[test]
    fn cube_cutout_counts() {
        let clip = nonzero_clip(64, 160, 160);
        let mut interior = 0;
        for seed in 0..20 {
            let (out, mask) = cube_cutout(&clip, 80, 80, 16, &mut rng_derive(seed, 0, 0)).unwrap();
            let area = mask.region().area();
            assert!(zeros(&out) <= 80 * 80 * 16 * 3);
            assert_eq!(zeros(&out), area * 16 * 3);
            assert!(mask.frames().windows(2).all(|p| p[1] == p[0] + 1));
            if area == 6400 {
                interior += 1;
                assert_eq!(zeros(&out), 80 * 80 * 16 * 3);
            }
        }
        assert!(interior > 0);
    }

    #[test]
    fn erase_is_idempotent() {
        let clip = nonzero_clip(6, 9, 9);
        let (once, mask) = cube_cutout(&clip, 4, 3, 2, &mut rng_derive(3, 0, 0)).unwrap();
        assert_eq!(erase(&once, &mask).unwrap(), once);
    }

    #[test]
    fn geometry_errors() {
        let clip = nonzero_clip(4, 10, 10);
        let mut rng = rng_derive(0, 0, 0);
        assert!(matches!(
            cutout(&clip, 11, 5, &mut rng),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            frame_cutout(&clip, 5, false, &mut rng),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(cube_cutout(&clip, 5, 5, 5, &mut rng).is_err());
    }
}
