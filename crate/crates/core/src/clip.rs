//! Pixel containers: a single frame and a clip of frames.
//!
//! Samples are `u8`, stored frame-major, then row-major, with channels
//! interleaved: index = ((t * h + y) * w + x) * c + ch.

use crate::error::{Error, Result};

/// One `h x w x c` image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    h: usize,
    w: usize,
    c: usize,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(h: usize, w: usize, c: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(1, h, w, c)?;
        if data.len() != h * w * c {
            return Err(Error::InvalidClip(format!(
                "frame data has {} samples, expected {}",
                data.len(),
                h * w * c
            )));
        }
        Ok(Self { h, w, c, data })
    }

    pub fn filled(h: usize, w: usize, c: usize, value: u8) -> Result<Self> {
        Self::new(h, w, c, vec![value; h * w * c])
    }

    /// Builds a frame from a per-sample function `(y, x, ch) -> value`.
    pub fn from_fn(
        h: usize,
        w: usize,
        c: usize,
        mut f: impl FnMut(usize, usize, usize) -> u8,
    ) -> Result<Self> {
        check_dims(1, h, w, c)?;
        let mut data = Vec::with_capacity(h * w * c);
        for y in 0..h {
            for x in 0..w {
                for ch in 0..c {
                    data.push(f(y, x, ch));
                }
            }
        }
        Ok(Self { h, w, c, data })
    }

    pub(crate) fn from_parts_unchecked(h: usize, w: usize, c: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), h * w * c);
        Self { h, w, c, data }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, ch: usize) -> u8 {
        self.data[(y * self.w + x) * self.c + ch]
    }

    /// Mirror left-right.
    pub fn hflip(&self) -> Frame {
        let mut data = Vec::with_capacity(self.data.len());
        let row = self.w * self.c;
        for y in 0..self.h {
            let src = &self.data[y * row..(y + 1) * row];
            for x in (0..self.w).rev() {
                data.extend_from_slice(&src[x * self.c..(x + 1) * self.c]);
            }
        }
        Frame::from_parts_unchecked(self.h, self.w, self.c, data)
    }
}

/// A `t x h x w x c` volume of 8-bit samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clip {
    t: usize,
    h: usize,
    w: usize,
    c: usize,
    data: Vec<u8>,
}

fn check_dims(t: usize, h: usize, w: usize, c: usize) -> Result<()> {
    if t == 0 || h == 0 || w == 0 {
        return Err(Error::InvalidClip(format!(
            "dimensions must be >= 1, got t={t} h={h} w={w}"
        )));
    }
    if c != 1 && c != 3 {
        return Err(Error::InvalidClip(format!(
            "channels must be 1 or 3, got {c}"
        )));
    }
    Ok(())
}

impl Clip {
    pub fn new(t: usize, h: usize, w: usize, c: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(t, h, w, c)?;
        let expected = t
            .checked_mul(h)
            .and_then(|n| n.checked_mul(w))
            .and_then(|n| n.checked_mul(c))
            .ok_or_else(|| Error::InvalidClip("dimension product overflows".into()))?;
        if data.len() != expected {
            return Err(Error::InvalidClip(format!(
                "data has {} samples, expected {expected}",
                data.len()
            )));
        }
        Ok(Self { t, h, w, c, data })
    }

    pub fn filled(t: usize, h: usize, w: usize, c: usize, value: u8) -> Result<Self> {
        check_dims(t, h, w, c)?;
        Self::new(t, h, w, c, vec![value; t * h * w * c])
    }

    /// Builds a clip from a per-sample function `(t, y, x, ch) -> value`.
    pub fn from_fn(
        t: usize,
        h: usize,
        w: usize,
        c: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> u8,
    ) -> Result<Self> {
        check_dims(t, h, w, c)?;
        let mut data = Vec::with_capacity(t * h * w * c);
        for ti in 0..t {
            for y in 0..h {
                for x in 0..w {
                    for ch in 0..c {
                        data.push(f(ti, y, x, ch));
                    }
                }
            }
        }
        Ok(Self { t, h, w, c, data })
    }

    /// Stacks frames; all must share `h`, `w`, `c`.
    pub fn from_frames(frames: Vec<Frame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidClip("no frames".into()))?;
        let (h, w, c) = (first.h, first.w, first.c);
        let mut data = Vec::with_capacity(frames.len() * h * w * c);
        for (i, f) in frames.iter().enumerate() {
            if (f.h, f.w, f.c) != (h, w, c) {
                return Err(Error::InvalidClip(format!(
                    "frame {i} is {}x{}x{}, expected {h}x{w}x{c}",
                    f.h, f.w, f.c
                )));
            }
            data.extend_from_slice(&f.data);
        }
        Ok(Self {
            t: frames.len(),
            h,
            w,
            c,
            data,
        })
    }

    pub fn frames(&self) -> usize {
        self.t
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    /// `(t, h, w, c)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.t, self.h, self.w, self.c)
    }

    pub fn frame_len(&self) -> usize {
        self.h * self.w * self.c
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, t: usize, y: usize, x: usize, ch: usize) -> u8 {
        self.data[((t * self.h + y) * self.w + x) * self.c + ch]
    }

    pub fn frame_data(&self, t: usize) -> &[u8] {
        let n = self.frame_len();
        &self.data[t * n..(t + 1) * n]
    }

    pub fn frame(&self, t: usize) -> Frame {
        Frame::from_parts_unchecked(self.h, self.w, self.c, self.frame_data(t).to_vec())
    }

    /// Applies `f(index, frame)` to every frame. `f` must preserve frame dims.
    pub fn map_frames(&self, mut f: impl FnMut(usize, Frame) -> Result<Frame>) -> Result<Clip> {
        let frames = (0..self.t)
            .map(|i| f(i, self.frame(i)))
            .collect::<Result<Vec<_>>>()?;
        Clip::from_frames(frames)
    }

    pub fn hflip(&self) -> Clip {
        let frames = (0..self.t).map(|i| self.frame(i).hflip()).collect();
        Clip::from_frames(frames).expect("flip preserves dims")
    }

    pub(crate) fn same_dims(&self, other: &Clip) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::IncompatibleClips(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(Clip::new(0, 1, 1, 1, vec![]).is_err());
        assert!(Clip::new(1, 1, 1, 2, vec![0, 0]).is_err());
        assert!(Clip::new(1, 2, 2, 1, vec![0; 3]).is_err());
        assert!(Clip::new(2, 2, 2, 3, vec![0; 24]).is_ok());
    }

    #[test]
    fn layout_is_frame_row_channel_major() {
        let clip = Clip::from_fn(2, 2, 3, 3, |t, y, x, c| {
            (t * 100 + y * 10 + x * 3 + c) as u8
        })
        .unwrap();
        assert_eq!(clip.data()[0..3], [0, 1, 2]);
        assert_eq!(clip.get(1, 1, 2, 1), 100 + 10 + 6 + 1);
        assert_eq!(clip.frame(1).get(1, 2, 1), clip.get(1, 1, 2, 1));
    }

    #[test]
    fn hflip_is_involution() {
        let clip =
            Clip::from_fn(3, 4, 5, 3, |t, y, x, c| (t * 7 + y * 13 + x * 31 + c) as u8).unwrap();
        let once = clip.hflip();
        assert_ne!(once, clip);
        assert_eq!(once.get(0, 1, 0, 2), clip.get(0, 1, 4, 2));
        assert_eq!(once.hflip(), clip);
    }

    #[test]
    fn from_frames_rejects_mixed() {
        let a = Frame::filled(2, 2, 1, 0).unwrap();
        let b = Frame::filled(2, 3, 1, 0).unwrap();
        assert!(Clip::from_frames(vec![a, b]).is_err());
        assert!(Clip::from_frames(vec![]).is_err());
    }
}
