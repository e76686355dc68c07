//! Affine frame warps with bilinear sampling.
//!
//! Every op is an inverse map from output pixel `(x, y)` to a source point,
//! taken about the frame centre `((w - 1) / 2, (h - 1) / 2)`. Source samples
//! outside the frame read as [`FILL`].
//!
//! - rotate by `a` degrees: content turns counter-clockwise as displayed
//! - shear-x by `s`: `src = (x - s * (y - cy), y)`
//! - shear-y by `s`: `src = (x, y - s * (x - cx))`
//! - translate-x by fraction `f`: content moves right by `round(f * w)` whole pixels
//! - translate-y by fraction `f`: content moves down by `round(f * h)` whole pixels

use super::kind::{level_to_param, OpClass, OpKind, OpParam, Sign};
use crate::clip::Frame;
use crate::error::{Error, Result};

/// Value used for samples that fall outside the source frame.
pub const FILL: u8 = 128;

#[inline]
fn fetch(frame: &Frame, x: i64, y: i64, ch: usize) -> f64 {
    if x < 0 || y < 0 || x >= frame.width() as i64 || y >= frame.height() as i64 {
        FILL as f64
    } else {
        frame.get(y as usize, x as usize, ch) as f64
    }
}

/// Warps `frame` through an inverse map `(x, y) -> (src_x, src_y)`.
pub fn warp(frame: &Frame, inverse: impl Fn(f64, f64) -> (f64, f64)) -> Frame {
    let (h, w, c) = (frame.height(), frame.width(), frame.channels());
    let mut out = Vec::with_capacity(h * w * c);
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = inverse(x as f64, y as f64);
            let (x0, y0) = (sx.floor(), sy.floor());
            let (fx, fy) = (sx - x0, sy - y0);
            let (x0, y0) = (x0 as i64, y0 as i64);
            for ch in 0..c {
                let top = (1.0 - fx) * fetch(frame, x0, y0, ch) + fx * fetch(frame, x0 + 1, y0, ch);
                let v = if fy == 0.0 {
                    top
                } else {
                    let bottom = (1.0 - fx) * fetch(frame, x0, y0 + 1, ch)
                        + fx * fetch(frame, x0 + 1, y0 + 1, ch);
                    (1.0 - fy) * top + fy * bottom
                };
                out.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    Frame::from_parts_unchecked(h, w, c, out)
}

fn centre(frame: &Frame) -> (f64, f64) {
    (
        (frame.width() as f64 - 1.0) / 2.0,
        (frame.height() as f64 - 1.0) / 2.0,
    )
}

pub fn rotate(frame: &Frame, degrees: f64) -> Frame {
    if degrees == 0.0 {
        return frame.clone();
    }
    let (cx, cy) = centre(frame);
    let (sin, cos) = degrees.to_radians().sin_cos();
    warp(frame, |x, y| {
        let (dx, dy) = (x - cx, y - cy);
        (cx + cos * dx - sin * dy, cy + sin * dx + cos * dy)
    })
}

pub fn shear_x(frame: &Frame, s: f64) -> Frame {
    if s == 0.0 {
        return frame.clone();
    }
    let (_, cy) = centre(frame);
    warp(frame, |x, y| (x - s * (y - cy), y))
}

pub fn shear_y(frame: &Frame, s: f64) -> Frame {
    if s == 0.0 {
        return frame.clone();
    }
    let (cx, _) = centre(frame);
    warp(frame, |x, y| (x, y - s * (x - cx)))
}

/// Integer shift; positive `dx` moves content right, positive `dy` down.
pub fn shift(frame: &Frame, dx: i64, dy: i64) -> Frame {
    if dx == 0 && dy == 0 {
        return frame.clone();
    }
    let (dx, dy) = (dx as f64, dy as f64);
    warp(frame, |x, y| (x - dx, y - dy))
}

/// Translation in whole pixels for a signed extent fraction.
pub fn translate_pixels(fraction: f64, extent: usize) -> i64 {
    (fraction * extent as f64).round() as i64
}

/// Applies a geometric op at one level.
pub fn apply_geometric(frame: &Frame, kind: OpKind, level: f64, sign: Sign) -> Result<Frame> {
    if kind.class() != OpClass::Geometric {
        return Err(Error::WrongOpClass {
            op: kind.name(),
            expected: "geometric",
        });
    }
    let param = level_to_param(kind, level, sign)?;
    Ok(match (kind, param) {
        (OpKind::Rotate, OpParam::Angle(a)) => rotate(frame, a),
        (OpKind::ShearX, OpParam::Shear(s)) => shear_x(frame, s),
        (OpKind::ShearY, OpParam::Shear(s)) => shear_y(frame, s),
        (OpKind::TranslateX, OpParam::Translate(f)) => {
            shift(frame, translate_pixels(f, frame.width()), 0)
        }
        (OpKind::TranslateY, OpParam::Translate(f)) => {
            shift(frame, 0, translate_pixels(f, frame.height()))
        }
        (k, p) => unreachable!("{k} mapped to {p:?}"),
    })
}

/// Bilinear resize with half-pixel centres and edge clamping.
pub fn resize_bilinear(frame: &Frame, new_h: usize, new_w: usize) -> Frame {
    let (h, w, c) = (frame.height(), frame.width(), frame.channels());
    if (new_h, new_w) == (h, w) {
        return frame.clone();
    }
    let axis = |n_out: usize, n_in: usize| -> Vec<(usize, usize, f64)> {
        let scale = n_in as f64 / n_out as f64;
        (0..n_out)
            .map(|i| {
                let s = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (n_in - 1) as f64);
                let i0 = s.floor() as usize;
                let i1 = (i0 + 1).min(n_in - 1);
                (i0, i1, s - i0 as f64)
            })
            .collect()
    };
    let ys = axis(new_h, h);
    let xs = axis(new_w, w);
    let mut out = Vec::with_capacity(new_h * new_w * c);
    for &(y0, y1, fy) in &ys {
        for &(x0, x1, fx) in &xs {
            for ch in 0..c {
                let p = |y, x| frame.get(y, x, ch) as f64;
                let top = (1.0 - fx) * p(y0, x0) + fx * p(y0, x1);
                let bottom = (1.0 - fx) * p(y1, x0) + fx * p(y1, x1);
                let v = (1.0 - fy) * top + fy * bottom;
                out.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    Frame::from_parts_unchecked(new_h, new_w, c, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_frame() -> impl Strategy<Value = Frame> {
        (1usize..10, 1usize..10, prop::bool::ANY).prop_flat_map(|(h, w, rgb)| {
            let c = if rgb { 3 } else { 1 };
            prop::collection::vec(any::<u8>(), h * w * c)
                .prop_map(move |data| Frame::new(h, w, c, data).unwrap())
        })
    }

    fn geometric() -> impl Iterator<Item = OpKind> {
        OpKind::ALL
            .into_iter()
            .filter(|k| k.class() == OpClass::Geometric)
    }

    #[test]
    fn translate_full_level_shifts_right() {
        let f = Frame::from_fn(6, 20, 3, |y, x, c| (1 + y * 20 + x + c) as u8).unwrap();
        let out = apply_geometric(&f, OpKind::TranslateX, 10.0, Sign::Plus).unwrap();
        let d = (0.3f64 * 20.0).round() as usize;
        assert_eq!(d, 6);
        for y in 0..6 {
            for x in 0..20 {
                for c in 0..3 {
                    let expected = if x < d { FILL } else { f.get(y, x - d, c) };
                    assert_eq!(out.get(y, x, c), expected, "({y}, {x}, {c})");
                }
            }
        }
    }

    #[test]
    fn translate_y_moves_down() {
        let f = Frame::from_fn(10, 3, 1, |y, x, _| (y * 3 + x) as u8).unwrap();
        let out = apply_geometric(&f, OpKind::TranslateY, 10.0, Sign::Plus).unwrap();
        assert_eq!(out.get(3, 1, 0), f.get(0, 1, 0));
        assert_eq!(out.get(2, 1, 0), FILL);
    }

    #[test]
    fn rotate_round_trip_error_is_small() {
        // Bilinear interpolation reproduces affine intensity fields, so the
        // only round-trip loss on a ramp is 8-bit rounding.
        let f = Frame::from_fn(8, 8, 1, |y, x, _| (40 + 12 * x + 9 * y) as u8).unwrap();
        let back = rotate(&rotate(&f, 15.0), -15.0);
        let mut worst = 0i32;
        for y in 2..6 {
            for x in 2..6 {
                worst = worst.max((back.get(y, x, 0) as i32 - f.get(y, x, 0) as i32).abs());
            }
        }
        assert!(worst <= 2, "max abs error {worst}");
    }

    #[test]
    fn rotate_quarter_turn_moves_corners() {
        // 90 degrees counter-clockwise: top-right corner goes to top-left
        let f = Frame::from_fn(5, 5, 1, |y, x, _| (y * 5 + x) as u8).unwrap();
        let out = rotate(&f, 90.0);
        assert_eq!(out.get(0, 0, 0), f.get(0, 4, 0));
        assert_eq!(out.get(2, 2, 0), f.get(2, 2, 0));
    }

    #[test]
    fn shear_keeps_centre_row() {
        let f = Frame::from_fn(5, 7, 1, |y, x, _| (y * 7 + x) as u8).unwrap();
        let out = shear_x(&f, 0.3);
        for x in 0..7 {
            assert_eq!(out.get(2, x, 0), f.get(2, x, 0));
        }
        assert_ne!(out, f);
    }

    #[test]
    fn rejects_photometric() {
        let f = Frame::filled(2, 2, 1, 0).unwrap();
        assert!(matches!(
            apply_geometric(&f, OpKind::Brightness, 1.0, Sign::Plus),
            Err(Error::WrongOpClass { .. })
        ));
    }

    #[test]
    fn resize_constant_and_identity() {
        let f = Frame::filled(4, 6, 3, 77).unwrap();
        let up = resize_bilinear(&f, 9, 13);
        assert_eq!((up.height(), up.width()), (9, 13));
        assert!(up.data().iter().all(|&p| p == 77));
        let g = Frame::from_fn(4, 4, 1, |y, x, _| (y * 4 + x) as u8).unwrap();
        assert_eq!(resize_bilinear(&g, 4, 4), g);
    }

    #[test]
    fn resize_downscale_by_two_averages() {
        let g = Frame::new(2, 2, 1, vec![0, 100, 100, 200]).unwrap();
        assert_eq!(resize_bilinear(&g, 1, 1).data(), &[100]);
    }

    proptest! {
        #[test]
        fn zero_level_invariance(f in arb_frame(), plus in prop::bool::ANY) {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            for kind in geometric() {
                prop_assert_eq!(&apply_geometric(&f, kind, 0.0, sign).unwrap(), &f);
            }
        }

        #[test]
        fn translate_commutes_with_flip(f in arb_frame(), level in 0.0f64..=10.0) {
            let lhs = apply_geometric(&f, OpKind::TranslateX, level, Sign::Plus).unwrap().hflip();
            let rhs = apply_geometric(&f.hflip(), OpKind::TranslateX, level, Sign::Minus).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
