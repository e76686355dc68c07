//! Raw clip container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "CLIP"
//! 4       1     version = 1
//! 5       1     dtype   = 0 (u8 samples)
//! 6       4     t  (u32 little-endian)
//! 10      4     h
//! 14      4     w
//! 18      4     c  (1 or 3)
//! 22      n     payload, n = t*h*w*c bytes in clip order
//! ```
//!
//! The header is fully validated before any payload buffer is allocated, and
//! the payload must be exactly `n` bytes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::clip::Clip;
use crate::error::{Error, FormatError, Result};

pub const MAGIC: [u8; 4] = *b"CLIP";
pub const VERSION: u8 = 1;
pub const DTYPE_U8: u8 = 0;
pub const HEADER_LEN: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClipHeader {
    pub t: u32,
    pub h: u32,
    pub w: u32,
    pub c: u32,
}

impl ClipHeader {
    /// Payload size in bytes, saturating at `u64::MAX`.
    pub fn payload_len(&self) -> u64 {
        [self.h, self.w, self.c]
            .into_iter()
            .fold(self.t as u64, |acc, v| acc.saturating_mul(v as u64))
    }

    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = DTYPE_U8;
        for (i, v) in [self.t, self.h, self.w, self.c].into_iter().enumerate() {
            out[6 + 4 * i..10 + 4 * i].copy_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Parses and validates a header. Checks run in field order.
    pub fn decode(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::Truncated {
                what: "header",
                expected: HEADER_LEN as u64,
                got: bytes.len() as u64,
            });
        }
        let magic: [u8; 4] = bytes[0..4].try_into().expect("4 bytes");
        if magic != MAGIC {
            return Err(FormatError::BadMagic(magic));
        }
        if bytes[4] != VERSION {
            return Err(FormatError::UnsupportedVersion(bytes[4]));
        }
        if bytes[5] != DTYPE_U8 {
            return Err(FormatError::UnsupportedDtype(bytes[5]));
        }
        let field = |i: usize| {
            u32::from_le_bytes(bytes[6 + 4 * i..10 + 4 * i].try_into().expect("4 bytes"))
        };
        let header = ClipHeader {
            t: field(0),
            h: field(1),
            w: field(2),
            c: field(3),
        };
        for (name, v) in [
            ("t", header.t),
            ("h", header.h),
            ("w", header.w),
            ("c", header.c),
        ] {
            if v == 0 {
                return Err(FormatError::ZeroDim(name));
            }
        }
        if header.c != 1 && header.c != 3 {
            return Err(FormatError::BadChannels(header.c));
        }
        if header.payload_len() > u32::MAX as u64 {
            return Err(FormatError::SizeOverflow {
                t: header.t,
                h: header.h,
                w: header.w,
                c: header.c,
            });
        }
        Ok(header)
    }

    pub fn of(clip: &Clip) -> Result<Self, FormatError> {
        let (t, h, w, c) = clip.dims();
        let narrow = |v: usize| u32::try_from(v).ok();
        match (narrow(t), narrow(h), narrow(w), narrow(c)) {
            (Some(t), Some(h), Some(w), Some(c)) => {
                let header = ClipHeader { t, h, w, c };
                if header.payload_len() > u32::MAX as u64 {
                    return Err(FormatError::SizeOverflow { t, h, w, c });
                }
                Ok(header)
            }
            _ => Err(FormatError::SizeOverflow {
                t: t as u32,
                h: h as u32,
                w: w as u32,
                c: c as u32,
            }),
        }
    }
}

fn read_io(r: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

/// Decodes a clip from any reader. `origin` names the source in I/O errors.
pub fn decode_clip(r: &mut impl Read, origin: &Path) -> Result<(ClipHeader, Clip)> {
    let mut head = [0u8; HEADER_LEN];
    let got = read_io(r, &mut head).map_err(|e| Error::io(origin, e))?;
    let header = ClipHeader::decode(&head[..got])?;
    let expected = header.payload_len();
    // grows with the data actually present, so a lying header cannot force a big allocation
    let mut payload = Vec::new();
    r.by_ref()
        .take(expected)
        .read_to_end(&mut payload)
        .map_err(|e| Error::io(origin, e))?;
    if (payload.len() as u64) < expected {
        return Err(FormatError::Truncated {
            what: "payload",
            expected,
            got: payload.len() as u64,
        }
        .into());
    }
    let mut extra = [0u8; 1];
    if read_io(r, &mut extra).map_err(|e| Error::io(origin, e))? != 0 {
        return Err(FormatError::TrailingBytes.into());
    }
    let clip = Clip::new(
        header.t as usize,
        header.h as usize,
        header.w as usize,
        header.c as usize,
        payload,
    )?;
    Ok((header, clip))
}

pub fn encode_clip(clip: &Clip, w: &mut impl Write) -> std::io::Result<()> {
    let header = ClipHeader::of(clip)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    w.write_all(&header.encode())?;
    w.write_all(clip.data())
}

pub fn read_clip(path: impl AsRef<Path>) -> Result<Clip> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_clip(&mut BufReader::new(file), path)?.1)
}

/// Reads and validates only the header.
pub fn read_header(path: impl AsRef<Path>) -> Result<ClipHeader> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut head = [0u8; HEADER_LEN];
    let got = read_io(&mut file, &mut head).map_err(|e| Error::io(path, e))?;
    Ok(ClipHeader::decode(&head[..got])?)
}

pub fn write_clip(clip: &Clip, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode_clip(clip, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}
