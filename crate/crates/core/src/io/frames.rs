//! Frame-directory ingestion (PNG / PPM / PGM).

use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use image::DynamicImage;

use crate::clip::Clip;
use crate::error::{Error, FormatError, Result};

/// Shell-style match supporting `*` and `?`.
pub fn wildcard_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let n: Vec<char> = name.chars().collect();
    let (mut pi, mut ni) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ni < n.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == n[ni]) {
            pi += 1;
            ni += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ni));
            pi += 1;
        } else if let Some((sp, sn)) = star {
            pi = sp + 1;
            ni = sn + 1;
            star = Some((sp, sn + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

/// Compares names treating digit runs as numbers: `frame_2` < `frame_10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (&a[..da], &b[..db]);
                let strip = |s: &[u8]| {
                    let z = s.iter().take_while(|&&c| c == b'0').count();
                    s[z..].to_vec()
                };
                let (sa, sb) = (strip(na), strip(nb));
                let ord = sa
                    .len()
                    .cmp(&sb.len())
                    .then_with(|| sa.cmp(&sb))
                    .then_with(|| da.cmp(&db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn decode(path: &Path) -> Result<(usize, usize, usize, Vec<u8>)> {
    let img = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| FormatError::Image {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    Ok(if img.color().has_color() {
        let rgb = match img {
            DynamicImage::ImageRgb8(buf) => buf,
            other => other.to_rgb8(),
        };
        (h, w, 3, rgb.into_raw())
    } else {
        (h, w, 1, img.to_luma8().into_raw())
    })
}

/// Loads every file in `dir` matching `pattern`, in natural filename order,
/// as one clip. Gray images give `c = 1`, colour images `c = 3` (alpha dropped).
pub fn import_frames(dir: impl AsRef<Path>, pattern: &str) -> Result<Clip> {
    let dir = dir.as_ref();
    let mut files: Vec<(String, PathBuf)> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok())
        .filter(|entry| entry.file_type().map(|t| t.is_file()).unwrap_or(false))
        .filter_map(|entry| {
            let name = entry.file_name().to_str()?.to_string();
            wildcard_match(pattern, &name).then(|| (name, entry.path()))
        })
        .collect();
    if files.is_empty() {
        return Err(FormatError::NoFrames {
            dir: dir.to_path_buf(),
            pattern: pattern.to_string(),
        }
        .into());
    }
    files.sort_by(|a, b| natural_cmp(&a.0, &b.0));

    let mut data = Vec::new();
    let mut dims: Option<(usize, usize, usize)> = None;
    for (_, path) in &files {
        let (h, w, c, bytes) = decode(path)?;
        match dims {
            None => dims = Some((h, w, c)),
            Some(expected) if expected != (h, w, c) => {
                return Err(FormatError::InconsistentFrames {
                    path: path.clone(),
                    found: format!("{h}x{w}x{c}"),
                    expected: format!("{}x{}x{}", expected.0, expected.1, expected.2),
                }
                .into());
            }
            Some(_) => {}
        }
        data.extend_from_slice(&bytes);
    }
    let (h, w, c) = dims.expect("at least one frame");
    Clip::new(files.len(), h, w, c, data)
}
