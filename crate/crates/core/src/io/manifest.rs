use std::path::{Path, PathBuf};

use crate::error::{Error, FormatError, Result};

/// Second manifest column: a class index, or a path to a label sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSource {
    Class(u32),
    Sidecar(PathBuf),
}

/// One `clip-path<TAB>class-index` (or `clip-path<TAB>label.json`) line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: LabelSource,
}

/// Parses a manifest. Blank lines and `#` comments are skipped; relative paths
/// resolve against `base`. A second column made only of digits is a class
/// index, anything else a sidecar path.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let err = |reason: String| FormatError::Manifest {
            line: i + 1,
            reason,
        };
        let (path, second) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `path<TAB>class`".into()))?;
        let (path, second) = (path.trim(), second.trim());
        if path.is_empty() || second.is_empty() {
            return Err(err("empty field".into()));
        }
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        let label = if second.bytes().all(|b| b.is_ascii_digit()) {
            LabelSource::Class(
                second
                    .parse()
                    .map_err(|_| err(format!("class `{second}` out of range")))?,
            )
        } else if second.starts_with(['-', '+']) || second.parse::<f64>().is_ok() {
            return Err(err(format!(
                "class `{second}` is not a non-negative integer"
            )));
        } else {
            LabelSource::Sidecar(resolve(second))
        };
        out.push(ManifestEntry {
            path: resolve(path),
            label,
        });
    }
    Ok(out)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(parse_manifest(&text, base)?)
}
