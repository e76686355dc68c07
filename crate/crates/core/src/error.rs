use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("level {0} outside [0, 10]")]
    InvalidLevel(f64),

    #[error("operation `{op}` is not a {expected} op")]
    WrongOpClass {
        op: &'static str,
        expected: &'static str,
    },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("incompatible labels: {0}")]
    IncompatibleLabels(String),

    #[error("incompatible clips: {0}")]
    IncompatibleClips(String),

    #[error("invalid clip: {0}")]
    InvalidClip(String),

    #[error("invalid label distribution: {0}")]
    InvalidLabel(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Format-class failures map to CLI exit code 2.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Io { .. })
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Errors from decoding clip containers, label sidecars and frame images.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic: expected \"CLIP\", found {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported version {0} (expected 1)")]
    UnsupportedVersion(u8),

    #[error("unsupported dtype {0} (expected 0 = u8)")]
    UnsupportedDtype(u8),

    #[error("header field `{0}` is zero")]
    ZeroDim(&'static str),

    #[error("header field `c` is {0} (expected 1 or 3)")]
    BadChannels(u32),

    #[error("size overflow: t*h*w*c = {t}*{h}*{w}*{c} exceeds 32-bit payload limit")]
    SizeOverflow { t: u32, h: u32, w: u32, c: u32 },

    #[error("truncated {what}: expected {expected} bytes, got {got}")]
    Truncated {
        what: &'static str,
        expected: u64,
        got: u64,
    },

    #[error("trailing bytes after payload")]
    TrailingBytes,

    #[error("label sidecar: {0}")]
    Sidecar(String),

    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },

    #[error("config: {0}")]
    ConfigJson(String),

    #[error("{path}: cannot decode image: {reason}")]
    Image { path: PathBuf, reason: String },

    #[error("inconsistent frames: {path} is {found}, expected {expected}")]
    InconsistentFrames {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("no frames matching `{pattern}` in {dir}")]
    NoFrames { dir: PathBuf, pattern: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
