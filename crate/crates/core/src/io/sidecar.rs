//! JSON label sidecars: `{"num_classes": 101, "weights": {"17": 0.6, "42": 0.4}}`.
//!
//! Weights are written in shortest round-trip form, so a written sidecar
//! re-reads to the identical `f64` values.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, FormatError, Result};
use crate::label::{LabelDist, SUM_TOLERANCE};

/// Tolerance on the weight sum when reading a sidecar.
pub const READ_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    num_classes: u32,
    weights: BTreeMap<String, f64>,
}

pub fn label_to_json(label: &LabelDist) -> String {
    // numeric key order, which a String-keyed map would not keep
    let weights: Vec<String> = label
        .weights()
        .iter()
        .map(|(k, v)| {
            format!(
                "    \"{k}\": {}",
                serde_json::to_string(v).expect("finite weight")
            )
        })
        .collect();
    let body = if weights.is_empty() {
        "{}".to_string()
    } else {
        format!("{{\n{}\n  }}", weights.join(",\n"))
    };
    format!(
        "{{\n  \"num_classes\": {},\n  \"weights\": {body}\n}}\n",
        label.num_classes()
    )
}

pub fn label_from_json(text: &str) -> Result<LabelDist, FormatError> {
    let sidecar: Sidecar =
        serde_json::from_str(text).map_err(|e| FormatError::Sidecar(e.to_string()))?;
    if sidecar.num_classes == 0 {
        return Err(FormatError::Sidecar("num_classes must be positive".into()));
    }
    let mut weights = Vec::with_capacity(sidecar.weights.len());
    for (key, v) in &sidecar.weights {
        let k: u32 = key
            .parse()
            .map_err(|_| FormatError::Sidecar(format!("key `{key}` is not a class index")))?;
        if k >= sidecar.num_classes {
            return Err(FormatError::Sidecar(format!(
                "class {k} out of range for {} classes",
                sidecar.num_classes
            )));
        }
        if !(0.0..=1.0).contains(v) {
            return Err(FormatError::Sidecar(format!("weight {v} for class {k}")));
        }
        weights.push((k, *v));
    }
    let sum: f64 = weights.iter().map(|e| e.1).sum();
    if (sum - 1.0).abs() > READ_TOLERANCE {
        return Err(FormatError::Sidecar(format!("weights sum to {sum}")));
    }
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        for w in &mut weights {
            w.1 /= sum;
        }
    }
    LabelDist::new(sidecar.num_classes, weights).map_err(|e| FormatError::Sidecar(e.to_string()))
}

pub fn read_label(path: impl AsRef<Path>) -> Result<LabelDist> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(label_from_json(&text)?)
}

pub fn write_label(label: &LabelDist, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, label_to_json(label)).map_err(|e| Error::io(path, e))
}
