//! Sparse soft labels and their convex mixing.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Tolerance on `sum(weights) == 1` for in-memory distributions.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over `num_classes` classes, stored sparsely.
///
/// Invariants: every key `< num_classes`, every stored weight is in `(0, 1]`,
/// and the weights sum to 1 within [`SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabelDist {
    num_classes: u32,
    weights: BTreeMap<u32, f64>,
}

impl LabelDist {
    /// Validates and builds a distribution. Zero weights are dropped.
    pub fn new(num_classes: u32, weights: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::InvalidLabel("num_classes must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (k, v) in weights {
            if k >= num_classes {
                return Err(Error::InvalidLabel(format!(
                    "class {k} out of range for {num_classes} classes"
                )));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidLabel(format!("weight {v} for class {k}")));
            }
            if v > 0.0 && map.insert(k, v).is_some() {
                return Err(Error::InvalidLabel(format!("class {k} listed twice")));
            }
        }
        let sum: f64 = map.values().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidLabel(format!("weights sum to {sum}")));
        }
        Ok(Self {
            num_classes,
            weights: map,
        })
    }

    pub fn one_hot(class: u32, num_classes: u32) -> Result<Self> {
        Self::new(num_classes, [(class, 1.0)])
    }

    pub fn num_classes(&self) -> u32 {
        self.num_classes
    }

    /// Weight of `class` (0 when absent).
    pub fn weight(&self, class: u32) -> f64 {
        self.weights.get(&class).copied().unwrap_or(0.0)
    }

    pub fn weights(&self) -> &BTreeMap<u32, f64> {
        &self.weights
    }

    /// Number of classes with non-zero weight.
    pub fn support(&self) -> usize {
        self.weights.len()
    }

    pub fn sum(&self) -> f64 {
        self.weights.values().sum()
    }

    /// The class carrying all the mass, if the label is one-hot.
    pub fn as_one_hot(&self) -> Option<u32> {
        match self.weights.iter().next() {
            Some((&k, &v)) if self.weights.len() == 1 && v == 1.0 => Some(k),
            _ => None,
        }
    }
}

/// `weight_a * a + (1 - weight_a) * b`, with exact-zero entries pruned.
pub fn label_mix(a: &LabelDist, b: &LabelDist, weight_a: f64) -> Result<LabelDist> {
    if a.num_classes != b.num_classes {
        return Err(Error::IncompatibleLabels(format!(
            "{} classes vs {} classes",
            a.num_classes, b.num_classes
        )));
    }
    if !(0.0..=1.0).contains(&weight_a) {
        return Err(Error::param(
            "weight_a",
            format!("{weight_a} not in [0, 1]"),
        ));
    }
    let weight_b = 1.0 - weight_a;
    let mut out = BTreeMap::new();
    for k in a.weights.keys().chain(b.weights.keys()) {
        if out.contains_key(k) {
            continue;
        }
        let v = weight_a * a.weight(*k) + weight_b * b.weight(*k);
        if v > 0.0 {
            out.insert(*k, v.min(1.0));
        }
    }
    Ok(LabelDist {
        num_classes: a.num_classes,
        weights: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mixes_two_one_hots() {
        let a = LabelDist::one_hot(17, 101).unwrap();
        let b = LabelDist::one_hot(42, 101).unwrap();
        let m = label_mix(&a, &b, 0.6).unwrap();
        assert_eq!(m.weight(17), 0.6);
        assert!((m.weight(42) - 0.4).abs() < 1e-15);
        assert_eq!(m.support(), 2);
    }

    #[test]
    fn self_mix_is_identity() {
        let y = LabelDist::new(10, [(1, 0.25), (4, 0.75)]).unwrap();
        let m = label_mix(&y, &y, 0.3).unwrap();
        for (k, v) in y.weights() {
            assert!((m.weight(*k) - v).abs() < 1e-15);
        }
        assert_eq!(m.support(), 2);
    }

    #[test]
    fn boundary_weight_prunes() {
        let a = LabelDist::one_hot(0, 2).unwrap();
        let b = LabelDist::one_hot(1, 2).unwrap();
        let m = label_mix(&a, &b, 1.0).unwrap();
        assert_eq!(m.as_one_hot(), Some(0));
    }

    #[test]
    fn errors() {
        let a = LabelDist::one_hot(0, 2).unwrap();
        let b = LabelDist::one_hot(0, 3).unwrap();
        assert!(matches!(
            label_mix(&a, &b, 0.5),
            Err(Error::IncompatibleLabels(_))
        ));
        assert!(label_mix(&a, &a, 1.5).is_err());
        assert!(LabelDist::one_hot(3, 3).is_err());
        assert!(LabelDist::new(3, [(0, 0.5), (1, 0.4)]).is_err());
        assert!(LabelDist::new(0, []).is_err());
        let z = LabelDist::new(3, [(0, 1.0), (1, 0.0)]).unwrap();
        assert_eq!(z.support(), 1);
    }

    fn arb_label() -> impl Strategy<Value = LabelDist> {
        prop::collection::vec((0u32..20, 1u32..100), 1..5).prop_map(|entries| {
            let mut merged = BTreeMap::new();
            for (k, w) in entries {
                *merged.entry(k).or_insert(0u32) += w;
            }
            let total: u32 = merged.values().sum();
            let mut weights: Vec<(u32, f64)> = merged
                .into_iter()
                .map(|(k, w)| (k, w as f64 / total as f64))
                .collect();
            // push rounding residue into the last entry
            let head: f64 = weights[..weights.len() - 1].iter().map(|e| e.1).sum();
            let last = weights.len() - 1;
            weights[last].1 = 1.0 - head;
            LabelDist::new(20, weights).unwrap()
        })
    }

    proptest! {
        #[test]
        fn mix_is_closed(a in arb_label(), b in arb_label(), w in 0.0f64..=1.0) {
            let m = label_mix(&a, &b, w).unwrap();
            prop_assert!((m.sum() - 1.0).abs() <= SUM_TOLERANCE);
            prop_assert!(m.weights().values().all(|&v| v > 0.0 && v <= 1.0));
            // round-trips through the validating constructor
            prop_assert!(LabelDist::new(20, m.weights().iter().map(|(k, v)| (*k, *v))).is_ok());
        }
    }
}
