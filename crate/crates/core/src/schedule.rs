use crate::error::{Error, Result};

/// `n` evenly spaced values from `a` to `b`; the endpoints are exact.
pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidCount("linspace needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let span = b - a;
    let last = (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| a + span * (i as f64 / last)).collect();
    out[n - 1] = b;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(linspace(3.0, 5.0, 3).unwrap(), vec![3.0, 4.0, 5.0]);
        assert_eq!(linspace(5.0, 5.0, 64).unwrap(), vec![5.0; 64]);
        assert_eq!(linspace(0.0, 1.0, 2).unwrap(), vec![0.0, 1.0]);
        assert_eq!(linspace(7.0, 1.0, 1).unwrap(), vec![7.0]);
        assert!(matches!(linspace(0.0, 1.0, 0), Err(Error::InvalidCount(_))));
    }

    proptest! {
        #[test]
        fn mean_is_midpoint(a in -10.0f64..10.0, b in -10.0f64..10.0, n in 1usize..300) {
            let xs = linspace(a, b, n).unwrap();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let mid = if n == 1 { a } else { (a + b) / 2.0 };
            prop_assert!((mean - mid).abs() <= 1e-12, "mean {} mid {}", mean, mid);
            prop_assert_eq!(xs[0], a);
            if n > 1 {
                prop_assert_eq!(xs[n - 1], b);
            }
        }
    }
}
