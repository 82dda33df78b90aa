//! Feature-contrast ratio similarity between fuzzy feature vectors.

use crate::error::{Error, Result};
use crate::evaluation::features::FeatureVector;

/// Weights of the two distinctive-feature terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for SimilarityWeights {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl SimilarityWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain {
                    name,
                    value: v,
                    reason: "must be finite and >= 0",
                });
            }
        }
        Ok(())
    }
}

/// `f(A∩B) / (f(A∩B) + α f(A−B) + β f(B−A))` with `∩` the elementwise
/// minimum, `A−B` the elementwise `max(A−B, 0)` and `f` the sum. Two all-zero
/// vectors score 1.
pub fn similarity_values(a: &[f64], b: &[f64], w: SimilarityWeights) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    w.validate()?;
    let (mut common, mut a_only, mut b_only) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        common += x.min(y);
        a_only += (x - y).max(0.0);
        b_only += (y - x).max(0.0);
    }
    let denom = common + w.alpha * a_only + w.beta * b_only;
    if denom > 0.0 {
        Ok((common / denom).clamp(0.0, 1.0))
    } else if a_only == 0.0 && b_only == 0.0 {
        Ok(1.0)
    } else {
        Ok(0.0)
    }
}

pub fn similarity(a: &FeatureVector, b: &FeatureVector, w: SimilarityWeights) -> Result<f64> {
    let n = super::features::FEATURE_LEN;
    for v in [a, b] {
        if v.values.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: v.values.len(),
            });
        }
    }
    similarity_values(&a.values, &b.values, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(head: &[f64]) -> FeatureVector {
        let mut v = vec![0.0; 54];
        v[..head.len()].copy_from_slice(head);
        FeatureVector { values: v }
    }

    #[test]
    fn worked_examples() {
        let w = SimilarityWeights::default();
        let a = fv(&[0.3, 0.9, 0.1]);
        assert_eq!(similarity(&a, &a, w).unwrap(), 1.0);
        assert_eq!(similarity(&fv(&[1.0, 0.0]), &fv(&[0.0, 1.0]), w).unwrap(), 0.0);
        assert_eq!(similarity(&fv(&[1.0]), &fv(&[0.5]), w).unwrap(), 0.5);
        assert_eq!(similarity(&fv(&[]), &fv(&[]), w).unwrap(), 1.0);
    }

    #[test]
    fn asymmetric_weights() {
        let w = SimilarityWeights { alpha: 1.0, beta: 0.0 };
        // B is contained in A: only A's surplus counts.
        assert_eq!(similarity(&fv(&[1.0]), &fv(&[0.5]), w).unwrap(), 0.5);
        assert_eq!(similarity(&fv(&[0.5]), &fv(&[1.0]), w).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        let w = SimilarityWeights::default();
        let short = FeatureVector { values: vec![0.0; 10] };
        assert!(matches!(similarity(&short, &fv(&[]), w), Err(Error::Dimension { .. })));
        assert!(similarity_values(&[1.0], &[1.0], SimilarityWeights { alpha: -1.0, beta: 1.0 }).is_err());
    }
}
