//! One-way analysis of variance.

use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anova {
    pub f: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p_value: f64,
}

/// Classic one-way ANOVA over `groups` (at least two, each with at least two
/// finite values). When the within-group variance is zero the F statistic is
/// infinite and `p = 0`, unless the group means also agree, in which case
/// `p = 1`.
pub fn anova_one_way<G: AsRef<[f64]>>(groups: &[G]) -> Result<Anova> {
    if groups.len() < 2 {
        return Err(Error::InvalidInput("ANOVA needs at least two groups".into()));
    }
    let mut n = 0usize;
    let mut grand = 0.0;
    for g in groups {
        let g = g.as_ref();
        if g.len() < 2 {
            return Err(Error::InvalidInput("every ANOVA group needs at least two values".into()));
        }
        if let Some(&v) = g.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                name: "sample",
                value: v,
                reason: "must be finite",
            });
        }
        n += g.len();
        grand += g.iter().sum::<f64>();
    }
    grand /= n as f64;

    let (mut ssb, mut ssw) = (0.0, 0.0);
    for g in groups {
        let g = g.as_ref();
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (mean - grand).powi(2);
        ssw += g.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    }
    let k = groups.len();
    let (df_b, df_w) = (k - 1, n - k);
    let msb = ssb / df_b as f64;
    let msw = ssw / df_w as f64;

    // Rounding noise in the sums of squares should not decide the test.
    let scale = groups
        .iter()
        .flat_map(|g| g.as_ref().iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let eps = 1e-24 * scale * scale * n as f64;
    let (f, p) = if ssw <= eps {
        if ssb <= eps {
            (0.0, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let f = msb / msw;
        let dist = FisherSnedecor::new(df_b as f64, df_w as f64)
            .map_err(|e| Error::InvalidInput(format!("F distribution: {e}")))?;
        (f, dist.sf(f).clamp(0.0, 1.0))
    };
    Ok(Anova {
        f,
        df_between: df_b,
        df_within: df_w,
        p_value: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_groups() {
        let g = vec![1.0, 2.0, 3.0, 4.0];
        let r = anova_one_way(&[g.clone(), g]).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn separated_groups() {
        let r = anova_one_way(&[vec![0.0, 0.0, 0.0, 0.0], vec![10.0, 10.0, 10.0, 10.0001]]).unwrap();
        assert!(r.p_value < 0.001, "{r:?}");
    }

    #[test]
    fn constant_groups() {
        assert_eq!(anova_one_way(&[[2.0, 2.0], [2.0, 2.0]]).unwrap().p_value, 1.0);
        assert_eq!(anova_one_way(&[[2.0, 2.0], [3.0, 3.0]]).unwrap().p_value, 0.0);
    }

    #[test]
    fn hand_computed_f() {
        // Means 2 and 5, grand mean 3.5; SSB = 3·1.5²·2 = 13.5, SSW = 4.
        let r = anova_one_way(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        assert!((r.f - 13.5).abs() < 1e-12);
        assert_eq!((r.df_between, r.df_within), (1, 4));
        // Survival of F(1, 4) at 13.5.
        assert!((r.p_value - 0.021312).abs() < 1e-5, "{}", r.p_value);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(anova_one_way(&[[1.0, 2.0]]).is_err());
        assert!(anova_one_way(&[vec![1.0], vec![2.0, 3.0]]).is_err());
        assert!(anova_one_way(&[[1.0, f64::NAN], [2.0, 3.0]]).is_err());
    }
}
