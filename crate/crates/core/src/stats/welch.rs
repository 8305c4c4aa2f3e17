use serde::Serialize;

use super::special::student_t_two_sided_p;
use crate::error::{Error, Result};

/// Two-sided significance level.
pub const ALPHA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Better,
    Worse,
    NotSignificant,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Better => "better",
            Verdict::Worse => "worse",
            Verdict::NotSignificant => "not_significant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WelchResult {
    pub t_stat: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub dof: f64,
    pub p_value: f64,
    /// `mean(a) - mean(b)`.
    pub mean_diff: f64,
    pub verdict: Verdict,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Welch's unequal-variance t-test of `a` against `b`.
///
/// When both samples have zero variance and equal means the result is
/// `t = 0, p = 1` with `dof = na + nb - 2`; zero variance with different
/// means has no defined statistic and is an error.
pub fn welch_ttest(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Stats(format!(
            "each group needs at least 2 values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::Stats("non-finite sample value".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let mean_diff = ma - mb;
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;

    if se2 == 0.0 {
        if mean_diff != 0.0 {
            return Err(Error::Stats(
                "both groups have zero variance and different means; t is undefined".into(),
            ));
        }
        return Ok(WelchResult {
            t_stat: 0.0,
            dof: na + nb - 2.0,
            p_value: 1.0,
            mean_diff,
            verdict: Verdict::NotSignificant,
        });
    }

    let t_stat = mean_diff / se2.sqrt();
    let dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p_value = student_t_two_sided_p(t_stat, dof);
    let verdict = if p_value < ALPHA && mean_diff > 0.0 {
        Verdict::Better
    } else if p_value < ALPHA && mean_diff < 0.0 {
        Verdict::Worse
    } else {
        Verdict::NotSignificant
    };
    Ok(WelchResult {
        t_stat,
        dof,
        p_value,
        mean_diff,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_groups() {
        let r = welch_ttest(&[1., 2., 3.], &[1., 2., 3.]).unwrap();
        assert_eq!(r.t_stat, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.verdict, Verdict::NotSignificant);
    }

    // Reference values from scipy.stats.ttest_ind(a, b, equal_var=False).
    #[test]
    fn reference_case() {
        let r = welch_ttest(&[2.1, 2.5, 2.3, 2.2], &[1.9, 2.0, 2.1]).unwrap();
        assert!((r.t_stat - 2.6678918753996617).abs() < 1e-8, "{r:?}");
        assert!((r.dof - 4.849596022374147).abs() < 1e-8, "{r:?}");
        assert!((r.p_value - 0.0458558416613026).abs() < 1e-8, "{r:?}");
        assert_eq!(r.verdict, Verdict::Better);
    }

    #[test]
    fn swap_negates_t() {
        let a = [0.8, 0.82, 0.79, 0.85];
        let b = [0.7, 0.75, 0.72];
        let ab = welch_ttest(&a, &b).unwrap();
        let ba = welch_ttest(&b, &a).unwrap();
        assert_eq!(ab.t_stat, -ba.t_stat);
        assert_eq!(ab.p_value, ba.p_value);
        assert_eq!(ab.verdict, Verdict::Better);
        assert_eq!(ba.verdict, Verdict::Worse);
    }

    #[test]
    fn error_cases() {
        assert!(welch_ttest(&[1.0], &[1.0, 2.0]).is_err());
        assert!(welch_ttest(&[1.0, 1.0], &[2.0, 2.0]).is_err());
        let r = welch_ttest(&[1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert!(r.dof > 0.0);
    }

    #[test]
    fn one_constant_group_is_fine() {
        let r = welch_ttest(&[1.0, 1.0, 1.0], &[0.5, 0.6, 0.7]).unwrap();
        assert!(r.p_value < ALPHA);
        assert!((r.dof - 2.0).abs() < 1e-12);
    }
}
