use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a pair `(base, other)` becomes a percentage. Both use
/// `(other - base) / base * 100`; the variants only name the convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapFormula {
    /// `base` is the optimum, `other` a heuristic: values are `<= 0`.
    Gap,
    /// `base` is the baseline policy, `other` the improved one.
    Improvement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub formula: GapFormula,
    /// The percentage with the largest magnitude.
    pub max: f64,
    pub average: f64,
    pub median: f64,
    pub values: Vec<f64>,
}

/// Percent differences of `(base, other)` pairs and their summary.
pub fn gap_statistics(pairs: &[(f64, f64)], formula: GapFormula) -> Result<GapSummary> {
    if pairs.is_empty() || pairs.iter().any(|&(base, _)| base <= 0.0 || base.is_nan()) {
        return Err(Error::DegenerateStatistics);
    }
    let values: Vec<f64> = pairs.iter().map(|&(b, o)| (o - b) / b * 100.0).collect();
    let max = values.iter().copied().fold(0.0, |acc: f64, v| if v.abs() > acc.abs() { v } else { acc });
    let average = values.iter().sum::<f64>() / values.len() as f64;
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 { sorted[k / 2] } else { (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0 };
    Ok(GapSummary { formula, max, average, median, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_values_give_zero() {
        let s = gap_statistics(&[(3.0, 3.0), (5.0, 5.0)], GapFormula::Gap).unwrap();
        assert_eq!((s.max, s.average, s.median), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_pair_arithmetic() {
        let s = gap_statistics(&[(10.0, 9.0), (10.0, 9.5)], GapFormula::Gap).unwrap();
        assert!((s.values[0] + 10.0).abs() < 1e-12);
        assert!((s.values[1] + 5.0).abs() < 1e-12);
        assert!((s.average + 7.5).abs() < 1e-12);
        assert!((s.median + 7.5).abs() < 1e-12);
        assert!((s.max + 10.0).abs() < 1e-12);
    }

    #[test]
    fn improvement_max_is_largest() {
        let s = gap_statistics(&[(10.0, 11.0), (10.0, 10.5), (10.0, 10.2)], GapFormula::Improvement).unwrap();
        assert!((s.max - 10.0).abs() < 1e-12);
        assert!((s.median - 5.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(gap_statistics(&[], GapFormula::Gap), Err(Error::DegenerateStatistics));
        assert_eq!(gap_statistics(&[(0.0, 1.0)], GapFormula::Gap), Err(Error::DegenerateStatistics));
    }
}
