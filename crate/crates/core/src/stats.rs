//! Trial partitioning, rates and the significance tests used in evaluation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSet {
    pub trials: Vec<Vec<bool>>,
    pub trial_size: usize,
    pub trial_count: usize,
}

impl TrialSet {
    pub fn proportions(&self) -> Vec<f64> {
        self.trials.iter().map(|t| proportion(t)).collect()
    }
}

pub fn proportion(outcomes: &[bool]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().filter(|&&o| o).count() as f64 / outcomes.len() as f64
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with `n - 1` denominator.
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)
}

/// Splits outcomes, in order, into `trial_count` trials of `trial_size`.
pub fn partition_trials(outcomes: &[bool], trial_size: usize, trial_count: usize) -> Result<TrialSet> {
    let expected = trial_size * trial_count;
    if trial_size == 0 || outcomes.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            got: outcomes.len(),
        });
    }
    Ok(TrialSet {
        trials: outcomes.chunks(trial_size).map(<[bool]>::to_vec).collect(),
        trial_size,
        trial_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    #[serde(with = "extended_float")]
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

impl TestResult {
    fn new(statistic: f64, p_value: f64, alpha: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestResult {
            statistic,
            p_value,
            significant: p_value < alpha,
        }
    }
}

/// JSON numbers cannot hold infinities, so those travel as strings.
mod extended_float {
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(D::Error::custom),
        }
    }
}

/// Two-tailed Welch t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<TestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Metric("t-test needs at least two values per sample".into()));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (sa, sb) = (variance(a) / a.len() as f64, variance(b) / b.len() as f64);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return Ok(if ma == mb {
            TestResult::new(0.0, 1.0, alpha)
        } else {
            let t = if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY };
            TestResult::new(t, 0.0, alpha)
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2.powi(2)
        / (sa.powi(2) / (a.len() as f64 - 1.0) + sb.powi(2) / (b.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Metric(e.to_string()))?;
    Ok(TestResult::new(t, 2.0 * dist.sf(t.abs()), alpha))
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    (ranks, ties)
}

/// Kruskal–Wallis H-test with tie correction and a chi-square approximation.
pub fn kruskal_wallis(groups: &[Vec<f64>], alpha: f64) -> Result<TestResult> {
    if groups.len() < 2 || groups.iter().any(Vec::is_empty) {
        return Err(Error::Metric("Kruskal-Wallis needs two or more nonempty groups".into()));
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = pooled.len() as f64;
    let (rank, ties) = ranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(TestResult::new(0.0, 1.0, alpha));
    }
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = rank[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    let dist = ChiSquared::new(groups.len() as f64 - 1.0).map_err(|e| Error::Metric(e.to_string()))?;
    Ok(TestResult::new(h, dist.sf(h), alpha))
}

/// Solvability by exact search minus solvability by random play.
pub fn interest_metric(p_solver: f64, p_random: f64) -> f64 {
    p_solver - p_random
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    /// Lower edge of the first bin.
    pub start: i64,
    pub bin_width: u32,
    pub counts: Vec<usize>,
    /// Lower-middle median; `None` for no values.
    pub median: Option<i64>,
}

pub fn histogram(values: &[i64], bin_width: u32) -> Result<Histogram> {
    if bin_width == 0 {
        return Err(Error::InvalidParams("bin width must be positive".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let Some(&lo) = sorted.first() else {
        return Ok(Histogram {
            start: 0,
            bin_width,
            counts: Vec::new(),
            median: None,
        });
    };
    let w = bin_width as i64;
    let start = lo.div_euclid(w) * w;
    let hi = *sorted.last().expect("nonempty");
    let mut counts = vec![0; ((hi - start) / w + 1) as usize];
    for v in &sorted {
        counts[((v - start) / w) as usize] += 1;
    }
    Ok(Histogram {
        start,
        bin_width,
        counts,
        median: Some(sorted[(sorted.len() - 1) / 2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn partition_shapes() {
        let t = partition_trials(&[true, false, false, true], 2, 2).unwrap();
        assert_eq!(t.trials, vec![vec![true, false], vec![false, true]]);
        let all = partition_trials(&[true; 1000], 100, 10).unwrap();
        assert_eq!(all.trials.len(), 10);
        assert!(all.proportions().iter().all(|&p| p == 1.0));
        assert!(matches!(
            partition_trials(&[true; 999], 100, 10),
            Err(Error::SizeMismatch { expected: 1000, got: 999 })
        ));
    }

    #[test]
    fn welch_reference_values() {
        let r = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0], 0.05).unwrap();
        assert!((r.statistic + 1.0).abs() < 1e-12);
        assert!((r.p_value - 0.346_593_507_087_334_16).abs() < 1e-6);
        assert!(!r.significant);

        let r = welch_t_test(&[0.2, 0.25, 0.3, 0.22], &[0.5, 0.41, 0.45, 0.6, 0.52, 0.48], 0.05).unwrap();
        assert!((r.statistic + 7.310_219_309_868_995).abs() < 1e-9);
        assert!((r.p_value - 8.435_224_772_148_079e-5).abs() < 1e-8);
    }

    #[test]
    fn welch_degenerate_cases() {
        let same = welch_t_test(&[0.5; 10], &[0.5; 10], 0.05).unwrap();
        assert_eq!((same.statistic, same.p_value, same.significant), (0.0, 1.0, false));
        let apart = welch_t_test(&[0.1; 10], &[0.9; 10], 0.05).unwrap();
        assert!(apart.significant);
        let text = serde_json::to_string(&apart).unwrap();
        assert_eq!(serde_json::from_str::<TestResult>(&text).unwrap(), apart);
        assert!(welch_t_test(&[0.1], &[0.2, 0.3], 0.05).is_err());
    }

    #[test]
    fn kruskal_reference_values() {
        let r = kruskal_wallis(&[vec![1.0; 3], vec![9.0; 3], vec![5.0; 3]], 0.05).unwrap();
        assert!((r.statistic - 8.0).abs() < 1e-12);
        assert!((r.p_value - (-4.0f64).exp()).abs() < 1e-12);

        let groups = vec![
            vec![8.0, 9.0, 9.0, 10.0, 12.0],
            vec![8.0, 8.0, 9.0, 11.0],
            vec![10.0, 12.0, 13.0, 13.0, 14.0, 9.0],
        ];
        let r = kruskal_wallis(&groups, 0.05).unwrap();
        assert!((r.statistic - 5.787_569_060_773_478).abs() < 1e-9);
        assert!((r.p_value - 0.055_366_280_244_352_264).abs() < 1e-9);

        let flat = kruskal_wallis(&[vec![3.0; 4], vec![3.0; 5]], 0.05).unwrap();
        assert_eq!((flat.statistic, flat.p_value), (0.0, 1.0));
        assert!(kruskal_wallis(&[vec![1.0]], 0.05).is_err());
        assert!(kruskal_wallis(&[vec![1.0], vec![]], 0.05).is_err());
    }

    #[test]
    fn interest_examples() {
        assert!((interest_metric(0.88, 0.26) - 0.62).abs() < 1e-12);
        assert!((interest_metric(0.57, 0.07) - 0.50).abs() < 1e-12);
        assert_eq!(interest_metric(0.3, 0.3), 0.0);
    }

    #[test]
    fn histogram_medians() {
        assert_eq!(histogram(&[42, 42, 42], 1).unwrap().median, Some(42));
        assert_eq!(histogram(&[4, 1, 3, 2], 1).unwrap().median, Some(2));
        let h = histogram(&[8, 9, 9, 12, 15], 2).unwrap();
        assert_eq!((h.start, h.counts.clone()), (8, vec![3, 0, 1, 1]));
        assert_eq!(histogram(&[], 1).unwrap().median, None);
        assert!(histogram(&[1], 0).is_err());
    }

    proptest! {
        #[test]
        fn welch_is_symmetric(
            a in prop::collection::vec(0.0f64..1.0, 2..12),
            b in prop::collection::vec(0.0f64..1.0, 2..12),
        ) {
            let ab = welch_t_test(&a, &b, 0.05).unwrap();
            let ba = welch_t_test(&b, &a, 0.05).unwrap();
            prop_assert!((ab.statistic + ba.statistic).abs() < 1e-9 || ab.statistic.is_infinite());
            prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        }

        #[test]
        fn kruskal_ignores_monotone_maps(
            groups in prop::collection::vec(prop::collection::vec(0i32..20, 1..8), 2..5),
        ) {
            let raw: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|&v| v as f64).collect()).collect();
            let mapped: Vec<Vec<f64>> = raw.iter().map(|g| g.iter().map(|v| v.powi(3) + 7.0).collect()).collect();
            let a = kruskal_wallis(&raw, 0.05).unwrap();
            let b = kruskal_wallis(&mapped, 0.05).unwrap();
            prop_assert!((a.statistic - b.statistic).abs() < 1e-9);
            prop_assert!((a.p_value - b.p_value).abs() < 1e-9);
        }

        #[test]
        fn trial_means_equal_pooled_rate(outcomes in prop::collection::vec(any::<bool>(), 40)) {
            let t = partition_trials(&outcomes, 10, 4).unwrap();
            prop_assert!((mean(&t.proportions()) - proportion(&outcomes)).abs() < 1e-12);
        }
    }
}
