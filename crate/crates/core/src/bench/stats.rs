use serde::{Deserialize, Serialize};

use super::special::student_t_sf;

pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("both groups have zero variance")]
    DegenerateVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub n: usize,
}

/// Mean and sample standard deviation (n - 1 denominator).
pub fn summary_stats(samples: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = samples.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples(n));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    Ok((mean, (ss / (n - 1) as f64).sqrt()))
}

impl SampleSummary {
    pub fn from_samples(samples: &[f64]) -> Result<Self, StatsError> {
        let (mean, std_dev) = summary_stats(samples)?;
        Ok(SampleSummary {
            mean,
            std_dev,
            n: samples.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// Two-sided.
    pub p: f64,
    pub significant: bool,
}

/// Welch's unequal-variance two-sample t-test from summary statistics.
pub fn welch_t_test(m1: f64, s1: f64, n1: usize, m2: f64, s2: f64, n2: usize) -> Result<WelchResult, StatsError> {
    if n1 < 2 || n2 < 2 {
        return Err(StatsError::TooFewSamples(n1.min(n2)));
    }
    if s1 == 0.0 && s2 == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    let v1 = s1 * s1 / n1 as f64;
    let v2 = s2 * s2 / n2 as f64;
    let t = (m1 - m2) / (v1 + v2).sqrt();
    let df = (v1 + v2).powi(2) / (v1 * v1 / (n1 - 1) as f64 + v2 * v2 / (n2 - 1) as f64);
    let p = (2.0 * student_t_sf(t.abs(), df)).min(1.0);
    Ok(WelchResult {
        t,
        df,
        p,
        significant: p < ALPHA,
    })
}

pub fn welch_from_summaries(a: &SampleSummary, b: &SampleSummary) -> Result<WelchResult, StatsError> {
    welch_t_test(a.mean, a.std_dev, a.n, b.mean, b.std_dev, b.n)
}
