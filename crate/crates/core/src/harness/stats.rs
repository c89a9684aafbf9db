//! Summary statistics: bootstrap and Wilson intervals, paired lifts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::rng::SeededRng;
use crate::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const DEFAULT_LEVEL: f64 = 0.95;
pub const DEFAULT_STATS_SEED: u64 = 0x5eed_57a7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub level: f64,
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn excludes_zero(&self) -> bool {
        self.low > 0.0 || self.high < 0.0
    }
}

/// Bootstrap settings shared by every interval in a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSpec {
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapSpec {
    fn default() -> Self {
        Self { level: DEFAULT_LEVEL, resamples: DEFAULT_RESAMPLES, seed: DEFAULT_STATS_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    /// Number of config-level values.
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub bootstrap: Interval,
    pub resamples: usize,
    /// Score interval over pooled pair-level successes, when supplied.
    pub wilson: Option<Interval>,
}

pub fn mean(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Empty("values"));
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation (`n - 1` denominator); 0 for a single value.
pub fn sample_sd(xs: &[f64]) -> Result<f64> {
    let m = mean(xs)?;
    if xs.len() < 2 {
        return Ok(0.0);
    }
    Ok((xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt())
}

/// Percentile bootstrap interval for the mean.
pub fn bootstrap_mean_ci(xs: &[f64], spec: BootstrapSpec) -> Result<Interval> {
    if xs.is_empty() {
        return Err(Error::Empty("values"));
    }
    if !(spec.level > 0.0 && spec.level < 1.0) || spec.resamples == 0 {
        return Err(Error::InvalidParameter(format!("bad bootstrap spec {spec:?}")));
    }
    let m = mean(xs)?;
    if xs.iter().all(|&x| x == xs[0]) {
        return Ok(Interval { level: spec.level, low: m, high: m });
    }
    let mut rng = SeededRng::new(spec.seed);
    let n = xs.len();
    let mut means: Vec<f64> = (0..spec.resamples)
        .map(|_| (0..n).map(|_| xs[rng.below(n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - spec.level) / 2.0;
    let b = spec.resamples as f64;
    let lo = ((tail * b).floor() as usize).min(spec.resamples - 1);
    let hi = (((1.0 - tail) * b).ceil() as usize).saturating_sub(1).min(spec.resamples - 1);
    Ok(Interval { level: spec.level, low: means[lo].min(m), high: means[hi].max(m) })
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, level: f64) -> Result<Interval> {
    if n == 0 {
        return Err(Error::Empty("trials"));
    }
    if k > n || !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("wilson({k}, {n}, {level})")));
    }
    let z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(1.0 - (1.0 - level) / 2.0);
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Ok(Interval { level, low: (centre - half).max(0.0), high: (centre + half).min(1.0) })
}

/// Mean, sd and bootstrap interval of config-level values, plus the Wilson
/// interval of pooled `(successes, trials)` when given.
pub fn summarize(values: &[f64], pooled: Option<(usize, usize)>, spec: BootstrapSpec) -> Result<StatsSummary> {
    Ok(StatsSummary {
        n: values.len(),
        mean: mean(values)?,
        sd: sample_sd(values)?,
        bootstrap: bootstrap_mean_ci(values, spec)?,
        resamples: spec.resamples,
        wilson: pooled.map(|(k, n)| wilson_interval(k, n, spec.level)).transpose()?,
    })
}

/// Pair key: configuration label and start vertex.
pub type PairKey = (String, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedLift {
    /// Mean of `treatment - control` over pairs.
    pub mean: f64,
    /// Bootstrap over configurations of the per-config mean difference.
    pub ci: Interval,
    pub configs: usize,
    pub pairs: usize,
}

/// Paired lift of `treatment` over `control` on identical pair keys. The
/// bootstrap resamples configurations; a key present on one side only is
/// an error.
pub fn paired_lift(
    treatment: &BTreeMap<PairKey, f64>,
    control: &BTreeMap<PairKey, f64>,
    spec: BootstrapSpec,
) -> Result<PairedLift> {
    if treatment.len() != control.len() || treatment.keys().zip(control.keys()).any(|(a, b)| a != b) {
        let missing = treatment
            .keys()
            .find(|k| !control.contains_key(*k))
            .or_else(|| control.keys().find(|k| !treatment.contains_key(*k)));
        return Err(Error::Pairing(format!("unmatched pair key {missing:?}")));
    }
    if treatment.is_empty() {
        return Err(Error::Empty("pairs"));
    }
    let mut per_config: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (key, t) in treatment {
        let e = per_config.entry(key.0.as_str()).or_default();
        e.0 += t - control[key];
        e.1 += 1;
    }
    let diffs: Vec<f64> = per_config.values().map(|(s, n)| s / *n as f64).collect();
    let total: f64 = treatment.iter().map(|(k, t)| t - control[k]).sum();
    let mean_diff = total / treatment.len() as f64;
    let mut ci = bootstrap_mean_ci(&diffs, spec)?;
    ci.low = ci.low.min(mean_diff);
    ci.high = ci.high.max(mean_diff);
    Ok(PairedLift { mean: mean_diff, ci, configs: diffs.len(), pairs: treatment.len() })
}
