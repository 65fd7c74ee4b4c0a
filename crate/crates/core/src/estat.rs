//! The sphere-averaged normalized distance
//!
//! ```text
//! E_n = (1 / |S_n|²) · Σ_{x, y ∈ S_n} d(x, y) / n
//! ```
//!
//! computed exactly over all pairs (diagonal included) or by Monte Carlo
//! over uniform pairs. Distances are accumulated as integers and divided
//! once, so records are bit-identical for any thread count.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sphere::{SphereDataset, SphereMode, SphereSampler, SphereStore};
use crate::sphere::{block_rng, SAMPLE_BLOCK};

pub const DEFAULT_PAIR_BUDGET: u128 = 100_000_000;
pub const MIN_SAMPLES: u64 = 100;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Sampled,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Sampled => "sampled",
        })
    }
}

/// One `E_n` measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRecord {
    pub spec: GroupSpec,
    pub n: u32,
    pub method: Method,
    pub value: f64,
    pub pairs: u128,
    /// `Σ d(x, y)` over the pairs used; `value = distance_sum / (n·pairs)`.
    pub distance_sum: u128,
    pub seed: Option<u64>,
    pub std_error: Option<f64>,
    /// Half-width of the 95% confidence interval.
    pub ci95: Option<f64>,
}

/// Column order of [`EstimateRecord::csv_row`].
pub const CSV_HEADER: [&str; 8] = ["spec", "n", "method", "E_n", "pairs", "stderr", "ci95", "seed"];

impl EstimateRecord {
    pub fn ci(&self) -> Option<(f64, f64)> {
        self.ci95.map(|h| (self.value - h, self.value + h))
    }

    pub fn csv_row(&self) -> [String; 8] {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.spec.to_string(),
            self.n.to_string(),
            self.method.to_string(),
            self.value.to_string(),
            self.pairs.to_string(),
            opt(self.std_error),
            opt(self.ci95),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

/// `Σ_{x, y} d(x, y)` over all ordered pairs of `elements`.
pub fn all_pairs_distance_sum(spec: &GroupSpec, elements: &[Element]) -> Result<u128> {
    elements
        .par_iter()
        .map(|x| {
            elements
                .iter()
                .try_fold(0u128, |acc, y| Ok(acc + spec.distance(x, y)? as u128))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Exact `E_n` over every ordered pair of an enumerated sphere.
pub fn exact_e(dataset: &SphereDataset, pair_budget: u128) -> Result<EstimateRecord> {
    let n = dataset.radius();
    if n == 0 {
        return Err(Error::Precondition("E_n needs n ≥ 1".into()));
    }
    let elements = dataset.require_elements()?;
    let pairs = (elements.len() as u128).pow(2);
    if pairs > pair_budget {
        return Err(Error::PairBudgetExceeded {
            pairs,
            budget: pair_budget,
        });
    }
    let spec = dataset.spec();
    let distance_sum = all_pairs_distance_sum(spec, elements)?;
    Ok(EstimateRecord {
        spec: spec.clone(),
        n,
        method: Method::Exact,
        value: distance_sum as f64 / (n as f64 * pairs as f64),
        pairs,
        distance_sum,
        seed: None,
        std_error: None,
        ci95: None,
    })
}

/// Monte Carlo `E_n` from `k` uniform pairs, with a normal-approximation
/// confidence interval.
pub fn sampled_e(sampler: &SphereSampler, n: u32, k: u64, seed: u64) -> Result<EstimateRecord> {
    if n == 0 {
        return Err(Error::Precondition("E_n needs n ≥ 1".into()));
    }
    if k < MIN_SAMPLES {
        return Err(Error::Precondition(format!("need at least {MIN_SAMPLES} pairs, got {k}")));
    }
    sampler.count(n)?;
    let spec = sampler.spec();
    let blocks = k.div_ceil(SAMPLE_BLOCK);
    let (sum, sum_sq) = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = SAMPLE_BLOCK.min(k - b * SAMPLE_BLOCK);
            let mut acc = (0u128, 0u128);
            for _ in 0..len {
                let x = sampler.sample(n, &mut rng)?;
                let y = sampler.sample(n, &mut rng)?;
                let d = spec.distance(&x, &y)? as u128;
                acc.0 += d;
                acc.1 += d * d;
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let kf = k as f64;
    let nf = n as f64;
    // k·Σd² − (Σd)² is exact in integers.
    let spread = (k as u128 * sum_sq - sum * sum) as f64;
    let variance = spread / (kf * (kf - 1.0) * nf * nf);
    let std_error = (variance / kf).sqrt();
    Ok(EstimateRecord {
        spec: spec.clone(),
        n,
        method: Method::Sampled,
        value: sum as f64 / (kf * nf),
        pairs: k as u128,
        distance_sum: sum,
        seed: Some(seed),
        std_error: Some(std_error),
        ci95: Some(Z95 * std_error),
    })
}

/// Reporting tag for a convergence series. These are heuristics, not
/// mathematical claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    TrendingToTwo,
    BoundedAway,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TrendingToTwo => "trending-to-2",
            Verdict::BoundedAway => "bounded-away",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Trending to 2: the last three values increase and the last exceeds 1.85.
/// Bounded away: the last three lie within 0.02 of each other and the last
/// is below 1.7.
pub fn verdict(records: &[EstimateRecord]) -> Verdict {
    let [.., a, b, c] = records else {
        return Verdict::Inconclusive;
    };
    let (a, b, c) = (a.value, b.value, c.value);
    if a < b && b < c && c > 1.85 {
        Verdict::TrendingToTwo
    } else if a.max(b).max(c) - a.min(b).min(c) < 0.02 && c < 1.7 {
        Verdict::BoundedAway
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceSeries {
    pub spec: GroupSpec,
    pub records: Vec<EstimateRecord>,
    pub verdict: Verdict,
    /// Set when exact and sampled records are mixed.
    pub mixed_methods: bool,
}

/// Exact below the pair budget, sampled above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatePolicy {
    pub pair_budget: u128,
    pub samples: u64,
    pub seed: Option<u64>,
}

impl Default for EstimatePolicy {
    fn default() -> Self {
        EstimatePolicy {
            pair_budget: DEFAULT_PAIR_BUDGET,
            samples: 100_000,
            seed: None,
        }
    }
}

pub fn convergence_series(
    spec: &GroupSpec,
    radii: &[u32],
    policy: EstimatePolicy,
    store: &SphereStore,
) -> Result<ConvergenceSeries> {
    let Some(&max_radius) = radii.last() else {
        return Err(Error::Precondition("no radii requested".into()));
    };
    if radii[0] == 0 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("radii must be positive and strictly increasing".into()));
    }
    let sampler = SphereSampler::new(spec, max_radius, store.limits())?;
    let mut records = Vec::with_capacity(radii.len());
    for &n in radii {
        let count = sampler.count(n)?;
        let record = if count.checked_mul(count).is_some_and(|p| p <= policy.pair_budget) {
            exact_e(&store.sphere(spec, n, SphereMode::Full)?, policy.pair_budget)?
        } else {
            let seed = policy.seed.ok_or(Error::SeedRequired)?;
            sampled_e(&sampler, n, policy.samples, seed)?
        };
        records.push(record);
    }
    let mixed_methods = records.windows(2).any(|w| w[0].method != w[1].method);
    Ok(ConvergenceSeries {
        spec: spec.clone(),
        verdict: verdict(&records),
        records,
        mixed_methods,
    })
}
