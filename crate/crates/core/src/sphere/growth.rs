use super::{sphere_counts, EnumerationLimits};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Growth estimates at one radius.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: u32,
    pub count: u64,
    /// `log|S_n| / n`, clamped at zero.
    pub log_rate: Option<f64>,
    /// `log(|S_n| / |S_{n−1}|)`, clamped at zero.
    pub ratio_rate: Option<f64>,
    /// `|S_n| / exp(n·ν̂)` against the final estimate.
    pub sandwich: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub spec: GroupSpec,
    pub rows: Vec<GrowthRow>,
    /// Ratio estimator at the largest radius.
    pub nu_hat: f64,
}

impl GrowthReport {
    pub fn counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.count).collect()
    }

    /// Smallest and largest sandwich ratio over `n ∈ [from, to]`.
    pub fn sandwich_range(&self, from: u32, to: u32) -> (f64, f64) {
        self.rows
            .iter()
            .filter(|r| r.n >= from && r.n <= to)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.sandwich), hi.max(r.sandwich))
            })
    }
}

/// Growth-rate estimates from sphere counts at radii `0..=n_max`.
pub fn growth_report(spec: &GroupSpec, n_max: u32, limits: EnumerationLimits) -> Result<GrowthReport> {
    if n_max < 2 {
        return Err(Error::Precondition("growth reports need n_max ≥ 2".into()));
    }
    let counts = sphere_counts(spec, n_max, limits)?;
    Ok(report_from_counts(spec.clone(), &counts))
}

pub(crate) fn report_from_counts(spec: GroupSpec, counts: &[u64]) -> GrowthReport {
    let ratio = |n: usize| -> Option<f64> {
        (n >= 1).then(|| {
            if counts[n] == 0 || counts[n - 1] == 0 {
                0.0
            } else {
                (counts[n] as f64 / counts[n - 1] as f64).ln().max(0.0)
            }
        })
    };
    let n_max = counts.len() - 1;
    let nu_hat = ratio(n_max).unwrap_or(0.0);
    let rows = counts
        .iter()
        .enumerate()
        .map(|(n, &count)| GrowthRow {
            n: n as u32,
            count,
            log_rate: (n >= 1).then(|| {
                if count == 0 {
                    0.0
                } else {
                    ((count as f64).ln() / n as f64).max(0.0)
                }
            }),
            ratio_rate: ratio(n),
            sandwich: count as f64 / (n as f64 * nu_hat).exp(),
        })
        .collect();
    GrowthReport { spec, rows, nu_hat }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: &str, n: u32) -> GrowthReport {
        growth_report(&s.parse().unwrap(), n, EnumerationLimits::default()).unwrap()
    }

    #[test]
    fn free_group_rate_is_log_three() {
        let r = report("free(2)", 10);
        for row in &r.rows[2..] {
            assert!((row.ratio_rate.unwrap() - 3f64.ln()).abs() < 1e-12);
        }
        assert!((r.nu_hat - 3f64.ln()).abs() < 1e-12);
        let (lo, hi) = r.sandwich_range(2, 10);
        assert!(lo >= 1.0 && hi <= 4.0);
    }

    #[test]
    fn abelian_rate_vanishes() {
        let r = report("abelian(2)", 50);
        assert!(r.nu_hat < 0.03);
        assert!(r.rows[50].log_rate.unwrap() < 0.11);
    }

    #[test]
    fn finite_group_rate_is_zero() {
        let r = report("cyclic(5)", 5);
        assert_eq!(r.counts(), vec![1, 2, 2, 0, 0, 0]);
        assert_eq!(r.nu_hat, 0.0);
        assert!(r.rows.iter().all(|row| row.ratio_rate.unwrap_or(0.0) >= 0.0));
    }

    #[test]
    fn small_n_max_is_rejected() {
        assert!(growth_report(&GroupSpec::Free(2), 1, EnumerationLimits::default()).is_err());
    }
}
