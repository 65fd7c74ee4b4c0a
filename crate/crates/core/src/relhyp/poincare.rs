use crate::error::{Error, Result};
use crate::group::{GroupSpec, Side};
use crate::sphere::{subgroup_sphere_counts, EnumerationLimits};

/// Partial sums `A_N = Σ_{1≤k≤N} e^{−sk}·|S_k(P)|` of the Poincaré series of
/// a free factor `P`, for `N = 0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareSeriesReport {
    pub spec: GroupSpec,
    pub factor: Side,
    pub s: f64,
    /// `|S_k(P)|` for `k = 0..=n_max`.
    pub counts: Vec<u64>,
    /// `partial_sums[N] = A_N`.
    pub partial_sums: Vec<f64>,
    /// `A_{n_max} − A_{⌊n_max/2⌋}`.
    pub tail_flatness: f64,
}

impl PoincareSeriesReport {
    pub fn n_max(&self) -> u32 {
        self.counts.len() as u32 - 1
    }
}

pub fn poincare_partial(
    spec: &GroupSpec,
    factor: Side,
    s: f64,
    n_max: u32,
    limits: EnumerationLimits,
) -> Result<PoincareSeriesReport> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Precondition(format!("exponent s must be finite and ≥ 0, got {s}")));
    }
    if n_max < 4 {
        return Err(Error::Precondition(format!("need N_max ≥ 4, got {n_max}")));
    }
    let counts = subgroup_sphere_counts(spec, factor, n_max, limits)?;
    let mut partial_sums = Vec::with_capacity(counts.len());
    let mut acc = 0.0;
    partial_sums.push(acc);
    for (k, &c) in counts.iter().enumerate().skip(1) {
        acc += (-s * k as f64).exp() * c as f64;
        partial_sums.push(acc);
    }
    let tail_flatness = partial_sums[n_max as usize] - partial_sums[n_max as usize / 2];
    Ok(PoincareSeriesReport {
        spec: spec.clone(),
        factor,
        s,
        counts,
        partial_sums,
        tail_flatness,
    })
}
